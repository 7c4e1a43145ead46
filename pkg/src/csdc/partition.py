"""How the solution count changes across the danger cylinder and its companion.

Crossings are found as sign changes of the quartic discriminant along a
segment of viewpoints, then labeled by where the merging double solution
lives. Counts are compared on both sides of each crossing. The local
structure at the cylinder is probed by the singular values of the scaled
Jacobian and by the square-root separation of the merging pair.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from mpmath import mp
from scipy.optimize import linear_sum_assignment, minimize_scalar

from . import hiprec
from .config import DEFAULT, Tolerances
from .errors import CrossingAtIntersection, PairNotReal, TangentialContact
from .geometry import (AngleTriple, ControlTriangle, Viewpoint, angles_from_viewpoint,
                       angles_from_viewpoint_batch, centers_from_distances, dc_value, distances)
from .solver import (BatchSolution, _back_substitute, is_real_triplet, solve_batch)
from .surface import membership, random_sources, sweep_sources


@dataclass(frozen=True)
class PathSpec:
    """Straight segment of viewpoints ``start + t (end - start)``, t in [0, 1]."""

    start: Viewpoint
    end: Viewpoint
    n_samples: int = 400
    refine_tol: float = DEFAULT.bisection

    def __post_init__(self):
        if np.allclose(self.start.as_array(), self.end.as_array()):
            raise ValueError("path endpoints coincide")

    def at(self, t) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        a, b = self.start.as_array(), self.end.as_array()
        return a + t[..., None] * (b - a)


@dataclass
class CrossingReport:
    """One discriminant zero on a path.

    ``surface`` is DC, CSDC or Both when the merging solution is a viewpoint
    (on the cylinder), and Other when the merging triplet has a nonpositive
    or complex component, so no real viewpoint carries it.
    """

    t_star: float
    point: list
    surface: str
    tangential: bool
    delta_t: float
    counts_before: int
    counts_after: int
    counts_before_aware: int
    counts_after_aware: int
    delta: int
    delta_aware: int
    real_roots_before: int
    real_roots_after: int
    pair_transitions: int
    dc_value: float
    double_center_dc: float
    discriminant_trace: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def root_discriminant(roots: NDArray[np.complex128]) -> NDArray[np.float64]:
    """Monic discriminant ``prod_{i<j} (r_i - r_j)^2`` from the roots, shape (N,).

    Same sign as the coefficient formula but computed from root gaps, so it
    keeps relative accuracy when all four roots cluster.
    """
    r = np.atleast_2d(roots)
    out = np.ones(len(r), dtype=complex)
    for i in range(4):
        for j in range(i + 1, 4):
            out *= (r[:, i] - r[:, j]) ** 2
    return out.real


def _batch_along(tri: ControlTriangle, path: PathSpec, t, tol: Tolerances) -> BatchSolution:
    C = angles_from_viewpoint_batch(tri, path.at(np.atleast_1d(np.asarray(t, dtype=float))), tol)
    return solve_batch(tri, C, tol)


def _disc_along(tri: ControlTriangle, path: PathSpec, t, tol: Tolerances) -> NDArray[np.float64]:
    return root_discriminant(_batch_along(tri, path, t, tol).roots)


def _match_transitions(r0: NDArray, r1: NDArray, tol: Tolerances) -> int:
    """Conjugate pairs that switch between real and complex from ``r0`` to ``r1``.

    Roots are matched by minimum total displacement; -1 flags changes that do
    not form conjugate pairs.
    """
    i, j = linear_sum_assignment(np.abs(r0[:, None] - r1[None, :]))

    def real(r):
        return abs(r.imag) <= tol.imag * max(1.0, abs(r))

    changed = [(a, b) for a, b in zip(i, j) if real(r0[a]) != real(r1[b])]
    cplx = [r0[a] if not real(r0[a]) else r1[b] for a, b in changed]
    pairs, used = 0, set()
    for k, z in enumerate(cplx):
        if k in used:
            continue
        for m in range(k + 1, len(cplx)):
            if m not in used and abs(z - np.conj(cplx[m])) <= 1e-6 * (1 + abs(z)):
                used |= {k, m}
                pairs += 1
                break
    return pairs if 2 * pairs == len(changed) else -1


def _merging_triplet(tri: ControlTriangle, X: NDArray, tol: Tolerances):
    """Triplet carried by the closest pair of quartic roots at ``X``."""
    C = angles_from_viewpoint_batch(tri, X[None, :], tol)
    b = solve_batch(tri, C, tol)
    r = b.roots[0]
    gaps = [(abs(r[i] - r[j]), i, j) for i in range(4) for j in range(i + 1, 4)]
    _, i, j = min(gaps)
    v = np.array([[0.5 * (r[i] + r[j])]])
    ca, cb, cg = (C[:, k] for k in range(3))
    best, other, best_res, other_res = _back_substitute(v, *tri.sides, ca, cb, cg)
    cands = [best[0, 0]]
    if other_res[0, 0] <= tol.split_residual * max(1.0, tri.a ** 2):
        cands.append(other[0, 0])
    return cands


def _label(tri: ControlTriangle, X: NDArray, tol: Tolerances, label_tol: float):
    """Surface hit at a crossing point and the cylinder value of the double solution's center."""
    dcv = float(dc_value(X))
    center_dc = np.inf
    own = False
    for s in _merging_triplet(tri, X, tol):
        if not (is_real_triplet(s, tol) and np.all(s.real > tol.positive)):
            continue
        for Ct in centers_from_distances(tri, *s.real, tol=tol):
            Ca = Ct.as_array()
            Ca[2] = abs(Ca[2])
            if np.linalg.norm(Ca - np.array([X[0], X[1], abs(X[2])])) <= \
                    label_tol * (1 + np.linalg.norm(X)) ** 2:
                own = True
            elif abs(dc_value(Ct)) < abs(center_dc):
                center_dc = float(dc_value(Ct))
    x_on_dc = abs(dcv) <= label_tol
    other_on_dc = abs(center_dc) <= label_tol
    if own or x_on_dc:
        return ("Both" if other_on_dc else "DC"), dcv, center_dc
    return ("CSDC" if other_on_dc else "Other"), dcv, center_dc


def detect_crossings(tri: ControlTriangle, path: PathSpec, tol: Tolerances = DEFAULT,
                     label_tol: float = 1e-5, tangent_rel: float = 1e-9,
                     include_tangential: bool = True) -> list[CrossingReport]:
    """Locate discriminant zeros along ``path`` and compare counts across them.

    Sign changes are bisected to ``path.refine_tol`` in t. Interior minima of
    ``|disc|`` that reach zero without a sign change are tangential contacts:
    they raise a :class:`TangentialContact` warning and are reported with
    ``tangential=True`` (or dropped when ``include_tangential`` is False).
    Probes sit at ``t* +- delta_t``; ``delta_t`` starts at the offset where
    the discriminant slope predicts root gaps ten times the cluster radius and
    grows until the merging pair is resolved on both sides.
    """
    t = np.linspace(0.0, 1.0, path.n_samples)
    D = _disc_along(tri, path, t, tol)
    scale = float(np.nanmax(np.abs(D))) or 1.0
    f = lambda s: float(_disc_along(tri, path, s, tol)[0])
    events: list[tuple[float, bool]] = []
    for i in range(len(t) - 1):
        if np.sign(D[i]) * np.sign(D[i + 1]) < 0:
            lo, hi, flo = t[i], t[i + 1], D[i]
            while hi - lo > path.refine_tol:
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if np.sign(fm) == np.sign(flo):
                    lo, flo = mid, fm
                else:
                    hi = mid
            events.append((0.5 * (lo + hi), False))
    A = np.abs(D)
    for i in range(1, len(t) - 1):
        if A[i] <= A[i - 1] and A[i] <= A[i + 1] and np.sign(D[i - 1]) == np.sign(D[i + 1]) \
                and np.sign(D[i - 1]) * np.sign(D[i]) >= 0:
            r = minimize_scalar(lambda s: abs(f(s)), bounds=(t[i - 1], t[i + 1]),
                                method="bounded", options={"xatol": path.refine_tol})
            if abs(r.fun) <= tangent_rel * scale:
                events.append((float(r.x), True))
    events.sort()
    times = [e[0] for e in events]
    reports = []
    for k, (ts, tangential) in enumerate(events):
        X = path.at(np.array([ts]))[0]
        surface, dcv, center_dc = _label(tri, X, tol, label_tol)
        room = 0.5 * min([abs(ts - u) for u in times if u != ts] + [ts, 1.0 - ts])
        h = 1e-6
        slope = abs(f(min(ts + h, 1.0)) - f(max(ts - h, 0.0))) / (2 * h)
        target = (10 * tol.cluster_radius) ** 2 * scale
        delta_t = max(10 * path.refine_tol, target / slope if slope > 0 else 0.0)
        delta_t = min(delta_t, room)
        while True:
            b = _batch_along(tri, path, [ts - delta_t, ts + delta_t], tol)
            rr0, rr1 = (int(v) for v in b.real_root_counts(tol))
            resolved = bool(np.all(b.multiplicity == 1))
            if (resolved and (tangential or abs(rr1 - rr0) == 2)) or delta_t >= room:
                break
            delta_t = min(4 * delta_t, room)
        (c0, c1), (a0, a1) = (tuple(int(x) for x in v) for v in b.counts(tol))
        pairs = _match_transitions(b.roots[0], b.roots[1], tol)
        lo_i = max(0, int(np.searchsorted(t, ts)) - 3)
        trace = {"t": t[lo_i:lo_i + 6].tolist(), "discriminant": D[lo_i:lo_i + 6].tolist()}
        rep = CrossingReport(float(ts), X.tolist(), surface, tangential, float(delta_t),
                             c0, c1, a0, a1, c1 - c0, a1 - a0, rr0, rr1, pairs,
                             float(dcv), float(center_dc), trace)
        if tangential:
            warnings.warn(TangentialContact(
                f"discriminant touches zero at t={ts:.6f} ({surface})"), stacklevel=2)
            if not include_tangential:
                continue
        if surface == "Both":
            warnings.warn(CrossingAtIntersection(f"crossing at t={ts:.6f} lies on both surfaces"),
                          stacklevel=2)
        reports.append(rep)
    return reports


# ------------------------------------------------------------ count maps

@dataclass(frozen=True)
class SliceSpec:
    """Planar grid ``origin + i du + j dv`` with n_u x n_v nodes."""

    origin: tuple
    u: tuple
    v: tuple
    n_u: int
    n_v: int

    @classmethod
    def horizontal(cls, z: float, x_range=(-3.0, 3.0), y_range=(-3.0, 3.0),
                   n: int = 256) -> "SliceSpec":
        du = (x_range[1] - x_range[0]) / max(n - 1, 1)
        dv = (y_range[1] - y_range[0]) / max(n - 1, 1)
        return cls((x_range[0], y_range[0], z), (du, 0.0, 0.0), (0.0, dv, 0.0), n, n)

    def nodes(self) -> NDArray[np.float64]:
        """(n_v, n_u, 3) node coordinates; row index runs along v."""
        i = np.arange(self.n_u)
        j = np.arange(self.n_v)
        o, u, v = (np.asarray(w, dtype=float) for w in (self.origin, self.u, self.v))
        return o + i[None, :, None] * u + j[:, None, None] * v


@dataclass
class CountMap:
    spec: SliceSpec
    counts: NDArray[np.int64]
    counts_aware: NDArray[np.int64]
    discriminant: NDArray[np.float64]


def count_map(tri: ControlTriangle, spec: SliceSpec, tol: Tolerances = DEFAULT,
              chunk: int = 65536) -> CountMap:
    """Collapsed P3P count at every node of a planar grid (max 2048 x 2048)."""
    if spec.n_u * spec.n_v > 2048 * 2048:
        raise ValueError("grid larger than 2048^2")
    X = spec.nodes().reshape(-1, 3)
    counts = np.empty(len(X), dtype=np.int64)
    aware = np.empty(len(X), dtype=np.int64)
    disc = np.empty(len(X))
    for k in range(0, len(X), chunk):
        C = angles_from_viewpoint_batch(tri, X[k:k + chunk], tol)
        b = solve_batch(tri, C, tol)
        counts[k:k + chunk], aware[k:k + chunk] = b.counts(tol)
        disc[k:k + chunk] = root_discriminant(b.roots)
    shape = (spec.n_v, spec.n_u)
    return CountMap(spec, counts.reshape(shape), aware.reshape(shape), disc.reshape(shape))


def boundary_probes(cm: CountMap, n: int = 100, seed: int = 0, reach: int = 2) -> dict:
    """Check count boundaries against discriminant sign changes nearby.

    A probe is a pair of horizontally or vertically adjacent nodes with
    different counts. It is explained when the discriminant changes sign
    within ``reach`` cells of it.
    """
    C, D = cm.counts, cm.discriminant
    edges = []
    for axis in (0, 1):
        diff = np.diff(C, axis=axis) != 0
        for a, b in zip(*np.nonzero(diff)):
            edges.append((axis, int(a), int(b)))
    rng = np.random.default_rng(seed)
    if not edges:
        return {"n_edges": 0, "probes": [], "fraction_explained": 1.0}
    pick = rng.choice(len(edges), size=min(n, len(edges)), replace=False)
    S = np.sign(D)
    probes = []
    for k in sorted(pick):
        axis, a, b = edges[k]
        a2, b2 = (a + 1, b) if axis == 0 else (a, b + 1)
        jump = int(C[a2, b2] - C[a, b])
        lo_r, hi_r = max(0, min(a, a2) - reach), min(C.shape[0], max(a, a2) + reach + 1)
        lo_c, hi_c = max(0, min(b, b2) - reach), min(C.shape[1], max(b, b2) + reach + 1)
        win = S[lo_r:hi_r, lo_c:hi_c]
        explained = bool(np.any(win > 0) and np.any(win < 0))
        probes.append({"node": [a, b], "axis": axis, "jump": jump, "explained": explained})
    return {
        "n_edges": len(edges),
        "probes": probes,
        "fraction_explained": float(np.mean([p["explained"] for p in probes])),
        "fraction_even_explained": float(np.mean([p["explained"] for p in probes
                                                  if p["jump"] % 2 == 0] or [1.0])),
    }


GRAY = {0: 0, 1: 64, 2: 128, 3: 192, 4: 255}


# ------------------------------------------------------------ Jacobian

@dataclass
class JacobianAnalysis:
    J: NDArray[np.float64]
    singular_values: NDArray[np.float64]
    v31: NDArray[np.float64]
    u31: NDArray[np.float64]
    triplet: NDArray[np.float64]

    @property
    def ratio(self) -> float:
        return float(self.singular_values[2] / self.singular_values[0])

    def as_dict(self) -> dict:
        return {"J": self.J.tolist(), "singular_values": self.singular_values.tolist(),
                "v31": self.v31.tolist(), "u31": self.u31.tolist(),
                "triplet": self.triplet.tolist(), "ratio": self.ratio}


def scaled_jacobian(s: ArrayLike, ang: AngleTriple) -> NDArray[np.float64]:
    """Jacobian of the distance equations with each row divided by ``2 s_j s_k``."""
    s1, s2, s3 = np.asarray(s, dtype=float)
    ca, cb, cg = ang.as_array()
    return np.array([
        [0.0, (s2 - s3 * ca) / (s2 * s3), (s3 - s2 * ca) / (s2 * s3)],
        [(s1 - s3 * cb) / (s3 * s1), 0.0, (s3 - s1 * cb) / (s3 * s1)],
        [(s1 - s2 * cg) / (s1 * s2), (s2 - s1 * cg) / (s1 * s2), 0.0],
    ])


def analyze_jacobian(s: ArrayLike, ang: AngleTriple) -> JacobianAnalysis:
    J = scaled_jacobian(s, ang)
    U, S, Vt = np.linalg.svd(J)
    v = Vt[2] * (1.0 if Vt[2][np.argmax(np.abs(Vt[2]))] > 0 else -1.0)
    u = U[:, 2] * (1.0 if U[np.argmax(np.abs(U[:, 2])), 2] > 0 else -1.0)
    return JacobianAnalysis(J, S, v, u, np.asarray(s, dtype=float))


def jacobian_analysis(tri: ControlTriangle, O, tol: Tolerances = DEFAULT) -> JacobianAnalysis:
    """Scaled Jacobian at O's own distance triplet.

    That triplet solves O's instance exactly; a solver root would add the
    rounding of a clustered root, which reaches 1e-8 near the cusp lines.
    """
    O = Viewpoint.of(O)
    return analyze_jacobian(distances(tri, O), angles_from_viewpoint(tri, O, tol))


# ------------------------------------------------------------ fold scaling

EPSILONS = tuple(10.0 ** -k for k in range(2, 8))


@dataclass
class FoldReport:
    epsilons: list
    separations: list
    exponent: float
    regression_stderr: float
    direction: list
    flipped: bool
    branch: str
    imag_parts: list = field(default_factory=list)
    imag_exponent: float = float("nan")
    complex_evidence: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _fit_exponent(eps, vals) -> tuple[float, float]:
    coef, cov = np.polyfit(np.log(eps), np.log(vals), 1, cov=True)
    return float(coef[0]), float(np.sqrt(cov[0, 0]))


@dataclass
class _FoldSetup:
    sc: object
    cos: tuple
    s0: list
    J: object


def _fold_setup(tri: ControlTriangle, O_d: Viewpoint, dps: int) -> _FoldSetup:
    """Instance of ``O_d`` projected exactly onto the cylinder at ``dps`` digits."""
    sc = hiprec.scene(tri, dps)
    with mp.workdps(dps):
        th = mp.atan2(mp.mpf(O_d.y), mp.mpf(O_d.x))
        O = (mp.cos(th), mp.sin(th), mp.mpf(O_d.z))
        cos, s0 = hiprec.angles(sc, O)
        s1, s2, s3 = s0
        ca, cb, cg = cos
        J = mp.matrix([
            [0, (s2 - s3 * ca) / (s2 * s3), (s3 - s2 * ca) / (s2 * s3)],
            [(s1 - s3 * cb) / (s3 * s1), 0, (s3 - s1 * cb) / (s3 * s1)],
            [(s1 - s2 * cg) / (s1 * s2), (s2 - s1 * cg) / (s1 * s2), 0],
        ])
    return _FoldSetup(sc, cos, list(s0), J)


def _fold_run(setup: _FoldSetup, d, eps, tol, substeps: int = 8):
    """Track the merging pair from the smallest ``eps`` upward by continuation.

    The pair starts as the two solutions nearest the double solution at the
    smallest ``eps``; at every further step each member moves to the nearest
    solution of the next instance, over ``substeps`` geometric steps per gap.
    """
    sc = setup.sc
    eps = np.asarray(eps, dtype=float)
    grid = [eps[-1]]
    for lo, hi in zip(eps[::-1][:-1], eps[::-1][1:]):
        grid += list(np.geomspace(lo, hi, substeps + 1)[1:])
    keep = {float(e) for e in eps}
    out: dict = {}

    def dist(p, q):
        return mp.sqrt(sum(abs(x - y) ** 2 for x, y in zip(p, q)))

    pair = None
    with mp.workdps(sc.dps):
        radius = mp.mpf(10) ** (-(2 * sc.dps) // 3)
        for e in grid:
            cos = tuple(c + mp.mpf(float(e)) * mp.mpf(float(di)) for c, di in zip(setup.cos, d))
            sol = hiprec.solve_cosines(sc, cos, tol, radius=radius)
            rows = []
            for s, m in sol.triplets:
                rows += [s] * m
            if pair is None:
                rows.sort(key=lambda s: dist(s, setup.s0))
                pair = rows[:2]
            else:
                cost = np.array([[float(dist(p, r)) for r in rows] for p in pair])
                _, j = linear_sum_assignment(cost)
                pair = [rows[j[0]], rows[j[1]]]
            if float(e) in keep:
                p, q = pair
                im = max(abs(mp.im(x)) for x in p + q)
                out[float(e)] = (float(dist(p, q)), float(im), bool(im <= radius))
    seps = [out[float(e)][0] for e in eps]
    imags = [out[float(e)][1] for e in eps]
    real = [out[float(e)][2] for e in eps]
    return seps, imags, real


def fold_scaling(tri: ControlTriangle, O_d, direction: ArrayLike,
                 epsilons=EPSILONS, auto_flip: bool = False,
                 tol: Tolerances = DEFAULT, dps: int = 50) -> FoldReport:
    """Separation of the two solutions merging at a cylinder viewpoint.

    ``O_d`` is projected radially onto the cylinder. The cosines of its
    instance are moved by ``eps * direction`` and the distance between the
    two solutions nearest the double solution is fitted against ``eps`` on a
    log-log scale. Solving runs at ``dps`` digits so that the pair stays
    resolved at the smallest ``eps``.

    Raises:
        PairNotReal: if the pair is complex along ``direction`` and
            ``auto_flip`` is False. ``evidence`` holds the imaginary parts and
            their fitted exponent.
    """
    O_d = Viewpoint.of(O_d)
    if abs(dc_value(O_d)) > 1e-8:
        raise ValueError("fold scaling needs a viewpoint on the danger cylinder")
    eps = np.asarray(epsilons, dtype=float)
    if len(eps) < 3 or not (np.all(np.diff(eps) < 0)
                            and np.allclose(eps[1:] / eps[:-1], eps[1] / eps[0])):
        raise ValueError("epsilons must be a strictly decreasing geometric sequence of length >= 3")
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    setup = _fold_setup(tri, O_d, dps)
    seps, imags, real = _fold_run(setup, d, eps, tol)
    flipped = False
    evidence = {}
    if not all(real):
        evidence = {"epsilons": eps.tolist(), "imag_parts": imags, "separations": seps,
                    "direction": d.tolist(), "real_flags": real}
        if np.all(np.array(imags) > 0):
            evidence["imag_exponent"], evidence["imag_stderr"] = _fit_exponent(eps, imags)
        if not auto_flip:
            raise PairNotReal("merging pair is complex along this direction", evidence)
        d = -d
        flipped = True
        seps, imags, real = _fold_run(setup, d, eps, tol)
        if not all(real):
            raise PairNotReal("merging pair is complex along both signs of the direction",
                              evidence)
    k, se = _fit_exponent(eps, seps)
    return FoldReport(eps.tolist(), seps, k, se, d.tolist(), flipped, "real",
                      imags, evidence.get("imag_exponent", float("nan")), evidence)


def complex_branch(tri: ControlTriangle, O_d, direction: ArrayLike,
                   epsilons=EPSILONS, tol: Tolerances = DEFAULT, dps: int = 50) -> dict:
    """Evidence for the complex side: empty when the pair is real along ``direction``."""
    try:
        fold_scaling(tri, O_d, direction, epsilons, auto_flip=False, tol=tol, dps=dps)
    except PairNotReal as exc:
        return exc.evidence
    return {}


def left_null_vector(tri: ControlTriangle, O_d, dps: int = 50) -> NDArray[np.float64]:
    """Unit left singular vector of the smallest singular value at the cylinder point."""
    setup = _fold_setup(tri, Viewpoint.of(O_d), dps)
    with mp.workdps(dps):
        U, _, _ = mp.svd_r(setup.J)
        return np.array([float(U[i, 2]) for i in range(3)])


def tangent_direction(tri: ControlTriangle, O_d, dps: int = 50) -> NDArray[np.float64]:
    """A unit cosine perturbation orthogonal to the left null vector of the Jacobian.

    Such perturbations keep the linearized system solvable, so the pair
    separates linearly instead of as a square root.
    """
    u = left_null_vector(tri, O_d, dps)
    w = np.ones(3) - np.sum(u) * u
    return w / np.linalg.norm(w)


# ------------------------------------------------------------ crossing generation

def csdc_crossing_path(tri: ControlTriangle, companion: Viewpoint, half_length: float = 0.02,
                       n_samples: int = 200, tol: Tolerances = DEFAULT) -> PathSpec:
    """Segment through a companion point along the discriminant gradient."""
    X = companion.as_array()
    h = 1e-6
    E = np.vstack([np.eye(3), -np.eye(3)]) * h
    C = angles_from_viewpoint_batch(tri, X + E, tol)
    D = root_discriminant(solve_batch(tri, C, tol).roots)
    g = (D[:3] - D[3:]) / (2 * h)
    n = g / np.linalg.norm(g)
    return PathSpec(Viewpoint.of(X - half_length * n), Viewpoint.of(X + half_length * n),
                    n_samples=n_samples)


def crossing_survey(tri: ControlTriangle, n: int = 100, seed: int = 0,
                    z_range: tuple[float, float] = (0.3, 3.0), half_length: float = 0.02,
                    tol: Tolerances = DEFAULT, workers: int = 1) -> dict:
    """Transversal crossings of the companion surface at seeded companion points.

    Each path runs through one companion along the discriminant gradient.
    The crossing nearest the companion is kept when it is labeled CSDC and
    both endpoints are Off; Both-labeled hits are counted and set aside.
    """
    rng = np.random.default_rng(seed)
    reports, both, skipped = [], 0, 0
    batch = 0
    while len(reports) < n and batch < 20:
        params = random_sources(max(n, 16), int(rng.integers(2 ** 31)), z_range, log_uniform=False)
        sweep, _ = sweep_sources(tri, params, tol, workers=workers)
        for smp in sweep.samples:
            if len(reports) >= n:
                break
            path = csdc_crossing_path(tri, Viewpoint.of(smp.companion), half_length, tol=tol)
            if any(membership(tri, e, tolerances=tol).label != "Off" for e in (path.start, path.end)):
                skipped += 1
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", TangentialContact)
                warnings.simplefilter("ignore", CrossingAtIntersection)
                found = [c for c in detect_crossings(tri, path, tol) if not c.tangential]
            if not found:
                skipped += 1
                continue
            c = min(found, key=lambda c: abs(c.t_star - 0.5))
            if c.surface == "Both":
                both += 1
            elif c.surface == "CSDC":
                reports.append(c)
            else:
                skipped += 1
        batch += 1
    return {
        "reports": reports,
        "n_both": both,
        "n_skipped": skipped,
        "all_delta_two": all(abs(c.delta) == 2 for c in reports),
        "all_one_pair": all(c.pair_transitions == 1 for c in reports),
    }


def cusp_angles(tri: ControlTriangle) -> NDArray[np.float64]:
    """Cylinder angles opposite the control points, where the double solution turns triple."""
    return np.mod(np.asarray(tri.phis) + np.pi, 2 * np.pi)


def _angle_gap(theta: float, angles: NDArray) -> float:
    d = np.abs(np.mod(theta - angles + np.pi, 2 * np.pi) - np.pi)
    return float(np.min(d))


def fold_survey(tri: ControlTriangle, n: int = 20, seed: int = 0,
                z_range: tuple[float, float] = (0.3, 3.0), max_directions: int = 20,
                min_null_component: float = 0.1, epsilons=EPSILONS,
                tol: Tolerances = DEFAULT, dps: int = 50) -> dict:
    """Fold exponents at seeded cylinder points with seeded random directions.

    For each point, directions are drawn until one is transversal to the
    fold (``|u31 . d| >= min_null_component``) and it or its negation keeps
    the merging pair real over the whole epsilon range. Points with no such
    direction are listed in ``skipped`` with their angular distance to the
    nearest cusp line.
    """
    rng = np.random.default_rng(seed)
    cusps = cusp_angles(tri)
    rows, skipped = [], []
    while len(rows) < n and len(rows) + len(skipped) < 5 * n:
        th, z0 = rng.uniform(0, 2 * np.pi), rng.uniform(*z_range)
        O = Viewpoint(float(np.cos(th)), float(np.sin(th)), float(z0))
        rep = None
        u = left_null_vector(tri, O, dps)
        for tries in range(1, max_directions + 1):
            d = rng.normal(size=3)
            if abs(u @ d) < min_null_component * np.linalg.norm(d):
                continue
            try:
                rep = fold_scaling(tri, O, d, epsilons, auto_flip=True, tol=tol, dps=dps)
                break
            except PairNotReal:
                continue
        if rep is None:
            skipped.append({"theta": float(th), "z0": float(z0),
                            "cusp_distance": _angle_gap(th, cusps)})
            continue
        ev = complex_branch(tri, O, -np.asarray(rep.direction), epsilons, tol, dps)
        rows.append({"theta": float(th), "z0": float(z0), "tries": tries,
                     "null_component": float(abs(u @ np.asarray(rep.direction))),
                     "cusp_distance": _angle_gap(th, cusps),
                     "exponent": rep.exponent, "stderr": rep.regression_stderr,
                     "direction": rep.direction,
                     "negated_all_complex": bool(ev) and not any(ev.get("real_flags", [True])),
                     "imag_exponent": float(ev.get("imag_exponent", np.nan))})
    return {"rows": rows, "skipped": skipped}
