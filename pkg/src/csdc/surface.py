"""Companion surface of the danger cylinder: sampling, membership and fitting.

Membership is decided geometrically. A viewpoint is on the companion surface
when one of the other solutions of its instance trilaterates onto the
cylinder. The fitted polynomial is a reproduction artifact and is never used
as an oracle.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import asdict, dataclass, field
from functools import partial

import mpmath as mp
import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial import cKDTree

from . import hiprec
from .config import DEFAULT, Tolerances
from .errors import InsufficientSamples, RankDeficientBasis
from .geometry import ControlTriangle, Viewpoint, centers_from_distances, dc_value, make_triangle
from .parallel import pmap
from .polynomial import TrivariatePoly, monomials, vandermonde
from .rieck import deltoid_value
from .solver import solve_viewpoint

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurfaceSample:
    """A companion viewpoint generated by a danger-cylinder source.

    Attributes:
        theta, z0: Source parameters; the source is (cos theta, sin theta, z0).
        companion: Companion viewpoint with z > 0.
        residual: Max difference between the cosines seen from the companion
            and from the source.
        dc_value: Cylinder function at the companion.
    """

    theta: float
    z0: float
    companion: Viewpoint
    residual: float
    dc_value: float

    @property
    def source(self) -> Viewpoint:
        return Viewpoint(float(np.cos(self.theta)), float(np.sin(self.theta)), self.z0)


@dataclass
class SweepResult:
    samples: list[SurfaceSample]
    excluded: list[dict] = field(default_factory=list)
    n_sources: int = 0

    def points(self) -> NDArray[np.float64]:
        return np.array([s.companion.as_array() for s in self.samples]).reshape(-1, 3)


@dataclass(frozen=True)
class SourceOutcome:
    """Per-source result: samples, or the reason the source was excluded."""

    theta: float
    z0: float
    samples: tuple
    reason: str | None
    double_center_error: float


def _sweep_one(tri_phis: tuple, tol: Tolerances, dps: int | None,
               params: tuple[float, float]) -> SourceOutcome:
    theta, z0 = params
    tri = make_triangle(*tri_phis)
    if abs(z0) < tol.min_sweep_height:
        return SourceOutcome(theta, z0, (), "near-plane source skipped", np.nan)
    d = dps or hiprec.default_dps(z0)
    sc = hiprec.scene(tri, d)
    try:
        sol = hiprec.solve_dc_point(tri, theta, z0, dps=d, tol=tol, sc=sc)
    except Exception as exc:  # degenerate instance; logged and skipped
        return SourceOutcome(theta, z0, (), f"solver failure: {exc}", np.nan)
    with mp.workdps(d):
        O0 = hiprec.dc_viewpoint(theta, z0, d)
        best = np.inf
        for s, m in sol.triplets:
            if m != 2 or not hiprec.triplet_is_real_positive(s, tol):
                continue
            x, y, z2 = hiprec.trilaterate(sc, s)
            z = mp.sqrt(z2) if z2 > 0 else mp.mpf(0)
            err = float(mp.sqrt((x - O0[0]) ** 2 + (y - O0[1]) ** 2 + (abs(z) - abs(O0[2])) ** 2))
            best = min(best, err)
        if not best <= tol.source_match:
            return SourceOutcome(theta, z0, (), "no double solution at the source", best)
        out = []
        for s, m in sol.triplets:
            if m != 1 or not hiprec.triplet_is_real_positive(s, tol):
                continue
            x, y, z2 = hiprec.trilaterate(sc, s)
            if z2 <= 0:
                log.debug("companion with z^2=%s skipped at theta=%s z0=%s", z2, theta, z0)
                continue
            z = mp.sqrt(z2)
            cos, _ = hiprec.angles(sc, (x, y, z))
            res = float(max(abs(cos[i] - sol.cosines[i]) for i in range(3)))
            dcv = float(x * x + y * y - 1)
            if abs(dcv) <= tol.companion_off_dc:
                return SourceOutcome(theta, z0, (), "companion on the danger cylinder", best)
            out.append(SurfaceSample(float(theta), float(z0),
                                     Viewpoint(float(x), float(y), float(z)), res, dcv))
    return SourceOutcome(theta, z0, tuple(out), None, best)


def sweep_sources(tri: ControlTriangle, params: ArrayLike, tol: Tolerances = DEFAULT,
                  dps: int | None = None, workers: int | None = 1) -> tuple[SweepResult, list[SourceOutcome]]:
    """Sweep explicit (theta, z0) pairs; results keep the input order."""
    params = [tuple(map(float, p)) for p in np.asarray(params, dtype=float).reshape(-1, 2)]
    fn = partial(_sweep_one, tri.phis, tol, dps)
    outcomes = pmap(fn, params, workers)
    samples, excluded = [], []
    for idx, oc in enumerate(outcomes):
        if oc.reason is not None:
            excluded.append({"index": idx, "theta": oc.theta, "z0": oc.z0, "reason": oc.reason})
            log.info("source %d excluded: %s", idx, oc.reason)
        samples.extend(oc.samples)
    return SweepResult(samples, excluded, len(params)), outcomes


def sweep_dc(tri: ControlTriangle, theta_grid: ArrayLike, z_grid: ArrayLike,
             tol: Tolerances = DEFAULT, dps: int | None = None,
             workers: int | None = 1) -> SweepResult:
    """Companion samples for every (theta, z0) on the product grid.

    Sources with ``|z0|`` below the minimum height are skipped and logged, as
    are sources whose instance shows no double solution at the source.
    """
    T, Z = np.meshgrid(np.asarray(theta_grid, dtype=float), np.asarray(z_grid, dtype=float),
                       indexing="ij")
    result, _ = sweep_sources(tri, np.column_stack([T.ravel(), Z.ravel()]), tol, dps, workers)
    return result


def random_sources(n: int, seed: int, z_range: tuple[float, float] = (0.05, 20.0),
                   log_uniform: bool = True) -> NDArray[np.float64]:
    """Seeded (theta, z0) pairs; z0 log-uniform by default."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    lo, hi = z_range
    if log_uniform:
        z0 = np.exp(rng.uniform(np.log(lo), np.log(hi), n))
    else:
        z0 = rng.uniform(lo, hi, n)
    return np.column_stack([theta, z0])


# ------------------------------------------------------------ membership

@dataclass(frozen=True)
class MembershipVerdict:
    label: str
    dc_distance: float
    csdc_evidence: float
    discriminant: float
    tol: float
    companions: tuple = ()

    def as_dict(self) -> dict:
        d = asdict(self)
        d["companions"] = [list(c) for c in self.companions]
        return d


def membership(tri: ControlTriangle, O, tol: float | None = None,
               tolerances: Tolerances = DEFAULT, precision: str = "auto") -> MembershipVerdict:
    """Classify ``O`` as OnDC, OnCSDC, NearBoth or Off.

    The companion evidence is the smallest ``|dc_value|`` among the centers of
    the instance's other real positive solutions.
    """
    O = Viewpoint.of(O)
    tol = tolerances.membership if tol is None else tol
    if precision == "auto":
        precision = "mp" if abs(O.z) > 5.0 else "double"
    sol = solve_viewpoint(tri, O, tolerances, precision=precision)
    d_own = np.linalg.norm(O.as_array() - tri.points3, axis=1)
    own = min(range(len(sol.triplets)),
              key=lambda i: np.linalg.norm(sol.triplets[i].s - d_own))
    centers = []
    for i, t in enumerate(sol.triplets):
        if i == own or not t.is_p3p:
            continue
        for C in centers_from_distances(tri, *t.s.real, tol=tolerances):
            if C.z >= 0:
                centers.append((C.x, C.y, C.z))
    evidence = min((abs(dc_value(c)) for c in centers), default=np.inf)
    dcv = abs(dc_value(O))
    on_dc, on_csdc = dcv <= tol, evidence <= tol
    label = "NearBoth" if on_dc and on_csdc else "OnDC" if on_dc else "OnCSDC" if on_csdc else "Off"
    return MembershipVerdict(label, float(dcv), float(evidence), float(sol.discriminant),
                             float(tol), tuple(centers))


# ------------------------------------------------------------ fitting

@dataclass
class FitReport:
    degree: int
    even_in_z: bool
    basis_size: int
    n_samples: int
    n_duplicates_removed: int
    n_train: int
    n_test: int
    singular_values_tail: list
    singular_gap: float
    relative_smallest: float
    null_dimension: int
    rank_deficient: bool
    heldout_rms: float
    heldout_max: float
    second_direction_rms: float
    scaling_center: list
    scaling_half_width: list

    def as_dict(self) -> dict:
        return asdict(self)


def dedupe(X: NDArray[np.float64], min_distance: float) -> NDArray[np.int64]:
    """Indices of points kept after dropping later points within ``min_distance``."""
    tree = cKDTree(X)
    drop = np.zeros(len(X), dtype=bool)
    for i, j in sorted(tree.query_pairs(min_distance)):
        if not drop[i]:
            drop[j] = True
    return np.nonzero(~drop)[0]


def _points(samples) -> NDArray[np.float64]:
    if isinstance(samples, np.ndarray):
        return np.asarray(samples, dtype=float).reshape(-1, 3)
    return np.array([s.companion.as_array() if isinstance(s, SurfaceSample) else s
                     for s in samples], dtype=float).reshape(-1, 3)


def fit_poly(samples, degree: int, even_in_z: bool = True, holdout: float = 0.2,
             seed: int = 0, tol: Tolerances = DEFAULT,
             null_threshold: float = 1e-13) -> tuple[TrivariatePoly, FitReport]:
    """Fit the implicit polynomial of the sampled surface by an SVD null vector.

    x and y are mapped affinely onto [-1, 1] over the sample bounding box.
    z is scaled symmetrically by ``max |z|`` so that parity in z is kept.

    Raises:
        InsufficientSamples: if fewer than 4 samples per basis monomial remain.

    Warns:
        RankDeficientBasis: if the two smallest singular values are within
            the gap ratio of each other.
    """
    X = _points(samples)
    exps = monomials(degree, even_in_z)
    keep = dedupe(X, tol.dedupe_distance) if len(X) else np.arange(0)
    n_dup = len(X) - len(keep)
    X = X[keep]
    if len(X) < 4 * len(exps):
        raise InsufficientSamples(f"{len(X)} samples for {len(exps)} monomials (need 4x)")
    lo, hi = X.min(axis=0), X.max(axis=0)
    center = (lo + hi) / 2.0
    half = np.maximum((hi - lo) / 2.0, 1e-12)
    center[2] = 0.0
    half[2] = max(float(np.max(np.abs(X[:, 2]))), 1e-12)
    U = (X - center) / half
    perm = np.random.default_rng(seed).permutation(len(U))
    n_test = int(round(holdout * len(U)))
    test, train = perm[:n_test], perm[n_test:]
    V = vandermonde(U[train], exps)
    _, S, Wt = np.linalg.svd(V, full_matrices=False)
    poly = TrivariatePoly(exps, Wt[-1], center, half).normalized()
    second = Wt[-2]
    Ut = U[test] if n_test else U[train]
    r = poly.evaluate_scaled(Ut)
    r2 = vandermonde(Ut, exps) @ second
    gap = float(S[-2] / S[-1]) if S[-1] > 0 else np.inf
    rank_def = gap < tol.gap_ratio
    if rank_def:
        warnings.warn(RankDeficientBasis(
            f"degree {degree}: smallest singular values within {gap:.3g}x"), stacklevel=2)
    report = FitReport(
        degree=degree, even_in_z=even_in_z, basis_size=len(exps), n_samples=len(X),
        n_duplicates_removed=int(n_dup), n_train=len(train), n_test=n_test,
        singular_values_tail=[float(v) for v in S[-5:]], singular_gap=gap,
        relative_smallest=float(S[-1] / S[0]),
        null_dimension=int(np.sum(S / S[0] <= null_threshold)),
        rank_deficient=bool(rank_def),
        heldout_rms=float(np.sqrt(np.mean(r * r))), heldout_max=float(np.max(np.abs(r))),
        second_direction_rms=float(np.sqrt(np.mean(r2 * r2))),
        scaling_center=center.tolist(), scaling_half_width=half.tolist())
    return poly, report


def dc_nondivisibility(poly: TrivariatePoly, n: int = 100, seed: int = 0,
                       z_range: tuple[float, float] | None = None,
                       avoid: ArrayLike | None = None, avoid_distance: float = 1e-2) -> float:
    """Smallest ``|poly|`` (scaled coordinates) over random cylinder points.

    Points closer than ``avoid_distance`` to any row of ``avoid`` (typically the
    fitted samples) are redrawn. A polynomial with the cylinder as a factor
    returns 0.
    """
    rng = np.random.default_rng(seed)
    if z_range is None:
        hz = float(poly.half_width[2])
        z_range = (poly.center[2] - hz, poly.center[2] + hz)
    tree = cKDTree(np.asarray(avoid, dtype=float)) if avoid is not None and len(avoid) else None
    pts = []
    while len(pts) < n:
        t = rng.uniform(0, 2 * np.pi)
        z = rng.uniform(*z_range)
        p = (np.cos(t), np.sin(t), z)
        if tree is not None and tree.query(p)[0] < avoid_distance:
            continue
        pts.append(p)
    return float(np.min(np.abs(poly.evaluate_scaled(poly.scale(np.array(pts))))))


def dc_residual_rms(poly: TrivariatePoly, n_theta: int = 90, n_z: int = 40,
                    z_range: tuple[float, float] | None = None) -> float:
    """RMS of ``poly`` (scaled coordinates) over a regular cylinder grid.

    Zero up to rounding when the cylinder divides ``poly``. Unlike the
    minimum, it is not driven to zero by curves where the surface meets the
    cylinder.
    """
    if z_range is None:
        z_range = (0.0, float(poly.center[2] + poly.half_width[2]))
    th = np.linspace(0, 2 * np.pi, n_theta, endpoint=False)
    z = np.linspace(*z_range, n_z)
    T, Z = np.meshgrid(th, z)
    P = np.column_stack([np.cos(T).ravel(), np.sin(T).ravel(), Z.ravel()])
    v = poly.evaluate_scaled(poly.scale(P))
    return float(np.sqrt(np.mean(v * v)))


# ------------------------------------------------------------ z -> infinity

def deltoid_radius(theta: float, r0: float = 2.0) -> float:
    """Positive root of the deltoid quartic along the ray at angle ``theta``.

    In polar form the quartic is ``r^4 - 8 r^3 cos(3 theta) + 18 r^2 - 27``;
    it is increasing in r wherever it vanishes, so the root is unique.
    """
    c3 = np.cos(3 * theta)
    r = r0
    for _ in range(100):
        f = r ** 4 - 8 * r ** 3 * c3 + 18 * r ** 2 - 27
        df = 4 * r ** 3 - 24 * r ** 2 * c3 + 36 * r
        step = f / df
        r = max(r - step, r / 2)
        if abs(step) < 1e-15 * max(1.0, r):
            break
    return float(r)


def deltoid_distance(x: float, y: float) -> float:
    """Radial distance from (x, y) to the deltoid zero set; bounds the Euclidean distance."""
    return abs(np.hypot(x, y) - deltoid_radius(np.arctan2(y, x)))


@dataclass
class DeltoidRow:
    z0: float
    n_companions: int
    max_abs_q: float
    max_distance: float
    n_excluded: int
    points: list


def deltoid_limit_check(tri: ControlTriangle, z0_values: ArrayLike, n_theta: int = 100,
                        tol: Tolerances = DEFAULT, workers: int | None = 1) -> dict:
    """Companion (x, y) against the deltoid quartic at increasing heights.

    Returns:
        Dict with one row per height plus ``monotone`` (max |q| strictly
        decreasing) and ``ratio`` (first over last max |q|).
    """
    z0_values = [float(z) for z in z0_values]
    if any(z < 10 for z in z0_values):
        raise ValueError("deltoid limit heights must be >= 10")
    thetas = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    rows = []
    for z0 in z0_values:
        res = sweep_dc(tri, thetas, [z0], tol=tol, workers=workers)
        xy = [(s.companion.x, s.companion.y) for s in res.samples]
        q = [abs(deltoid_value(x, y)) for x, y in xy]
        dist = [deltoid_distance(x, y) for x, y in xy]
        rows.append(DeltoidRow(z0, len(xy), float(max(q, default=np.nan)),
                               float(max(dist, default=np.nan)), len(res.excluded),
                               [list(p) for p in xy]))
    qs = [r.max_abs_q for r in rows]
    return {
        "rows": [asdict(r) for r in rows],
        "monotone": bool(all(b < a for a, b in zip(qs, qs[1:]))),
        "ratio": float(qs[0] / qs[-1]) if qs and qs[-1] > 0 else np.inf,
    }
