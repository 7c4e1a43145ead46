"""Exact solver for the three law-of-cosines distance equations.

The system is reduced to a quartic in ``v = s3 / s1`` by the classical
Grunert elimination. Its roots come from companion-matrix eigenvalues, are
polished by Newton iteration, grouped into multiplicity clusters and
back-substituted into distance triplets. The core is vectorized over many
instances that share one triangle; :func:`solve` is the single-instance view.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import DEFAULT, Tolerances
from .errors import LeadingCoefficientVanishes
from .geometry import AngleTriple, ControlTriangle, angles_from_viewpoint, angles_from_viewpoint_batch


class Classification(str, Enum):
    P3P = "P3P"
    NON_P3P = "NonP3P"


@dataclass(frozen=True)
class TripletSolution:
    """One solution (s1, s2, s3) of the distance equations.

    ``s`` and ``-s`` describe the same solution; the stored representative
    has ``Re(s1) >= 0``.
    """

    s1: complex
    s2: complex
    s3: complex
    multiplicity: int
    classification: Classification

    @property
    def s(self) -> NDArray[np.complex128]:
        return np.array([self.s1, self.s2, self.s3], dtype=complex)

    @property
    def is_p3p(self) -> bool:
        return self.classification is Classification.P3P

    @property
    def is_real(self) -> bool:
        return is_real_triplet(self.s)


@dataclass
class SolutionSet:
    """All solutions of one instance.

    Attributes:
        coefficients: Quartic coefficients in ``v``, highest degree first.
        roots: The four quartic roots (with repetition).
        triplets: One entry per distinct root cluster.
        discriminant: Quartic discriminant of the max-normalized coefficients.
        p3p_count: Number of distinct P3P triplets (a double solution counts once).
        p3p_count_with_multiplicity: P3P triplets weighted by multiplicity.
        real_root_count: Real quartic roots counted with multiplicity.
    """

    coefficients: NDArray[np.float64]
    roots: NDArray[np.complex128]
    triplets: list[TripletSolution]
    discriminant: float
    p3p_count: int
    p3p_count_with_multiplicity: int
    real_root_count: int
    extra: dict = field(default_factory=dict)

    def p3p_triplets(self) -> list[TripletSolution]:
        return [t for t in self.triplets if t.is_p3p]

    def multiple_triplets(self) -> list[TripletSolution]:
        return [t for t in self.triplets if t.multiplicity >= 2]

    def all_triplets_with_multiplicity(self) -> NDArray[np.complex128]:
        """(sum of multiplicities, 3) array listing each triplet ``multiplicity`` times."""
        rows = [t.s for t in self.triplets for _ in range(t.multiplicity)]
        return np.array(rows, dtype=complex).reshape(-1, 3)


def is_real_triplet(s: ArrayLike, tol: Tolerances = DEFAULT) -> bool:
    s = np.asarray(s, dtype=complex)
    return bool(np.all(np.abs(s.imag) <= tol.imag * np.maximum(1.0, np.abs(s))))


def classify(s: ArrayLike, tol: Tolerances = DEFAULT) -> Classification:
    s = np.asarray(s, dtype=complex)
    if is_real_triplet(s, tol) and np.all(s.real > tol.positive):
        return Classification.P3P
    return Classification.NON_P3P


def quartic_coefficients(a, b, c, ca, cb, cg):
    """Grunert quartic in ``v = s3/s1``, highest degree first.

    Works elementwise on floats, numpy arrays or mpmath numbers. Substituting
    ``s2 = u s1`` and ``s3 = v s1`` and equating the three expressions for
    ``s1^2`` gives two quadrics in (u, v); eliminating ``u`` yields this
    quartic (it equals their resultant divided by ``b^8``).
    """
    b2 = b * b
    A = (a * a - c * c) / b2
    Bp = (a * a + c * c) / b2
    a4 = (A - 1) ** 2 - 4 * c * c / b2 * ca * ca
    a3 = 4 * (A * (1 - A) * cb - (1 - Bp) * ca * cg + 2 * c * c / b2 * ca * ca * cb)
    a2 = 2 * (A * A - 1 + 2 * A * A * cb * cb + 2 * ((b2 - c * c) / b2) * ca * ca
              - 4 * Bp * ca * cb * cg + 2 * ((b2 - a * a) / b2) * cg * cg)
    a1 = 4 * (-A * (1 + A) * cb + 2 * a * a / b2 * cg * cg * cb - (1 - Bp) * ca * cg)
    a0 = (1 + A) ** 2 - 4 * a * a / b2 * cg * cg
    return a4, a3, a2, a1, a0


def grunert_quartic(tri: ControlTriangle, ang: AngleTriple,
                    tol: Tolerances = DEFAULT) -> NDArray[np.float64]:
    """Quartic coefficients (5 reals, highest degree first) for one instance.

    Raises:
        LeadingCoefficientVanishes: if the quartic degenerates to lower degree.
    """
    q = np.array(quartic_coefficients(*tri.sides, *ang.as_array()), dtype=float)
    if abs(q[0]) <= tol.leading_coefficient * np.max(np.abs(q)):
        raise LeadingCoefficientVanishes(f"leading coefficient {q[0]:.3e} vanishes")
    return q


def quartic_discriminant(q):
    """Discriminant of ``q[0] v^4 + ... + q[4]``; works elementwise on the last axis.

    Coefficients are used as given; callers normalize first when the
    magnitude matters.
    """
    a, b, c, d, e = (q[..., i] for i in range(5)) if isinstance(q, np.ndarray) else q
    return (256 * a**3 * e**3 - 192 * a**2 * b * d * e**2 - 128 * a**2 * c**2 * e**2
            + 144 * a**2 * c * d**2 * e - 27 * a**2 * d**4 + 144 * a * b**2 * c * e**2
            - 6 * a * b**2 * d**2 * e - 80 * a * b * c**2 * d * e + 18 * a * b * c * d**3
            + 16 * a * c**4 * e - 4 * a * c**3 * d**2 - 27 * b**4 * e**2
            + 18 * b**3 * c * d * e - 4 * b**3 * d**3 - 4 * b**2 * c**3 * e + b**2 * c**2 * d**2)


def normalized_discriminant(q: NDArray[np.float64]) -> NDArray[np.float64]:
    """Discriminant after scaling each coefficient row to unit max-norm."""
    q = np.asarray(q, dtype=float)
    scale = np.max(np.abs(q), axis=-1, keepdims=True)
    return quartic_discriminant(q / scale)


# ---------------------------------------------------------------- batch core

@dataclass
class BatchSolution:
    """Vectorized solver output for N instances sharing a triangle.

    Attributes:
        coefficients: (N, 5) quartic coefficients.
        roots: (N, 4) polished roots.
        group: (N, 4) cluster label per root (index of the first member).
        multiplicity: (N, 4) size of the cluster each root belongs to.
        triplets: (N, 4, 3) triplet per root (identical within a cluster).
        valid: (N,) False where the quartic degenerates or inputs are NaN.
        discriminant: (N,) normalized discriminant.
    """

    coefficients: NDArray[np.float64]
    roots: NDArray[np.complex128]
    group: NDArray[np.int64]
    multiplicity: NDArray[np.int64]
    triplets: NDArray[np.complex128]
    valid: NDArray[np.bool_]
    discriminant: NDArray[np.float64]

    def p3p_mask(self, tol: Tolerances = DEFAULT) -> NDArray[np.bool_]:
        """(N, 4) mask of roots whose triplet is P3P."""
        s = self.triplets
        real = np.all(np.abs(s.imag) <= tol.imag * np.maximum(1.0, np.abs(s)), axis=-1)
        pos = np.all(s.real > tol.positive, axis=-1)
        return real & pos & self.valid[:, None]

    def counts(self, tol: Tolerances = DEFAULT) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
        """Collapsed and multiplicity-aware P3P counts; -1 where invalid."""
        m = self.p3p_mask(tol)
        first = self.group == np.arange(4)[None, :]
        collapsed = np.sum(m & first, axis=1)
        aware = np.sum(m, axis=1)
        collapsed = np.where(self.valid, collapsed, -1)
        aware = np.where(self.valid, aware, -1)
        return collapsed, aware

    def real_root_counts(self, tol: Tolerances = DEFAULT) -> NDArray[np.int64]:
        r = self.roots
        real = np.abs(r.imag) <= tol.cluster_radius * (1.0 + np.abs(r))
        # a split double root inside one cluster counts by the cluster mean
        rep_imag = np.take_along_axis(r, self.group, axis=1).imag
        real = real | (self.multiplicity >= 2) & (np.abs(rep_imag) <= tol.imag)
        return np.where(self.valid, np.sum(real, axis=1), -1)


def _residuals(s, a, b, c, ca, cb, cg):
    s1, s2, s3 = s[..., 0], s[..., 1], s[..., 2]
    return np.stack([
        s2 * s2 + s3 * s3 - 2 * ca[..., None] * s2 * s3 - a * a,
        s1 * s1 + s3 * s3 - 2 * cb[..., None] * s1 * s3 - b * b,
        s1 * s1 + s2 * s2 - 2 * cg[..., None] * s1 * s2 - c * c,
    ], axis=-1)


def _jacobian(s, ca, cb, cg):
    s1, s2, s3 = s[..., 0], s[..., 1], s[..., 2]
    ca, cb, cg = ca[..., None], cb[..., None], cg[..., None]
    z = np.zeros_like(s1)
    return np.stack([
        np.stack([z, 2 * s2 - 2 * ca * s3, 2 * s3 - 2 * ca * s2], axis=-1),
        np.stack([2 * s1 - 2 * cb * s3, z, 2 * s3 - 2 * cb * s1], axis=-1),
        np.stack([2 * s1 - 2 * cg * s2, 2 * s2 - 2 * cg * s1, z], axis=-1),
    ], axis=-2)


def _cluster(r: NDArray[np.complex128], radius: float):
    """Connected components of roots closer than ``radius * (1 + |r|)``."""
    n = r.shape[-1]
    dist = np.abs(r[..., :, None] - r[..., None, :])
    adj = dist <= radius * (1.0 + np.abs(r[..., :, None]))
    adj = adj | adj.swapaxes(-1, -2)
    reach = adj.astype(np.int64)
    for _ in range(2):
        reach = (reach @ reach > 0).astype(np.int64)
    reach = reach.astype(bool)
    group = np.argmax(reach, axis=-1)
    mult = reach.sum(axis=-1)
    rep = (reach * r[..., None, :]).sum(axis=-1) / mult
    return group, mult, rep, n


def _back_substitute(v, a, b, c, ca, cb, cg):
    """Both ``u`` branches for quartic roots ``v``, ordered by a-equation residual.

    Returns:
        (best, other, best_res, other_res) where the triplets have shape (..., 3).
    """
    cbv, cgv, cav = cb[..., None], cg[..., None], ca[..., None]
    K = 1 + v * v - 2 * v * cbv
    s1 = np.sqrt((b * b / K).astype(complex))
    disc = np.sqrt((cgv * cgv - 1 + c * c * K / (b * b)).astype(complex))
    cands, res = [], []
    for u in (cgv + disc, cgv - disc):
        s = np.stack([s1, u * s1, v * s1], axis=-1)
        cands.append(s)
        res.append(np.abs(s[..., 1] ** 2 + s[..., 2] ** 2 - 2 * cav * s[..., 1] * s[..., 2] - a * a))
    take = res[1] < res[0]
    best = np.where(take[..., None], cands[1], cands[0])
    other = np.where(take[..., None], cands[0], cands[1])
    return best, other, np.minimum(res[0], res[1]), np.maximum(res[0], res[1])


def _newton_triplets(s, a, b, c, ca, cb, cg, iters: int):
    for _ in range(iters):
        F = _residuals(s, a, b, c, ca, cb, cg)
        J = _jacobian(s, ca, cb, cg)
        det = np.linalg.det(J)
        ok = np.abs(det) > 1e-300
        Js = np.where(ok[..., None, None], J, np.eye(3))
        step = np.linalg.solve(Js, F[..., None])[..., 0]
        cand = s - np.where(ok[..., None], step, 0)
        Fc = _residuals(cand, a, b, c, ca, cb, cg)
        better = np.linalg.norm(Fc, axis=-1) < np.linalg.norm(F, axis=-1)
        s = np.where(better[..., None], cand, s)
    return s


def solve_batch(tri: ControlTriangle, cosines: ArrayLike,
                tol: Tolerances = DEFAULT) -> BatchSolution:
    """Solve N instances at once; ``cosines`` is (N, 3) of (cos_alpha, cos_beta, cos_gamma)."""
    C = np.atleast_2d(np.asarray(cosines, dtype=float))
    N = C.shape[0]
    a, b, c = tri.sides
    ca, cb, cg = C[:, 0], C[:, 1], C[:, 2]
    q = np.column_stack(quartic_coefficients(a, b, c, ca, cb, cg)).reshape(N, 5)
    finite = np.all(np.isfinite(q), axis=1)
    scale = np.max(np.abs(np.where(finite[:, None], q, 1.0)), axis=1)
    lead_ok = np.abs(np.where(finite, q[:, 0], 0.0)) > tol.leading_coefficient * scale
    valid = finite & lead_ok

    qn = np.where(valid[:, None], q / np.where(valid, q[:, 0], 1.0)[:, None],
                  np.array([1.0, 0.0, 0.0, 0.0, -1.0]))
    comp = np.zeros((N, 4, 4))
    comp[:, 0, :] = -qn[:, 1:]
    comp[:, 1, 0] = comp[:, 2, 1] = comp[:, 3, 2] = 1.0
    r = np.linalg.eigvals(comp).astype(complex)
    # deterministic order: by real part then imaginary part
    order = np.lexsort((r.imag, r.real), axis=-1)
    r = np.take_along_axis(r, order, axis=1)

    group, mult, rep, _ = _cluster(r, tol.cluster_radius)
    simple = mult == 1
    dq = qn[:, :4] * np.array([4.0, 3.0, 2.0, 1.0])
    for _ in range(3):
        p = sum(qn[:, k, None] * rep ** (4 - k) for k in range(5))
        dp = sum(dq[:, k, None] * rep ** (3 - k) for k in range(4))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            cand = rep - p / dp
            pc = sum(qn[:, k, None] * cand ** (4 - k) for k in range(5))
        take = simple & np.isfinite(cand) & (np.abs(pc) < np.abs(p))
        rep = np.where(take, cand, rep)
    roots = np.where(simple, rep, r)

    with np.errstate(divide="ignore", invalid="ignore"):
        s, s_alt, _, res_alt = _back_substitute(rep, a, b, c, ca, cb, cg)
    # A double root in v can carry two distinct triplets that share s3/s1
    # (both u branches solve the system); such a cluster holds two simple
    # solutions rather than one double solution.
    # The wrong branch of a true double root leaves an a-residual that decays
    # like 1/z^2, so the threshold is absolute rather than relative to |s|^2.
    with np.errstate(invalid="ignore"):
        smag = np.maximum(1.0, np.max(np.abs(s), axis=-1))
        gap = np.max(np.abs(s - s_alt), axis=-1)
    leader = group == np.arange(4)[None, :]
    split = (leader & (mult == 2) & (res_alt <= tol.split_residual * max(1.0, a * a))
             & (gap > tol.cluster_radius * smag))
    if np.any(split):
        for i, k in zip(*np.nonzero(split)):
            j = [m for m in range(4) if group[i, m] == k and m != k][0]
            s[i, j] = s_alt[i, k]
            group[i, j] = j
            mult[i, k] = mult[i, j] = 1
        simple = mult == 1
    with np.errstate(divide="ignore", invalid="ignore"):
        s_pol = _newton_triplets(s, a, b, c, ca, cb, cg, iters=4)
    s = np.where(simple[..., None], s_pol, s)
    flip = (s[..., 0].real < 0) | ((s[..., 0].real == 0) & (s[..., 0].imag < 0))
    s = np.where(flip[..., None], -s, s)

    disc = np.where(valid, normalized_discriminant(np.where(finite[:, None], q, 1.0)), np.nan)
    return BatchSolution(q, roots, group, mult, s, valid, disc)


def solution_set_from_batch(batch: BatchSolution, i: int,
                            tol: Tolerances = DEFAULT) -> SolutionSet:
    """Extract instance ``i`` of a batch as a :class:`SolutionSet`."""
    if not batch.valid[i]:
        raise LeadingCoefficientVanishes(
            f"leading coefficient {batch.coefficients[i, 0]:.3e} vanishes")
    triplets = []
    for k in range(4):
        if batch.group[i, k] != k:
            continue
        s = batch.triplets[i, k]
        triplets.append(TripletSolution(complex(s[0]), complex(s[1]), complex(s[2]),
                                        int(batch.multiplicity[i, k]), classify(s, tol)))
    collapsed, aware = batch.counts(tol)
    return SolutionSet(
        coefficients=batch.coefficients[i].copy(),
        roots=batch.roots[i].copy(),
        triplets=triplets,
        discriminant=float(batch.discriminant[i]),
        p3p_count=int(collapsed[i]),
        p3p_count_with_multiplicity=int(aware[i]),
        real_root_count=int(batch.real_root_counts(tol)[i]),
    )


def solve(tri: ControlTriangle, ang: AngleTriple, tol: Tolerances = DEFAULT) -> SolutionSet:
    """Solve one instance in double precision.

    Raises:
        LeadingCoefficientVanishes: if the quartic degenerates.
    """
    batch = solve_batch(tri, ang.as_array()[None, :], tol)
    return solution_set_from_batch(batch, 0, tol)


def solve_viewpoint(tri: ControlTriangle, O, tol: Tolerances = DEFAULT,
                    precision: str = "double", dps: int | None = None) -> SolutionSet:
    """Solve the instance generated by viewpoint ``O``.

    ``precision="mp"`` recomputes the angles and the solution in
    multiprecision arithmetic, which is needed far above the triangle where
    all four roots crowd together.
    """
    if precision == "mp":
        from . import hiprec
        return hiprec.solve_viewpoint_mp(tri, O, dps=dps, tol=tol).solution_set
    if precision != "double":
        raise ValueError(f"unknown precision {precision!r}")
    return solve(tri, angles_from_viewpoint(tri, O, tol), tol)


def count_p3p(tri: ControlTriangle, O, tol: Tolerances = DEFAULT) -> int:
    """Number of distinct P3P solutions of the instance seen from ``O``."""
    return solve_viewpoint(tri, O, tol).p3p_count


def count_p3p_batch(tri: ControlTriangle, X: ArrayLike,
                    tol: Tolerances = DEFAULT) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    """Collapsed and multiplicity-aware counts for an (N, 3) array of viewpoints."""
    C = angles_from_viewpoint_batch(tri, X, tol)
    return solve_batch(tri, C, tol).counts(tol)
