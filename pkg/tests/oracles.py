"""Independent reference computations used to check the package.

None of these call into the solver internals; each reaches the same quantity
by a different route (brute-force Newton, exact elimination, dense curve
sampling, generic least squares, finite differences).
"""

from __future__ import annotations

import numpy as np
import sympy as sp
from scipy.optimize import least_squares
from scipy.stats import linregress


# ------------------------------------------------------------ distance system

def _system(s, sides, cosines):
    a, b, c = sides
    ca, cb, cg = cosines
    s1, s2, s3 = s[..., 0], s[..., 1], s[..., 2]
    return np.stack([
        s2 * s2 + s3 * s3 - 2 * ca * s2 * s3 - a * a,
        s1 * s1 + s3 * s3 - 2 * cb * s1 * s3 - b * b,
        s1 * s1 + s2 * s2 - 2 * cg * s1 * s2 - c * c,
    ], axis=-1)


def _system_jacobian(s, cosines):
    ca, cb, cg = cosines
    s1, s2, s3 = s[..., 0], s[..., 1], s[..., 2]
    z = np.zeros_like(s1)
    return 2 * np.stack([
        np.stack([z, s2 - ca * s3, s3 - ca * s2], axis=-1),
        np.stack([s1 - cb * s3, z, s3 - cb * s1], axis=-1),
        np.stack([s1 - cg * s2, s2 - cg * s1, z], axis=-1),
    ], axis=-2)


def _newton_round(sides, cosines, rng, scale, n_random, grid, iters):
    g = np.linspace(-scale, scale, grid)
    re = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    im = rng.normal(scale=0.5 * scale, size=re.shape)
    S = np.concatenate([re + 1j * im,
                        rng.normal(scale=scale, size=(n_random, 3))
                        + 1j * rng.normal(scale=scale, size=(n_random, 3))])
    for _ in range(iters):
        F = _system(S, sides, cosines)
        J = _system_jacobian(S, cosines)
        ok = np.abs(np.linalg.det(J)) > 1e-200
        step = np.zeros_like(S)
        step[ok] = np.linalg.solve(J[ok], F[ok][..., None])[..., 0]
        S = S - step
    F = _system(S, sides, cosines)
    res = np.max(np.abs(F), axis=-1) / max(1.0, max(sides) ** 2)
    S = S[np.isfinite(res) & (res <= 1e-9)]
    flip = (S[:, 0].real < 0) | ((S[:, 0].real == 0) & (S[:, 0].imag < 0))
    S[flip] = -S[flip]
    return S


def newton_solutions(sides, cosines, seed: int = 0, n_random: int = 400,
                     grid: int = 4, iters: int = 80) -> np.ndarray:
    """All complex solutions of the distance system up to sign, by multi-start Newton.

    Each round starts from a grid over a complex box plus seeded random
    complex points; rounds with wider boxes follow until the four solutions
    allowed by Bezout's bound (up to sign) are found or the rounds run out.
    Converged points are canonicalized (Re s1 >= 0) and merged.

    Returns:
        (k, 3) complex array of distinct solutions.
    """
    rng = np.random.default_rng(seed)
    # a side seen under a small angle sets the largest plausible distance
    base = 2.0 * max(sides) / np.sqrt(2.0 * (1.0 - max(abs(c) for c in cosines)))
    out: list[np.ndarray] = []
    for mult in (1.0, 3.0, 0.3, 10.0, 1.0, 3.0):
        for s in _newton_round(sides, cosines, rng, base * mult, n_random, grid, iters):
            if all(np.max(np.abs(s - t)) > 1e-5 * (1 + np.max(np.abs(s))) for t in out):
                out.append(s)
        if len(out) >= 4:
            break
    return np.array(out).reshape(-1, 3)


def polish(sides, cosines, s, iters: int = 30) -> np.ndarray:
    """Newton-polish a single triplet."""
    s = np.asarray(s, dtype=complex).copy()
    for _ in range(iters):
        F = _system(s, sides, cosines)
        J = _system_jacobian(s, cosines)
        try:
            s = s - np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            break
    return s


def hausdorff(A, B) -> float:
    """Symmetric Hausdorff distance between two finite complex point sets in C^3."""
    A, B = np.asarray(A), np.asarray(B)
    if len(A) == 0 or len(B) == 0:
        return 0.0 if len(A) == len(B) else np.inf
    D = np.max(np.abs(A[:, None, :] - B[None, :, :]), axis=-1)
    return float(max(D.min(axis=1).max(), D.min(axis=0).max()))


def oracle_p3p_count(solutions, eps: float = 1e-7) -> int:
    """Distinct real positive solutions."""
    S = np.asarray(solutions)
    real = np.all(np.abs(S.imag) <= eps * np.maximum(1, np.abs(S)), axis=1)
    pos = np.all(S.real > eps, axis=1)
    return int(np.sum(real & pos))


# ------------------------------------------------------------ elimination

_u, _v = sp.symbols("u v")
_A, _B, _C, _ca, _cb, _cg = sp.symbols("A B C ca cb cg")


def _resultant_lambda():
    # s2 = u s1, s3 = v s1; equate the three expressions for s1^2
    e_b = 1 + _v ** 2 - 2 * _v * _cb
    e_c = 1 + _u ** 2 - 2 * _u * _cg
    e_a = _u ** 2 + _v ** 2 - 2 * _u * _v * _ca
    q1 = sp.expand(_B ** 2 * e_c - _C ** 2 * e_b)
    q2 = sp.expand(_B ** 2 * e_a - _A ** 2 * e_b)
    res = sp.Poly(sp.resultant(q1, q2, _u), _v)
    coeffs = [res.coeff_monomial(_v ** k) for k in range(4, -1, -1)]
    return sp.lambdify((_A, _B, _C, _ca, _cb, _cg), coeffs, "mpmath")


_RES = None


def resultant_quartic(sides, cosines) -> np.ndarray:
    """Quartic in v = s3/s1 from a symbolic resultant (unnormalized)."""
    global _RES
    if _RES is None:
        _RES = _resultant_lambda()
    return np.array([float(c) for c in _RES(*sides, *cosines)])


def sympy_discriminant(coeffs) -> sp.Rational:
    """Exact discriminant of an integer or rational quartic."""
    x = sp.symbols("x")
    p = sum(sp.Rational(c) * x ** (4 - k) for k, c in enumerate(coeffs))
    return sp.discriminant(sp.Poly(p, x))


# ------------------------------------------------------------ geometry

def chord_cosines(sides, dists) -> np.ndarray:
    """Subtended-angle cosines from distances by the law of cosines."""
    a, b, c = sides
    s1, s2, s3 = dists
    return np.array([(s2 ** 2 + s3 ** 2 - a ** 2) / (2 * s2 * s3),
                     (s1 ** 2 + s3 ** 2 - b ** 2) / (2 * s1 * s3),
                     (s1 ** 2 + s2 ** 2 - c ** 2) / (2 * s1 * s2)])


def trilaterate_lsq(points3, dists, start) -> np.ndarray:
    """Generic nonlinear least squares for the point at the given distances."""
    P = np.asarray(points3, dtype=float)
    d = np.asarray(dists, dtype=float)
    r = least_squares(lambda X: np.linalg.norm(X - P, axis=1) - d, np.asarray(start, float),
                      xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return r.x


# ------------------------------------------------------------ curves

def deltoid_points(n: int = 20000) -> np.ndarray:
    """Dense samples of the deltoid x = 2cos t + cos 2t, y = 2 sin t - sin 2t."""
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return np.column_stack([2 * np.cos(t) + np.cos(2 * t), 2 * np.sin(t) - np.sin(2 * t)])


def deltoid_euclidean_distance(x: float, y: float, curve: np.ndarray | None = None) -> float:
    curve = deltoid_points() if curve is None else curve
    return float(np.min(np.hypot(curve[:, 0] - x, curve[:, 1] - y)))


def circle_basis_points(theta) -> tuple[np.ndarray, np.ndarray]:
    """(E1, E2) along the unit circle, written directly in the angle."""
    t = np.asarray(theta, dtype=float)
    e1 = (np.cos(2 * t) - 2 * np.cos(t) + 1) / 2
    e2 = np.sin(t) * (1 + np.cos(t))
    return e1, e2


# ------------------------------------------------------------ derivatives and fits

def fd_scaled_jacobian(s, cosines, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of the distance system, rows divided by 2 s_j s_k."""
    s = np.asarray(s, dtype=float)
    sides = (0.0, 0.0, 0.0)
    J = np.zeros((3, 3))
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        J[:, k] = (_system(s + e, sides, cosines) - _system(s - e, sides, cosines)) / (2 * h)
    s1, s2, s3 = s
    return J / (2 * np.array([s2 * s3, s1 * s3, s1 * s2]))[:, None]


def loglog_slope(x, y) -> float:
    """Slope of log y against log x by ordinary least squares."""
    return float(linregress(np.log(x), np.log(y)).slope)
