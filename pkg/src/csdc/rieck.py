"""Viewpoint entities built from the control-point angles, and the diagnostics on them.

The entities are evaluated exactly as transcribed. The on-circle constraint
relating the two quadratic basis functions is derived by resultant
elimination, and the composed constraint on the viewpoint is evaluated
numerically. Every check here is diagnostic: results are reported, never
used as oracles elsewhere.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import DEFAULT, Tolerances
from .errors import PathNotTransversal, SingularEliminationSystem, ZeroHeight
from .geometry import ControlTriangle, Viewpoint

# (vertex, other two vertices in csc order, side-difference pair)
_LAYOUT = ((0, (1, 2), ("b", "c")), (1, (2, 0), ("c", "a")), (2, (0, 1), ("a", "b")))


def _csc(t: float) -> float:
    return 1.0 / np.sin(t)


def eta_squared(tri: ControlTriangle) -> float:
    ca, cb, cc = np.cos(tri.phis)
    return float(1.0 - ca * ca - cb * cb - cc * cc + 2.0 * ca * cb * cc)


def _a_term(tri: ControlTriangle, k: int, x, y):
    """A-entity of vertex ``k``; vectorized in (x, y)."""
    v, (i, j), _ = _LAYOUT[k]
    phi = tri.phis
    xv, yv = tri.points[v]
    sh, ch = np.sin(phi[v] / 2.0), np.cos(phi[v] / 2.0)
    px, py = x + xv, y + yv
    return _csc((phi[i] - phi[j]) / 2.0) * (sh * (px * px - py * py) + 2.0 * ch * px * py)


def _b_term(tri: ControlTriangle, k: int, x, y):
    """B-entity of vertex ``k``; vectorized in (x, y)."""
    v, (i, j), (p, q) = _LAYOUT[k]
    phi = tri.phis
    sides = dict(zip("abc", tri.sides))
    m = (tri.points[i] + tri.points[j]) / 2.0
    sh, ch = np.sin(phi[v] / 2.0), np.cos(phi[v] / 2.0)
    dx, dy = x - m[0], y - m[1]
    quad = sh * (dx * dx - dy * dy) + 2.0 * ch * dx * dy
    return (sides[p] ** 2 - sides[q] ** 2) / 4.0 - _csc((phi[i] - phi[j]) / 2.0) * quad


def _f_numerators(tri: ControlTriangle) -> NDArray[np.float64]:
    a, b, c = tri.sides
    sa, sb, sc = np.sin(tri.phis) ** 2
    return np.array([b * b * sc - c * c * sb, c * c * sa - a * a * sc, a * a * sb - b * b * sa])


@dataclass(frozen=True)
class RieckEntities:
    """Entities at one viewpoint; index order is (A, B, C).

    ``F`` is NaN when ``eta`` vanishes with a nonzero numerator. When both
    vanish (vertex A of the equilateral triangle) the quotient is taken as 0.
    """

    eta: float
    eta_squared: float
    eta_degenerate: bool
    A: tuple[float, float, float]
    B: tuple[float, float, float]
    C: tuple[float, float, float] | None
    F: tuple[float, float, float]
    F_numerators: tuple[float, float, float]

    @property
    def A_A(self) -> float:
        return self.A[0]

    @property
    def B_A(self) -> float:
        return self.B[0]

    @property
    def C_A(self) -> float:
        return self.C[0]

    @property
    def F_A(self) -> float:
        return self.F[0]


def f_values(tri: ControlTriangle, tol: Tolerances = DEFAULT) -> tuple[NDArray[np.float64], bool]:
    """The three F quotients and whether ``eta`` is degenerate."""
    e2 = eta_squared(tri)
    num = _f_numerators(tri)
    degenerate = abs(e2) <= tol.eta_degenerate
    if not degenerate:
        return num / e2, False
    scale = max(1.0, float(np.max(np.abs(num))))
    F = np.where(np.abs(num) <= tol.eta_degenerate * scale, 0.0, np.nan)
    return F, True


def entities(tri: ControlTriangle, O, need_c: bool = True,
             tol: Tolerances = DEFAULT) -> RieckEntities:
    """Evaluate the entities at viewpoint ``O``.

    Raises:
        ZeroHeight: if ``need_c`` and ``|z|`` is below tolerance.
    """
    O = Viewpoint.of(O)
    if need_c and abs(O.z) < tol.zero_height:
        raise ZeroHeight(f"z = {O.z:.3e} is too small for the C entities")
    A = tuple(float(_a_term(tri, k, O.x, O.y)) for k in range(3))
    B = tuple(float(_b_term(tri, k, O.x, O.y)) for k in range(3))
    C = None
    if need_c:
        w = (1.0 - O.x * O.x - O.y * O.y) / (O.z * O.z)
        C = tuple(b * w for b in B)
    e2 = eta_squared(tri)
    F, degenerate = f_values(tri, tol)
    return RieckEntities(
        eta=float(np.sqrt(max(e2, 0.0))), eta_squared=e2, eta_degenerate=degenerate,
        A=A, B=B, C=C, F=tuple(float(f) for f in F),
        F_numerators=tuple(float(v) for v in _f_numerators(tri)))


def identity_residuals(tri: ControlTriangle, O, tol: Tolerances = DEFAULT) -> NDArray[np.float64]:
    """``F - A - C`` for each vertex at ``O``.

    Raises:
        ZeroHeight: if ``|z|`` is below tolerance.
    """
    e = entities(tri, O, need_c=True, tol=tol)
    return np.array(e.F) - np.array(e.A) - np.array(e.C)


# ------------------------------------------------------------ quadratic basis

def basis_e1(x, y):
    return (x * x - y * y - 2.0 * x + 1.0) / 2.0


def basis_e2(x, y):
    return x * y + y


# monomials 1, x, y, x^2, xy, y^2
_INTERP_NODES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]])


def _quadratic_coeffs(f) -> NDArray[np.float64]:
    x, y = _INTERP_NODES.T
    V = np.column_stack([np.ones_like(x), x, y, x * x, x * y, y * y])
    return np.linalg.solve(V, f(x, y))


@dataclass(frozen=True)
class QuadraticBasisCoeffs:
    """Coefficients of the A entities in the basis {E1, E2, 1}.

    Attributes:
        k: (3, 3) rows (k_i1, k_i2, k_i3) for vertices A, B, C.
        E: (2, 3) rows expressing E1 and E2 through (A_B, A_C, 1).
        linear_remainder: (3, 2) x- and y-coefficients of ``A - (k1 E1 + k2 E2 + k3)``.
            They vanish only when the vertex angle is 0 or pi, so the basis
            reconstructs A exactly just for those vertices.
        condition: condition number of the 2x2 system that defines E.
    """

    k: NDArray[np.float64]
    E: NDArray[np.float64]
    linear_remainder: NDArray[np.float64]
    condition: float

    def reconstruct(self, row: int, x, y):
        k1, k2, k3 = self.k[row]
        return k1 * basis_e1(x, y) + k2 * basis_e2(x, y) + k3

    def e_from_a(self, A_B, A_C):
        """(E1, E2) predicted from the B and C entities."""
        E = self.E
        return (E[0, 0] * A_B + E[0, 1] * A_C + E[0, 2],
                E[1, 0] * A_B + E[1, 1] * A_C + E[1, 2])


def basis_coeffs(tri: ControlTriangle, tol: Tolerances = DEFAULT) -> QuadraticBasisCoeffs:
    """Project each A entity on {E1, E2, 1} by matching its quadratic part.

    Raises:
        SingularEliminationSystem: if the (B, C) rows cannot be inverted for (E1, E2).
    """
    k = np.zeros((3, 3))
    rem = np.zeros((3, 2))
    for row in range(3):
        c1, cx, cy, cxx, cxy, cyy = _quadratic_coeffs(lambda x, y: _a_term(tri, row, x, y))
        k1, k2 = 2.0 * cxx, cxy
        k[row] = (k1, k2, c1 - k1 / 2.0)
        rem[row] = (cx + k1, cy - k2)
    M = k[1:, :2]
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > tol.singular_condition:
        raise SingularEliminationSystem(f"basis system condition number {cond:.3e}")
    Minv = np.linalg.inv(M)
    E = np.column_stack([Minv, -Minv @ k[1:, 2]])
    return QuadraticBasisCoeffs(k=k, E=E, linear_remainder=rem, condition=cond)


# ------------------------------------------------------------ DC implicit

@dataclass(frozen=True)
class DCImplicit:
    """Implicit curve in (E1, E2) traced by the unit circle.

    ``coefficients`` maps exponent pairs (i, j) of ``E1^i E2^j`` to values; the
    vector has unit Euclidean norm and a positive leading term in descending
    lexicographic order.
    """

    coefficients: dict
    raw_coefficients: dict
    norm: float
    metadata: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return max(i + j for i, j in self.coefficients)

    def __call__(self, e1, e2, raw: bool = False):
        coeffs = self.raw_coefficients if raw else self.coefficients
        e1 = np.asarray(e1, dtype=float)
        e2 = np.asarray(e2, dtype=float)
        out = np.zeros(np.broadcast(e1, e2).shape)
        for (i, j), c in coeffs.items():
            out = out + c * e1 ** i * e2 ** j
        return out if out.ndim else float(out)


@lru_cache(maxsize=1)
def _dc_resultant():
    import sympy as sp

    x, e1, e2 = sp.symbols("x e1 e2")
    # on the circle y^2 = 1 - x^2, so E1 = x^2 - x and E2^2 = y^2 (1 + x)^2
    p1 = sp.expand(e1 - (x * x - x))
    p2 = sp.expand(e2 ** 2 - (1 - x) * (1 + x) ** 3)
    res = sp.Poly(sp.resultant(p1, p2, x), e1, e2)
    raw = {tuple(int(v) for v in m): int(c) for m, c in res.terms()}
    return raw, str(res.as_expr())


def derive_dc_implicit(tri: ControlTriangle | None = None) -> DCImplicit:
    """Eliminate x from the on-circle forms of E1 and E2 by a resultant.

    The result does not depend on the triangle; the argument is accepted for
    interface symmetry with the other entity builders.
    """
    raw, expr = _dc_resultant()
    norm = float(np.sqrt(sum(float(c) ** 2 for c in raw.values())))
    lead = raw[max(raw)]
    sign = 1.0 if lead > 0 else -1.0
    coeffs = {m: sign * float(c) / norm for m, c in sorted(raw.items(), reverse=True)}
    return DCImplicit(coefficients=coeffs, raw_coefficients={m: float(c) for m, c in raw.items()},
                      norm=norm, metadata={"method": "sympy resultant in x",
                                           "expression": expr})


def composed_basis_values(tri: ControlTriangle, O, tol: Tolerances = DEFAULT,
                          basis: QuadraticBasisCoeffs | None = None) -> tuple[float, float]:
    """(E1, E2) predicted from ``A + C`` of the B and C vertices at ``O``."""
    e = entities(tri, O, need_c=True, tol=tol)
    basis = basis or basis_coeffs(tri, tol)
    return basis.e_from_a(e.A[1] + e.C[1], e.A[2] + e.C[2])


def p_constraint_diagnostic(tri: ControlTriangle, O, tol: Tolerances = DEFAULT,
                            basis: QuadraticBasisCoeffs | None = None,
                            curve: DCImplicit | None = None) -> float:
    """Implicit curve evaluated on the composed basis values, times ``z^(2 deg)``.

    Raises:
        ZeroHeight: if ``|z|`` is below tolerance.
    """
    O = Viewpoint.of(O)
    curve = curve or derive_dc_implicit(tri)
    p1, p2 = composed_basis_values(tri, O, tol, basis)
    return float(curve(p1, p2)) * O.z ** (2 * curve.degree)


def printed_constraint(e1, e2, reading: str):
    """The cube/square constraint as printed, under a product or a sum reading."""
    cube = (4.0 * e1 - 1.0) ** 3
    square = (2.0 * e1 * e1 + 2.0 * e2 * e2 - 10.0 * e1 - 1.0) ** 2
    if reading == "product":
        return cube * square
    if reading == "sum":
        return cube + square
    raise ValueError(f"unknown reading {reading!r}")


def printed_forms_on_circle(thetas: ArrayLike) -> dict:
    """Printed readings and the derived curve at circle points, side by side."""
    t = np.asarray(thetas, dtype=float)
    x, y = np.cos(t), np.sin(t)
    e1, e2 = basis_e1(x, y), basis_e2(x, y)
    curve = derive_dc_implicit()
    return {
        "theta": t.tolist(),
        "product": np.asarray(printed_constraint(e1, e2, "product")).tolist(),
        "sum": np.asarray(printed_constraint(e1, e2, "sum")).tolist(),
        "derived": np.asarray(curve(e1, e2)).tolist(),
    }


def deltoid_value(x, y):
    """The quartic x^4 - 8x^3 + 2x^2y^2 + 18x^2 + 24xy^2 + y^4 + 18y^2 - 27."""
    return (x ** 4 - 8 * x ** 3 + 2 * x ** 2 * y ** 2 + 18 * x ** 2 + 24 * x * y ** 2
            + y ** 4 + 18 * y ** 2 - 27)


def deltoid_factor_form(x, y):
    """``(1 - x^2 - y^2)^2`` times the deltoid quartic."""
    return (1 - x * x - y * y) ** 2 * deltoid_value(x, y)


# ------------------------------------------------------------ vanishing order

@dataclass(frozen=True)
class VanishingOrder:
    order: float
    stderr: float
    n_used: int
    crosses: bool
    note: str


def dc_factor_division(dc_values: ArrayLike, p_values: ArrayLike,
                       band: tuple[float, float] = (1e-6, 1e-2),
                       tol: Tolerances = DEFAULT) -> VanishingOrder:
    """Estimate the order to which ``p`` vanishes with the danger-cylinder value.

    A transversal crossing is fitted by regressing ``log|p|`` on ``log|dc|``
    over samples with ``|dc|`` inside ``band``. A path that stays away from
    the cylinder has order 0.

    Raises:
        PathNotTransversal: if the path lies on the cylinder or touches it
            without changing sign.
    """
    dc = np.asarray(dc_values, dtype=float)
    p = np.asarray(p_values, dtype=float)
    scale = max(1.0, float(np.max(np.abs(dc))))
    if np.all(np.abs(dc) <= tol.membership * scale):
        raise PathNotTransversal("path lies on the danger cylinder")
    nz = dc[np.abs(dc) > tol.membership * scale]
    crosses = bool(np.any(nz > 0) and np.any(nz < 0))
    if not crosses:
        if np.min(np.abs(dc)) <= band[1]:
            raise PathNotTransversal("path touches the danger cylinder without crossing it")
        return VanishingOrder(0.0, 0.0, 0, False, "path stays off the danger cylinder")
    sel = (np.abs(dc) >= band[0]) & (np.abs(dc) <= band[1]) & (np.abs(p) > 0) & np.isfinite(p)
    if np.count_nonzero(sel) < 3:
        raise PathNotTransversal("too few samples near the crossing")
    X, Y = np.log(np.abs(dc[sel])), np.log(np.abs(p[sel]))
    coef, cov = np.polyfit(X, Y, 1, cov=True)
    return VanishingOrder(float(coef[0]), float(np.sqrt(cov[0, 0])), int(sel.sum()), True,
                          "log-log regression near the crossing")


def radial_path(theta: float, z: float, offsets: ArrayLike) -> NDArray[np.float64]:
    """Viewpoints at radius ``1 + offset`` along polar angle ``theta``."""
    r = 1.0 + np.asarray(offsets, dtype=float)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), np.full_like(r, z)])


# ------------------------------------------------------------ survey

def survey(tri: ControlTriangle, n: int = 1000, seed: int = 0,
           box: tuple = ((-2.0, 2.0), (-2.0, 2.0), (0.2, 3.0)),
           anchor: tuple | None = (0.3, 0.2, 1.0), hold_tol: float = 1e-6,
           tol: Tolerances = DEFAULT) -> dict:
    """Identity residuals over seeded random viewpoints, summarized as a report.

    The verdict states, per vertex, whether ``F = A + C`` is defined and on
    what fraction of the sampled viewpoints it holds.
    """
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    X = lo + (hi - lo) * rng.random((n, 3))
    R = np.array([identity_residuals(tri, O, tol) for O in X])
    F, degenerate = f_values(tri, tol)
    finite = np.isfinite(R)
    holds = finite & (np.abs(R) <= hold_tol)
    per_vertex = {}
    for k, name in enumerate("ABC"):
        r = R[finite[:, k], k]
        per_vertex[name] = {
            "defined": bool(r.size),
            "quantiles": dict(zip(["min", "q01", "q25", "q50", "q75", "q99", "max"],
                                  np.quantile(r, [0, .01, .25, .5, .75, .99, 1]).tolist()))
            if r.size else None,
            "fraction_holding": float(np.mean(holds[:, k])),
        }
    defined = [name for name in "ABC" if per_vertex[name]["defined"]]
    all_hold = holds.all(axis=1)
    frac = float(np.mean(all_hold))
    parts = []
    if len(defined) < 3:
        missing = ", ".join(n for n in "ABC" if n not in defined)
        parts.append(f"undefined for {missing} (F numerator nonzero while eta vanishes)")
    for name in defined:
        f = per_vertex[name]["fraction_holding"]
        if f == 1.0:
            parts.append(f"{name} holds at every sampled viewpoint")
        elif f == 0.0:
            parts.append(f"{name} fails at every sampled viewpoint")
        else:
            parts.append(f"{name} holds on {f:.3%} of sampled viewpoints")
    verdict = "; ".join(parts) if parts else "undefined for every vertex"
    report = {
        "triangle": {"phis": list(tri.phis), "sides": list(tri.sides)},
        "n": n, "seed": seed, "box": [list(b) for b in box], "hold_tol": hold_tol,
        "eta_squared": eta_squared(tri), "eta_degenerate": degenerate,
        "F": [float(f) for f in F],
        "defined_vertices": defined,
        "fraction_holding_all": frac,
        "per_vertex": per_vertex,
        "verdict": verdict,
        "viewpoints": X.tolist(),
        "residuals": [[float(v) if np.isfinite(v) else None for v in row] for row in R],
    }
    if anchor is not None:
        e = entities(tri, anchor, tol=tol)
        report["anchor"] = {"viewpoint": list(anchor),
                            "entities": json.loads(json.dumps(asdict(e))),
                            "residuals": identity_residuals(tri, anchor, tol).tolist()}
    return report
