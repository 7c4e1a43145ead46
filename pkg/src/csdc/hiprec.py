"""Multiprecision path for the scene, the solver and trilateration.

Far above the triangle the four quartic roots crowd within about ``1/z^2`` of
each other and a double root splits by roughly the square root of the working
precision. Double precision then cannot separate the double solution from its
companions, so sweeps recompute everything with mpmath from the control-point
angles and the viewpoint parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .config import DEFAULT, Tolerances
from .errors import LeadingCoefficientVanishes, ViewpointOnControlPoint
from .geometry import ControlTriangle, Viewpoint
from .solver import (Classification, SolutionSet, TripletSolution, quartic_coefficients,
                     quartic_discriminant)


def default_dps(height: float) -> int:
    """Working precision that keeps double roots resolved up to ``height``."""
    return int(max(30, math.ceil(30 + 10 * math.log10(max(1.0, abs(height))))))


@dataclass(frozen=True)
class MPScene:
    phis: tuple
    points: tuple
    sides: tuple
    dps: int


def scene(tri: ControlTriangle, dps: int) -> MPScene:
    """Control points and chords recomputed at ``dps`` digits from the canonical angles."""
    with mp.workdps(dps):
        phis = tuple(mp.mpf(p) for p in tri.phis)
        pts = tuple((mp.cos(t), mp.sin(t)) for t in phis)

        def chord(i, j):
            return mp.sqrt((pts[i][0] - pts[j][0]) ** 2 + (pts[i][1] - pts[j][1]) ** 2)

        return MPScene(phis, pts, (chord(1, 2), chord(0, 2), chord(0, 1)), dps)


def dc_viewpoint(theta: float, z0: float, dps: int) -> tuple:
    """Danger-cylinder point exactly on the circle at ``dps`` digits."""
    with mp.workdps(dps):
        t = mp.mpf(theta)
        return (mp.cos(t), mp.sin(t), mp.mpf(z0))


def angles(sc: MPScene, O) -> tuple[tuple, tuple]:
    """Cosines (alpha, beta, gamma) and distances (|OA|, |OB|, |OC|)."""
    with mp.workdps(sc.dps):
        O = tuple(mp.mpf(v) for v in O)
        d = [(O[0] - p[0], O[1] - p[1], O[2]) for p in sc.points]
        n = [mp.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2) for v in d]
        if min(n) < DEFAULT.control_point:
            raise ViewpointOnControlPoint("viewpoint coincides with a control point")

        def dot(i, j):
            return d[i][0] * d[j][0] + d[i][1] * d[j][1] + d[i][2] * d[j][2]

        cos = (dot(1, 2) / (n[1] * n[2]), dot(0, 2) / (n[0] * n[2]), dot(0, 1) / (n[0] * n[1]))
        return cos, tuple(n)


def residuals(sc: MPScene, cos, s):
    a, b, c = sc.sides
    ca, cb, cg = cos
    s1, s2, s3 = s
    return (s2 * s2 + s3 * s3 - 2 * ca * s2 * s3 - a * a,
            s1 * s1 + s3 * s3 - 2 * cb * s1 * s3 - b * b,
            s1 * s1 + s2 * s2 - 2 * cg * s1 * s2 - c * c)


@dataclass
class MPSolution:
    """Multiprecision solve result plus its double-precision summary."""

    triplets: list  # list of (mp triplet, multiplicity)
    roots: list
    coefficients: list
    solution_set: SolutionSet
    cosines: tuple
    distances: tuple | None = None


def _classify_mp(s, tol: Tolerances) -> Classification:
    real = all(abs(mp.im(e)) <= tol.imag * max(1, abs(e)) for e in s)
    if real and all(mp.re(e) > tol.positive for e in s):
        return Classification.P3P
    return Classification.NON_P3P


def solve_cosines(sc: MPScene, cos, tol: Tolerances = DEFAULT,
                  radius=None) -> MPSolution:
    """Solve one instance at the scene precision.

    Roots whose distance is below ``radius * (1 + |r|)`` are merged; the
    default radius is ``10^(-dps/3)``.
    """
    with mp.workdps(sc.dps):
        a, b, c = sc.sides
        ca, cb, cg = cos
        q = list(quartic_coefficients(a, b, c, ca, cb, cg))
        scale = max(abs(x) for x in q)
        if abs(q[0]) <= tol.leading_coefficient * scale:
            raise LeadingCoefficientVanishes(f"leading coefficient {float(q[0]):.3e} vanishes")
        rad = mp.mpf(10) ** (-sc.dps // 3) if radius is None else mp.mpf(radius)
        r = mp.polyroots(q, maxsteps=400, extraprec=4 * sc.dps)
        r = sorted(r, key=lambda z: (float(mp.re(z)), float(mp.im(z))))
        used = [False] * 4
        out = []
        for i in range(4):
            if used[i]:
                continue
            grp = [i]
            used[i] = True
            for j in range(i + 1, 4):
                if not used[j] and abs(r[i] - r[j]) <= rad * (1 + abs(r[i])):
                    grp.append(j)
                    used[j] = True
            v = sum(r[k] for k in grp) / len(grp)
            K = 1 + v * v - 2 * v * cb
            disc = mp.sqrt(mp.mpc(cg * cg - 1 + c * c * K / (b * b)))
            s1 = mp.sqrt(mp.mpc(b * b / K))
            cands = [[s1, u * s1, v * s1] for u in (cg + disc, cg - disc)]
            cands.sort(key=lambda t: abs(residuals(sc, cos, t)[0]))
            picked = [(cands[0], len(grp))]
            if len(grp) == 2:
                mag = max(1, max(abs(e) for e in cands[0]))
                alt_res = abs(residuals(sc, cos, cands[1])[0])
                gap = max(abs(x - y) for x, y in zip(cands[0], cands[1]))
                if alt_res <= rad * mag * mag and gap > rad * mag:
                    picked = [(cands[0], 1), (cands[1], 1)]
            for s, m in picked:
                if mp.re(s[0]) < 0 or (mp.re(s[0]) == 0 and mp.im(s[0]) < 0):
                    s = [-e for e in s]
                out.append((s, m))

        qn = [x / scale for x in q]
        disc_val = float(quartic_discriminant(qn))
        triplets = [TripletSolution(complex(s[0]), complex(s[1]), complex(s[2]), m,
                                    _classify_mp(s, tol)) for s, m in out]
        p3p = [t for t in triplets if t.is_p3p]
        n_real = sum(1 for z in r if abs(mp.im(z)) <= rad * (1 + abs(z)))
        ss = SolutionSet(
            coefficients=np.array([float(x) for x in q]),
            roots=np.array([complex(z) for z in r]),
            triplets=triplets,
            discriminant=disc_val,
            p3p_count=len(p3p),
            p3p_count_with_multiplicity=sum(t.multiplicity for t in p3p),
            real_root_count=n_real,
            extra={"dps": sc.dps},
        )
        return MPSolution(out, r, q, ss, tuple(cos))


def solve_viewpoint_mp(tri: ControlTriangle, O, dps: int | None = None,
                       tol: Tolerances = DEFAULT, sc: MPScene | None = None) -> MPSolution:
    """Solve the instance of a viewpoint given by floats (taken as exact)."""
    O = Viewpoint.of(O)
    dps = dps or default_dps(O.z)
    sc = sc or scene(tri, dps)
    cos, n = angles(sc, (O.x, O.y, O.z))
    sol = solve_cosines(sc, cos, tol)
    sol.distances = n
    return sol


def solve_dc_point(tri: ControlTriangle, theta: float, z0: float, dps: int | None = None,
                   tol: Tolerances = DEFAULT, sc: MPScene | None = None) -> MPSolution:
    """Solve the instance of the danger-cylinder point at (theta, z0)."""
    dps = dps or default_dps(z0)
    sc = sc or scene(tri, dps)
    cos, n = angles(sc, dc_viewpoint(theta, z0, dps))
    sol = solve_cosines(sc, cos, tol)
    sol.distances = n
    return sol


def trilaterate(sc: MPScene, s) -> tuple:
    """(x, y, z^2) of the point at real distances ``s`` from A, B, C."""
    with mp.workdps(sc.dps):
        s = [mp.re(e) if isinstance(e, mp.mpc) else mp.mpf(e) for e in s]
        (xa, ya), (xb, yb), (xc, yc) = sc.points
        m11, m12, m21, m22 = 2 * (xb - xa), 2 * (yb - ya), 2 * (xc - xa), 2 * (yc - ya)
        r1 = s[0] ** 2 - s[1] ** 2 + xb * xb + yb * yb - xa * xa - ya * ya
        r2 = s[0] ** 2 - s[2] ** 2 + xc * xc + yc * yc - xa * xa - ya * ya
        det = m11 * m22 - m12 * m21
        x = (r1 * m22 - m12 * r2) / det
        y = (m11 * r2 - m21 * r1) / det
        return x, y, s[0] ** 2 - (x - xa) ** 2 - (y - ya) ** 2


def triplet_is_real_positive(s, tol: Tolerances = DEFAULT) -> bool:
    return _classify_mp(s, tol) is Classification.P3P
