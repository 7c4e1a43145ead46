"""Scene model: control points on the unit circle, viewpoints and subtended angles.

The three control points always lie on the unit circle in the plane ``z = 0``
and are parametrized by their polar angles. Angles are canonicalized so they
sum to zero, which fixes the orientation of the x-axis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import DEFAULT, Tolerances
from .errors import DegenerateTriangle, ViewpointOnControlPoint


def _wrap(t: float) -> float:
    """Map an angle to (-pi, pi]."""
    w = (t + np.pi) % (2.0 * np.pi) - np.pi
    return np.pi if w == -np.pi else float(w)


@dataclass(frozen=True)
class ControlTriangle:
    """Three control points on the unit circle.

    Attributes:
        phi_a, phi_b, phi_c: Canonical polar angles (radians), summing to zero.
        points: (3, 2) array holding A, B, C in the plane.
        a, b, c: Chord lengths |BC|, |AC|, |AB|.
    """

    phi_a: float
    phi_b: float
    phi_c: float
    points: NDArray[np.float64]
    a: float
    b: float
    c: float

    @property
    def phis(self) -> tuple[float, float, float]:
        return (self.phi_a, self.phi_b, self.phi_c)

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def points3(self) -> NDArray[np.float64]:
        """Control points embedded in 3D, shape (3, 3)."""
        return np.column_stack([self.points, np.zeros(3)])

    def relabel(self, shift: int = 1) -> "ControlTriangle":
        """Cyclically relabel the vertices, A <- B <- C for ``shift=1``."""
        p = list(self.phis)
        p = p[shift % 3:] + p[: shift % 3]
        return make_triangle(*p)


def make_triangle(phi_a: float, phi_b: float, phi_c: float,
                  tol: Tolerances = DEFAULT) -> ControlTriangle:
    """Build a canonical control triangle from three polar angles.

    All angles are rotated by minus their mean so they sum to zero. The
    rotation leaves every chord length unchanged.

    Raises:
        DegenerateTriangle: if two control points coincide.
    """
    phis = np.array([phi_a, phi_b, phi_c], dtype=float)
    if not np.all(np.isfinite(phis)):
        raise DegenerateTriangle("control angles must be finite")
    phis = phis - phis.sum() / 3.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if abs(_wrap(phis[i] - phis[j])) < tol.distinct_angles:
            raise DegenerateTriangle(
                f"control points {i} and {j} coincide (angles {phis[i]:.3g}, {phis[j]:.3g})")
    points = np.column_stack([np.cos(phis), np.sin(phis)])
    a = 2.0 * abs(np.sin((phis[1] - phis[2]) / 2.0))
    b = 2.0 * abs(np.sin((phis[0] - phis[2]) / 2.0))
    c = 2.0 * abs(np.sin((phis[0] - phis[1]) / 2.0))
    return ControlTriangle(float(phis[0]), float(phis[1]), float(phis[2]),
                           points, float(a), float(b), float(c))


def equilateral() -> ControlTriangle:
    """The equilateral triangle with a vertex on the positive x-axis."""
    return make_triangle(0.0, 2.0 * np.pi / 3.0, -2.0 * np.pi / 3.0)


@dataclass(frozen=True)
class Viewpoint:
    """An optical center in scene units."""

    x: float
    y: float
    z: float

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def of(cls, O: "Viewpoint | ArrayLike") -> "Viewpoint":
        if isinstance(O, Viewpoint):
            return O
        x, y, z = (float(v) for v in np.asarray(O, dtype=float).reshape(3))
        return cls(x, y, z)

    def mirrored(self) -> "Viewpoint":
        return Viewpoint(self.x, self.y, -self.z)


@dataclass(frozen=True)
class AngleTriple:
    """Cosines of the angles subtended at the viewpoint.

    ``cos_alpha`` is the angle between the rays to B and C (opposite side a),
    ``cos_beta`` between A and C, ``cos_gamma`` between A and B.
    """

    cos_alpha: float
    cos_beta: float
    cos_gamma: float

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.cos_alpha, self.cos_beta, self.cos_gamma])

    def perturbed(self, delta: ArrayLike) -> "AngleTriple":
        d = np.asarray(delta, dtype=float)
        return AngleTriple(*(self.as_array() + d))


def _as_xyz(O) -> NDArray[np.float64]:
    if isinstance(O, Viewpoint):
        return O.as_array()
    return np.asarray(O, dtype=float)


def distances(tri: ControlTriangle, O) -> NDArray[np.float64]:
    """Distances |OA|, |OB|, |OC|; accepts a Viewpoint or an (..., 3) array."""
    X = _as_xyz(O)
    d = X[..., None, :] - tri.points3
    return np.linalg.norm(d, axis=-1)


def angles_from_viewpoint_batch(tri: ControlTriangle, X: ArrayLike,
                                tol: Tolerances = DEFAULT) -> NDArray[np.float64]:
    """Vectorized cosines for an (N, 3) array of viewpoints.

    Returns:
        (N, 3) array of (cos_alpha, cos_beta, cos_gamma). Rows whose viewpoint
        sits on a control point are NaN.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    D = X[:, None, :] - tri.points3[None, :, :]
    n = np.linalg.norm(D, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        ca = np.einsum("ij,ij->i", D[:, 1], D[:, 2]) / (n[:, 1] * n[:, 2])
        cb = np.einsum("ij,ij->i", D[:, 0], D[:, 2]) / (n[:, 0] * n[:, 2])
        cg = np.einsum("ij,ij->i", D[:, 0], D[:, 1]) / (n[:, 0] * n[:, 1])
    out = np.column_stack([ca, cb, cg])
    out[np.min(n, axis=1) < tol.control_point] = np.nan
    return out


def angles_from_viewpoint(tri: ControlTriangle, O,
                          tol: Tolerances = DEFAULT) -> AngleTriple:
    """Cosines of the three angles subtended by the triangle sides at O.

    Raises:
        ViewpointOnControlPoint: if O is within tolerance of a control point.
    """
    X = _as_xyz(O)
    if np.min(distances(tri, X)) < tol.control_point:
        raise ViewpointOnControlPoint(f"viewpoint {tuple(X)} coincides with a control point")
    ca, cb, cg = angles_from_viewpoint_batch(tri, X[None, :], tol)[0]
    return AngleTriple(float(ca), float(cb), float(cg))


def centers_from_distances(tri: ControlTriangle, s1: float, s2: float, s3: float,
                           tol: Tolerances = DEFAULT) -> list[Viewpoint]:
    """Recover the viewpoints at the given distances from A, B, C.

    Subtracting the sphere equations pairwise gives a 2x2 linear system for
    (x, y); the height then follows from the first sphere.

    Returns:
        ``[(x, y, +z), (x, y, -z)]`` for a proper intersection, a single point
        when the spheres are tangent, and an empty list when they miss.
    """
    s = np.array([s1, s2, s3], dtype=float)
    if not (np.all(np.isfinite(s)) and np.all(s > 0)):
        return []
    P = tri.points
    M = 2.0 * np.array([P[1] - P[0], P[2] - P[0]])
    sq = np.sum(P * P, axis=1)
    rhs = np.array([s[0] ** 2 - s[1] ** 2 + sq[1] - sq[0],
                    s[0] ** 2 - s[2] ** 2 + sq[2] - sq[0]])
    x, y = np.linalg.solve(M, rhs)
    z2 = s[0] ** 2 - (x - P[0, 0]) ** 2 - (y - P[0, 1]) ** 2
    scale = max(1.0, float(np.max(s)) ** 2)
    if abs(z2) <= tol.tangent_z2 * scale:
        return [Viewpoint(float(x), float(y), 0.0)]
    if z2 < 0:
        return []
    z = float(np.sqrt(z2))
    return [Viewpoint(float(x), float(y), z), Viewpoint(float(x), float(y), -z)]


def dc_value(O) -> float | NDArray[np.float64]:
    """Signed danger-cylinder function x^2 + y^2 - 1."""
    X = _as_xyz(O)
    v = X[..., 0] ** 2 + X[..., 1] ** 2 - 1.0
    return float(v) if np.ndim(v) == 0 else v


def dc_point(theta: float, z0: float) -> Viewpoint:
    """Point of the danger cylinder at polar angle ``theta`` and height ``z0``."""
    return Viewpoint(float(np.cos(theta)), float(np.sin(theta)), float(z0))


def law_of_cosines_residual(tri: ControlTriangle, s: Sequence[complex],
                            ang: AngleTriple) -> NDArray:
    """Residuals of the three distance equations for a triplet ``s``."""
    s1, s2, s3 = s
    a, b, c = tri.sides
    return np.array([
        s2 * s2 + s3 * s3 - 2.0 * ang.cos_alpha * s2 * s3 - a * a,
        s1 * s1 + s3 * s3 - 2.0 * ang.cos_beta * s1 * s3 - b * b,
        s1 * s1 + s2 * s2 - 2.0 * ang.cos_gamma * s1 * s2 - c * c,
    ])


def rotate_viewpoints(X: Iterable, angle: float) -> NDArray[np.float64]:
    """Rotate (N, 3) viewpoints about the z-axis."""
    X = np.atleast_2d(np.asarray(list(X) if not isinstance(X, np.ndarray) else X, dtype=float))
    c, s = np.cos(angle), np.sin(angle)
    R = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    return X @ R.T
