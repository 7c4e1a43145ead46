"""Sparse trivariate polynomials evaluated in scaled coordinates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray


def monomials(degree: int, even_in_z: bool = False) -> list[tuple[int, int, int]]:
    """Exponent triples of total degree ``<= degree``, graded then descending lex."""
    out = []
    for d in range(degree + 1):
        for i in range(d, -1, -1):
            for j in range(d - i, -1, -1):
                k = d - i - j
                if even_in_z and k % 2:
                    continue
                out.append((i, j, k))
    return out


def vandermonde(U: NDArray[np.float64], exps: list[tuple[int, int, int]]) -> NDArray[np.float64]:
    """Rows of monomial values at scaled points ``U`` (N, 3)."""
    U = np.atleast_2d(U)
    deg = max((sum(e) for e in exps), default=0)
    P = [U[:, c, None] ** np.arange(deg + 1) for c in range(3)]
    E = np.asarray(exps, dtype=int).reshape(-1, 3)
    return P[0][:, E[:, 0]] * P[1][:, E[:, 1]] * P[2][:, E[:, 2]]


def _canonical_sign(exps, coeffs):
    """Sign making the coefficient of the lexicographically largest exponent positive."""
    nz = [(e, c) for e, c in zip(exps, coeffs) if c != 0.0]
    if not nz:
        return 1.0
    lead = max(nz, key=lambda t: t[0])[1]
    return 1.0 if lead > 0 else -1.0


@dataclass
class TrivariatePoly:
    """Polynomial ``sum c_e u^e`` with ``u = (X - center) / half_width``.

    Attributes:
        exponents: Exponent triples.
        coefficients: Coefficients in scaled coordinates (unit norm when normalized).
        center, half_width: Affine scaling from scene to scaled coordinates.
    """

    exponents: list[tuple[int, int, int]]
    coefficients: NDArray[np.float64]
    center: NDArray[np.float64] = field(default_factory=lambda: np.zeros(3))
    half_width: NDArray[np.float64] = field(default_factory=lambda: np.ones(3))

    def __post_init__(self):
        self.exponents = [tuple(int(v) for v in e) for e in self.exponents]
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        self.center = np.asarray(self.center, dtype=float)
        self.half_width = np.asarray(self.half_width, dtype=float)

    @property
    def degree(self) -> int:
        return max(sum(e) for e, c in zip(self.exponents, self.coefficients) if c != 0.0)

    def as_dict(self) -> dict:
        return {e: float(c) for e, c in zip(self.exponents, self.coefficients)}

    def scale(self, X: ArrayLike) -> NDArray[np.float64]:
        return (np.atleast_2d(np.asarray(X, dtype=float)) - self.center) / self.half_width

    def evaluate_scaled(self, U: ArrayLike) -> NDArray[np.float64]:
        return vandermonde(np.atleast_2d(np.asarray(U, dtype=float)), self.exponents) @ self.coefficients

    def __call__(self, X: ArrayLike) -> NDArray[np.float64] | float:
        X = np.asarray(X, dtype=float)
        v = self.evaluate_scaled(self.scale(X))
        return float(v[0]) if X.ndim == 1 else v

    def normalized(self) -> "TrivariatePoly":
        c = self.coefficients / np.linalg.norm(self.coefficients)
        c = c * _canonical_sign(self.exponents, c)
        return TrivariatePoly(list(self.exponents), c, self.center.copy(), self.half_width.copy())

    def coefficient_vector(self, exps: list[tuple[int, int, int]]) -> NDArray[np.float64]:
        d = self.as_dict()
        return np.array([d.get(tuple(e), 0.0) for e in exps])

    def to_json(self) -> str:
        doc = {
            "center": [repr(float(v)) for v in self.center],
            "half_width": [repr(float(v)) for v in self.half_width],
            "terms": [[list(e), repr(float(c))] for e, c in zip(self.exponents, self.coefficients)],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TrivariatePoly":
        doc = json.loads(text)
        exps = [tuple(t[0]) for t in doc["terms"]]
        coeffs = [float(t[1]) for t in doc["terms"]]
        return cls(exps, np.array(coeffs), np.array([float(v) for v in doc["center"]]),
                   np.array([float(v) for v in doc["half_width"]]))

    @classmethod
    def from_terms(cls, terms: dict, center=(0.0, 0.0, 0.0),
                   half_width=(1.0, 1.0, 1.0)) -> "TrivariatePoly":
        exps = sorted(terms, key=lambda e: (sum(e), tuple(-v for v in e)))
        return cls(exps, np.array([terms[e] for e in exps]), np.array(center), np.array(half_width))

    def __mul__(self, other: "TrivariatePoly") -> "TrivariatePoly":
        if not (np.array_equal(self.center, other.center)
                and np.array_equal(self.half_width, other.half_width)):
            raise ValueError("factors must share the coordinate scaling")
        out: dict = {}
        for e1, c1 in zip(self.exponents, self.coefficients):
            for e2, c2 in zip(other.exponents, other.coefficients):
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return TrivariatePoly.from_terms(out, self.center, self.half_width)


def dc_polynomial(center=(0.0, 0.0, 0.0), half_width=(1.0, 1.0, 1.0)) -> TrivariatePoly:
    """``x^2 + y^2 - 1`` expressed in the given scaled coordinates."""
    cx, cy, _ = center
    hx, hy, _ = half_width
    # x = cx + hx u, y = cy + hy v
    terms = {
        (2, 0, 0): hx * hx, (1, 0, 0): 2 * cx * hx,
        (0, 2, 0): hy * hy, (0, 1, 0): 2 * cy * hy,
        (0, 0, 0): cx * cx + cy * cy - 1.0,
    }
    return TrivariatePoly.from_terms(terms, center, half_width)
