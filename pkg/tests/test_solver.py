import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from csdc import (AngleTriple, Classification, LeadingCoefficientVanishes, Viewpoint,
                  angles_from_viewpoint, centers_from_distances, count_p3p, count_p3p_batch,
                  distances, make_triangle, solve, solve_viewpoint)
from csdc.geometry import angles_from_viewpoint_batch
from csdc.partition import root_discriminant
from csdc.solver import (classify, grunert_quartic, normalized_discriminant,
                         quartic_discriminant, solve_batch)

R2 = np.sqrt(2.0)

coord = st.floats(-2.5, 2.5, allow_nan=False)
height = st.floats(0.2, 3.0, allow_nan=False)


def _instance(seed, random_triangle):
    rng = np.random.default_rng(seed)
    tri = random_triangle(seed)
    O = rng.uniform([-2, -2, 0.2], [2, 2, 3])
    return tri, O, angles_from_viewpoint(tri, O)


def _has(sol, s, tol=1e-9):
    return any(np.max(np.abs(t.s - np.asarray(s))) <= tol for t in sol.triplets)


# ------------------------------------------------------------ quartic

def test_quartic_matches_resultant(random_triangle):
    for seed in range(10):
        tri, _, ang = _instance(seed, random_triangle)
        q = grunert_quartic(tri, ang)
        ref = oracles.resultant_quartic(tri.sides, ang.as_array()) / tri.b ** 8
        np.testing.assert_allclose(q, ref, rtol=1e-10, atol=1e-12 * np.max(np.abs(ref)))


def test_symmetric_instance_has_unit_root(tri_eq):
    q = grunert_quartic(tri_eq, AngleTriple(0.25, 0.25, 0.25))
    assert abs(np.polyval(q, 1.0)) <= 1e-14


def test_generating_ratio_is_root(random_triangle):
    for seed in range(20):
        tri, O, ang = _instance(seed, random_triangle)
        s = distances(tri, O)
        q = grunert_quartic(tri, ang)
        v = s[2] / s[0]
        assert abs(np.polyval(q, v)) <= 1e-10 * np.sum(np.abs(q) * max(1, v) ** 4)


def test_cylinder_instance_has_clustered_roots(tri_eq):
    for theta in (0.3, 1.0, 2.5, 4.0):
        O = (np.cos(theta), np.sin(theta), 1.3)
        sol = solve_viewpoint(tri_eq, O)
        gaps = [abs(a - b) for i, a in enumerate(sol.roots) for b in sol.roots[i + 1:]]
        assert min(gaps) <= 1e-6
        assert abs(sol.discriminant) <= 1e-10


def test_leading_coefficient_vanishes(tri_eq):
    # for the equilateral the leading coefficient is 1 - 4 cos_alpha^2
    with pytest.raises(LeadingCoefficientVanishes):
        solve(tri_eq, AngleTriple(0.5, 0.3, 0.3))


def test_batch_marks_degenerate_rows_invalid(tri_eq):
    b = solve_batch(tri_eq, [[0.5, 0.3, 0.3], [0.25, 0.25, 0.25], [np.nan, 0, 0]])
    assert b.valid.tolist() == [False, True, False]
    assert b.counts()[0].tolist() == [-1, 1, -1]


# ------------------------------------------------------------ discriminant

@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=5, max_size=5).filter(lambda c: c[0] != 0))
def test_discriminant_formula_matches_sympy(coeffs):
    assert quartic_discriminant(np.array(coeffs, dtype=float)) == \
        pytest.approx(float(oracles.sympy_discriminant(coeffs)), abs=1e-6)


def test_root_discriminant_matches_formula():
    rng = np.random.default_rng(2)
    for _ in range(20):
        q = rng.normal(size=5)
        r = np.roots(q)
        lhs = q[0] ** 6 * root_discriminant(r[None, :])[0]
        assert lhs == pytest.approx(quartic_discriminant(q), rel=1e-8)


def test_normalized_discriminant_is_scale_free():
    q = np.array([1.0, -2.0, 0.5, 3.0, -1.0])
    assert normalized_discriminant(q) == pytest.approx(normalized_discriminant(7.5 * q), rel=1e-12)


# ------------------------------------------------------------ solve examples

def test_symmetric_viewpoint_solutions(tri_eq):
    sol = solve_viewpoint(tri_eq, (0, 0, 1))
    assert _has(sol, [R2, R2, R2])
    assert [t for t in sol.triplets if np.allclose(t.s, [R2] * 3)][0].is_p3p
    # direct substitution of the non-P3P solution
    ang = angles_from_viewpoint(tri_eq, (0, 0, 1))
    s = np.array([R2, R2, -1 / R2])
    assert np.max(np.abs(oracles._system(s, tri_eq.sides, ang.as_array()))) <= 1e-14
    assert _has(sol, s)
    t = [t for t in sol.triplets if np.allclose(t.s, s)][0]
    assert t.classification is Classification.NON_P3P


def test_symmetric_viewpoint_count_matches_oracle(tri_eq):
    ang = angles_from_viewpoint(tri_eq, (0, 0, 1))
    R = oracles.newton_solutions(tri_eq.sides, ang.as_array(), seed=0)
    assert oracles.oracle_p3p_count(R) == 1
    assert count_p3p(tri_eq, (0, 0, 1)) == 1


def test_cylinder_viewpoint_double_solution(tri_eq):
    sol = solve_viewpoint(tri_eq, (1, 0, 1))
    doubles = sol.multiple_triplets()
    assert len(doubles) == 1 and doubles[0].multiplicity == 2
    centers = centers_from_distances(tri_eq, *doubles[0].s.real)
    np.testing.assert_allclose([c.as_array() for c in centers], [[1, 0, 1], [1, 0, -1]],
                               atol=1e-6)
    assert sol.p3p_count == 1
    assert sol.p3p_count_with_multiplicity == 2


@pytest.mark.xfail(strict=True, reason="the (1,0,1) instance has one double P3P solution and "
                   "no other P3P solution; the remaining roots carry a zero distance")
def test_cylinder_viewpoint_three_solutions_literal(tri_eq):
    sol = solve_viewpoint(tri_eq, (1, 0, 1))
    assert sol.p3p_count == 3


def test_generic_counts_match_oracle(random_triangle):
    for seed in range(40):
        tri, O, ang = _instance(seed, random_triangle)
        R = oracles.newton_solutions(tri.sides, ang.as_array(), seed=seed)
        c = count_p3p(tri, O)
        assert c in (1, 2, 3, 4)
        assert c == oracles.oracle_p3p_count(R)


# ------------------------------------------------------------ invariants

@settings(max_examples=150, deadline=None)
@given(coord, coord, height)
def test_solution_invariants(x, y, z):
    tri = make_triangle(0.4, 2.1, -2.0)
    O = np.array([x, y, z])
    ang = angles_from_viewpoint(tri, O)
    sol = solve(tri, ang)
    assert sum(t.multiplicity for t in sol.triplets) == 4
    for t in sol.triplets:
        r = oracles._system(t.s, tri.sides, ang.as_array())
        assert np.max(np.abs(r)) <= 1e-8 * max(1.0, np.max(np.abs(t.s)) ** 2)
        assert t.s1.real > 0 or (t.s1.real == 0 and t.s1.imag >= 0)
        assert t.classification is classify(t.s)
    # conjugate closure
    for t in sol.triplets:
        if not t.is_real:
            assert any(np.allclose(u.s, np.conj(t.s), atol=1e-8) for u in sol.triplets)
    # the generating viewpoint is a P3P solution
    d = distances(tri, O)
    assert any(t.is_p3p and np.allclose(t.s.real, d, rtol=1e-8) for t in sol.triplets)


def test_classification_rule():
    assert classify([1.0, 2.0, 3.0]) is Classification.P3P
    assert classify([1.0, 2.0, -3.0]) is Classification.NON_P3P
    assert classify([1.0, 2.0, 0.0]) is Classification.NON_P3P
    assert classify([1.0, 2.0 + 1e-6j, 3.0]) is Classification.NON_P3P
    assert classify([1.0, 2.0 + 1e-10j, 3.0]) is Classification.P3P


def test_sign_flip_is_same_solution(tri_eq):
    ang = angles_from_viewpoint(tri_eq, (0.3, 0.2, 1.0))
    sol = solve(tri_eq, ang)
    for t in sol.triplets:
        r = oracles._system(-t.s, tri_eq.sides, ang.as_array())
        assert np.max(np.abs(r)) <= 1e-10


def test_discriminant_sign_tracks_real_root_count(tri_eq):
    # radial path that crosses the cylinder and the companion surface
    t = np.linspace(0.05, 2.5, 3001)
    X = np.column_stack([t * np.cos(0.4), t * np.sin(0.4), np.full_like(t, 1.1)])
    b = solve_batch(tri_eq, angles_from_viewpoint_batch(tri_eq, X))
    D = np.sign(root_discriminant(b.roots))
    n = b.real_root_counts()
    flips = np.nonzero(D[1:] != D[:-1])[0]
    changes = np.nonzero(n[1:] != n[:-1])[0]
    assert len(flips) >= 1
    # every real-root change sits at a sign flip (within one sample) and vice versa
    for i in changes:
        assert np.min(np.abs(flips - i)) <= 1
    for i in flips:
        assert np.min(np.abs(changes - i)) <= 1


def test_batch_counts_agree_with_single(tri_eq):
    rng = np.random.default_rng(9)
    X = rng.uniform([-2, -2, 0.2], [2, 2, 3], size=(50, 3))
    col, aware = count_p3p_batch(tri_eq, X)
    for i, O in enumerate(X):
        s = solve_viewpoint(tri_eq, Viewpoint.of(O))
        assert (col[i], aware[i]) == (s.p3p_count, s.p3p_count_with_multiplicity)


def test_high_precision_far_viewpoint(tri_eq):
    O = (0.4, -1.3, 1000.0)
    sol = solve_viewpoint(tri_eq, O, precision="mp")
    d = distances(tri_eq, O)
    assert any(t.is_p3p and np.allclose(t.s.real, d, rtol=1e-12) for t in sol.triplets)
    assert sum(t.multiplicity for t in sol.triplets) == 4


def test_unknown_precision(tri_eq):
    with pytest.raises(ValueError):
        solve_viewpoint(tri_eq, (0, 0, 1), precision="quad")

