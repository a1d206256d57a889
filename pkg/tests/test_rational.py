import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from newtondyn.degeneration import projective_distance
from newtondyn.newton import newton_from_roots, projective_newton_map
from newtondyn.rational import (
    INF,
    HomogeneousRationalMap,
    IndeterminatePointError,
    NotFixedError,
    as_projective,
    chordal,
    evaluate,
    extract_holes,
    fixed_points,
    multiplier_at,
    to_affine,
)

from conftest import random_roots

R = sp.Rational


def test_identity_evaluates_to_itself():
    f = HomogeneousRationalMap.from_affine([0, 1], [1])
    assert chordal(evaluate(f, (2, 1)), (2, 1)) < 1e-12


def test_quadratic_newton_fixes_root():
    f = newton_from_roots([0, 1]).map
    assert to_affine(evaluate(f, (sp.Integer(0), sp.Integer(1)))) == 0


def test_hole_is_indeterminate_on_raw_coefficients():
    f = projective_newton_map([0, 0, 1])
    with pytest.raises(IndeterminatePointError):
        evaluate(f, (0, 1))


def test_cubic_collision_limit_exact():
    dec = extract_holes(projective_newton_map([0, 0, 1]))
    assert dec.holes == (((0, 1), 1),)
    g = dec.reduced_map
    z = sp.Symbol("z")
    num = sum(c * z**i for i, c in enumerate(g.num_coeffs))
    den = sum(c * z**i for i, c in enumerate(g.den_coeffs))
    assert sp.simplify(num / den - (2 * z**2 - z) / (3 * z - 2)) == 0
    assert multiplier_at(g, 0) == R(1, 2)


def test_root_escaping_to_infinity_leaves_hole_at_infinity():
    dec = extract_holes(projective_newton_map([0, 1, INF]))
    assert dec.holes == (((1, 0), 1),)
    base = newton_from_roots([0, 1]).map
    assert list(dec.reduced_map.num_coeffs) == list(base.num_coeffs)
    assert list(dec.reduced_map.den_coeffs) == list(base.den_coeffs)


def test_nondegenerate_map_has_no_holes():
    f = newton_from_roots([0, 1, 3]).map
    dec = extract_holes(f)
    assert dec.holes == ()
    assert dec.reduced_map.degree == 3


def test_triple_collision_hole_multiplier():
    dec = extract_holes(projective_newton_map([0, 0, 0, 1]))
    assert dec.holes == (((0, 1), 2),)
    assert multiplier_at(dec.reduced_map, 0) == R(2, 3)


def test_fixed_points_quadratic_newton():
    recs = fixed_points(newton_from_roots([0, 1]).map)
    finite = sorted((complex(p.z).real, p.multiplier, p.multiplicity) for p in recs if p.z != INF)
    at_inf = [p for p in recs if p.z == INF]
    assert finite == [(0.0, 0, 1), (1.0, 0, 1)]
    assert len(at_inf) == 1 and at_inf[0].multiplier == 2


def test_parabolic_fixed_point_multiplicity():
    f = HomogeneousRationalMap.from_affine([0, 1, 1], [1])
    recs = {p.z: p for p in fixed_points(f)}
    assert recs[0].multiplicity == 2 and recs[0].multiplier == 1


def test_quartic_multiplier_at_infinity(rng):
    f = newton_from_roots(random_roots(rng)).map
    assert abs(multiplier_at(f, INF) - 4 / 3) < 1e-12


def test_multiplier_rejects_non_fixed_points():
    with pytest.raises(NotFixedError):
        multiplier_at(newton_from_roots([0, 1]).map, 0.3)


def _float_map(rng, d):
    num = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    den = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    return HomogeneousRationalMap.from_coeffs(num, den)


@given(st.integers(0, 10_000), st.integers(2, 5))
def test_fixed_point_multiplicities_sum_to_d_plus_one(seed, d):
    f = _float_map(np.random.default_rng(seed), d)
    assert sum(p.multiplicity for p in fixed_points(f)) == d + 1


@given(st.integers(0, 10_000), st.integers(1, 2))
def test_hole_extraction_recomposes(seed, k):
    rng = np.random.default_rng(seed)
    g = _float_map(rng, 2)
    holes = rng.normal(size=k) + 1j * rng.normal(size=k)
    h = np.array([1.0 + 0j])
    for a in holes:
        h = np.convolve(h, [-a, 1])
    num = np.convolve(h, g.float_coeffs()[0])
    den = np.convolve(h, g.float_coeffs()[1])
    f = HomogeneousRationalMap.from_coeffs(num, den)
    dec = extract_holes(f)
    assert dec.total_multiplicity == k
    assert projective_distance(dec.recompose(), f) <= 1e-8


@given(st.integers(0, 10_000))
def test_limit_agrees_with_reduced_map_away_from_holes(seed):
    rng = np.random.default_rng(seed)
    g = _float_map(rng, 2)
    a = complex(rng.normal(), rng.normal())
    num = np.convolve([-a, 1], g.float_coeffs()[0])
    den = np.convolve([-a, 1], g.float_coeffs()[1])
    f = HomogeneousRationalMap.from_coeffs(num, den)
    ghat = extract_holes(f).reduced_map
    z = complex(rng.normal(), rng.normal()) * 2
    if abs(z - a) < 0.1:
        z = a + 0.5
    assert chordal(f(z), ghat(z)) <= 1e-8
