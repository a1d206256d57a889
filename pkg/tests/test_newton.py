import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from newtondyn.catalog import INCONSISTENT_B, TYPED_QUARTICS
from newtondyn.newton import (
    RepeatedRootError,
    classify_critical_points,
    newton_from_poly,
    newton_from_roots,
    normalize_marked,
    per2_polynomial,
    per2_slice,
)
from newtondyn.rational import INF, as_projective, evaluate, multiplier_at, to_affine

from conftest import random_roots

R = sp.Rational


def exact_image(N, z):
    return to_affine(evaluate(N.map, as_projective(sp.nsimplify(z))))


def test_quadratic_newton_formula():
    f = newton_from_roots([0, 1]).map
    z = sp.Symbol("z")
    num = sum(c * z**i for i, c in enumerate(f.num_coeffs))
    den = sum(c * z**i for i, c in enumerate(f.den_coeffs))
    assert sp.simplify(num / den - z**2 / (2 * z - 1)) == 0


def test_repeated_roots_rejected():
    with pytest.raises(RepeatedRootError):
        newton_from_roots([0, 0, 1])


def test_additional_points_are_roots_of_second_derivative():
    N = newton_from_roots([0, 1, sp.Rational(1, 2) + sp.I, -2])
    z = sp.Symbol("z")
    P = sp.expand(z * (z - 1) * (z - R(1, 2) - sp.I) * (z + 2))
    expected = sp.Poly(sp.diff(P, z, 2), z).nroots()
    got = np.sort_complex([complex(c) for c in N.additional_critical_points])
    assert np.allclose(np.sort_complex([complex(e) for e in expected]), got, atol=1e-12)


def test_double_additional_point_for_adjacent_type():
    crit = classify_critical_points(newton_from_poly(TYPED_QUARTICS["A"]))
    add = [c for c in crit if c.kind == "additional"]
    assert len(add) == 1 and add[0].z == 0 and add[0].multiplicity == 2 and add[0].free


def test_root_that_is_also_additional_is_not_free():
    crit = classify_critical_points(newton_from_poly(TYPED_QUARTICS["IE"]))
    at0 = [c for c in crit if c.z == 0]
    assert len(at0) == 1 and at0[0].kind == "root" and not at0[0].free and at0[0].multiplicity == 2
    add = [c for c in crit if c.kind == "additional"]
    assert len(add) == 1 and complex(add[0].z) == 1.75 and add[0].free


def test_generic_additional_points_are_free(rng):
    N = newton_from_roots(random_roots(rng))
    add = [c for c in classify_critical_points(N) if c.kind == "additional"]
    assert sum(c.multiplicity for c in add) == 2 and all(c.free for c in add)
    for c in add:
        assert abs(complex(N(complex(c.z))) - complex(c.z)) > 1e-6


def test_normalize_scales_farthest_pair():
    assert normalize_marked([0, 2, 1]).normalized_roots == (0, 1, R(1, 2))


def test_normalize_identity_when_already_normal():
    m = normalize_marked([0, 1, R(1, 3), R(1, 2) + sp.I / 4])
    assert m.scale == 1 and m.shift == 0


@given(st.integers(0, 10_000))
def test_normalized_roots_lie_in_unit_disk(seed):
    roots = random_roots(np.random.default_rng(seed))
    m = normalize_marked(roots)
    assert all(abs(complex(r)) <= 1 + 1e-12 for r in m.normalized_roots)
    d = np.abs(np.subtract.outer(roots, roots))
    assert np.isclose(abs(complex(m.scale)), 1 / d.max())


@given(st.integers(0, 10_000))
def test_normalization_is_affine_invariant(seed):
    rng = np.random.default_rng(seed)
    roots = np.array(random_roots(rng))
    a = complex(*rng.normal(size=2))
    b = complex(*rng.normal(size=2))
    n1 = np.array(normalize_marked(list(roots)).normalized_roots, dtype=complex)
    n2 = np.array(normalize_marked(list(a * roots + b)).normalized_roots, dtype=complex)
    n3 = np.array(normalize_marked(list(n1)).normalized_roots, dtype=complex)
    assert np.allclose(np.sort_complex(n1), np.sort_complex(n2), atol=1e-9)
    assert np.allclose(n1, n3, atol=1e-12)


@given(st.integers(0, 10_000))
def test_roots_superattracting_and_infinity_multiplier(seed):
    N = newton_from_roots(random_roots(np.random.default_rng(seed)))
    for r in N.root_array():
        assert abs(multiplier_at(N.map, r)) < 1e-9
    assert abs(multiplier_at(N.map, INF) - 4 / 3) <= 1e-12
    crit = classify_critical_points(N)
    assert sum(c.multiplicity for c in crit) == 2 * 4 - 2


@given(st.fractions(min_value=-5, max_value=5, max_denominator=50))
def test_per2_slice_swaps_zero_and_one(c):
    c = R(c.numerator, c.denominator)
    try:
        N = per2_slice(c)
    except RepeatedRootError:
        return
    assert exact_image(N, 0) == 1 and exact_image(N, 1) == 0
    assert set(N.additional_critical_points) == {0, c}


def test_per2_at_thirteen_tenths_is_the_disjoint_cycle_quartic():
    assert per2_polynomial(R(13, 10)) == TYPED_QUARTICS["D"]


def test_per2_at_zero_has_double_additional_point():
    assert list(per2_slice(0).additional_critical_points) == [0, 0]


def test_bitransitive_catalog_polynomial_does_not_swap_plus_minus_one():
    N = newton_from_poly(INCONSISTENT_B)
    assert exact_image(N, -1) == R(2, 5)
    assert exact_image(N, -1) != 1
