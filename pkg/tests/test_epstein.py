import cmath

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from newtondyn.catalog import TYPED_QUARTICS
from newtondyn.epstein import (
    classify_multiplier,
    find_cycles,
    gamma_delta,
    holomorphic_index,
    residu_iteratif,
)
from newtondyn.newton import newton_from_poly, newton_from_roots, per2_slice
from newtondyn.rational import HomogeneousRationalMap, chordal

from conftest import random_roots

R = sp.Rational


def poly_map(coeffs):
    return HomogeneousRationalMap.from_affine(coeffs, [1])


def cycle_through(cycles, z, tol=1e-6):
    hits = [c for c in cycles if c.contains(z, tol)]
    assert len(hits) == 1, hits
    return hits[0]


def test_squaring_has_one_two_cycle_with_multiplier_four():
    two = [c for c in find_cycles(poly_map([0, 0, 1]), 2) if c.period == 2]
    assert len(two) == 1
    w = cmath.exp(2j * cmath.pi / 3)
    assert two[0].contains(w) and two[0].contains(w.conjugate())
    assert abs(two[0].multiplier - 4) < 1e-9


def test_attracting_fixed_point_index_and_residu():
    f = poly_map([0, R(1, 2), 1])
    c = cycle_through(find_cycles(f, 1), 0)
    assert abs(c.multiplier - 0.5) < 1e-12
    assert abs(holomorphic_index(f, c) - 2) < 1e-9
    assert abs(residu_iteratif(f, c) + 1.5) < 1e-9


def test_parabolic_fixed_point_of_z_plus_z_squared():
    c = cycle_through(find_cycles(poly_map([0, 1, 1]), 1), 0)
    assert c.multiplicity == 2
    assert abs(c.index) < 1e-9 and abs(c.residu - 1) < 1e-9
    assert c.classification == "parabolic-repelling"


def test_parabolic_two_cycle_residu_matches_residue_oracle():
    # z -> z^3 - 2z swaps 1 and -1 with multiplier 1 for the cycle
    f = poly_map([0, -2, 0, 1])
    c = cycle_through([c for c in find_cycles(f, 2) if c.period == 2], 1, tol=1e-5)
    z = sp.Symbol("z")
    g = sp.expand((z**3 - 2 * z) ** 3 - 2 * (z**3 - 2 * z))
    index = sp.residue(1 / (z - g), z, 1)
    mult = sp.roots(sp.Poly(z - g, z))[1]
    assert c.multiplicity == mult == 3
    assert abs(c.index - complex(index)) < 1e-6
    assert abs(c.residu - complex(R(mult, 2) - index)) < 1e-6
    assert index == R(3, 16)


@pytest.mark.parametrize("eps", [1e-3, -1e-3, 1e-3j, -1e-3j])
def test_flip_residu_predicts_index_of_split_cluster(eps):
    # at eps = 0 the fixed point 0 has multiplier -1; for eps != 0 it splits
    # into a fixed point and a nearby 2-cycle whose f^2-indices must add up to
    # the index of the parabolic cluster, 3/2 - residu
    b = R(1, 3)
    base = cycle_through(find_cycles(poly_map([0, -1, 1, b]), 1), 0)
    assert base.rotation == (1, 2) and base.classification == "parabolic-repelling"
    f = HomogeneousRationalMap.from_coeffs(
        np.array([0, -(1 + eps), 1, float(b)], dtype=complex), np.array([1, 0, 0, 0], dtype=complex)
    )
    near = [c for c in find_cycles(f, 2) if max(abs(p) for p in c.points) < 0.2]
    assert sorted(c.period for c in near) == [1, 2]
    total = 0
    for c in near:
        rho2 = c.multiplier ** (2 // c.period)
        total += c.period / (1 - rho2)
    assert abs(total - (1.5 - base.return_residu)) < 0.05
    # Re residu > 0: the perturbed cluster always keeps a repelling point
    assert any(abs(c.multiplier) > 1 for c in near)


def test_per2_superattracting_two_cycle():
    f = per2_slice(R(1, 3)).map
    two = [c for c in find_cycles(f, 2) if c.period == 2]
    c = cycle_through(two, 0)
    assert c.contains(1) and abs(c.multiplier) < 1e-8 and c.classification == "superattracting"


def test_disjoint_cycle_map_has_attracting_two_cycle_near_thirteen_tenths():
    f = newton_from_poly(TYPED_QUARTICS["D"]).map
    two = [c for c in find_cycles(f, 2) if c.period == 2 and 1e-8 < abs(c.multiplier) < 1]
    assert len(two) == 1
    c = two[0]
    # oracle: roots of N(N(z)) - z that are not fixed, the ones near 1.3
    z = sp.Symbol("z")
    P = sum(co * z**i for i, co in enumerate(TYPED_QUARTICS["D"]))
    N = sp.cancel(z - P / sp.diff(P, z))
    num, _ = sp.fraction(sp.cancel(N.subs(z, N) - z))
    fixed, _ = sp.fraction(sp.cancel(N - z))
    q, r = sp.div(sp.Poly(num, z), sp.Poly(fixed, z))
    assert r.is_zero
    pts = [complex(w) for w in q.nroots(n=30)]
    near = min(pts, key=lambda w: abs(w - 1.3))
    assert abs(near - 1.3) < 0.01
    partner = complex(N.subs(z, sp.nsimplify(near.real)).evalf(30))
    assert c.contains(near, 1e-8) and c.contains(partner, 1e-8)
    # the free critical point 13/10 itself is attracted to the cycle
    w = 1.3
    for _ in range(200):
        w = complex(f(w))
    assert c.contains(w, 1e-8) or c.contains(complex(f(w)), 1e-8)


def test_fsi_reduced_map_two_attracting_fixed_points():
    # double roots at 0 and 1 collapse to a quadratic map with multipliers 1/2 at both
    N = newton_from_roots([0, 1])
    z = sp.Symbol("z")
    f = HomogeneousRationalMap.from_affine(
        sp.Poly(sp.expand(z * (3 * z - 1)), z).all_coeffs()[::-1], sp.Poly(2 * (2 * z - 1), z).all_coeffs()[::-1]
    )
    # z - z(z - 1)/(2(2z - 1)) = z(3z - 1)/(2(2z - 1))
    for p in (0, 1):
        assert abs(cycle_through(find_cycles(f, 1), p).multiplier - 0.5) < 1e-12
    rep = gamma_delta(f)
    assert (rep.gamma_total, rep.delta, rep.satisfied) == (2, 2, True)
    assert N.map.degree == 2


def test_fsi_reduced_map_triple_collision():
    # z^3 (z - 1): z - z(z - 1)/(4z - 3) = z(3z - 2)/(4z - 3)
    f = HomogeneousRationalMap.from_affine([0, -2, 3], [-3, 4])
    assert abs(cycle_through(find_cycles(f, 1), 0).multiplier - R(2, 3)) < 1e-12
    rep = gamma_delta(f)
    assert (rep.gamma_total, rep.delta, rep.satisfied) == (1, 1, True)


def test_squaring_has_gamma_zero():
    assert gamma_delta(poly_map([0, 0, 1])).gamma_total == 0


@given(st.integers(0, 10_000))
def test_index_and_multiplicity_sums_for_quartic_newton_maps(seed):
    f = newton_from_roots(random_roots(np.random.default_rng(seed))).map
    fixed = find_cycles(f, 1)
    assert sum(c.multiplicity for c in fixed) == 5
    assert abs(sum(c.index for c in fixed) - 1) <= 1e-6
    for c in fixed:
        if abs(c.multiplier - 1) >= 0.1:
            ref = 1 / (1 - c.multiplier)
            assert abs(c.index - ref) <= 1e-6 * abs(ref)


@settings(max_examples=12)
@given(st.integers(0, 10_000))
def test_fsi_holds_for_random_quartic_newton_maps(seed):
    f = newton_from_roots(random_roots(np.random.default_rng(seed))).map
    rep = gamma_delta(f)
    if rep.status == "ok":
        assert rep.gamma_total <= rep.delta


@given(st.floats(0.0, 1.0, exclude_max=True).filter(lambda r: r < 1 - 1e-6 and r > 1e-6), st.floats(0, 6.28))
def test_classification_stable_under_tiny_multiplier_perturbation(r, theta):
    rho = r * cmath.exp(1j * theta)
    assert classify_multiplier(rho) == classify_multiplier(rho * (1 + 1e-9)) == classify_multiplier(rho * (1 - 1e-9))


def test_cycle_points_are_distinct_on_the_sphere():
    f = newton_from_poly(TYPED_QUARTICS["D"]).map
    for c in find_cycles(f, 2):
        pts = c.points
        assert all(chordal(pts[i], pts[j]) > 1e-6 for i in range(len(pts)) for j in range(i))


def test_nearby_repelling_cycle_is_not_merged_into_superattracting_one():
    # at c = 5/9 a repelling 2-cycle passes within 1e-4 of the cycle 0 <-> 1
    from newtondyn.newton import per2_slice

    cyc = find_cycles(per2_slice(sp.Rational(5, 9)).map, 2)
    two = [c for c in cyc if c.period == 2]
    sa = [c for c in two if c.contains(0j, 1e-9)]
    assert len(sa) == 1 and sa[0].multiplicity == 1 and sa[0].classification == "superattracting"
    near = [c for c in two if not c.contains(0j, 1e-9) and min(abs(complex(p) - 1) for p in c.points) < 1e-3]
    assert near and all(c.multiplicity == 1 and abs(c.multiplier) > 1 for c in near)


def test_strongly_expanding_cycle_index_from_contour():
    # 2-cycles with multiplier ~1e6 have a pole of f^2 within 1e-8
    from newtondyn.newton import newton_from_roots

    cyc = find_cycles(newton_from_roots([0, 1, 0.01, 0.5]).map, 2)
    big = [c for c in cyc if c.period == 2 and abs(c.multiplier) > 1e5]
    assert big
    for c in big:
        assert c.multiplicity == 1
        assert abs(complex(c.index) - 1 / (1 - complex(c.multiplier))) < 1e-9
