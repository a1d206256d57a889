from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from newtondyn.berkovich import (
    GAUSS,
    Disk,
    NotNormalFormError,
    additional_critical_points,
    analyze_family,
    build_fix_tree,
    classify_degeneration,
    induced_newton,
    join,
    project_to_rep,
    project_to_tree,
    random_family,
    reduction,
)
from newtondyn.puiseux import T, PuiseuxSeries, parse_series
from newtondyn.rational import extract_holes

CANONICAL = [("t", "1/2", "type1"), ("t", "1 - t", "type2"), ("t^2", "t", "type3a"), ("t", "2*t", "type3b")]


def fam(r, s):
    return parse_series(r), parse_series(s)


@pytest.mark.parametrize("r, s, tag", CANONICAL)
def test_canonical_types(r, s, tag):
    assert classify_degeneration(*fam(r, s)).tag == tag


def test_nondegenerate_family():
    assert classify_degeneration(parse_series("-1 + t"), parse_series("1/2")).tag == "nondegenerate"
    with pytest.raises(NotNormalFormError):
        analyze_family(parse_series("-1"), parse_series("1/2"))


def test_relabelling_reaches_normal_form():
    # roots 0, 1, 1 + t, 1/2: the colliding pair is {1, 1 + t}
    d = classify_degeneration(1 + T, parse_series("1/2"))
    assert d.tag == "type1"
    assert d.r.reduce() == 0


@pytest.mark.parametrize(
    "r, s, shape",
    [("t", "1/2", (3, 4)), ("t", "1 - t", (3, 3, 3)), ("t^2", "t", (3, 3, 3)), ("t", "2*t", (3, 4))],
)
def test_hull_branch_points_and_valences(r, s, shape):
    tree = build_fix_tree(*fam(r, s))
    assert tuple(sorted(tree.valences)) == shape
    assert tree.index_of(GAUSS) is not None
    assert len(tree.v_rep) == len(shape)


def test_type3a_tree_is_a_chain_of_disks():
    tree = build_fix_tree(*fam("t^2", "t"))
    radii = sorted(v.q for v in tree.internal_vertices)
    assert radii == [0, 1, 2]
    inner = [v for v in tree.internal_vertices if v.q == 2][0]
    assert inner.contains_point(0) and inner.contains_point(parse_series("t^2"))
    assert not inner.contains_point(parse_series("t"))


def test_disks_and_joins():
    D = join(0, T)
    assert D.q == 1 and D == Disk.make(2 * T, 1)
    assert GAUSS.contains(D) and not D.contains(GAUSS)
    assert D.contains_point(T + T * T) and not D.contains_point(parse_series("t^(1/2)"))
    assert abs(D.radius - np.exp(-1)) < 1e-15


def test_projection_onto_tree():
    tree = build_fix_tree(T, PuiseuxSeries.coerce(0.5))
    assert project_to_tree(PuiseuxSeries.coerce(0.5), tree) == "s"
    # a truncated series agrees with the leaf only up to its order
    near = project_to_tree(parse_series("1/2"), tree)
    assert near.q == 8 and near.contains_point(tree.leaves["s"])
    p = project_to_tree(parse_series("1/3"), tree)
    assert p == GAUSS
    p = project_to_tree(parse_series("5*t"), tree)
    assert isinstance(p, Disk) and p == join(0, T)
    assert project_to_rep(parse_series("t^3"), tree) == join(0, T)


@pytest.mark.parametrize("r, s", [(r, s) for r, s, _ in CANONICAL])
def test_additional_critical_points_are_roots_of_second_derivative(r, s):
    rs, ss = fam(r, s)
    t0 = 1e-3
    z = sp.Symbol("z")
    P = z * (z - 1) * (z - complex(rs(t0))) * (z - complex(ss(t0)))
    ref = np.sort_complex(np.array([complex(w) for w in sp.Poly(sp.diff(P, z, 2), z).nroots()]))
    got = np.sort_complex(np.array([c(t0) for c in additional_critical_points(rs, ss)]))
    assert np.allclose(ref, got, atol=1e-6)


@pytest.mark.parametrize(
    "r, s, limit",
    [
        ("t", "1/2", [0, 0, 1, sp.Rational(1, 2)]),
        ("t", "1 - t", [0, 0, 1, 1]),
        ("t^2", "t", [0, 0, 0, 1]),
        ("t", "2*t", [0, 0, 0, 1]),
    ],
)
def test_reduction_matches_newton_map_of_limit_polynomial(r, s, limit):
    # oracle: away from the holes the reduction is the Newton map of the t = 0 polynomial
    z = sp.Symbol("z")
    P = sp.prod([z - a for a in limit])
    Nlim = sp.lambdify(z, sp.cancel(z - P / sp.diff(P, z)))
    Nhat = extract_holes(reduction(induced_newton(*fam(r, s)))).reduced_map
    for w in (0.3 + 0.7j, -1.2 + 0.1j, 2.5 - 0.4j):
        assert abs(complex(Nhat(w)) - complex(Nlim(w))) < 1e-10


@pytest.mark.parametrize("r, s, tag", CANONICAL)
def test_canonical_analysis_verifies(r, s, tag):
    ana = analyze_family(*fam(r, s), with_fsi=True)
    assert ana.type.tag == tag
    assert ana.verified, ana.failures()
    expected_deg = {"type1": 3, "type2": 2, "type3a": 2, "type3b": 2}[tag]
    assert ana.reduced_degree == expected_deg


@pytest.mark.parametrize(
    "r, s, mults", [("t", "1/2", [1]), ("t", "1 - t", [1, 1]), ("t^2", "t", [2]), ("t", "2*t", [2])]
)
def test_hole_multiplier_is_collision_fraction(r, s, mults):
    ana = analyze_family(*fam(r, s), exact=True)
    assert sorted(m for _, m, _ in ana.holes) == mults
    for _, m, rho in ana.holes:
        # a hole of multiplicity m comes from m + 1 colliding roots
        assert abs(rho - m / (m + 1)) <= 1e-10


def test_exact_and_float_reductions_agree():
    f = induced_newton(*fam("t", "1/2"))
    a = extract_holes(reduction(f, exact=True)).reduced_map
    b = extract_holes(reduction(f)).reduced_map
    for w in (0.2 + 0.1j, -3.0, 1.7j):
        assert abs(complex(a(w)) - complex(b(w))) < 1e-10


def test_rescalings_have_predicted_degrees():
    degs = {}
    for r, s, tag in CANONICAL:
        ana = analyze_family(*fam(r, s))
        degs[tag] = [(x["at"], x["degree"]) for x in ana.rescalings]
        assert all(x["ok"] for x in ana.rescalings)
    assert degs["type1"] == [("0vr", 2)]
    assert degs["type3a"] == [("0vs", 2), ("0vr", 2)]
    assert degs["type3b"] == [("0vr", 3)]


def test_reduced_fsi_pairs():
    pairs = {}
    for r, s, tag in CANONICAL[1:]:
        fsi = analyze_family(*fam(r, s), with_fsi=True).fsi
        pairs[tag] = (fsi.gamma_total, fsi.delta)
    assert pairs == {"type2": (2, 2), "type3a": (1, 1), "type3b": (1, 1)}


@settings(max_examples=12)
@given(st.sampled_from(["type1", "type2", "type3a", "type3b"]), st.integers(0, 10_000))
def test_random_families_verify(tag, seed):
    r, s = random_family(tag, np.random.default_rng(seed))
    ana = analyze_family(r, s)
    assert ana.type.tag == tag
    assert ana.verified, ana.failures()


def test_series_exponents_stay_exact_through_the_tree():
    tree = build_fix_tree(parse_series("t^(2/3)"), parse_series("t^(1/3)"))
    assert {v.q for v in tree.internal_vertices} == {Fraction(0), Fraction(1, 3), Fraction(2, 3)}
