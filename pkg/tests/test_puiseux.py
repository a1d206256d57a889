import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from newtondyn.puiseux import (
    T,
    PuiseuxSeries,
    TruncationUnderflowError,
    parse_family,
    parse_series,
    series,
)

exponents = st.fractions(min_value=0, max_value=4, max_denominator=6)
coeffs = st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False)
term_lists = st.lists(st.tuples(exponents, coeffs), min_size=1, max_size=5)


def ps(terms):
    return PuiseuxSeries(terms, 8)


def test_sum_of_t_and_one():
    x = T + 1
    assert x.terms == ((0, 1), (1, 1)) and x.abs() == 1


def test_geometric_series():
    x = 1 / (1 - T)
    assert [q for q, _ in x.terms] == list(range(8))
    assert all(abs(c - 1) < 1e-12 for _, c in x.terms)


def test_absolute_value_uses_leading_exponent():
    assert math.isclose(abs(T ** Fraction(1, 2) + T), math.exp(-0.5))


@pytest.mark.parametrize("text, red", [("1 + t", 1), ("t", 0), ("1/2 + 3*t^(1/3)", 0.5)])
def test_reduce(text, red):
    assert parse_series(text).reduce() == red


def test_reduce_rejects_poles():
    with pytest.raises(ValueError):
        (1 / T).reduce()


@pytest.mark.parametrize("text, t0, val", [("t", 0.01, 0.01), ("1 - t", 0.1, 0.9), ("t^2", 1e-3, 1e-6)])
def test_evaluate_at(text, t0, val):
    got, err = parse_series(text).evaluate_at(t0)
    assert abs(got - val) <= 1e-15 and err <= 1e-7


def test_zero_has_infinite_valuation():
    z = PuiseuxSeries.zero()
    assert z.terms == () and z.valuation == math.inf and z.abs() == 0


def test_cancellation_below_truncation_is_reported():
    x = (1 + T).truncate(2) - (1 + T)
    assert x.is_underflow
    with pytest.raises(TruncationUnderflowError):
        x.valuation


def test_square_root_squares_back():
    x = (1 + T).sqrt()
    assert (x * x).close_to(1 + T, 1e-12)


def test_parse_family():
    fam = parse_family("r = t^2; s = t")
    assert fam["r"].valuation == 2 and fam["s"].valuation == 1
    roots = parse_family("roots = -1, -t, 0, t, 1")["roots"]
    assert [r.reduce() for r in roots] == [-1, 0, 0, 0, 1]
    with pytest.raises(ValueError):
        parse_family("r = t")


def test_exponents_stay_exact():
    x = parse_series("t^(1/3)") * parse_series("t^(1/6)")
    assert x.terms[0][0] == Fraction(1, 2)


@given(term_lists, term_lists)
def test_ultrametric_inequality(a, b):
    x, y = ps(a), ps(b)
    s = x + y
    assume(not s.is_underflow)
    assert s.abs() <= max(x.abs(), y.abs()) * (1 + 1e-15)
    if x.valuation != y.valuation:
        assert s.abs() == max(x.abs(), y.abs())


def test_ultrametric_inequality_bulk():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        def draw():
            n = rng.integers(1, 5)
            q = [Fraction(int(rng.integers(0, 13)), int(rng.integers(1, 4))) for _ in range(n)]
            c = rng.normal(size=n) + 1j * rng.normal(size=n)
            return ps(list(zip(q, c)))
        x, y = draw(), draw()
        if x.is_underflow or y.is_underflow:
            continue
        s = x + y
        if s.is_underflow or s.is_exact_zero:
            continue
        assert s.valuation >= min(x.valuation, y.valuation)
        if x.valuation != y.valuation:
            assert s.valuation == min(x.valuation, y.valuation)


@given(term_lists, term_lists, term_lists)
def test_ring_axioms_up_to_truncation(a, b, c):
    x, y, z = ps(a), ps(b), ps(c)
    assert (x * y).close_to(y * x, 1e-9)
    assert ((x * y) * z).close_to(x * (y * z), 1e-9)
    assert (x * (y + z)).close_to(x * y + x * z, 1e-9)


@given(term_lists, term_lists)
def test_reduce_is_a_ring_morphism(a, b):
    x, y = ps(a), ps(b)
    assert abs((x * y).reduce() - x.reduce() * y.reduce()) <= 1e-9 * max(1, abs(x.reduce() * y.reduce()))
    s = x + y
    assume(not s.is_underflow)
    assert abs(s.reduce() - (x.reduce() + y.reduce())) <= 1e-9 * max(1, abs(x.reduce()), abs(y.reduce()))


@given(term_lists, term_lists)
def test_product_evaluates_to_product_of_values(a, b):
    # oracle: evaluating at a small t commutes with multiplication up to truncation
    x, y = ps(a), ps(b)
    t0 = 1e-2
    lhs = (x * y)(t0)
    rhs = x(t0) * y(t0)
    assert abs(lhs - rhs) <= 1e-12 * max(1, abs(rhs)) + 100 * 1e2 ** 2 * t0**8


small_tails = st.lists(
    st.tuples(
        st.fractions(min_value=0, max_value=4, max_denominator=6).filter(lambda q: q > 0),
        st.complex_numbers(max_magnitude=0.3, allow_nan=False, allow_infinity=False),
    ),
    max_size=3,
)


@given(small_tails)
def test_inverse_of_unit(a):
    # 1 + u with sum |u_q| < 1, so every coefficient of the inverse is bounded by a geometric sum
    x = ps([(0, 1)] + a)
    residual = x * x.inverse() - series(1)
    assert all(abs(c) <= 1e-12 for _, c in residual.terms)


def test_inverse_keeps_leading_terms_when_coefficients_grow():
    x = ps([(0, 1.1015625), (Fraction(1, 4), 3j), (Fraction(1, 2), 1)])
    inv = x.inverse()
    assert inv.valuation == 0 and abs(inv.leading - 1 / 1.1015625) < 1e-15
    assert abs(inv.coefficient(Fraction(1, 4)) + 3j / 1.1015625**2) < 1e-12
