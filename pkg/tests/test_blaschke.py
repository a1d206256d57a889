import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from newtondyn.blaschke import (
    BlaschkeParams,
    blaschke,
    critical_numerator,
    default_a_sequence,
    escape_diagnostics,
    hyperbolic_distance,
    nonfixed_critical,
)


def critical_oracle(a, k):
    """Roots of the derivative numerator in (0, 1), from a dense all-roots solve."""
    w = np.polynomial.Polynomial([0, 1])
    num = -(w**k) * (w - a)
    den = 1 - a * w
    d = num.deriv() * den - num * den.deriv()
    r = d.roots()
    r = r[np.abs(r.imag) < 1e-9].real
    return r[(r > 1e-9) & (r < 1)]


def test_critical_point_for_a_point_nine():
    x = nonfixed_critical(BlaschkeParams(0.9, 2))
    ref = critical_oracle(0.9, 2)
    assert ref.size == 1 and abs(x - ref[0]) < 1e-12
    assert 0.6 < x < 1


def test_critical_point_moves_right_with_a():
    assert nonfixed_critical(BlaschkeParams(0.99, 2)) > nonfixed_critical(BlaschkeParams(0.9, 2))
    assert critical_oracle(0.99, 2)[0] > critical_oracle(0.9, 2)[0]


@given(st.floats(0.01, 0.999), st.integers(2, 5))
def test_critical_point_matches_all_roots_oracle(a, k):
    ref = critical_oracle(a, k)
    assert ref.size == 1
    assert abs(nonfixed_critical(BlaschkeParams(a, k)) - ref[0]) < 1e-10


def test_critical_numerator_is_derivative_numerator():
    a, k = 0.7, 3
    c = critical_numerator(a, k)
    w = 0.3 + 0.2j
    h = 1e-6
    deriv = (blaschke(w + h, a, k) - blaschke(w - h, a, k)) / (2 * h)
    num = np.polynomial.polynomial.polyval(w, c)
    assert abs(deriv * (1 - a * w) ** 2 - num) < 1e-8


def test_small_a_critical_point_runs_to_zero():
    # B_0 = -w^(k+1) has no critical point in (0, 1); x_a ~ k a / (k + 1)
    for a in (1e-2, 1e-4, 1e-6):
        x = nonfixed_critical(BlaschkeParams(a, 2))
        assert abs(x / a - 2 / 3) < 1e-2


@pytest.mark.parametrize("a, k", [(0.5, 2), (0.9, 3), (0.999, 2)])
def test_unit_circle_is_invariant(a, k):
    th = np.linspace(0, 2 * np.pi, 100, endpoint=False)
    assert np.abs(np.abs(blaschke(np.exp(1j * th), a, k)) - 1).max() <= 1e-12


@pytest.mark.parametrize("k", [2, 3, 4])
def test_local_degree_at_zero(k):
    a = 0.6
    # Taylor coefficients at 0 by FFT on a small circle
    n = 64
    w = 0.1 * np.exp(2j * np.pi * np.arange(n) / n)
    coef = np.fft.fft(blaschke(w, a, k)) / n / 0.1 ** np.arange(n)
    assert np.all(np.abs(coef[:k]) < 1e-12)
    assert abs(coef[k] - a) < 1e-12


def test_parameter_validation():
    with pytest.raises(ValueError):
        BlaschkeParams(1.0, 2)
    with pytest.raises(ValueError):
        BlaschkeParams(0.5, 1)


def test_hyperbolic_distance_basics():
    assert hyperbolic_distance(0.3, 0.3) == 0
    assert abs(hyperbolic_distance(0, 0.5) - 2 * np.arctanh(0.5)) < 1e-15
    # invariance under a disk automorphism
    p, q, c = 0.2 + 0.1j, -0.4 + 0.3j, 0.5j

    def m(z):
        return (z - c) / (1 - np.conj(c) * z)

    assert abs(hyperbolic_distance(p, q) - hyperbolic_distance(m(p), m(q))) < 1e-12


def test_escape_table():
    table = escape_diagnostics(2)
    assert [r.j for r in table.rows] == [1, 2, 3, 4, 5, 6]
    assert [r.a for r in table.rows] == default_a_sequence(6)
    assert table.passed, table.checks
    steps = [r.hyperbolic_step for r in table.rows]
    assert abs(steps[-1] - np.log(4)) < 1e-4
    # the formula tends to +w^k, not -w^k
    assert table.rows[-1].sup_to_limit < 1e-4 < table.rows[-1].sup_to_negated


def test_escape_table_rejects_unsorted_sequence():
    with pytest.raises(ValueError):
        escape_diagnostics(2, [0.9, 0.5])


def test_text_table_lists_every_check():
    text = escape_diagnostics(2).to_text()
    for name in ("x_a_increasing", "forward_invariant", "sup_decreasing", "hyperbolic_step_bounded"):
        assert f"{name}: pass" in text
