from fractions import Fraction

import pytest

from dendrite.addressing import canonicalize
from dendrite.closed_forms import u_down, u_minus, u_up
from dendrite.measure import (
    HarmonicIntegrator,
    IntegralBounds,
    WeightVector,
    ball_measure,
    cell_measure,
    doubling_ratio,
    harmonic_weights,
    integrate_closed,
    integrate_pw_harmonic,
    measure_ball_bounds,
    subdivision_quadrature_row,
)
from dendrite.metric import Metric
from dendrite.network import ball, ball_graph

HALF = Fraction(1, 2)
Q0 = ("2", 1)
EQUAL = WeightVector.equal()
SKEW = WeightVector(Fraction(1, 6), Fraction(1, 3))


def test_weight_validation():
    with pytest.raises(ValueError):
        WeightVector(Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        WeightVector(Fraction(-1, 4), Fraction(3, 4))
    w = WeightVector.parse("1/6,1/3")
    assert w.w1 == Fraction(1, 6) and w.w3 == Fraction(1, 3)


def test_cell_measure_examples():
    assert cell_measure(EQUAL, "") == 1
    assert cell_measure(EQUAL, "02") == Fraction(1, 16)
    assert cell_measure(SKEW, "220") == Fraction(1, 54)


def test_cell_measure_additivity():
    for w in (EQUAL, SKEW):
        for word in ("", "2", "03", "220"):
            parent = cell_measure(w, word)
            assert parent == sum(cell_measure(w, word + d) for d in "0123")


def test_harmonic_weights_properties():
    for w in (EQUAL, SKEW, WeightVector(Fraction(1, 10), Fraction(2, 5))):
        p = harmonic_weights(w)
        assert sum(p) == 1
        assert p[1] == p[2]
        assert all(x > 0 for x in p)


def test_harmonic_weights_equal_case_frozen():
    assert harmonic_weights(EQUAL) == (Fraction(2, 3), Fraction(1, 6), Fraction(1, 6))


def test_harmonic_weights_vs_subdivision_oracle():
    for w in (EQUAL, SKEW):
        p = harmonic_weights(w)
        row = subdivision_quadrature_row(w, 10)
        assert all(abs(float(p[j] - row[j])) < 1e-6 for j in range(3))


def test_hat_integral_is_p1():
    p = harmonic_weights(EQUAL)
    assert integrate_closed(u_minus(HALF, 0, 1, 0), EQUAL) == p[0]


def test_udown_integral_exact_and_certified():
    exact = integrate_closed(u_down(), EQUAL)
    assert exact == HALF
    assert Fraction(1, 7) <= exact <= Fraction(4, 7)
    bounds = integrate_pw_harmonic(u_down(), EQUAL)
    assert bounds.lower <= exact <= bounds.upper
    assert float(bounds.rel_gap()) < 1e-3


def test_uup_integral_exact_and_certified():
    exact = integrate_closed(u_up(), EQUAL)
    assert exact == Fraction(1, 12)
    bounds = integrate_pw_harmonic(u_up(), EQUAL)
    assert bounds.lower <= exact <= bounds.upper
    assert float(bounds.rel_gap()) < 1e-3


def test_constant_integrates_to_itself():
    bounds = integrate_pw_harmonic(u_minus(HALF, 5, 5, 5), EQUAL)
    assert bounds.exact == 5
    assert bounds.lower <= 5 <= bounds.upper


def test_self_similar_consistency_of_integration():
    # integrating the four rescaled pieces reproduces the whole integral
    integ = HarmonicIntegrator(SKEW)
    from dendrite.measure import _state_children

    for state in (("down", Fraction(1)), ("plus", Fraction(1), HALF, Fraction(1, 8))):
        total = integ.exact(state)
        kids = _state_children(state, HALF)
        assert total == sum(q * integ.exact(k) for q, k in zip(SKEW.as_tuple(), kids))


def test_ball_measure_b1_limits():
    g = ball_graph(1, 8)
    region = ball(g, Q0, HALF)
    b = ball_measure(EQUAL, region)
    assert b.lower <= Fraction(1, 3) <= b.upper
    assert b.upper / b.lower <= Fraction(11, 10)


def test_ball_measure_whole_space():
    g = ball_graph(1, 4)
    region = ball(g, ("", 1), Fraction(2))
    b = ball_measure(EQUAL, region)
    assert (b.lower, b.upper) == (1, 1)


def test_generic_ball_bounds_match_graph_bounds():
    g = ball_graph(2, 7)
    region = ball(g, Q0, Fraction(1, 4))
    graph_bounds = ball_measure(EQUAL, region)
    generic = measure_ball_bounds(Q0, Fraction(1, 4), EQUAL, max_depth=7)
    assert graph_bounds.lower == generic.lower
    assert graph_bounds.upper == generic.upper


def test_doubling_lower_bound_at_yn():
    metric = Metric(HALF)
    for n in (2, 3):
        yn = canonicalize("2" + "0" * (n - 1), 2)
        ratio, big, small = doubling_ratio(EQUAL, yn, Fraction(1, 2**n), max_depth=n + 6, metric=metric)
        assert ratio.lower >= Fraction(3, 16) * 2**n
        assert ratio.lower >= 1


def test_doubling_lattice_cap():
    metric = Metric(HALF)
    for x, n in ((canonicalize("02", 1), 2), (Q0, 1)):
        ratio, _, _ = doubling_ratio(EQUAL, x, Fraction(1, 2 ** (n + 1)), max_depth=n + 9, metric=metric)
        assert 1 <= ratio.lower and ratio.upper <= 64


def test_integral_bounds_validation():
    with pytest.raises(ValueError):
        IntegralBounds(Fraction(2), Fraction(1))
