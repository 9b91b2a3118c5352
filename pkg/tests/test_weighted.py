import math

import numpy as np
import pytest
from scipy.integrate import quad

import bounds
from errors import PreconditionError
from expr import evaluate, parse
from interval import Interval
from weighted import (
    WeightSpec,
    find_weight_median,
    weighted_bound,
    weighted_lhs,
    weighted_median_bound,
    weighted_split_bound,
)

ROOT_HALF = 1 / math.sqrt(2)


@pytest.fixture
def linear_weight(unit):
    return WeightSpec.build("t", unit)


def test_mass_and_cumulative_table(linear_weight):
    assert linear_weight.total_mass == pytest.approx(0.5, rel=1e-13)
    assert len(linear_weight.nodes) == len(linear_weight.cumulative) == 65
    assert linear_weight.cumulative[0] == 0.0
    assert linear_weight.cumulative[32] == pytest.approx(0.125, rel=1e-13)
    assert linear_weight.mass_below(0.3) == pytest.approx(0.045, rel=1e-12)
    assert linear_weight.mass_below(1.0) == pytest.approx(0.5, rel=1e-13)


def test_negative_weight_is_rejected(unit):
    with pytest.raises(PreconditionError) as info:
        WeightSpec.build("t - 0.5", unit)
    assert info.value.point == 0.0


def test_massless_weight_is_rejected(unit):
    with pytest.raises(PreconditionError):
        WeightSpec.build("0", unit)


def test_rounding_noise_is_clamped(unit):
    weight = WeightSpec.build("t^2 - 1e-13", unit)
    assert weight(0.0) == 0.0
    assert weight.total_mass == pytest.approx(1 / 3, rel=1e-11)


@pytest.mark.parametrize("w, a, b, expected", [
    ("t", 0.0, 1.0, ROOT_HALF),
    ("sin(t)", 0.0, math.pi, math.pi / 2),
    ("1", 2.0, 5.0, 3.5),
])
def test_weight_medians(w, a, b, expected):
    weight = WeightSpec.build(w, Interval(a, b))
    median = find_weight_median(weight)
    assert median == pytest.approx(expected, abs=1e-10)
    residual = abs(weight.mass_below(median) - 0.5 * weight.total_mass)
    assert residual <= 1e-12 * weight.total_mass + 1e-15


@pytest.mark.parametrize("gap, left_end", [(0.2, 0.3), (0.1, 0.4)])
def test_median_on_a_plateau_is_its_left_end(unit, gap, left_end):
    weight = WeightSpec.build(f"abs(t - 0.5) - {gap} + abs(abs(t - 0.5) - {gap})", unit)
    assert weight.total_mass == pytest.approx(2 * left_end**2, rel=1e-12)
    median = find_weight_median(weight)
    assert median == pytest.approx(left_end, abs=1e-6)
    assert median <= left_end
    assert abs(weight.mass_below(median) - 0.5 * weight.total_mass) <= 1e-12 * weight.total_mass + 1e-15


def test_uniform_weight_reduces_to_unweighted_bounds():
    rng = np.random.default_rng(77)
    g = parse("exp(t) + t")
    for _ in range(50):
        a, b = sorted(rng.uniform(-2.0, 2.0, 2))
        if b - a < 1e-2:
            continue
        interval = Interval(a, b)
        weight = WeightSpec.uniform(interval)
        x = a + rng.uniform(0.05, 0.95) * (b - a)
        norm, right = rng.uniform(0.1, 3.0, 2)
        assert weighted_bound(g, weight, x, norm) == pytest.approx(
            bounds.general_bound(g, interval, x, norm), rel=1e-10, abs=1e-12)
        assert weighted_split_bound(g, weight, x, norm, right) == pytest.approx(
            bounds.split_bound(g, interval, x, norm, right), rel=1e-10, abs=1e-12)


def test_linear_weight_example(linear_weight):
    f = parse("t")
    expected = 2 / 3 * (1 - ROOT_HALF)
    assert weighted_bound(f, linear_weight, ROOT_HALF, 1.0) == pytest.approx(expected, rel=1e-10)
    assert weighted_median_bound(f, linear_weight, 1.0) == pytest.approx(expected, rel=1e-9)
    assert weighted_lhs(f, linear_weight, ROOT_HALF) == pytest.approx(abs(ROOT_HALF - 2 / 3), rel=1e-10)


def test_split_matches_weighted_bound_for_monotone_comparison(linear_weight):
    g = parse("t")
    for x in (0.2, 0.5, 0.9):
        assert weighted_split_bound(g, linear_weight, x, 1.5, 1.5) == pytest.approx(
            weighted_bound(g, linear_weight, x, 1.5), rel=1e-10)


def test_weighted_lhs_of_constant_is_zero(linear_weight):
    assert weighted_lhs(parse("3"), linear_weight, 0.4) == pytest.approx(0.0, abs=1e-14)


def test_weighted_lhs_against_scipy():
    interval = Interval(0.0, 2.0)
    weight = WeightSpec.build("1 + t^2", interval)
    mass, _ = quad(lambda t: 1 + t * t, 0.0, 2.0)
    moment, _ = quad(lambda t: (1 + t * t) * math.exp(t), 0.0, 2.0, epsabs=1e-14, epsrel=1e-13)
    expected = abs(math.exp(0.7) - moment / mass)
    assert weighted_lhs(parse("exp(t)"), weight, 0.7) == pytest.approx(expected, abs=1e-8)
    assert weight.average(parse("exp(t)")) == pytest.approx(moment / mass, rel=1e-10)


def test_weighted_bound_needs_interior_point(linear_weight):
    with pytest.raises(PreconditionError):
        weighted_bound(parse("t"), linear_weight, 1.0, 1.0)
    with pytest.raises(PreconditionError):
        weighted_split_bound(parse("t"), linear_weight, 0.0, 1.0, 1.0)


def test_weighted_lhs_bounded_by_weighted_bound(linear_weight):
    f = parse("sin(3*t)")
    norm = 3.0  # sup |3 cos 3t| / |1|
    for x in np.linspace(0.05, 0.95, 7):
        assert weighted_lhs(f, linear_weight, x) <= weighted_bound(parse("t"), linear_weight, x, norm) + 1e-12


def test_weight_is_vectorized(linear_weight):
    np.testing.assert_allclose(linear_weight(np.array([0.0, 0.5])), evaluate(parse("t"), np.array([0.0, 0.5])))


def test_support_edges_are_breakpoints(unit):
    weight = WeightSpec.build("abs(t - 0.5) - 0.1 + abs(abs(t - 0.5) - 0.1)", unit)
    assert weight.breakpoints == pytest.approx((0.4, 0.6), abs=1e-14)
    sliver = weight.mass_below(0.60002) - weight.mass_below(0.6)
    assert sliver == pytest.approx(4e-10, rel=1e-6)
    assert weight.mass_below(0.5) == pytest.approx(0.5 * weight.total_mass, rel=1e-13)


def test_positive_weight_has_no_breakpoints(linear_weight):
    assert WeightSpec.build("1 + t^2", Interval(0.0, 2.0)).breakpoints == ()
    assert len(linear_weight.breakpoints) <= 1
