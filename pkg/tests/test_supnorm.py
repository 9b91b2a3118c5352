import math

import pytest

from errors import OstrowskiError, PreconditionError
from expr import FunctionSpec, parse
from interval import Interval
from supnorm import (
    Provenance,
    SupEstimate,
    seminorm_Kp,
    seminorm_Mp_split,
    seminorm_P,
    sup_ratio,
)


@pytest.mark.parametrize("f, g, a, b, value, argmax", [
    ("exp(t)", "exp(t)", 0.0, 1.0, 1.0, 0.0),
    ("t^2/2", "t", 1.0, 2.0, 2.0, 2.0),
    ("sin(t)", "t", 0.0, math.pi, 1.0, 0.0),
])
def test_sup_ratio_examples(f, g, a, b, value, argmax):
    estimate = sup_ratio(parse(f), parse(g), Interval(a, b))
    assert estimate.value == pytest.approx(value, rel=1e-12)
    assert estimate.argmax == pytest.approx(argmax, abs=1e-9)
    assert estimate.is_sampled


def test_sup_ratio_skips_undefined_open_endpoint():
    estimate = sup_ratio(parse("sqrt(t)"), parse("t"), Interval(0.0, 1.0), open_left=True)
    assert estimate.value == pytest.approx(32.0, rel=1e-9)
    assert estimate.argmax > 0.0


def test_sup_ratio_rejects_vanishing_comparison_slope():
    with pytest.raises(PreconditionError) as info:
        sup_ratio(parse("t"), parse("t^2"), Interval(-1.0, 1.0))
    assert info.value.point == 0.0


def test_sup_ratio_rejects_sign_change():
    with pytest.raises(PreconditionError):
        sup_ratio(parse("t"), parse("cos(t)"), Interval(0.1, 3.5))


def test_sup_ratio_at_a_kink_is_an_error():
    with pytest.raises(OstrowskiError):
        sup_ratio(parse("t"), parse("abs(t - 0.5)"), Interval(0.0, 1.0))


def test_grid_must_not_be_tiny():
    with pytest.raises(PreconditionError):
        sup_ratio(parse("t"), parse("t"), Interval(0.0, 1.0), grid=10)


def test_finer_grid_never_lowers_the_estimate():
    f, g, interval = parse("sin(t)^2"), parse("t"), Interval(0.0, 1.5)
    coarse = sup_ratio(f, g, interval, grid=512)
    fine = sup_ratio(f, g, interval, grid=1024)
    assert fine.value >= coarse.value - 1e-12
    assert fine.value == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("f, p, expected", [
    ("t^2/2", 1.0, 2.0),
    ("t", 2.0, 1.0),
    ("ln(t)", -1.0, 2.0),
])
def test_seminorm_Kp(f, p, expected):
    assert seminorm_Kp(parse(f), Interval(1.0, 2.0), p).value == pytest.approx(expected, rel=1e-12)


def test_seminorm_Kp_preconditions():
    with pytest.raises(PreconditionError):
        seminorm_Kp(parse("t"), Interval(1.0, 2.0), 0.0)
    with pytest.raises(PreconditionError):
        seminorm_Kp(parse("t"), Interval(-1.0, 1.0), 2.0)


@pytest.mark.parametrize("f, a, b, expected", [
    ("ln(t)", 1.0, math.e, 1.0),
    ("t", 1.0, 2.0, 2.0),
    ("exp(t)", 0.5, 1.0, math.e),
])
def test_seminorm_P(f, a, b, expected):
    assert seminorm_P(parse(f), Interval(a, b)).value == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("f, x, p, expected", [
    ("t", 0.5, 1.0, (1.0, 1.0)),
    ("t^2/2", 0.5, 1.0, (0.5, 1.0)),
    ("(t - 0.5)^3", 0.5, 3.0, (3.0, 3.0)),
])
def test_seminorm_Mp_split(f, x, p, expected):
    left, right = seminorm_Mp_split(parse(f), Interval(0.0, 1.0), x, p)
    assert (left.value, right.value) == pytest.approx(expected, rel=1e-9)
    assert left.interval == Interval(0.0, x)
    assert right.interval == Interval(x, 1.0)


def test_seminorm_Mp_split_preconditions():
    with pytest.raises(PreconditionError):
        seminorm_Mp_split(parse("t"), Interval(0.0, 1.0), 0.5, 0.0)
    with pytest.raises(PreconditionError):
        seminorm_Mp_split(parse("t"), Interval(0.0, 1.0), 0.0, 1.0)


def test_sup_estimate_validation(unit):
    with pytest.raises(PreconditionError):
        SupEstimate(-1.0, None, Provenance.ANALYTIC, unit)
    with pytest.raises(PreconditionError):
        SupEstimate(1.0, 2.0, Provenance.SAMPLED, unit)


def test_analytic_estimate(unit):
    estimate = SupEstimate.analytic(3, unit)
    assert estimate.argmax is None
    assert not estimate.is_sampled
    assert estimate.scaled(0.5).value == 1.5
    assert estimate.as_dict() == {"value": 3.0, "argmax": None, "provenance": "analytic"}


@pytest.mark.parametrize("p", [-2.0, -0.5, 0.5, 2.0, 3.0])
def test_power_seminorm_is_the_ratio_against_t_to_the_p(p):
    f = parse("sin(t) + t^2")
    interval = Interval(0.5, 2.0)
    scaled = seminorm_Kp(f, interval, p).value / abs(p)
    assert scaled == pytest.approx(sup_ratio(f, FunctionSpec.power(p), interval).value, rel=1e-9)
    assert scaled == pytest.approx(sup_ratio(f, parse(f"t^({p})"), interval).value, rel=1e-9)
