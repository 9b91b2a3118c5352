import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corpus import random_corpus
from errors import (
    DomainViolation,
    EmptyExpressionError,
    ExprSyntaxError,
    NondifferentiablePoint,
    UnknownIdentifierError,
)
from expr import (
    Binary,
    Const,
    FunctionSpec,
    Unary,
    Var,
    as_function,
    derivative,
    evaluate,
    evaluate_dual,
    parse,
    serialize,
    serialize_node,
)


def test_parse_variable():
    assert parse("t").root == Var()


def test_parse_sum_of_power_and_sine():
    f = parse("t^2 + sin(t)")
    assert f.root == Binary("+", Binary("^", Var(), Const(2.0)), Unary("sin", Var()))
    assert evaluate(f, 0.0) == 0.0


@pytest.mark.parametrize("text, t, expected", [
    ("-t^2", 3.0, -9.0),
    ("2^3^2", 0.0, 512.0),
    ("t^-2", 2.0, 0.25),
    ("2*3+4", 0.0, 10.0),
    ("(1+2)*3", 0.0, 9.0),
    ("t - -1", 1.0, 2.0),
    ("1e-3*t", 1000.0, 1.0),
    ("pi", 0.0, math.pi),
    ("e", 0.0, math.e),
    ("t^2", 3.0, 9.0),
])
def test_precedence_and_literals(text, t, expected):
    assert evaluate(parse(text), t) == pytest.approx(expected, rel=1e-15)


def test_exp_at_one_is_e():
    assert evaluate(parse("exp(t)"), 1.0) == pytest.approx(2.718281828459045, rel=1e-15)


def test_unclosed_call_reports_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse("ln(")
    assert info.value.offset == 3


def test_stray_character_reports_offset():
    with pytest.raises(ExprSyntaxError) as info:
        parse("t $")
    assert info.value.offset == 2


@pytest.mark.parametrize("text", ["", "   ", None])
def test_empty_input(text):
    with pytest.raises(EmptyExpressionError):
        parse(text)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse("t + foo(t)")
    assert info.value.name == "foo"
    assert info.value.offset == 4


def test_syntax_errors_are_value_errors():
    with pytest.raises(ValueError):
        parse("t +")


@pytest.mark.parametrize("text, t, reason", [
    ("ln(t)", 0.0, "logarithm"),
    ("sqrt(t)", -1.0, "square root"),
    ("1/t", 0.0, "division"),
])
def test_domain_violation_names_subexpression(text, t, reason):
    with pytest.raises(DomainViolation) as info:
        evaluate(parse(text), t)
    assert info.value.point == t
    assert reason in str(info.value)


def test_domain_violation_inside_larger_expression():
    with pytest.raises(DomainViolation) as info:
        evaluate(parse("t + ln(t - 1)"), 0.5)
    assert info.value.subexpression == "ln((t - 1.0))"


def test_vectorized_evaluation():
    values = evaluate(parse("t^2"), np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(values, [1.0, 4.0, 9.0])


def test_vectorized_domain_violation_reports_first_bad_point():
    with pytest.raises(DomainViolation) as info:
        evaluate(parse("ln(t)"), np.array([1.0, 0.5, -2.0, -3.0]))
    assert info.value.point == -2.0


@pytest.mark.parametrize("text, t, value, deriv", [
    ("t^2", 3.0, 9.0, 6.0),
    ("exp(t)", 1.0, math.e, math.e),
    ("t*ln(t)", 2.0, 2 * math.log(2), math.log(2) + 1),
    ("sin(t)/t", 1.0, math.sin(1.0), math.cos(1.0) - math.sin(1.0)),
    ("2^t", 3.0, 8.0, 8.0 * math.log(2)),
    ("sqrt(t)", 4.0, 2.0, 0.25),
    ("abs(t - 1)", 0.0, 1.0, -1.0),
])
def test_dual_values(text, t, value, deriv):
    dual = evaluate_dual(parse(text), t)
    assert dual.value == pytest.approx(value, rel=1e-15)
    assert dual.deriv == pytest.approx(deriv, rel=1e-14)


def test_dual_matches_central_difference():
    f = parse("t*ln(t)")
    h = 1e-6
    difference = (evaluate(f, 2.0 + h) - evaluate(f, 2.0 - h)) / (2 * h)
    assert derivative(f, 2.0) == pytest.approx(difference, rel=1e-8)


def test_identity_and_constant_derivatives_are_exact():
    assert evaluate_dual(parse("t"), 0.7).deriv == 1.0
    assert evaluate_dual(parse("3.5"), 0.7).deriv == 0.0
    assert evaluate_dual(parse("pi * e"), 0.7).deriv == 0.0


@pytest.mark.parametrize("text, t", [("abs(t)", 0.0), ("abs(t - 0.5)", 0.5), ("sqrt(t)", 0.0)])
def test_nondifferentiable_point_is_distinct(text, t):
    f = parse(text)
    evaluate(f, t)  # the value exists
    with pytest.raises(NondifferentiablePoint) as info:
        evaluate_dual(f, t)
    assert not isinstance(info.value, DomainViolation)


def test_dual_domain_violation():
    with pytest.raises(DomainViolation):
        evaluate_dual(parse("ln(t)"), -1.0)


def test_serialize_is_fully_parenthesized():
    assert serialize(parse("-t^2 + 3")) == "((-(t ^ 2.0)) + 3.0)"


def test_power_and_constant_builders():
    assert evaluate(FunctionSpec.power(-2), 2.0) == 0.25
    assert FunctionSpec.constant(4).is_constant
    assert not parse("t + 1").is_constant
    assert evaluate(parse(serialize(FunctionSpec.power(-0.5))), 4.0) == 0.5


def test_as_function_accepts_both():
    f = parse("t")
    assert as_function(f) is f
    assert evaluate(as_function("t + 1"), 1.0) == 2.0


def test_corpus_derivatives_match_central_differences():
    h = 1e-6
    for function, interval in random_corpus(100, seed=42):
        f = function.spec
        points = np.linspace(interval.a, interval.b, 100)
        exact = derivative(f, points)
        difference = (evaluate(f, points + h) - evaluate(f, points - h)) / (2 * h)
        assert np.all(np.abs(exact - difference) <= 1e-5 * (1 + np.abs(exact))), function.text


leaves = st.one_of(
    st.just(Var()),
    st.floats(min_value=-5, max_value=5, allow_nan=False).map(Const),
)
trees = st.recursive(
    leaves,
    lambda children: st.one_of(
        st.builds(Unary, st.sampled_from(["neg", "sin", "cos", "abs"]), children),
        st.builds(Binary, st.sampled_from(["+", "-", "*"]), children, children),
    ),
    max_leaves=12,
)


@given(trees)
def test_serialize_round_trip_evaluates_identically(tree):
    f = FunctionSpec(tree, serialize_node(tree))
    again = parse(serialize(f))
    points = np.linspace(-3.0, 3.0, 100)
    np.testing.assert_array_equal(evaluate(f, points), evaluate(again, points))


@pytest.mark.parametrize("text", ["exp(t) * sin(2*t)", "t^3 - 2*t + 1", "ln(t) / t", "1/(1 + t^2)"])
def test_parse_serialize_parse_round_trip(text):
    f = parse(text)
    again = parse(serialize(parse(serialize(f))))
    points = np.random.default_rng(7).uniform(0.1, 4.0, 100)
    np.testing.assert_array_equal(evaluate(f, points), evaluate(again, points))
