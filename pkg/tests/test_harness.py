import json
import math

import numpy as np
import pytest

import harness
from errors import PreconditionError
from harness import (
    ERROR,
    FAIL,
    PASS,
    CaseSpec,
    best_node,
    check_case,
    consistency_suite,
    expand_case,
    falsification_control,
    inequality_suite,
    linear_family,
    load_suite,
    node_evaluator,
    run_suite,
    sharpness_scan,
    summarize,
)
from interval import Interval
from settings import RunConfig

ROOT_HALF = 1 / math.sqrt(2)


def test_from_dict_accepts_aliases():
    case = CaseSpec.from_dict({"id": 1.1, "f": "t", "interval": [0, 1], "M": 1, "x": 0})
    assert case.bound_id == "1.1"
    assert (case.a, case.b, case.norm) == (0, 1, 1)
    split = CaseSpec.from_dict({"bound_id": "2.15", "f": "t", "a": 0, "b": 1, "M1": 1, "N2": 2, "weight": "t"})
    assert (split.norm_left, split.norm_right, split.w) == (1, 2, "t")


@pytest.mark.parametrize("record", [
    {"bound_id": "1.1", "f": "t", "a": 0, "b": 1, "M": 1, "norm": 1},
    {"bound_id": "1.1", "f": "t", "a": 0, "b": 1, "colour": "red"},
    {"bound_id": "1.1", "f": "t", "a": 0},
])
def test_from_dict_rejects_bad_records(record):
    with pytest.raises(PreconditionError):
        CaseSpec.from_dict(record)


def test_as_dict_drops_unset_fields():
    assert CaseSpec("1.1", "t", 0.0, 1.0, norm=1.0).as_dict() == {
        "bound_id": "1.1", "f": "t", "a": 0.0, "b": 1.0, "x": "midpoint", "norm": 1.0,
        "tol_rel": 1e-9, "tol_abs": 1e-12, "rhs_scale": 1.0,
    }


def test_classic_equality_case():
    result = check_case(CaseSpec("1.1", "t", 0.0, 1.0, x=0.0, norm=1.0))
    assert result.status == PASS
    assert result.report.lhs == pytest.approx(0.5, rel=1e-13)
    assert result.report.rhs == 0.5
    assert result.report.ratio == pytest.approx(1.0, abs=1e-12)
    assert result.report.certified
    assert result.report.warnings == ()
    assert result.as_dict()["status"] == PASS


def test_sampled_general_bound():
    result = check_case(CaseSpec("2.2", "sin(t)", 0.0, math.pi, x=math.pi / 2, g="t"))
    assert result.passed
    assert result.report.ratio == pytest.approx((1 - 2 / math.pi) / (math.pi / 4), rel=1e-9)
    assert not result.report.certified
    assert result.report.seminorm.value == pytest.approx(1.0, rel=1e-12)


def test_understated_constant_fails_with_warning():
    result = check_case(CaseSpec("1.1", "t", 0.0, 1.0, x=0.0, norm=0.5))
    assert result.status == FAIL
    assert result.report.violation() == pytest.approx(0.25, rel=1e-12)
    assert result.report.warnings


def test_weighted_case():
    result = check_case(CaseSpec("4.2", "t", 0.0, 1.0, x=ROOT_HALF, g="t", w="t"))
    assert result.passed
    assert result.report.rhs == pytest.approx(2 / 3 * (1 - ROOT_HALF), rel=1e-9)
    assert result.report.lhs == pytest.approx(abs(ROOT_HALF - 2 / 3), rel=1e-10)


@pytest.mark.parametrize("case", [
    CaseSpec("9.9", "t", 0.0, 1.0),
    CaseSpec("1.3", "t", -1.0, 1.0, x=0.0),
    CaseSpec("1.2", "t", 1.0, 2.0, x=1.5),
    CaseSpec("1.1", "t +", 0.0, 1.0),
    CaseSpec("2.15", "t", 0.0, 1.0, x=0.0, g="t"),
    CaseSpec("1.1", "t", 0.0, 1.0, x="sweep:3"),
    CaseSpec("2.2", "t", -1.0, 1.0, x=0.5, g="t^2"),
])
def test_unevaluable_cases_are_errors(case):
    result = check_case(case)
    assert result.status == ERROR
    assert result.error
    assert result.as_dict()["status"] == ERROR


def test_expand_case(unit):
    assert [c.x for c in expand_case(CaseSpec("2.5", "t", 0.0, 1.0, x=0.2, g="t"))] == [0.5]
    assert [c.x for c in expand_case(CaseSpec("1.1", "t", 0.0, 1.0, x="sweep:3"))] == [0.25, 0.5, 0.75]
    assert [c.x for c in expand_case(CaseSpec("1.1", "t", 0.0, 1.0, x="midpoint"))] == [0.5]
    assert [c.x for c in expand_case(CaseSpec("1.1", "t", 0.0, 1.0, x="0.3"))] == [0.3]
    median = expand_case(CaseSpec("4.6", "t", 0.0, 1.0, g="t", w="t"))[0].x
    assert median == pytest.approx(ROOT_HALF, abs=1e-10)
    for x in ("abc", "sweep:0"):
        with pytest.raises(PreconditionError):
            expand_case(CaseSpec("1.1", "t", 0.0, 1.0, x=x))


def test_run_suite_keeps_order():
    cases = [
        CaseSpec("1.1", "sin(t)", 0.0, math.pi, x="sweep:3"),
        CaseSpec("1.1", "t", 0.0, 1.0, x="nowhere"),
        CaseSpec("2.2", "exp(t)", 0.0, 1.0, x=0.25, g="t"),
    ]
    results, summary = run_suite(cases)
    assert [r.status for r in results] == [PASS, PASS, PASS, ERROR, PASS]
    assert [r.case.x for r in results[:3]] == [math.pi / 4, math.pi / 2, 3 * math.pi / 4]
    assert (summary.total, summary.passed, summary.failed, summary.errored) == (4, 4, 0, 1)
    assert not summary.all_passed


def test_workers_do_not_change_results(default_suite):
    cases = load_suite(default_suite)[:10]
    sequential, _ = run_suite(cases, RunConfig(workers=1))
    threaded, _ = run_suite(cases, RunConfig(workers=4))
    assert [r.as_dict() for r in sequential] == [r.as_dict() for r in threaded]


def test_summarize_tracks_worst_case():
    results = [
        check_case(CaseSpec("1.1", "t", 0.0, 1.0, x=0.5, norm=1.0)),
        check_case(CaseSpec("1.1", "t", 0.0, 1.0, x=0.0, norm=0.5)),
        check_case(CaseSpec("9.9", "t", 0.0, 1.0)),
    ]
    summary = summarize(results)
    assert (summary.total, summary.passed, summary.failed, summary.errored) == (2, 1, 1, 1)
    assert summary.worst_ratio == pytest.approx(2.0, rel=1e-12)
    assert summary.worst_case["norm"] == 0.5
    assert summary.max_violation == pytest.approx(0.25, rel=1e-12)
    assert summary.as_dict()["errored"] == 1


def test_default_suite_passes(default_suite):
    results, summary = run_suite(load_suite(default_suite))
    failing = [r.as_dict() for r in results if not r.passed]
    assert summary.all_passed, failing
    assert len(results) >= 29


def test_load_suite_reports_bad_lines(tmp_path):
    path = tmp_path / "suite.jsonl"
    path.write_text(json.dumps({"id": "1.1", "f": "t", "a": 0, "b": 1}) + "\n\n{not json}\n", encoding="utf-8")
    with pytest.raises(PreconditionError) as info:
        load_suite(path)
    assert ":3:" in str(info.value)
    path.write_text(json.dumps({"id": "1.1", "f": "t", "a": 0, "b": 1, "q": 1}) + "\n", encoding="utf-8")
    with pytest.raises(PreconditionError) as info:
        load_suite(path)
    assert ":1:" in str(info.value)


def test_classic_sharpness():
    summary, worst = sharpness_scan("1.1", n=20)
    assert worst == pytest.approx(1.0, abs=1e-12)
    assert summary.all_passed


def test_classic_equality_on_random_intervals():
    rng = np.random.default_rng(42)
    for k in range(20):
        case = linear_family(k, rng)
        report = check_case(case).report
        assert abs(report.lhs - report.rhs) <= 1e-12 * (case.b - case.a)


def test_same_function_sharpness():
    summary, worst = sharpness_scan("2.2", n=20)
    assert worst == pytest.approx(1.0, abs=1e-9)
    assert summary.errored == 0


def test_local_power_sharpness():
    summary, worst = sharpness_scan("1.4", n=12)
    assert worst == pytest.approx(1.0, abs=1e-8)
    assert summary.errored == 0


def test_sharpness_needs_a_family():
    with pytest.raises(PreconditionError):
        sharpness_scan("3.7", n=2)


def test_falsification_control_fails_every_case():
    _, summary = falsification_control(20)
    assert summary.failed == 20
    assert summary.errored == 0


def test_consistency_for_selected_bounds():
    checks, summary = consistency_suite(bound_ids=["1.1", "2.5"])
    assert len(checks) == 21
    assert summary.all_passed, summary.worst_case


@pytest.mark.slow
def test_consistency_for_every_bound():
    checks, summary = consistency_suite()
    failing = [check.as_dict() for check in checks if not check.passed]
    assert summary.all_passed, failing


def test_small_inequality_suite():
    results, summary = inequality_suite(4, 2)
    failing = [r.as_dict() for r in results if not r.passed]
    assert summary.all_passed, failing


def test_inequality_suite_uses_corpus_constants_as_given(monkeypatch):
    def sampled(*args, **kwargs):
        raise AssertionError("corpus constants must not be resampled")

    for name in ("sup_ratio", "seminorm_Kp", "seminorm_P", "seminorm_Mp_split"):
        monkeypatch.setattr(harness, name, sampled)
    results, summary = inequality_suite(3, 2)
    assert summary.errored == 0
    assert summary.all_passed, [r.as_dict() for r in results if not r.passed]


@pytest.mark.slow
def test_inequality_suite():
    results, summary = inequality_suite(100, 10)
    failing = [r.as_dict() for r in results if not r.passed]
    assert summary.all_passed, failing


def test_best_node_for_classic_bound(unit):
    x, rhs = best_node(node_evaluator(CaseSpec("1.1", "t", 0.0, 1.0, norm=1.0)), unit)
    assert x == pytest.approx(0.5, abs=1e-6)
    assert rhs == pytest.approx(0.25, abs=1e-12)


def test_best_node_for_weighted_bound_is_the_median(unit):
    evaluator = node_evaluator(CaseSpec("4.2", "t", 0.0, 1.0, g="t", w="t"))
    x, _ = best_node(evaluator, unit)
    assert x == pytest.approx(ROOT_HALF, abs=1e-6)
    coarse, _ = best_node(evaluator, unit, grid=500)
    assert abs(coarse - x) <= 1 / 500


def test_best_node_for_exponential_bound(unit):
    x, _ = best_node(node_evaluator(CaseSpec("2.7", "exp(t)", 0.0, 1.0, norm=1.0)), unit)
    assert x == pytest.approx(0.5, abs=1e-6)


def test_best_node_with_sampled_seminorm():
    interval = Interval(0.0, math.pi)
    x, rhs = best_node(node_evaluator(CaseSpec("2.2", "sin(t)", 0.0, math.pi, g="t")), interval)
    assert x == pytest.approx(math.pi / 2, abs=1e-6)
    assert rhs == pytest.approx(math.pi / 4, rel=1e-9)


def test_best_node_needs_an_evaluable_point(unit):
    def evaluator(x):
        raise PreconditionError("nowhere")

    with pytest.raises(PreconditionError):
        best_node(evaluator, unit, grid=10)
