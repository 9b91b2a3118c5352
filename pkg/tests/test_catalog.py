import pytest

import harness
from catalog import BOUND_CATALOG, comparison_function, get_entry, norm_scale
from errors import PreconditionError
from expr import evaluate, parse


def test_catalog_has_every_bound():
    assert len(BOUND_CATALOG) == 23
    assert list(BOUND_CATALOG)[:4] == ["1.1", "1.2", "1.3", "1.4"]


def test_get_entry():
    assert get_entry("2.2").needs_g
    assert get_entry(1.1).bound_id == "1.1"
    with pytest.raises(PreconditionError) as info:
        get_entry("9.9")
    assert "1.1" in str(info.value)


def test_evaluators_and_closed_forms_cover_the_catalog():
    assert set(harness._EVALUATORS) == set(BOUND_CATALOG)
    assert set(harness._closed_forms()) == set(BOUND_CATALOG)


def test_comparison_functions():
    assert evaluate(comparison_function(get_entry("1.2"), p=2.0), 3.0) == 9.0
    assert evaluate(comparison_function(get_entry("2.21"), p=2.0, x=0.5), 1.0) == 0.25
    assert evaluate(comparison_function(get_entry("1.3")), 1.0) == 0.0
    g = parse("t^3")
    assert comparison_function(get_entry("2.2"), g=g) is g
    with pytest.raises(PreconditionError):
        comparison_function(get_entry("2.2"))


@pytest.mark.parametrize("bound_id, p, scale", [
    ("1.2", -2.0, 2.0),
    ("3.1", 0.5, 0.5),
    ("1.4", 3.0, 3.0),
    ("2.23", 0.5, 0.5),
    ("2.2", None, 1.0),
    ("3.7", None, 1.0),
])
def test_norm_scale(bound_id, p, scale):
    assert norm_scale(get_entry(bound_id), p) == scale


def test_entries_are_consistent():
    for entry in BOUND_CATALOG.values():
        assert all(isinstance(note, str) and note for note in entry.notes)
        if entry.comparison == "local_power":
            assert entry.needs_p
    assert get_entry("2.13").notes
    assert get_entry("4.6").point == "median"
