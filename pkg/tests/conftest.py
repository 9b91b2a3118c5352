"""
Shared fixtures for the test suite.
"""
from pathlib import Path

import pytest
from hypothesis import settings as hypothesis_settings

import database
from interval import Interval

ROOT = Path(__file__).resolve().parent.parent

# Numerical properties can take a few milliseconds per example
hypothesis_settings.register_profile("ostrowski", deadline=None, max_examples=60)
hypothesis_settings.load_profile("ostrowski")


@pytest.fixture
def unit():
    return Interval(0.0, 1.0)


@pytest.fixture
def default_suite():
    return ROOT / "default.jsonl"


@pytest.fixture
def run_store(tmp_path, monkeypatch):
    """Run history bound to a throwaway sqlite file."""
    monkeypatch.setattr(database, "engine", None)
    database.configure(f"sqlite:///{tmp_path / 'runs.db'}")
    yield database
    database.engine.dispose()
