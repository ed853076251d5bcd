"""Campaign runner: registry, report schema, replay, and thread safety."""

import os
from unittest import mock

import pytest

from kisinlab import Campaign, SUITES, run_suite
from kisinlab.errors import ConfigError


def test_registry_has_descriptions():
    assert "property-z-uniqueness" in SUITES
    assert "tame-differences" in SUITES
    for name, (fn, desc) in SUITES.items():
        assert callable(fn)
        assert isinstance(desc, str) and desc


def test_report_schema_and_counts():
    rep = run_suite(Campaign(suite="block-linearity", parameters={"p": 5}, seed=3, trials=12))
    assert rep["schema"] == "kisinlab-report/1"
    assert rep["suite"] == "block-linearity"
    assert rep["trials"] == 12
    assert rep["passed"] + rep["failed"] == 12
    assert rep["all_pass"] is True
    assert rep["first_counterexample"] is None
    assert [o["trial"] for o in rep["outcomes"]] == list(range(12))


def test_unknown_suite_and_bad_trials_rejected():
    with pytest.raises(ConfigError):
        run_suite(Campaign(suite="no-such-suite"))
    with pytest.raises(ConfigError):
        run_suite(Campaign(suite="rank1", trials=0))
    with pytest.raises(ConfigError):
        run_suite(Campaign(suite="ordering-audit", parameters={"p": 6}, trials=1))


def test_replay_is_deterministic():
    mk = lambda: run_suite(
        Campaign(suite="shape-roundtrip", parameters={"p": 5, "d": 3}, seed=21, trials=8)
    )
    assert mk() == mk()


def test_thread_cap_does_not_change_outcomes():
    config = Campaign(suite="q-factorization", parameters={"p": 5, "d": 3}, seed=4, trials=8)
    serial = run_suite(config)
    with mock.patch.dict(os.environ, {"KISINLAB_THREADS": "4"}):
        threaded = run_suite(config)
    assert serial == threaded


def test_exhaustive_suites_ignore_trial_count():
    a = run_suite(Campaign(suite="rank1", parameters={"p": 5}, trials=1))
    b = run_suite(Campaign(suite="rank1", parameters={"p": 5}, trials=99))
    assert a["trials"] == b["trials"] > 1
