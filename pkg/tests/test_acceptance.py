"""Acceptance run: every criterion at its stated size and time budget,
one PASS/FAIL line each (visible with pytest -s)."""

import time

import pytest

from kisinlab import Campaign, run_suite


def _run(label, budget, suite, params, trials, seed=20260823):
    t0 = time.monotonic()
    rep = run_suite(Campaign(suite=suite, parameters=params, seed=seed, trials=trials))
    elapsed = time.monotonic() - t0
    ok = rep["all_pass"] and elapsed <= budget
    status = "PASS" if ok else "FAIL"
    print(f"{status} {label}: {rep['passed']}/{rep['trials']} trials "
          f"in {elapsed:.2f}s (budget {budget}s)")
    if not rep["all_pass"]:
        print(f"     first counterexample: {rep['first_counterexample']}")
    assert rep["all_pass"], rep["first_counterexample"]
    assert elapsed <= budget, f"{label} exceeded {budget}s ({elapsed:.2f}s)"


def test_criterion_01_unique_corrector_exhaustive():
    t0 = time.monotonic()
    rep_const = run_suite(
        Campaign(suite="property-z-uniqueness", parameters={"p": 3}, trials=1)
    )
    rep_series = run_suite(
        Campaign(
            suite="property-z-uniqueness",
            parameters={"p": 2, "delta": 1, "maxdeg": 2, "N": 8},
            trials=1,
        )
    )
    elapsed = time.monotonic() - t0
    ok = rep_const["all_pass"] and rep_series["all_pass"] and elapsed <= 10
    print(f"{'PASS' if ok else 'FAIL'} criterion-01 unique-corrector: "
          f"{rep_const['trials']} constant + {rep_series['trials']} series "
          f"matrices in {elapsed:.2f}s (budget 10s)")
    assert rep_const["all_pass"] and rep_series["all_pass"]
    assert elapsed <= 10


def test_criterion_02_ordering_audit():
    _run("criterion-02 ordering-audit", 30, "ordering-audit",
         {"p": 5, "d": 4}, 500)


def test_criterion_03_q_factorization():
    _run("criterion-03 q-factorization", 30, "q-factorization",
         {"p": 5, "d": 4}, 500)


def test_criterion_04_shape_round_trip():
    _run("criterion-04 shape-round-trip", 60, "shape-roundtrip",
         {"p": 5, "d": 4}, 500)


def test_criterion_05_allowable_biconditional():
    _run("criterion-05 allowable-steps", 10, "allowable-biconditional",
         {"p": 5, "d": 4}, 1000)


def test_criterion_06_tameinertia_end_to_end():
    _run("criterion-06 tameinertia", 60, "tameinertia", {"p": 13, "d": 4}, 500)


def test_criterion_07_shape_decomposition():
    _run("criterion-07 decompose-phi", 60, "decompose-phi", {"p": 13, "d": 3}, 200)


def test_criterion_08_rank1_exhaustive():
    _run("criterion-08 rank1", 1, "rank1", {"p": 5, "rmax": 3}, 1)


def test_criterion_09_tame_lemmas():
    t0 = time.monotonic()
    diffs = run_suite(Campaign(suite="tame-differences", parameters={}, trials=1))
    closure = run_suite(
        Campaign(suite="property-b-closure", parameters={"p": 5, "e": 2}, trials=1000)
    )
    elapsed = time.monotonic() - t0
    ok = diffs["all_pass"] and closure["all_pass"] and elapsed <= 10
    print(f"{'PASS' if ok else 'FAIL'} criterion-09 tame-lemmas: "
          f"{diffs['trials']} grid cells + {closure['trials']} product pairs "
          f"in {elapsed:.2f}s (budget 10s)")
    assert diffs["all_pass"] and closure["all_pass"]
    assert elapsed <= 10


def test_criterion_10_divisibility_and_coefficient_sweep():
    _run("criterion-10 filtration-sweep", 30, "property-a-coe2", {}, 1)


def test_criterion_11_twist_invariance():
    _run("criterion-11 taylor-twist", 10, "taylor-twist",
         {"p": 5, "e": 2, "r": 2}, 200)


def test_criterion_12_block_linearity():
    _run("criterion-12 block-linearity", 5, "block-linearity", {"p": 5}, 200)
