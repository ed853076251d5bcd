"""End-to-end CLI checks: subcommands, exit codes, and replay."""

import json
import subprocess
import sys

import pytest


def cli(args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "kisinlab.cli"] + args,
        input=stdin,
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_run_list_names_all_suites():
    rc, out, _ = cli(["run", "--list"])
    assert rc == 0
    names = json.loads(out)
    assert "property-z-uniqueness" in names
    assert "tame-differences" in names


def test_run_suite_writes_report(tmp_path):
    out_file = tmp_path / "report.json"
    rc, _, _ = cli(
        ["run", "--suite", "tame-differences", "--seed", "0", "--trials", "1",
         "--out", str(out_file)]
    )
    assert rc == 0
    rep = json.loads(out_file.read_text())
    assert rep["all_pass"] and rep["schema"] == "kisinlab-report/1"


def test_run_replays_identically():
    args = ["run", "--suite", "ordering-audit", "--p", "5", "--d", "3",
            "--seed", "17", "--trials", "5"]
    rc1, out1, _ = cli(args)
    rc2, out2, _ = cli(args)
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_unknown_suite_exits_2():
    rc, _, err = cli(["run", "--suite", "bogus"])
    assert rc == 2
    assert "unknown suite" in err


def test_malformed_json_exits_2():
    rc, _, _ = cli(["factorize"], stdin="{this is not json")
    assert rc == 2


def test_gen_and_factorize_pipeline():
    rc, gen_out, _ = cli(["gen", "--kind", "shaped-matrix", "--p", "5", "--d", "3",
                          "--seed", "2"])
    assert rc == 0
    rc, fact_out, _ = cli(["factorize"], stdin=gen_out)
    assert rc == 0
    rec = json.loads(fact_out)
    assert set(rec) == {"x1", "x0", "b"}


def test_canonicalize_outputs_corrector():
    rc, gen_out, _ = cli(["gen", "--kind", "shaped-matrix", "--p", "3", "--d", "2",
                          "--seed", "1"])
    a = json.loads(gen_out)["a"]
    rc, out, _ = cli(["canonicalize"], stdin=json.dumps({"a": a}))
    assert rc == 0
    rec = json.loads(out)
    assert sorted(rec) == ["C", "M", "delta", "ordering"]


@pytest.fixture
def weights_file(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"p": 13, "f": 1, "e": 2, "d": 2,
                                "r": [[[0, 4], [0, 1]]]}))
    return path


def test_verify_diag_accepts_planted_family(weights_file):
    rc, fam, _ = cli(["gen", "--kind", "triangular", "--weights", str(weights_file),
                      "--seed", "6"])
    assert rc == 0
    payload = json.dumps({"family": json.loads(fam),
                          "weights": json.loads(weights_file.read_text())})
    rc, out, _ = cli(["verify-diag"], stdin=payload)
    assert rc == 0
    assert json.loads(out)["permutations"]


def test_verify_diag_rejects_wrong_weights(weights_file):
    rc, fam, _ = cli(["gen", "--kind", "triangular", "--weights", str(weights_file),
                      "--seed", "6"])
    wrong = {"p": 13, "f": 1, "e": 2, "d": 2, "r": [[[0, 7], [0, 2]]]}
    payload = json.dumps({"family": json.loads(fam), "weights": wrong})
    rc, out, _ = cli(["verify-diag"], stdin=payload)
    assert rc == 1
    assert json.loads(out)["permutations"] is None


def test_filtration_sweep_reports_grid():
    rc, out, _ = cli(["filtration-sweep", "--p", "5", "--e", "2", "--rmax", "2"])
    assert rc == 0
    rep = json.loads(out)
    assert rep["all_pass"]
    assert [res["r"] for res in rep["results"]] == [1, 2]


def test_adapted_generation_requires_weights():
    rc, _, _ = cli(["gen", "--kind", "adapted", "--seed", "1"])
    assert rc == 2
