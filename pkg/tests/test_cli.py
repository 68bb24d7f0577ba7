"""Front-end behavior: scenario validation, exit codes, deterministic reports."""

import json
import subprocess
import sys

import pytest

from efgl.cli import (ScenarioError, bundled_scenarios, load_scenario, main,
                      run_scenario, validate_scenario)


EXPECTED_BUNDLED = {
    "mult-presentation", "tate-p2", "tate-nonmult", "z2def-full",
    "lt2-relations", "elliptic-fgl", "torsion-p5", "tate-square-p5",
    "crt-random", "classification", "empty-checks",
}


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_bundled_names_are_complete():
    assert set(bundled_scenarios()) == EXPECTED_BUNDLED


def test_every_bundled_scenario_validates():
    for name, path in bundled_scenarios().items():
        obj = validate_scenario(load_scenario(path))
        assert obj["name"] == name, "file stem and name field must agree"


def test_list_scenarios_runs_clean(capsys):
    code, doc = cli(capsys, "list-scenarios")
    assert code == 0
    assert {e["name"] for e in doc["scenarios"]} == EXPECTED_BUNDLED


def test_empty_checks_is_a_passing_report(capsys):
    code, doc = cli(capsys, "run", "empty-checks")
    assert code == 0
    assert doc["report"]["ok"] is True
    assert doc["report"]["results"] == []
    assert doc["report"]["counts"]["total"] == 0


def test_report_is_deterministic(capsys):
    code1, doc1 = cli(capsys, "run", "tate-p2")
    code2, doc2 = cli(capsys, "run", "tate-p2")
    assert code1 == code2 == 0
    blob1 = json.dumps(doc1["report"], sort_keys=True)
    blob2 = json.dumps(doc2["report"], sort_keys=True)
    assert blob1 == blob2
    assert doc1["meta"]["checksum"] == doc2["meta"]["checksum"]
    # the checksum actually covers the report section
    canon = json.dumps(doc1["report"], sort_keys=True,
                       separators=(",", ":"), ensure_ascii=False)
    import hashlib
    assert doc1["meta"]["checksum"] == \
        hashlib.sha256(canon.encode("utf-8")).hexdigest()


def test_math_failure_exits_two(tmp_path, capsys):
    # truncation order 6 is too low for the last generator image
    scen = {"version": 1, "name": "too-low", "target":
            "elliptic.classification", "params": {"cap": 6},
            "checks": ["all"]}
    path = tmp_path / "low.json"
    path.write_text(json.dumps(scen))
    code, doc = cli(capsys, "run", str(path))
    assert code == 2
    failed = [r for r in doc["report"]["results"] if r["status"] == "fail"]
    assert failed, "expected visible failing entries"
    assert doc["report"]["ok"] is False


@pytest.mark.parametrize("mutation", [
    {"version": 3},
    {"target": "no.such.target"},
    {"checks": ["not-a-check"]},
    {"params": {"cap": "six"}},
    {"surprise": True},
])
def test_config_errors_exit_one(tmp_path, capsys, mutation):
    scen = {"version": 1, "name": "x", "target": "elliptic.classification",
            "params": {"cap": 8}, "checks": ["all"]}
    scen.update(mutation)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(scen))
    assert main(["run", str(path)]) == 1
    capsys.readouterr()


def test_missing_scenario_reference_exits_one(capsys):
    assert main(["run", "no-such-scenario"]) == 1
    capsys.readouterr()


def test_unknown_fields_rejected_directly():
    with pytest.raises(ScenarioError):
        validate_scenario({"version": 1, "name": "x", "target": "fgl.axioms",
                           "params": {}, "checks": [], "mystery": 1})


def test_defaults_are_echoed_in_the_report():
    doc = run_scenario({"version": 1, "name": "echo", "target": "fgl.axioms",
                        "params": {}, "checks": ["all"]})
    assert doc["report"]["scenario"]["params"]["law"] == "multiplicative"
    assert doc["report"]["scenario"]["params"]["cap"] == 8
    assert doc["report"]["counts"]["undecided"] == 0


def test_out_flag_writes_file(tmp_path, capsys):
    dest = tmp_path / "report.json"
    code = main(["fgl", "--cap", "5", "--out", str(dest)])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(dest.read_text())
    assert doc["report"]["ok"] is True


def test_parallel_jobs_preserve_input_order(capsys):
    code, docs = cli(capsys, "run", "empty-checks", "tate-nonmult",
                     "--jobs", "2")
    assert code == 0
    names = [d["report"]["scenario"]["name"] for d in docs]
    assert names == ["empty-checks", "tate-nonmult"]


def test_verify_token_selects_single_check(capsys):
    code, doc = cli(capsys, "z2def", "--verify", "closed-form")
    assert code == 0
    assert [r["name"] for r in doc["report"]["results"]] == \
        ["deformed-correction-relation"]


def test_subprocess_entry_point():
    p = subprocess.run([sys.executable, "-m", "efgl.cli", "run",
                        "empty-checks"], capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["report"]["ok"] is True
