import json
import subprocess
import sys

import pytest

from borwein_lab.cli import main, parse_range, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert parse_range("3") == [3]
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("1,5..6") == [1, 5, 6]
    with pytest.raises(UsageError):
        parse_range("4..1")


def test_expand_json(capsys):
    code, out, _ = run(capsys, "expand", "--conj", "1", "--m", "1", "--n", "2", "--kmax", "4")
    assert code == 0
    doc = json.loads(out)
    assert [s["k"] for s in doc["series"]["slices"]] == [0, 1, 2, 3, 4]
    assert doc["header"]["tool"] == "borwein-lab"


def test_expand_text_borwein(capsys):
    code, out, _ = run(capsys, "expand", "--conj", "1", "--m", "0", "--n", "1", "--kmax", "0", "--format", "text")
    assert code == 0 and "p^0: 1 - q - q^2 + q^3" in out


def test_expand_conj3_iks_style(capsys):
    code, out, _ = run(capsys, "expand", "--conj", "3", "--m1", "0", "--m2", "0", "--n1", "3", "--K", "5")
    doc = json.loads(out)
    assert code == 0 and doc["series"]["kmax"] == 0
    assert sorted(b for _, b in doc["spec"]["factors"]) == [5, 6, 16, 17, 27, 28]


def test_check_threshold_cell(capsys):
    assert run(capsys, "check", "--conj", "1", "--m", "1", "--n", "2", "--k", "5")[0] == 0
    assert run(capsys, "check", "--conj", "1", "--m", "1", "--n", "1", "--k", "5")[0] == 1


def test_check_first_borwein(capsys):
    code, out, _ = run(capsys, "check", "--conj", "1", "--m", "0", "--n", "0..15")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_check_iks_even(capsys):
    for K, a in [(4, 1), (8, 3), (10, 3)]:
        assert run(capsys, "check", "--conj", "iks", "--a", str(a), "--K", str(K), "--n", "0..6")[0] == 0


def test_check_violation_report(capsys):
    code, out, _ = run(capsys, "check", "--conj", "2", "--m1", "1", "--m2", "0", "--n1", "1", "--n2", "40",
                       "--k", "40")
    doc = json.loads(out)
    assert code == 1 and doc["cells"][0]["violations"]


def test_usage_errors(capsys):
    assert run(capsys, "expand", "--conj", "iks", "--a", "2", "--K", "4", "--n", "3")[0] == 2
    assert run(capsys, "expand", "--conj", "1", "--m", "1..2", "--n", "1")[0] == 2
    assert run(capsys, "check", "--conj", "1", "--m", "1")[0] == 2
    assert run(capsys, "table1", "--jobs", "0")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["expand", "--format", "xml"])
    assert info.value.code == 2


def test_table1_csv(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, _, _ = run(capsys, "table1", "--m", "1", "--k", "0..7", "--out", str(out))
    assert code == 0
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines == ["m\\k,0,1,2,3,4,5,6,7", "1,0,0,0,0,0,2,2,2"]


def test_table1_marks_missing(capsys):
    code, out, _ = run(capsys, "table1", "--m", "2", "--k", "3..4", "--ceiling", "4")
    assert out.strip().splitlines()[-1] == "2,>4,>4"


def test_determinism_across_jobs(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "table1", "--m", "1..2", "--k", "0..6", "--ceiling", "10", "--jobs", "1", "--out", str(a))
    run(capsys, "table1", "--m", "1..2", "--k", "0..6", "--ceiling", "10", "--jobs", "3", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    # rerun resumes from the checkpoint and writes the same bytes
    run(capsys, "table1", "--m", "1..2", "--k", "0..6", "--ceiling", "10", "--jobs", "2", "--out", str(a))
    assert a.read_bytes() == b.read_bytes()


def test_verify_commands(capsys):
    assert run(capsys, "verify", "--identity", "andrews", "--n-max", "20", "--mode", "exact")[0] == 0
    assert run(capsys, "verify", "--identity", "theorem", "--m", "1", "--n", "3", "--mode", "exact")[0] == 0
    assert run(capsys, "verify", "--identity", "kaneko", "--n-vars", "2", "--n", "0..2")[0] == 0
    assert run(capsys, "verify", "--identity", "general", "--m", "1", "--n", "2", "--a", "2", "--K", "2",
               "--mode", "modular", "--trials", "3")[0] == 0
    assert run(capsys, "verify", "--identity", "theorem")[0] == 2


def test_prime_env_override(capsys, monkeypatch):
    monkeypatch.setenv("BORWEIN_LAB_PRIME", "2305843009213693951")
    code, out, _ = run(capsys, "verify", "--identity", "kaneko", "--n-vars", "2", "--n", "2", "--mode", "modular",
                       "--trials", "2")
    assert code == 0
    assert json.loads(out)["reports"][0]["witness"]["prime"] == "2305843009213693951"
    monkeypatch.setenv("BORWEIN_LAB_PRIME", "1000000007")
    assert run(capsys, "verify", "--identity", "kaneko", "--n-vars", "2", "--n", "2", "--mode", "modular")[0] == 2


def test_counterexamples(capsys):
    code, out, err = run(capsys, "counterexamples", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["reproduced"]
    assert doc["iks_pattern"]["stable_value"] == "1"
    assert doc["control"]["violations"] == []
    assert "wall time" in err and "wall" not in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "borwein_lab", "expand", "--m", "0", "--n", "1", "--format", "csv"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "0,3,1" in res.stdout.splitlines()
