import csv
import io
import json

import pytest

from lcslab.cli import main, parse_m


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_m():
    assert parse_m("5") == [5]
    assert parse_m("2..4") == [2, 3, 4]
    assert parse_m("2,4") == [2, 4]


def test_hilbert_csv(capsys):
    code, out, _ = run(capsys, "hilbert", "--n", "2", "--m", "2", "--maxdeg", "4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["n", "m", "multidegree", "dim"]
    assert {r["multidegree"]: int(r["dim"]) for r in rows}["1;1"] == 1


def test_hilbert_total_degree_three(capsys):
    code, out, _ = run(capsys, "hilbert", "--n", "3", "--m", "3", "--maxdeg", "3", "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert sum(r["dim"] for r in recs if sum(r["d"]) == 3) == 8


def test_hilbert_below_degree_is_zero(capsys):
    code, out, _ = run(capsys, "hilbert", "--n", "2", "--m", "7", "--maxdeg", "6", "--format", "json")
    assert code == 0
    assert all(json.loads(line)["dim"] == 0 for line in out.splitlines())


def test_output_reproducible(capsys, isolated_cache):
    argv = ("hilbert", "--n", "2", "--m", "2..4", "--maxdeg", "6", "--format", "csv")
    _, cold, _ = run(capsys, *argv)
    assert isolated_cache.exists()
    _, warm, _ = run(capsys, *argv)
    _, nocache, _ = run(capsys, *argv, "--no-cache")
    assert cold == warm == nocache


def test_decompose_golden(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "2", "--m", "4", "--maxdeg", "12", "--golden")
    assert code == 0
    assert "(3,1)+(3,2)" in out and "PASS" in out


def test_decompose_minimal(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "2", "--m", "2", "--maxdeg", "3")
    assert code == 0 and "(1,1)" in out and "degree 3" in out


def test_decompose_truncation_too_low(capsys):
    code, _, err = run(capsys, "decompose", "--n", "2", "--m", "5", "--maxdeg", "6")
    assert code == 1 and "truncation" in err


def test_rational_mode(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "2", "--m", "3", "--maxdeg", "6", "--rational", "--format", "json")
    assert code == 0
    assert json.loads(out)["factors"] == [{"lambda": [2, 1], "mult": 1}]


@pytest.mark.parametrize("argv", [
    ("hilbert", "--n", "2", "--m", "2", "--maxdeg", "4", "--prime", "1000003"),
    ("hilbert", "--n", "2", "--m", "2", "--maxdeg", "4", "--prime", "9", "--prime", "7"),
    ("hilbert", "--n", "2", "--m", "2", "--maxdeg", "40"),
    ("hilbert", "--n", "2", "--maxdeg", "4"),
    ("hilbert", "--n", "2", "--m", "0..2", "--maxdeg", "4"),
])
def test_bad_config_exit_one(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(list(argv))
        raise SystemExit(code)
    assert exc.value.code == 1


def test_verify_spanning(capsys):
    code, out, _ = run(capsys, "verify", "spanning", "--n", "2", "--m", "3", "--maxdeg", "7")
    assert code == 0 and "overall: PASS" in out


def test_verify_b3(capsys):
    code, out, _ = run(capsys, "verify", "b3", "--n", "4")
    assert code == 0
    assert "b3_structure_n4" in out and "multilinear_b3_n4" in out


def test_verify_identities_reports_exact_failure(capsys):
    code, out, _ = run(capsys, "verify", "identities", "--format", "json")
    recs = {r["check"]: r for r in map(json.loads, out.splitlines())}
    assert recs["lemma31"]["ok"] and recs["lemma35a"]["ok"] and recs["lemma52"]["ok"]
    assert recs["lemma35b_mod_L4"]["ok"]
    assert code == (0 if recs["lemma35b"]["ok"] else 2)


def test_verify_conjectures_never_fail(capsys):
    code, out, _ = run(capsys, "verify", "conjectures", "--n", "2", "--m", "3..5", "--maxdeg", "9")
    assert code == 0


def test_fallback_backend_end_to_end(tmp_path):
    import os
    import subprocess
    import sys

    env = dict(os.environ, LCSLAB_PURE_PYTHON="1", LCSLAB_CACHE=str(tmp_path / "c.jsonl"))
    argv = [sys.executable, "-m", "lcslab", "decompose", "--n", "2", "--m", "2..5", "--maxdeg", "9", "--format", "json"]
    pure = subprocess.run(argv, env=env, capture_output=True, text=True, check=True).stdout
    env.pop("LCSLAB_PURE_PYTHON")
    env["LCSLAB_CACHE"] = str(tmp_path / "d.jsonl")
    compiled = subprocess.run(argv, env=env, capture_output=True, text=True, check=True).stdout
    assert pure == compiled
    assert '"lambda":[4,3]' in pure
