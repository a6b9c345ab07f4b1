import json
import os
import subprocess
import sys

import pytest

from fockqsp.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunConfig, UsageError, main, threads
from fockqsp.weights import Family


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_example(capsys):
    code, out, _ = run(capsys, "decompose", "--family", "C", "--rank", "3", "--ell", "5", "--weight", "0,0,0")
    assert code == EXIT_OK
    assert json.loads(out) == {"summands": [{"weight": [1, 0, 0], "mult": 1}]}


def test_decompose_with_coefficients(capsys):
    code, out, _ = run(
        capsys, "decompose", "--family", "B_HALF", "--rank", "2", "--ell", "5", "--weight", "1,0", "--coefficients"
    )
    got = {tuple(s["weight"]): s["mult"] for s in json.loads(out)["summands"]}
    assert code == EXIT_OK and got == {(2, 0): 1, (1, 1): 1, (0, 0): 1}


def test_act_examples(capsys):
    base = ["act", "--family", "C", "--rank", "3", "--ell", "5", "--op", "B", "--weight", "0,0,0"]
    code, out, _ = run(capsys, *base, "--pbar", "7/2")
    assert code == EXIT_OK and json.loads(out)["terms"] == []
    code, out, _ = run(capsys, *base, "--pbar", "3/2")
    (term,) = json.loads(out)["terms"]
    assert term["weight"] == [1, 0, 0] and term["coeff"] == [[0, 1]]


def test_linkage_example(capsys):
    code, out, _ = run(capsys, "linkage", "--family", "C", "--rank", "3", "--ell", "5", "--lhs", "4,1,0", "--rhs", "5,0,0")
    assert code == EXIT_OK and json.loads(out)["linked"] is True
    code, out, _ = run(capsys, "linkage", "--family", "C", "--rank", "3", "--ell", "5", "--lhs", "4,1,0", "--rhs", "3,1,0")
    assert json.loads(out)["linked"] is False


def test_check_relations_exit_code(capsys):
    code, out, _ = run(capsys, "check-relations", "--index", "H", "--modulus", "5", "--samples", "12", "--width", "14")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["failures"] == [] and rep["instances"] > 0


def test_check_theorems_report(capsys):
    code, out, _ = run(capsys, "check-theorems", "--family", "C", "--rank", "3", "--ell", "5", "--max-coord", "2")
    assert code == EXIT_OK and json.loads(out) == {"total": 10, "pass": 10, "failures": []}


def test_check_iterated_and_stabilize(capsys):
    code, out, _ = run(capsys, "check-iterated", "--family", "C", "--ell", "5", "--reps", "1", "--samples", "3", "--width", "10")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "stabilize", "--family", "C", "--ell", "5", "--below", "-2", "--ones=-1,0,1")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["shift"] == 1 and rep["weight"] == [1, 1, 1, 0, 0]


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--index", "H", "--modulus", "5", "--pbar", "5/2")
    assert code == EXIT_OK and "FIXED" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["decompose", "--family", "C", "--rank", "3", "--ell", "3", "--weight", "0,0,0"],
        ["decompose", "--family", "B_INT", "--rank", "2", "--ell", "6", "--weight", "1/2,1/2"],
        ["decompose", "--family", "C", "--rank", "3", "--ell", "5", "--weight", "0,1,0"],
        ["check-relations", "--index", "H", "--modulus", "3"],
        ["act", "--family", "C", "--rank", "3", "--ell", "5", "--op", "B", "--weight", "0,0,0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE and err


def test_human_output(capsys):
    code, out, _ = run(capsys, "--human", "decompose", "--family", "C", "--rank", "3", "--ell", "5", "--weight", "0,0,0")
    assert code == EXIT_OK and not out.lstrip().startswith("{") and "mult" in out


def test_output_file(capsys, tmp_path):
    target = tmp_path / "out.json"
    run(capsys, "decompose", "--family", "C", "--rank", "3", "--ell", "5", "--weight", "1,0,0", "--output", str(target))
    assert json.loads(target.read_text())["summands"]


def test_byte_stable(capsys):
    argv = ["linkage", "--family", "C", "--rank", "3", "--ell", "5", "--cross-check", "--pairs", "20", "--seed", "3"]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(Family.C, 3, 3)
    with pytest.raises(ValueError):
        RunConfig(Family.B_HALF, 2, 6)
    with pytest.raises(UsageError):
        RunConfig(Family.C, 3, 5, width=99)
    assert issubclass(UsageError, ValueError) and EXIT_FAIL == 1


def test_threads_env(monkeypatch):
    monkeypatch.setenv("FOCKQSP_THREADS", "1")
    assert threads() == 1
    monkeypatch.setenv("FOCKQSP_THREADS", "100000")
    assert threads() == (os.cpu_count() or 1)


def test_module_entry_point_with_threads():
    env = dict(os.environ, FOCKQSP_THREADS="2")
    argv = [sys.executable, "-m", "fockqsp", "check-theorems", "--family", "B_HALF", "--rank", "2", "--ell", "5", "--max-coord", "2"]
    a = subprocess.run(argv, capture_output=True, env=env, check=True).stdout
    b = subprocess.run(argv, capture_output=True, env=dict(os.environ, FOCKQSP_THREADS="1"), check=True).stdout
    assert a == b and json.loads(a)["failures"] == []
