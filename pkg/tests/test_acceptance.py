"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Every criterion is driven through the command-line entry point so that the
checked behaviour is exactly what a user can reproduce by hand.  Run with
``pytest tests/test_acceptance.py`` or directly as a script.
"""

from __future__ import annotations

import io
import json
import sys
import time
from contextlib import redirect_stdout

import pytest

from fockqsp.cli import main

C_CONFIGS = [("C", 5), ("C", 7), ("C", 8)]
B_ODD = [("B_INT", 5), ("B_INT", 7), ("B_HALF", 5), ("B_HALF", 7)]
B_EVEN = [(f, ell) for f in ("B_INT", "B_HALF") for ell in (8, 10, 14)]
RELATION_CONFIGS = C_CONFIGS + B_ODD + B_EVEN


def cli(*argv: str) -> tuple[int, str]:
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main([str(a) for a in argv])
    return code, buf.getvalue()


def cli_json(*argv: str) -> tuple[int, dict]:
    code, out = cli(*argv)
    return code, json.loads(out)


def report(capsys, number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> None:
    status = "PASS" if ok and elapsed < limit else "FAIL"
    bound = f"limit {limit:.0f} s" if limit != float("inf") else "no time limit"
    line = f"criterion {number:>2} {status}  {title}  ({elapsed:.1f} s, {bound})"
    if detail:
        line += f"  {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_relations(capsys):
    bad, instances = [], 0
    with Timer() as t:
        for family, ell in RELATION_CONFIGS:
            code, rep = cli_json("check-relations", "--family", family, "--ell", ell, "--samples", 100, "--width", 40)
            instances += rep["instances"]
            if code != 0 or rep["failures"] or rep["evaluations"] != 100 * rep["instances"]:
                bad.append((family, ell, rep["failures"][:1]))
    ok = not bad
    report(capsys, 1, "relation suite, 13 configurations", ok, t.elapsed, 120, f"{instances} instances x 100 samples")
    assert ok, bad
    assert t.elapsed < 120


def test_criterion_02_typeA(capsys):
    with Timer() as t:
        code, rep = cli_json("check-relations", "--type-a", "--modulus", 5, "--charges", "0,3", "--samples", 100, "--width", 40)
    ok = code == 0 and not rep["failures"] and rep["evaluations"] == 200 * rep["instances"]
    report(capsys, 2, "type A relations, l=5, charges 0 and 3", ok, t.elapsed, 20, f"{rep['instances']} instances")
    assert ok, rep["failures"]
    assert t.elapsed < 20


def test_criterion_03_identities(capsys):
    bad, checked = [], 0
    with Timer() as t:
        for family, ell in RELATION_CONFIGS:
            code, rep = cli_json(
                "check-relations", "--family", family, "--ell", ell, "--identities", "--samples", 200, "--width", 40
            )
            for item in rep["identities"]:
                checked += 1
                if not item["ok"] or item["checked"] != 200:
                    bad.append((family, ell, item))
            if code != 0:
                bad.append((family, ell, "exit"))
    ok = not bad
    report(capsys, 3, "type A expressions of B and L", ok, t.elapsed, 30, f"{checked} operators x 200 samples")
    assert ok, bad
    assert t.elapsed < 30


def _grid(configs, limit_for) -> tuple[list, int]:
    bad, total = [], 0
    for family, rank, ell in configs:
        code, rep = cli_json(
            "check-theorems", "--family", family, "--rank", rank, "--ell", ell, "--max-coord", limit_for(family)
        )
        total += rep["total"]
        if code != 0 or rep["failures"] or rep["pass"] != rep["total"] or rep["total"] == 0:
            bad.append((family, rank, ell, rep["failures"][:1]))
    return bad, total


def test_criterion_04_type_C_grid(capsys):
    configs = [("C", n, ell) for n in (3, 4) for ell in (5, 8)]
    with Timer() as t:
        bad, total = _grid(configs, lambda f: 6)
    ok = not bad
    report(capsys, 4, "type C theorem grid", ok, t.elapsed, 60, f"{total} weights")
    assert ok, bad
    assert t.elapsed < 60


def test_criterion_05_type_B_grid(capsys):
    configs = [(f, n, ell) for f in ("B_INT", "B_HALF") for n in (2, 3) for ell in (5, 7, 8)]
    with Timer() as t:
        bad, total = _grid(configs, lambda f: "11/2" if f == "B_INT" else 5)
    ok = not bad
    report(capsys, 5, "type B theorem grids", ok, t.elapsed, 120, f"{total} weights")
    assert ok, bad
    assert t.elapsed < 120


def test_criterion_06_lemma_conformance(capsys):
    types = [("C", 3)] + [(f, n) for f in ("B_INT", "B_HALF") for n in (2, 3)]
    bad, checked, implications = [], 0, 0
    with Timer() as t:
        for family, rank in types:
            for ell in (5, 7, 8):
                code, rep = cli_json(
                    "linkage", "--family", family, "--rank", rank, "--ell", ell, "--lemmas", "--max-shifted", 8
                )
                checked += rep["checked"]
                implications += rep["implications"]
                if code != 0 or rep["mismatches"]:
                    bad.append((family, rank, ell, rep["mismatches"][:1]))
    ok = not bad and checked > 0 and implications > 0
    detail = f"{checked} two-sided, {implications} one-sided"
    report(capsys, 6, "linkage lemma conformance", ok, t.elapsed, 120, detail)
    assert ok, bad
    assert t.elapsed < 120


def test_criterion_07_cross_validation(capsys):
    configs = [(f, 3, ell) for f in ("C", "B_INT", "B_HALF") for ell in (5, 7, 8)]
    bad, linked = [], 0
    with Timer() as t:
        for family, rank, ell in configs:
            code, rep = cli_json(
                "linkage", "--family", family, "--rank", rank, "--ell", ell,
                "--cross-check", "--pairs", 500, "--seed", 42, "--max-coord", 3,
            )
            linked += rep["linked_pairs"]
            if code != 0 or rep["disagreements"] or rep["measure_violations"] or rep["pairs"] != 500:
                bad.append((family, ell, rep["disagreements"][:1]))
    ok = not bad
    report(capsys, 7, "canonical form vs orbit search", ok, t.elapsed, 60, f"9 x 500 pairs, {linked} linked")
    assert ok, bad
    assert t.elapsed < 60


def test_criterion_08_tensor_oracle(capsys):
    types = [("C", 3)] + [(f, n) for f in ("B_INT", "B_HALF") for n in (2, 3)]
    bad, total = [], 0
    with Timer() as t:
        for family, rank in types:
            bound = "9/2" if family == "B_INT" else 4
            code, rep = cli_json(
                "check-theorems", "--family", family, "--rank", rank, "--ell", 5, "--max-coord", bound, "--tensor-oracle"
            )
            total += rep["total"]
            if code != 0 or rep["failures"]:
                bad.append((family, rank, rep["failures"][:1]))
    ok = not bad
    report(capsys, 8, "tensor rule vs characters", ok, t.elapsed, 60, f"{total} weights")
    assert ok, bad
    assert t.elapsed < 60


def test_criterion_09_stabilization(capsys):
    bad, total = [], 0
    with Timer() as t:
        for family in ("C", "B_INT", "B_HALF"):
            for k in (1, 2):
                code, rep = cli_json(
                    "check-iterated", "--family", family, "--ell", 5, "--charge", k,
                    "--reps", 2, "--samples", 50, "--width", 20, "--seed", 42,
                )
                total += rep["total"]
                if code != 0 or rep["failures"]:
                    bad.append((family, k, rep["failures"][:1]))
    ok = not bad
    report(capsys, 9, "iterated sums at the stabilized rank", ok, t.elapsed, 120, f"{total} runs")
    assert ok, bad
    assert t.elapsed < 120


DETERMINISM_RUNS = [
    ["check-relations", "--family", "C", "--ell", 5, "--samples", 100, "--width", 40, "--seed", 7],
    ["check-relations", "--type-a", "--modulus", 5, "--samples", 50, "--seed", 7],
    ["check-relations", "--family", "B_HALF", "--ell", 10, "--identities", "--samples", 50, "--seed", 7],
    ["check-theorems", "--family", "B_HALF", "--rank", 2, "--ell", 7, "--max-coord", 3],
    ["linkage", "--family", "B_INT", "--rank", 3, "--ell", 8, "--cross-check", "--pairs", 200, "--seed", 7],
    ["linkage", "--family", "C", "--rank", 3, "--ell", 5, "--lemmas", "--max-shifted", 6],
    ["check-iterated", "--family", "B_HALF", "--ell", 5, "--charge", 1, "--reps", 2, "--samples", 10, "--seed", 7],
]


def test_criterion_10_determinism(capsys):
    differing = []
    with Timer() as t:
        for argv in DETERMINISM_RUNS:
            first, second = cli(*argv), cli(*argv)
            if first != second or first[0] != 0:
                differing.append(argv[0])
    ok = not differing
    report(capsys, 10, "byte-identical reruns", ok, t.elapsed, float("inf"), f"{len(DETERMINISM_RUNS)} suites")
    assert ok, differing


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
