"""Command-line workflows: generate, re-verify, tamper, reproduce."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from symsos.cli import main


def _run(argv, capsysbinary):
    code = main(argv)
    out = capsysbinary.readouterr().out
    return code, (json.loads(out) if out else None), out


def _gen(tmp_path, name, argv):
    path = tmp_path / name
    code = main(argv + ["--out", str(path)])
    return code, path


@pytest.mark.parametrize("n,k,r", [(6, 1, "3/2"), (4, 0, "1/3"), (9, 3, "10/3"), (40, 2, "5/2")])
def test_refutation_round_trip(tmp_path, capsysbinary, n, k, r):
    code, path = _gen(tmp_path, "cert.json", ["refute-knapsack", "--n", str(n), "--k", str(k), "--r", r])
    assert code == 0
    code, rep, _ = _run(["verify-cert", str(path)], capsysbinary)
    assert code == 0 and rep["ok"]
    assert rep["outputs"]["degree"] == 2 * k + 4


@given(st.integers(1, 12), st.integers(0, 4), st.sampled_from(["1/3", "1/2", "2/3", "1/7"]))
@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
def test_every_generated_refutation_verifies(tmp_path, capsysbinary, n, k, frac):
    if 2 * k > n:
        return
    r = f"{k * int(frac[2:]) + 1}/{frac[2:]}" if frac.startswith("1/") else f"{3 * k + 2}/3"
    code, path = _gen(tmp_path, "fuzz.json", ["refute-knapsack", "--n", str(n), "--k", str(k), "--r", r])
    assert code == 0
    code, rep, _ = _run(["verify-cert", str(path)], capsysbinary)
    assert code == 0 and rep["ok"]
    assert rep["outputs"]["degree"] <= 2 * k + 4


def test_tampered_certificate_fails(tmp_path, capsysbinary):
    _, path = _gen(tmp_path, "cert.json", ["refute-knapsack", "--n", "6", "--k", "1", "--r", "3/2"])
    data = json.loads(path.read_text())
    data["certificate"]["g_list"][0]["terms"][0][1]["num"] = "12345"
    path.write_text(json.dumps(data))
    code, rep, _ = _run(["verify-cert", str(path)], capsysbinary)
    assert code == 1 and not rep["ok"]
    data["certificate"]["b"] = {"num": "x", "den": "1"}
    path.write_text(json.dumps(data))
    code, rep, _ = _run(["verify-cert", str(path)], capsysbinary)
    assert code == 1


def test_half_point_sum_report(capsysbinary):
    code, rep, _ = _run(["appendix-d", "--m", "1"], capsysbinary)
    assert code == 0
    assert rep["outputs"]["A"] == {"num": "5", "den": "4"}


def test_reports_are_byte_identical(capsysbinary):
    argv = ["grigoriev", "--n", "8", "--r", "5/2", "--k", "2", "--trials", "10", "--seed", "4"]
    _, _, first = _run(argv, capsysbinary)
    _, _, second = _run(argv, capsysbinary)
    assert first == second and first


@pytest.mark.parametrize(
    "gen",
    [
        ["middle-poly", "--n", "64", "--eps", "1/8", "--a-sq", "1"],
        ["blekherman", "--n", "5", "--t", "2", "--seed", "2", "--trials", "3"],
        ["pseudo-density", "--n", "5"],
        ["witness-check", "--n", "3", "--delta", "1/8"],
        ["sampling-approx", "--n", "20", "--k", "4", "--delta", "1/8"],
    ],
)
def test_generators_round_trip(tmp_path, capsysbinary, gen):
    code, path = _gen(tmp_path, "c.json", gen)
    assert code == 0
    code, rep, _ = _run(["verify-cert", str(path)], capsysbinary)
    assert code == 0 and rep["ok"], rep


def test_witness_check_reports_failure_for_large_delta(capsysbinary):
    code, rep, _ = _run(["witness-check", "--n", "3", "--delta", "1/5"], capsysbinary)
    assert code == 1 and not rep["checks"]["correlation_exceeds_delta"]


def test_other_commands(capsysbinary):
    for argv in (
        ["spectrum", "--n", "6", "--t", "2"],
        ["simulate-main", "--n", "8", "--k", "1", "--eps", "1/4"],
        ["appendix-d", "--n", "11"],
    ):
        code, rep, _ = _run(argv, capsysbinary)
        assert code == 0 and rep["ok"] and rep["claim"]


def test_usage_errors(tmp_path, capsysbinary):
    assert main(["refute-knapsack", "--n", "6"]) == 2
    assert main(["refute-knapsack", "--n", "6", "--k", "1", "--r", "1/0"]) == 2
    assert main(["refute-knapsack", "--n", "6", "--k", "1", "--r", "2"]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["verify-cert", str(tmp_path / "missing.json")]) == 2
    assert main(["middle-poly", "--n", "9", "--eps", "1/4"]) == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "a.json"
    proc = subprocess.run(
        [sys.executable, "-m", "symsos", "appendix-d", "--m", "2", "--out", str(out)], capture_output=True
    )
    assert proc.returncode == 0
    assert json.loads(out.read_text())["outputs"]["A"] == {"num": "89", "den": "64"}
