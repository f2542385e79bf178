"""Acceptance gate: every stated criterion, at its pinned tolerance.

The full verification engine runs once per session at production
defaults (one million shots for the sampling check, pinned seed), and
each criterion is asserted by its own test so a failure names the
check that broke.  Run ``pytest tests/test_acceptance.py -v -s`` to see
the one-line measured result per criterion.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from mzx import cli
from mzx.models import CheckResult, VerifyResponse
from mzx.verify import run_verification

REPO_ROOT = Path(__file__).resolve().parent.parent
EXAMPLE_CFG = REPO_ROOT / "configs" / "example.cfg"


@pytest.fixture(scope="module")
def report() -> VerifyResponse:
    return run_verification()


def check_for(report: VerifyResponse, criterion: int) -> CheckResult:
    check = next(c for c in report.checks if c.criterion == criterion)
    status = "PASS" if check.passed else "FAIL"
    print(
        f"criterion {check.criterion:02d} {check.name}: {status} "
        f"(worst={check.worst:.3e}, tol={check.tolerance:.0e}, {check.seconds:.2f}s)"
    )
    assert check.passed, (
        f"{check.name}: worst={check.worst!r} exceeds tol={check.tolerance!r} :: {check.detail}"
    )
    return check


def test_criterion_01_pipeline_amplitudes(report):
    check = check_for(report, 1)
    assert check.seconds < 1.0


def test_criterion_02_whole_mean_product(report):
    check_for(report, 2)


def test_criterion_03_whole_mean_entangled(report):
    check_for(report, 3)


def test_criterion_04_subensemble_means_product(report):
    check_for(report, 4)


def test_criterion_05_subensemble_means_entangled(report):
    check_for(report, 5)


def test_criterion_06_sum_rule(report):
    check_for(report, 6)


def test_criterion_07_context_contrast(report):
    check_for(report, 7)


def test_criterion_08_path_observable_forms(report):
    check_for(report, 8)


def test_criterion_09_monte_carlo_consistency(report):
    check = check_for(report, 9)
    assert check.seconds < 30.0
    assert "rerun bit-identical: True" in check.detail


def test_criterion_10_unitarity_and_norms(report):
    check_for(report, 10)


def test_criterion_11_csv_determinism(report, tmp_path):
    check_for(report, 11)
    # The same property through the public entry point, on the shipped config.
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["run", "--config", str(EXAMPLE_CFG), "--output", str(first)]) == 0
    assert cli.main(["run", "--config", str(EXAMPLE_CFG), "--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_overall_verdict(report):
    good = sum(1 for check in report.checks if check.passed)
    print(f"overall: {'PASS' if report.passed else 'FAIL'} ({good}/{len(report.checks)} checks)")
    assert report.passed
    assert good == len(report.checks) == 11
