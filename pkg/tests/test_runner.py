"""Batch runner rows, summaries, per-row seeds, and the CSV renderer."""

from __future__ import annotations

import math

import pytest
from pydantic import ValidationError

from mzx.core import TOL
from mzx.models import RunRequest, SweepSpec
from mzx.montecarlo import DEFAULT_SEED, sample
from mzx.runner import csv_columns, derive_row_seed, render_csv, run_experiment
from mzx.scenario import Preparation, emerge

HALF_PI = math.pi / 2.0


def analytic_request(**overrides) -> RunRequest:
    fields = dict(preparation="product", phi=[0.0, HALF_PI], alpha=[0.0])
    fields.update(overrides)
    return RunRequest(**fields)


def test_product_reference_rows():
    response = run_experiment(analytic_request())
    by_phi = {round(row.phi, 12): row for row in response.rows}
    assert by_phi[0.0].sub_mean_tprime == pytest.approx(1.0, abs=TOL)
    assert by_phi[0.0].sub_mean_rprime == pytest.approx(0.0, abs=TOL)
    assert by_phi[round(HALF_PI, 12)].sub_mean_tprime == pytest.approx(0.5, abs=TOL)
    assert by_phi[round(HALF_PI, 12)].sub_mean_rprime == pytest.approx(0.5, abs=TOL)


def test_entangled_reference_row():
    request = RunRequest(preparation="entangled", phi=[0.0], alpha=[math.pi / 4.0])
    (row,) = run_experiment(request).rows
    assert row.sub_mean_tprime == pytest.approx(0.5, abs=TOL)
    assert row.sub_mean_rprime == pytest.approx(-0.5, abs=TOL)
    assert row.whole_mean == pytest.approx(0.0, abs=TOL)


def test_single_point_gives_single_row():
    request = RunRequest(
        preparation="product",
        phi=SweepSpec(start=0.3, stop=9.9, steps=1),
        alpha=[1.0],
    )
    response = run_experiment(request)
    assert response.summary.rows == 1
    assert len(response.rows) == 1
    assert response.rows[0].phi == 0.3


def test_rows_are_phi_major_in_grid_order():
    request = RunRequest(preparation="product", phi=[0.0, 1.0], alpha=[0.0, 0.5])
    grid = [(row.phi, row.alpha) for row in run_experiment(request).rows]
    assert grid == [(0.0, 0.0), (0.0, 0.5), (1.0, 0.0), (1.0, 0.5)]


def test_sampling_rows_use_derived_consecutive_seeds():
    request = analytic_request(mode="both", shots=2000, seed=100, alpha=[0.0, 0.2])
    response = run_experiment(request)
    assert [row.seed for row in response.rows] == [100, 101, 102, 103]
    assert derive_row_seed(2**64 - 1, 1) == 0  # wraps at 64 bits


def test_sampling_rows_match_direct_sampling():
    request = RunRequest(
        preparation="entangled", phi=[0.9], alpha=[0.3], mode="montecarlo",
        shots=5000, seed=77, block_size=1024,
    )
    (row,) = run_experiment(request).rows
    report = sample(emerge(Preparation.ENTANGLED, 0.9), 0.3, 5000, 77, 1024)
    assert row.est_sub_mean_tprime == report.est_sub_mean_tprime
    assert row.est_whole_mean == report.est_whole_mean
    assert row.std_err_whole_mean == report.std_err_whole_mean


def test_default_seed_applies_when_unset():
    request = analytic_request(mode="both", shots=100)
    response = run_experiment(request)
    assert response.rows[0].seed == DEFAULT_SEED


def test_analytic_rows_have_no_sampling_columns():
    response = run_experiment(analytic_request())
    for row in response.rows:
        assert row.est_whole_mean is None
        assert row.seed is None


def test_summary_diagnostics_stay_tiny():
    request = RunRequest(
        preparation="entangled",
        phi=SweepSpec(start=0.0, stop=2.0 * math.pi, steps=9),
        alpha=[0.0, 0.6, 1.2],
    )
    summary = run_experiment(request).summary
    assert summary.rows == 27
    assert summary.max_sum_rule_residual <= TOL
    assert summary.max_whole_mean_phi_variation <= TOL


def test_shots_required_for_sampling_modes():
    with pytest.raises(ValidationError):
        analytic_request(mode="montecarlo")


# --- CSV ----------------------------------------------------------------------


def test_csv_header_and_na_cells():
    text = render_csv(run_experiment(analytic_request()))
    lines = text.splitlines()
    assert lines[0] == ",".join(csv_columns("analytic"))
    assert lines[0].startswith("preparation,phi,alpha,p_tprime,p_rprime,sub_mean_tprime")
    phi_zero_row = lines[1].split(",")
    assert phi_zero_row[0] == "product"
    assert phi_zero_row[8] == "NA"  # empty r' channel: undefined conditional mean
    assert text.endswith("\n") and not text.endswith("\n\n")


def test_csv_sampling_modes_add_estimator_columns():
    for mode in ("montecarlo", "both"):
        response = run_experiment(analytic_request(mode=mode, shots=500, seed=1))
        header = render_csv(response).splitlines()[0]
        assert header.endswith(
            "est_sub_mean_tprime,est_sub_mean_rprime,est_whole_mean,"
            "std_err_sub_mean_tprime,std_err_sub_mean_rprime,std_err_whole_mean,seed"
        )


def test_csv_floats_round_trip_exactly():
    response = run_experiment(
        RunRequest(preparation="entangled", phi=[1.1], alpha=[0.37], mode="both",
                   shots=400, seed=5)
    )
    (row,) = response.rows
    cells = render_csv(response).splitlines()[1].split(",")
    columns = list(csv_columns("both"))
    assert float(cells[columns.index("sub_mean_tprime")]) == row.sub_mean_tprime
    assert float(cells[columns.index("whole_mean")]) == row.whole_mean
    assert float(cells[columns.index("est_whole_mean")]) == row.est_whole_mean
    assert int(cells[columns.index("seed")]) == 5


def test_csv_rendering_is_deterministic():
    request = analytic_request(mode="both", shots=1500, seed=8)
    assert render_csv(run_experiment(request)) == render_csv(run_experiment(request))
