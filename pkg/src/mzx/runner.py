"""Grid runner for batch requests, plus the deterministic CSV renderer.

Rows are emitted in grid order: phi-major, then alpha. In sampling modes
row ``i`` (in that order) uses seed ``(base_seed + i) mod 2**64``, so every
row's counts are reproducible in isolation. Floats are printed with 17
significant digits (round-trip exact for doubles) and undefined conditional
means as the literal ``NA``; identical requests therefore render
byte-identical CSV.
"""

from __future__ import annotations

from .elements import Channel
from .models import ResultRow, RunRequest, RunResponse, RunSummary
from .montecarlo import DEFAULT_SEED, sample
from .observables import channel_stats, check_sum_rule, whole_ensemble_mean
from .scenario import Preparation, emerge

_BASE_COLUMNS = (
    "preparation",
    "phi",
    "alpha",
    "p_tprime",
    "p_rprime",
    "sub_mean_tprime",
    "sub_mean_rprime",
    "cond_mean_tprime",
    "cond_mean_rprime",
    "whole_mean",
    "sum_rule_residual",
)
_SAMPLING_COLUMNS = (
    "est_sub_mean_tprime",
    "est_sub_mean_rprime",
    "est_whole_mean",
    "std_err_sub_mean_tprime",
    "std_err_sub_mean_rprime",
    "std_err_whole_mean",
    "seed",
)


def derive_row_seed(base_seed: int, row_index: int) -> int:
    """Per-row sampling seed: base plus grid-order row index, mod 2**64."""
    return (base_seed + row_index) % 2**64


def run_experiment(request: RunRequest) -> RunResponse:
    """Evaluate every (phi, alpha) grid point of the request, in grid order."""
    kind = Preparation(request.preparation)
    phis = request.phi_values()
    alphas = request.alpha_values()
    sampling = request.mode != "analytic"
    base_seed = request.seed if request.seed is not None else DEFAULT_SEED

    rows: list[ResultRow] = []
    max_residual = 0.0
    whole_by_alpha: list[list[float]] = [[] for _ in alphas]
    for phi in phis:
        state = emerge(kind, phi)
        for alpha_index, alpha in enumerate(alphas):
            t = channel_stats(state, Channel.T_PRIME, alpha)
            r = channel_stats(state, Channel.R_PRIME, alpha)
            whole = whole_ensemble_mean(state, alpha)
            residual = check_sum_rule(whole, t.sub_mean, r.sub_mean)
            max_residual = max(max_residual, residual)
            whole_by_alpha[alpha_index].append(whole)
            row = ResultRow(
                preparation=request.preparation,
                phi=phi,
                alpha=alpha,
                p_tprime=t.probability,
                p_rprime=r.probability,
                sub_mean_tprime=t.sub_mean,
                sub_mean_rprime=r.sub_mean,
                cond_mean_tprime=t.cond_mean,
                cond_mean_rprime=r.cond_mean,
                whole_mean=whole,
                sum_rule_residual=residual,
            )
            if sampling:
                assert request.shots is not None  # enforced by RunRequest
                report = sample(
                    state,
                    alpha,
                    request.shots,
                    derive_row_seed(base_seed, len(rows)),
                    request.block_size,
                )
                row = row.model_copy(
                    update=dict(
                        est_sub_mean_tprime=report.est_sub_mean_tprime,
                        est_sub_mean_rprime=report.est_sub_mean_rprime,
                        est_whole_mean=report.est_whole_mean,
                        std_err_sub_mean_tprime=report.std_err_sub_mean_tprime,
                        std_err_sub_mean_rprime=report.std_err_sub_mean_rprime,
                        std_err_whole_mean=report.std_err_whole_mean,
                        seed=report.seed,
                    )
                )
            rows.append(row)

    variation = max(
        (max(values) - min(values) for values in whole_by_alpha if values),
        default=0.0,
    )
    summary = RunSummary(
        rows=len(rows),
        max_sum_rule_residual=max_residual,
        max_whole_mean_phi_variation=variation,
    )
    return RunResponse(
        preparation=request.preparation, mode=request.mode, rows=rows, summary=summary
    )


def _format_cell(value: object) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def csv_columns(mode: str) -> tuple[str, ...]:
    """Column names for a mode ('montecarlo'/'both' add the sampling columns)."""
    return _BASE_COLUMNS if mode == "analytic" else _BASE_COLUMNS + _SAMPLING_COLUMNS


def render_csv(response: RunResponse) -> str:
    """Render a response as deterministic long-format CSV (newline line ends)."""
    columns = csv_columns(response.mode)
    lines = [",".join(columns)]
    for row in response.rows:
        lines.append(",".join(_format_cell(getattr(row, name)) for name in columns))
    return "\n".join(lines) + "\n"
