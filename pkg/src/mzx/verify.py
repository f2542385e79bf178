"""One-command acceptance run: every release criterion, measured and named.

Each check compares library output against independently written closed
forms (or structural identities) and reports the worst deviation it saw,
the tolerance it was held to, and how long it took. The whole batch is
deterministic: sampling checks derive their seeds from the request seed.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import EXAMPLE_CONFIG, parse_config_text
from .core import PathPolState, Side, TOL, apply, commutator_norm
from .elements import (
    Channel,
    bs1,
    bs2,
    hwp_on_t,
    mirror,
    path_observable,
    phase_shifter,
    pol_observable,
)
from .models import CheckResult, VerifyRequest, VerifyResponse
from .montecarlo import sample
from .observables import (
    channel_stats,
    context_contrast,
    point_stats,
    sum_rule_residual,
    whole_ensemble_mean,
)
from .runner import derive_row_seed, render_csv, run_experiment
from .scenario import Preparation, emerge

#: Deviations reported on hard structural failures (kept finite for JSON).
HARD_FAIL = 1e6

PHI_GRID = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
ALPHA_GRID = np.linspace(0.0, math.pi, 64, endpoint=False)
MC_PHI_GRID = np.linspace(0.0, 2.0 * math.pi, 5, endpoint=False)
MC_ALPHA_GRID = np.linspace(0.0, math.pi, 5, endpoint=False)


def product_exit_amplitudes(phi: float) -> np.ndarray:
    """Closed-form exit amplitudes for the product preparation."""
    e = cmath.exp(1j * phi)
    return np.array([0.5j * (1.0 + e), 0.0, 0.5 * (1.0 - e), 0.0])


def entangled_exit_amplitudes(phi: float) -> np.ndarray:
    """Closed-form exit amplitudes for the entangled preparation."""
    e = cmath.exp(1j * phi)
    return np.array([0.5j * e, 0.5j, -0.5 * e, 0.5])


def product_sub_means(phi: float, alpha: float) -> tuple[float, float]:
    """Closed-form (t', r') sub-means for the product preparation."""
    c2 = math.cos(2.0 * alpha)
    return (1.0 + math.cos(phi)) * c2 / 2.0, (1.0 - math.cos(phi)) * c2 / 2.0


def entangled_sub_means(phi: float, alpha: float) -> tuple[float, float]:
    """Closed-form (t', r') sub-means for the entangled preparation."""
    value = math.sin(2.0 * alpha) * math.cos(phi) / 2.0
    return value, -value


@dataclass(frozen=True)
class _GridStats:
    """Analytic statistics over the 64x64 acceptance grid for one preparation."""

    sub_t: np.ndarray  # shape (len(PHI_GRID), len(ALPHA_GRID))
    sub_r: np.ndarray
    whole: np.ndarray
    residual: np.ndarray


def _grid_stats(kind: Preparation) -> _GridStats:
    shape = (len(PHI_GRID), len(ALPHA_GRID))
    sub_t, sub_r = np.empty(shape), np.empty(shape)
    whole, residual = np.empty(shape), np.empty(shape)
    for i, phi in enumerate(PHI_GRID):
        state = emerge(kind, float(phi))
        for j, alpha in enumerate(ALPHA_GRID):
            a = float(alpha)
            sub_t[i, j] = channel_stats(state, Channel.T_PRIME, a).sub_mean
            sub_r[i, j] = channel_stats(state, Channel.R_PRIME, a).sub_mean
            whole[i, j] = whole_ensemble_mean(state, a)
            residual[i, j] = abs(whole[i, j] - (sub_t[i, j] + sub_r[i, j]))
    return _GridStats(sub_t, sub_r, whole, residual)


@dataclass
class _Ctx:
    request: VerifyRequest
    product: _GridStats
    entangled: _GridStats


_CheckFn = Callable[[_Ctx], tuple[float, float, str]]


def _check_pipeline_amplitudes(ctx: _Ctx) -> tuple[float, float, str]:
    worst = 0.0
    for phi in PHI_GRID:
        p = float(phi)
        for kind, closed in (
            (Preparation.PRODUCT, product_exit_amplitudes),
            (Preparation.ENTANGLED, entangled_exit_amplitudes),
        ):
            out = emerge(kind, p)
            worst = max(worst, float(np.max(np.abs(out.amps - closed(p)))))
    return TOL, worst, "staged pipeline vs closed-form exit amplitudes, 64 phases x 2 preparations"


def _check_whole_mean_product(ctx: _Ctx) -> tuple[float, float, str]:
    expected = np.cos(2.0 * ALPHA_GRID)[None, :]
    dev = float(np.max(np.abs(ctx.product.whole - expected)))
    spread = float(np.max(ctx.product.whole.max(axis=0) - ctx.product.whole.min(axis=0)))
    return (
        TOL,
        max(dev, spread),
        f"product whole-ensemble mean vs cos(2 alpha) on 64x64 grid; "
        f"max deviation {dev:.2e}, max variation over phi {spread:.2e}",
    )


def _check_whole_mean_entangled(ctx: _Ctx) -> tuple[float, float, str]:
    worst = float(np.max(np.abs(ctx.entangled.whole)))
    return TOL, worst, "entangled whole-ensemble mean vs 0 on 64x64 grid"


def _check_sub_means_product(ctx: _Ctx) -> tuple[float, float, str]:
    cos_phi = np.cos(PHI_GRID)[:, None]
    c2 = np.cos(2.0 * ALPHA_GRID)[None, :]
    worst = max(
        float(np.max(np.abs(ctx.product.sub_t - (1.0 + cos_phi) * c2 / 2.0))),
        float(np.max(np.abs(ctx.product.sub_r - (1.0 - cos_phi) * c2 / 2.0))),
    )
    # Named spot rows at the two canonical phase settings.
    spots = 0.0
    s0 = emerge(Preparation.PRODUCT, 0.0)
    s1 = emerge(Preparation.PRODUCT, math.pi / 2.0)
    for alpha in ALPHA_GRID:
        a = float(alpha)
        c2a = math.cos(2.0 * a)
        spots = max(
            spots,
            abs(channel_stats(s0, Channel.T_PRIME, a).sub_mean - c2a),
            abs(channel_stats(s0, Channel.R_PRIME, a).sub_mean - 0.0),
            abs(channel_stats(s1, Channel.T_PRIME, a).sub_mean - c2a / 2.0),
            abs(channel_stats(s1, Channel.R_PRIME, a).sub_mean - c2a / 2.0),
        )
    return (
        TOL,
        max(worst, spots),
        f"product sub-means vs (1 +/- cos phi) cos(2 alpha)/2 on 64x64 grid; "
        f"spot rows at phi=0 and phi=pi/2 deviate by {spots:.2e}",
    )


def _check_sub_means_entangled(ctx: _Ctx) -> tuple[float, float, str]:
    expected = np.sin(2.0 * ALPHA_GRID)[None, :] * np.cos(PHI_GRID)[:, None] / 2.0
    dev = max(
        float(np.max(np.abs(ctx.entangled.sub_t - expected))),
        float(np.max(np.abs(ctx.entangled.sub_r + expected))),
    )
    antisym = float(np.max(np.abs(ctx.entangled.sub_t + ctx.entangled.sub_r)))
    return (
        TOL,
        max(dev, antisym),
        f"entangled sub-means vs +/- sin(2 alpha) cos(phi)/2 (t' carries +); "
        f"antisymmetry residual {antisym:.2e}",
    )


def _check_sum_rule(ctx: _Ctx) -> tuple[float, float, str]:
    worst = max(
        float(np.max(ctx.product.residual)), float(np.max(ctx.entangled.residual))
    )
    rng = np.random.default_rng(ctx.request.seed)
    for _ in range(1000):
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        state = PathPolState(z / np.linalg.norm(z), Side.OUTPUT)
        worst = max(worst, sum_rule_residual(state, float(rng.uniform(0.0, math.pi))))
    return (
        TOL,
        worst,
        "sub-means add up to the whole-ensemble mean: 64x64 grid x 2 preparations "
        "plus 1000 random output-side states",
    )


def _check_context_contrast(ctx: _Ctx) -> tuple[float, float, str]:
    worst = 0.0
    for alpha in ALPHA_GRID:
        a = float(alpha)
        got = context_contrast(
            Preparation.PRODUCT, Channel.T_PRIME, a, 0.0, math.pi / 2.0
        ).delta_sub_mean
        worst = max(worst, abs(got - math.cos(2.0 * a) / 2.0))
    at_zero = context_contrast(
        Preparation.PRODUCT, Channel.T_PRIME, 0.0, 0.0, math.pi / 2.0
    ).delta_sub_mean
    at_quarter = context_contrast(
        Preparation.PRODUCT, Channel.T_PRIME, math.pi / 4.0, 0.0, math.pi / 2.0
    ).delta_sub_mean
    entangled = context_contrast(
        Preparation.ENTANGLED, Channel.T_PRIME, math.pi / 4.0, 0.0, math.pi / 2.0
    ).delta_sub_mean
    if abs(at_zero) < 0.1:  # must be clearly nonzero, not merely formula-consistent
        worst = max(worst, HARD_FAIL)
    worst = max(worst, abs(at_quarter))
    return (
        TOL,
        worst,
        f"product t' contrast between phi=0 and pi/2 vs cos(2 alpha)/2; "
        f"alpha=0: {at_zero:.6f}, alpha=pi/4: {at_quarter:.2e}, "
        f"entangled alpha=pi/4: {entangled:.6f}",
    )


def _check_path_observable_forms(ctx: _Ctx) -> tuple[float, float, str]:
    rng = np.random.default_rng(ctx.request.seed)
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]])
    sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    eye2, eye4 = np.eye(2), np.eye(4)
    worst = 0.0
    for phi in rng.uniform(0.0, 2.0 * math.pi, size=100):
        m = path_observable(float(phi)).matrix
        pauli = np.kron(-math.sin(phi) * sigma_x + math.cos(phi) * sigma_y, eye2)
        worst = max(worst, float(np.max(np.abs(m - pauli))))
        worst = max(worst, float(np.max(np.abs(m @ m - eye4))))
    for phi, alpha in zip(
        rng.uniform(0.0, 2.0 * math.pi, size=100), rng.uniform(0.0, math.pi, size=100)
    ):
        worst = max(
            worst, commutator_norm(path_observable(float(phi)), pol_observable(float(alpha)))
        )
    return (
        TOL,
        worst,
        "projector-difference form vs Pauli form (100 random phases), involution, "
        "and commutation with the polarization observable (100 random pairs)",
    )


def _mc_excess(err: float, std_err: float) -> float:
    if std_err == 0.0:
        return 0.0 if err <= 1e-15 else HARD_FAIL
    return err / (5.0 * std_err)


def _check_monte_carlo(ctx: _Ctx) -> tuple[float, float, str]:
    shots = ctx.request.shots
    worst = 0.0
    worst_err = 0.0
    cell_index = 0
    for kind in (Preparation.PRODUCT, Preparation.ENTANGLED):
        for phi in MC_PHI_GRID:
            state = emerge(kind, float(phi))
            for alpha in MC_ALPHA_GRID:
                a = float(alpha)
                analytic = point_stats(kind, float(phi), a)
                seed = derive_row_seed(ctx.request.seed, cell_index)
                report = sample(state, a, shots, seed)
                cell_index += 1
                for est, std_err, truth in (
                    (report.est_sub_mean_tprime, report.std_err_sub_mean_tprime,
                     analytic.t_prime.sub_mean),
                    (report.est_sub_mean_rprime, report.std_err_sub_mean_rprime,
                     analytic.r_prime.sub_mean),
                    (report.est_whole_mean, report.std_err_whole_mean,
                     analytic.whole_mean),
                ):
                    err = abs(est - truth)
                    worst_err = max(worst_err, err)
                    worst = max(worst, _mc_excess(err, std_err))
    rerun_state = emerge(Preparation.PRODUCT, float(MC_PHI_GRID[1]))
    first = sample(rerun_state, float(MC_ALPHA_GRID[1]), shots, ctx.request.seed)
    second = sample(rerun_state, float(MC_ALPHA_GRID[1]), shots, ctx.request.seed)
    identical = first == second
    if not identical:
        worst = max(worst, HARD_FAIL)
    return (
        1.0,
        worst,
        f"5x5 grid x 2 preparations at N={shots}: worst |est - analytic| = "
        f"{worst_err:.2e} ({worst:.3f} of the 5 std-err allowance); "
        f"rerun bit-identical: {identical}",
    )


def _check_unitarity_and_norms(ctx: _Ctx) -> tuple[float, float, str]:
    rng = np.random.default_rng(ctx.request.seed)
    ops = [bs1(), hwp_on_t(), mirror(), bs2()]
    ops += [phase_shifter(float(p)) for p in rng.uniform(0.0, 2.0 * math.pi, size=16)]
    eye = np.eye(4)
    worst = 0.0
    for op in ops:
        worst = max(worst, float(np.max(np.abs(op.matrix.conj().T @ op.matrix - eye))))
    for _ in range(1000):
        z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        state = PathPolState(z / np.linalg.norm(z), Side.INPUT)
        for op in ops:
            norm_sq = float(np.sum(apply(op, state).probabilities()))
            worst = max(worst, abs(norm_sq - 1.0))
    return (
        TOL,
        worst,
        f"U^dag U = I for {len(ops)} element instances; norm preserved on "
        f"1000 random states under every element",
    )


def _check_csv_determinism(ctx: _Ctx) -> tuple[float, float, str]:
    request = parse_config_text(EXAMPLE_CONFIG, source="<builtin example>").to_run_request()
    first = render_csv(run_experiment(request))
    second = render_csv(run_experiment(request))
    identical = first == second
    return (
        0.0,
        0.0 if identical else 1.0,
        f"example config run twice: {len(first.splitlines()) - 1} rows, "
        f"{len(first.encode())} bytes, byte-identical: {identical}",
    )


#: (criterion number, name, runtime budget in seconds or None, check function)
CHECKS: tuple[tuple[int, str, float | None, _CheckFn], ...] = (
    (1, "pipeline-amplitudes", 1.0, _check_pipeline_amplitudes),
    (2, "whole-mean-product", None, _check_whole_mean_product),
    (3, "whole-mean-entangled", None, _check_whole_mean_entangled),
    (4, "subensemble-means-product", None, _check_sub_means_product),
    (5, "subensemble-means-entangled", None, _check_sub_means_entangled),
    (6, "sum-rule", None, _check_sum_rule),
    (7, "context-contrast", None, _check_context_contrast),
    (8, "path-observable-forms", None, _check_path_observable_forms),
    (9, "monte-carlo-consistency", 30.0, _check_monte_carlo),
    (10, "unitarity-and-norms", None, _check_unitarity_and_norms),
    (11, "csv-determinism", None, _check_csv_determinism),
)


def run_verification(request: VerifyRequest | None = None) -> VerifyResponse:
    """Run every acceptance check and collect the measured results."""
    req = request if request is not None else VerifyRequest()
    ctx = _Ctx(
        request=req,
        product=_grid_stats(Preparation.PRODUCT),
        entangled=_grid_stats(Preparation.ENTANGLED),
    )
    results: list[CheckResult] = []
    for criterion, name, budget, fn in CHECKS:
        start = time.perf_counter()
        tolerance, worst, detail = fn(ctx)
        seconds = time.perf_counter() - start
        passed = worst <= tolerance
        if budget is not None:
            passed = passed and seconds <= budget
            detail += f"; runtime {seconds:.2f}s (budget {budget:.0f}s)"
        results.append(
            CheckResult(
                criterion=criterion,
                name=name,
                passed=passed,
                tolerance=tolerance,
                worst=worst,
                seconds=seconds,
                detail=detail,
            )
        )
    return VerifyResponse(passed=all(c.passed for c in results), checks=results)
