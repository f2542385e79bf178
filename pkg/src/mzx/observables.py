"""Whole-ensemble and per-exit-channel polarization statistics.

The load-bearing quantity is the *unnormalized* channel mean: the
expectation of (channel projector) x (polarization observable). Unlike the
conditional mean it never divides by a channel probability, so the two
channels' values add up exactly to the whole-ensemble mean. That sum rule
is enforced (not just reported) everywhere stats are computed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ConsistencyError, ElementOp, PathPolState, Side, TOL, expectation
from .elements import (
    Channel,
    PhaseShift,
    PolarizerAngle,
    as_phase,
    as_polarizer,
    channel_projector,
    pol_observable,
)
from .scenario import Preparation, emerge

#: Channel probabilities below this are treated as empty (conditional mean undefined).
EMPTY_CHANNEL_PROB = 1e-15


@dataclass(frozen=True)
class ChannelStats:
    """Polarization statistics of one exit channel.

    ``sub_mean`` is the unnormalized channel mean; ``cond_mean`` is
    ``sub_mean / probability``, or ``None`` when the channel is empty.
    """

    channel: Channel
    probability: float
    sub_mean: float
    cond_mean: float | None


@dataclass(frozen=True)
class ContextContrast:
    """Change of one channel's sub_mean between two phase settings."""

    preparation: Preparation
    channel: Channel
    alpha: float
    phi_a: float
    phi_b: float
    delta_sub_mean: float


@dataclass(frozen=True)
class PointStats:
    """Every analytic statistic of one (preparation, phi, alpha) run."""

    preparation: Preparation
    phi: float
    alpha: float
    t_prime: ChannelStats
    r_prime: ChannelStats
    whole_mean: float
    sum_rule_residual: float


def _weighted_pol(channel: Channel, alpha: PolarizerAngle) -> ElementOp:
    proj = channel_projector(channel)
    pol = pol_observable(alpha)
    return ElementOp(
        proj.matrix @ pol.matrix,
        label=f"{proj.label}*{pol.label}",
        side_in=Side.OUTPUT,
    )


def channel_stats(
    state: PathPolState, channel: Channel, alpha: float | PolarizerAngle
) -> ChannelStats:
    """Probability and (un)conditional polarization means of one exit channel."""
    a = as_polarizer(alpha)
    probability = expectation(channel_projector(channel), state)
    sub_mean = expectation(_weighted_pol(channel, a), state)
    if probability < EMPTY_CHANNEL_PROB:
        return ChannelStats(channel, probability, 0.0, None)
    return ChannelStats(channel, probability, sub_mean, sub_mean / probability)


def whole_ensemble_mean(state: PathPolState, alpha: float | PolarizerAngle) -> float:
    """Polarization mean over the whole ensemble, ignoring the exit channel."""
    return expectation(pol_observable(alpha), state)


def check_sum_rule(whole_mean: float, sub_t: float, sub_r: float) -> float:
    """Residual of ``whole == sub_t + sub_r``; raises if it exceeds TOL."""
    residual = abs(whole_mean - (sub_t + sub_r))
    if residual > TOL:
        raise ConsistencyError(
            "channel sub-means no longer add up to the whole-ensemble mean "
            f"(residual {residual:.3e})"
        )
    return residual


def sum_rule_residual(state: PathPolState, alpha: float | PolarizerAngle) -> float:
    """Enforced sum-rule residual for one state and polarizer angle."""
    t = channel_stats(state, Channel.T_PRIME, alpha)
    r = channel_stats(state, Channel.R_PRIME, alpha)
    return check_sum_rule(whole_ensemble_mean(state, alpha), t.sub_mean, r.sub_mean)


def point_stats(
    kind: Preparation, phi: float | PhaseShift, alpha: float | PolarizerAngle
) -> PointStats:
    """Run the pipeline once and collect all analytic statistics."""
    p, a = as_phase(phi), as_polarizer(alpha)
    state = emerge(kind, p)
    t = channel_stats(state, Channel.T_PRIME, a)
    r = channel_stats(state, Channel.R_PRIME, a)
    whole = whole_ensemble_mean(state, a)
    residual = check_sum_rule(whole, t.sub_mean, r.sub_mean)
    return PointStats(kind, p.phi, a.alpha, t, r, whole, residual)


def context_contrast(
    kind: Preparation,
    channel: Channel,
    alpha: float | PolarizerAngle,
    phi_a: float | PhaseShift,
    phi_b: float | PhaseShift,
) -> ContextContrast:
    """Sub-mean difference of one channel between two phase settings.

    Both settings are full pipeline re-runs; a nonzero contrast at fixed
    ``alpha`` shows the channel statistics depend on the phase context.
    """
    pa, pb = as_phase(phi_a), as_phase(phi_b)
    a = as_polarizer(alpha)
    stat_a = channel_stats(emerge(kind, pa), channel, a)
    stat_b = channel_stats(emerge(kind, pb), channel, a)
    return ContextContrast(
        kind, channel, a.alpha, pa.phi, pb.phi, stat_a.sub_mean - stat_b.sub_mean
    )


def whole_ensemble_invariance_check(
    kind: Preparation,
    alpha: float | PolarizerAngle,
    phis: list[float] | tuple[float, ...],
) -> float:
    """Largest pairwise spread of whole-ensemble means across phase settings.

    The whole-ensemble mean must not depend on the phase, so the returned
    spread should vanish; a single-element list trivially gives 0.
    """
    if not phis:
        raise ValueError("need at least one phase setting")
    means = [whole_ensemble_mean(emerge(kind, p), alpha) for p in phis]
    return max(means) - min(means)
