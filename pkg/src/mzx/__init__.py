"""Exact simulator and sampling harness for a two-arm interferometer whose
photon carries both a path and a polarization degree of freedom.

The library layers are importable on their own: ``core`` (states and
operators), ``elements`` (the optical elements), ``scenario`` (preparations
and the full pipeline), ``observables`` (whole-ensemble and per-exit-channel
statistics), ``montecarlo`` (seeded detection-event sampling), plus the
batch runner, config parser, HTTP service and CLI built on top.
"""

from .core import (
    ConsistencyError,
    ElementOp,
    KindError,
    NormalizationError,
    PathPolState,
    Side,
    apply,
    commutator_norm,
    expectation,
    tensor,
)
from .elements import (
    Channel,
    PhaseShift,
    PolarizerAngle,
    bs1,
    bs2,
    channel_projector,
    hwp_on_t,
    mirror,
    path_observable,
    phase_shifter,
    pol_observable,
)
from .montecarlo import SampleReport, convergence_report, outcome_distribution, sample
from .observables import (
    ChannelStats,
    PointStats,
    channel_stats,
    context_contrast,
    point_stats,
    sum_rule_residual,
    whole_ensemble_mean,
)
from .scenario import Preparation, emerge, prepare

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "ChannelStats",
    "ConsistencyError",
    "ElementOp",
    "KindError",
    "NormalizationError",
    "PathPolState",
    "PhaseShift",
    "PointStats",
    "PolarizerAngle",
    "Preparation",
    "SampleReport",
    "Side",
    "apply",
    "bs1",
    "bs2",
    "channel_projector",
    "channel_stats",
    "commutator_norm",
    "context_contrast",
    "convergence_report",
    "emerge",
    "expectation",
    "hwp_on_t",
    "mirror",
    "outcome_distribution",
    "path_observable",
    "phase_shifter",
    "point_stats",
    "pol_observable",
    "prepare",
    "sample",
    "sum_rule_residual",
    "tensor",
    "whole_ensemble_mean",
    "__version__",
]
