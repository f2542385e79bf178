"""End-to-end interferometer runs: preparation through the recombiner.

The two standard preparations share the same incident photon (horizontally
polarized, at the populated input port):

- ``PRODUCT``: input splitter only, giving ``(|t> + i|r>) |H> / sqrt(2)``,
- ``ENTANGLED``: additionally a half-wave plate in the t arm, giving the
  path-polarization entangled ``(|t>|V> + i|r>|H>) / sqrt(2)``.

``emerge`` then folds both arms on mirrors, applies the r-arm phase shifter
and the recombiner, and returns the exit-side state.
"""

from __future__ import annotations

import enum

from . import elements
from .core import PathPolState, apply, tensor
from .elements import PhaseShift


class Preparation(enum.Enum):
    """Which photon state enters the phase-shifter stage."""

    PRODUCT = "product"
    ENTANGLED = "entangled"


def incident_state() -> PathPolState:
    """Horizontally polarized photon at the populated input port."""
    return tensor((1.0, 0.0), (1.0, 0.0))


def prepare(kind: Preparation) -> PathPolState:
    """Build the requested preparation compositionally from the elements."""
    state = apply(elements.bs1(), incident_state())
    if kind is Preparation.ENTANGLED:
        state = apply(elements.hwp_on_t(), state)
    elif kind is not Preparation.PRODUCT:
        raise ValueError(f"unknown preparation {kind!r}")
    return state


def emerge(kind: Preparation, phi: float | PhaseShift) -> PathPolState:
    """Run the full pipeline and return the exit-side state.

    Stages, in order: preparation, one mirror per arm, phase shifter on the
    r arm, recombiner. The result is tagged with the output side.
    """
    state = prepare(kind)
    state = apply(elements.mirror(), state)
    state = apply(elements.mirror(), state)
    state = apply(elements.phase_shifter(phi), state)
    return apply(elements.bs2(), state)
