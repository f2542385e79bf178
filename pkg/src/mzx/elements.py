"""Optical elements of the two-arm interferometer, as ElementOp factories.

Conventions pinned here and relied on by every other module:

- the input splitter sends the populated port to ``(|t> + i|r>)/sqrt(2)``,
- the phase shifter multiplies the r-arm amplitudes by ``exp(i phi)``,
- the recombiner maps path amplitudes ``a_t' = (i a_t + a_r)/sqrt(2)`` and
  ``a_r' = (a_t + i a_r)/sqrt(2)``,

i.e. each lossless 50:50 splitter carries the usual pi/2 phase between its
reflected and transmitted amplitudes. Phases are radians and canonical in
``[0, 2 pi)``; polarizer angles are radians, measured from horizontal.
"""

from __future__ import annotations

import cmath
import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .core import ElementOp, Side, lift_path, lift_pol

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhaseShift:
    """Relative phase (radians) applied to the r arm, stored in ``[0, 2 pi)``."""

    phi: float

    def __post_init__(self) -> None:
        value = float(self.phi)
        if not math.isfinite(value):
            raise ValueError(f"phase must be finite, got {value!r}")
        value %= _TWO_PI
        if value == _TWO_PI:  # fmod rounding for tiny negative inputs
            value = 0.0
        object.__setattr__(self, "phi", value)


@dataclass(frozen=True)
class PolarizerAngle:
    """Polarizer orientation (radians from horizontal)."""

    alpha: float

    def __post_init__(self) -> None:
        value = float(self.alpha)
        if not math.isfinite(value):
            raise ValueError(f"polarizer angle must be finite, got {value!r}")
        object.__setattr__(self, "alpha", value)


class Channel(enum.Enum):
    """Exit channel of the recombiner."""

    T_PRIME = "t_prime"
    R_PRIME = "r_prime"


def as_phase(phi: float | PhaseShift) -> PhaseShift:
    """Coerce a raw angle to a canonical :class:`PhaseShift`."""
    return phi if isinstance(phi, PhaseShift) else PhaseShift(float(phi))


def as_polarizer(alpha: float | PolarizerAngle) -> PolarizerAngle:
    """Coerce a raw angle to a :class:`PolarizerAngle`."""
    return alpha if isinstance(alpha, PolarizerAngle) else PolarizerAngle(float(alpha))


@functools.lru_cache(maxsize=None)
def bs1() -> ElementOp:
    """Input splitter: the populated port goes to ``(|t> + i|r>)/sqrt(2)``."""
    m = _SQRT_HALF * np.array([[1.0, 1.0j], [1.0j, 1.0]])
    return lift_path(m, label="BS1", side_in=Side.INPUT, side_out=Side.INPUT)


@functools.lru_cache(maxsize=None)
def hwp_on_t() -> ElementOp:
    """Half-wave plate in the t arm only: swaps H and V there, r untouched."""
    m = np.eye(4)
    m[[0, 1]] = m[[1, 0]]
    return ElementOp(m, label="HWP(t)", side_in=Side.INPUT, side_out=Side.INPUT)


def phase_shifter(phi: float | PhaseShift) -> ElementOp:
    """Phase shifter in the r arm: multiplies both r amplitudes by ``exp(i phi)``."""
    p = as_phase(phi).phi
    e = cmath.exp(1j * p)
    return ElementOp(
        np.diag([1.0, 1.0, e, e]),
        label=f"PS(phi={p:.6g})",
        side_in=Side.INPUT,
        side_out=Side.INPUT,
    )


@functools.lru_cache(maxsize=None)
def bs2() -> ElementOp:
    """Recombiner: maps the internal arms {t, r} onto the exits {t', r'}."""
    m = _SQRT_HALF * np.array([[1.0j, 1.0], [1.0, 1.0j]])
    return lift_path(m, label="BS2", side_in=Side.INPUT, side_out=Side.OUTPUT)


@functools.lru_cache(maxsize=None)
def mirror() -> ElementOp:
    """Folding mirror; a common phase is dropped, so it acts as the identity."""
    return ElementOp(np.eye(4), label="M", side_in=Side.INPUT, side_out=Side.INPUT)


def path_observable(phi: float | PhaseShift) -> ElementOp:
    """Exit-channel difference observable, written over the internal arms.

    Built as ``|t'><t'| - |r'><r'|`` with the exit kets expanded over
    {|t>, |r>} for the phase setting ``phi``:

        |t'> = (-i |t> + exp(i phi) |r>) / sqrt(2)
        |r'> = (|t> - i exp(i phi) |r>) / sqrt(2)

    On path space this equals ``-sin(phi) sigma_x + cos(phi) sigma_y``, so a
    +1 outcome means the photon exits at t' and a -1 outcome at r'.
    """
    p = as_phase(phi).phi
    e = cmath.exp(1j * p)
    t_ket = _SQRT_HALF * np.array([-1.0j, e])
    r_ket = _SQRT_HALF * np.array([1.0, -1.0j * e])
    m = np.outer(t_ket, t_ket.conj()) - np.outer(r_ket, r_ket.conj())
    return lift_path(m, label=f"pathdiff(phi={p:.6g})", side_in=Side.INPUT)


def pol_observable(alpha: float | PolarizerAngle) -> ElementOp:
    """+/-1 polarization observable of a polarizer rotated by ``alpha``.

    Passing eigenstate ``cos(a)|H> + sin(a)|V>`` (+1), blocked eigenstate
    ``sin(a)|H> - cos(a)|V>`` (-1); as a polarization-space matrix
    ``[[cos 2a, sin 2a], [sin 2a, -cos 2a]]``. Side-agnostic: polarization
    statistics can be read in either path basis.
    """
    a = as_polarizer(alpha).alpha
    c2, s2 = math.cos(2.0 * a), math.sin(2.0 * a)
    m = np.array([[c2, s2], [s2, -c2]])
    return lift_pol(m, label=f"poldiff(alpha={a:.6g})")


@functools.lru_cache(maxsize=None)
def channel_projector(channel: Channel) -> ElementOp:
    """Projector onto one exit channel (t' or r'), polarization untouched."""
    mask = [1.0, 0.0] if channel is Channel.T_PRIME else [0.0, 1.0]
    return lift_path(
        np.diag(mask),
        label=f"proj({channel.value})",
        side_in=Side.OUTPUT,
        side_out=Side.OUTPUT,
    )
