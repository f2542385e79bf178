"""Linear algebra for one photon over a path x polarization space.

States and operators are fixed-size complex128 numpy arrays wrapped in
immutable dataclasses. The basis order is path-major throughout:
``[t H, t V, r H, r V]`` while the photon travels the two internal arms,
and ``[t' H, t' V, r' H, r' V]`` once it leaves the recombiner. A state
carries a :class:`Side` tag so that operators meant for one side cannot
silently be applied on the other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

#: Absolute tolerance for every exact-arithmetic claim in this package.
TOL = 1e-12

PATH_DIM = 2
POL_DIM = 2
DIM = PATH_DIM * POL_DIM


class Side(enum.Enum):
    """Which path basis a state's amplitudes refer to."""

    #: Internal arms {t, r}, i.e. after the input splitter, before the recombiner.
    INPUT = "input"
    #: Exit channels {t', r'} of the recombiner.
    OUTPUT = "output"


class OpKind(enum.Enum):
    """Structural property of an operator matrix, verified at tolerance TOL."""

    UNITARY = "unitary"
    HERMITIAN = "hermitian"
    PROJECTOR = "projector"


class NormalizationError(ValueError):
    """A state (or state factor) does not have unit norm."""


class KindError(TypeError):
    """An operator was used in a role its matrix does not support."""


class BasisSideError(ValueError):
    """An operator was applied to a state tagged with the wrong basis side."""


class NumericalError(ArithmeticError):
    """A quantity that must be real (or otherwise exact) drifted past TOL."""


class ConsistencyError(RuntimeError):
    """An internal cross-check that should hold identically has failed."""


def _as_complex(values: object, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != shape:
        raise ValueError(f"{what} must have shape {shape}, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{what} contains non-finite entries")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = arr.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class PathPolState:
    """Normalized pure state of the photon, tagged with its basis side."""

    amps: np.ndarray
    side: Side = Side.INPUT

    def __post_init__(self) -> None:
        amps = _as_complex(self.amps, (DIM,), "state amplitudes")
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > TOL:
            raise NormalizationError(
                f"state has squared norm {norm_sq!r}, expected 1 within {TOL}"
            )
        if not isinstance(self.side, Side):
            raise TypeError(f"side must be a Side, got {self.side!r}")
        object.__setattr__(self, "amps", _frozen(amps))

    def probabilities(self) -> np.ndarray:
        """Born weights of the four basis cells, in basis order."""
        return np.abs(self.amps) ** 2

    def isclose(self, other: PathPolState, tol: float = TOL) -> bool:
        """Amplitude-wise agreement within ``tol`` on the same side."""
        return self.side is other.side and bool(
            np.max(np.abs(self.amps - other.amps)) <= tol
        )


def tensor(
    path: object, polarization: object, side: Side = Side.INPUT
) -> PathPolState:
    """Product state ``path (x) polarization`` in the path-major order.

    Both factors must be unit-norm 2-vectors; the result is their Kronecker
    product, so e.g. path ``(1, 0)`` with polarization ``(0, 1)`` populates
    the ``t V`` cell.
    """
    p = _as_complex(path, (PATH_DIM,), "path factor")
    q = _as_complex(polarization, (POL_DIM,), "polarization factor")
    for name, v in (("path", p), ("polarization", q)):
        norm_sq = float(np.vdot(v, v).real)
        if abs(norm_sq - 1.0) > TOL:
            raise NormalizationError(
                f"{name} factor has squared norm {norm_sq!r}, expected 1 within {TOL}"
            )
    return PathPolState(np.kron(p, q), side)


def _detect_kinds(matrix: np.ndarray) -> frozenset[OpKind]:
    kinds: set[OpKind] = set()
    eye = np.eye(DIM)
    if np.max(np.abs(matrix.conj().T @ matrix - eye)) <= TOL:
        kinds.add(OpKind.UNITARY)
    if np.max(np.abs(matrix - matrix.conj().T)) <= TOL:
        kinds.add(OpKind.HERMITIAN)
        if np.max(np.abs(matrix @ matrix - matrix)) <= TOL:
            kinds.add(OpKind.PROJECTOR)
    return frozenset(kinds)


@dataclass(frozen=True, eq=False)
class ElementOp:
    """A 4x4 operator together with every verified structural property.

    ``kinds`` holds each :class:`OpKind` the matrix satisfies at tolerance
    TOL, so a matrix that is both unitary and hermitian (a wave plate, any
    +/-1-valued observable) can serve either role. ``side_in`` constrains
    which states the operator accepts; ``side_out`` is the side of the
    result when the operator evolves a state (``None`` means unchanged).
    """

    matrix: np.ndarray
    label: str = ""
    side_in: Side | None = None
    side_out: Side | None = None
    kinds: frozenset[OpKind] = field(init=False)

    def __post_init__(self) -> None:
        m = _as_complex(self.matrix, (DIM, DIM), f"operator {self.label or '<op>'}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "kinds", _detect_kinds(m))

    @property
    def is_unitary(self) -> bool:
        return OpKind.UNITARY in self.kinds

    @property
    def is_hermitian(self) -> bool:
        return OpKind.HERMITIAN in self.kinds

    @property
    def is_projector(self) -> bool:
        return OpKind.PROJECTOR in self.kinds


def lift_path(matrix2: object, **op_kwargs: object) -> ElementOp:
    """Lift a 2x2 path-space matrix to the full space (acts as identity on polarization)."""
    m = _as_complex(matrix2, (PATH_DIM, PATH_DIM), "path-space matrix")
    return ElementOp(np.kron(m, np.eye(POL_DIM)), **op_kwargs)  # type: ignore[arg-type]


def lift_pol(matrix2: object, **op_kwargs: object) -> ElementOp:
    """Lift a 2x2 polarization-space matrix to the full space (identity on path)."""
    m = _as_complex(matrix2, (POL_DIM, POL_DIM), "polarization-space matrix")
    return ElementOp(np.kron(np.eye(PATH_DIM), m), **op_kwargs)  # type: ignore[arg-type]


def _check_side(op: ElementOp, state: PathPolState) -> None:
    if op.side_in is not None and state.side is not op.side_in:
        raise BasisSideError(
            f"operator {op.label or '<op>'} expects a {op.side_in.value}-side "
            f"state, got {state.side.value}-side"
        )


def apply(op: ElementOp, state: PathPolState) -> PathPolState:
    """Evolve ``state`` by a unitary element; the result's side is ``op.side_out``."""
    if not op.is_unitary:
        raise KindError(
            f"operator {op.label or '<op>'} is not unitary and cannot evolve states"
        )
    _check_side(op, state)
    out_side = op.side_out if op.side_out is not None else state.side
    return PathPolState(op.matrix @ state.amps, out_side)


def expectation(op: ElementOp, state: PathPolState) -> float:
    """Real expectation value of a hermitian element in ``state``."""
    if not op.is_hermitian:
        raise KindError(
            f"operator {op.label or '<op>'} is not hermitian; "
            "its expectation value need not be real"
        )
    _check_side(op, state)
    value = complex(np.vdot(state.amps, op.matrix @ state.amps))
    if abs(value.imag) > TOL:
        raise NumericalError(
            f"expectation of {op.label or '<op>'} has imaginary part {value.imag!r}"
        )
    return value.real


def commutator_norm(a: ElementOp, b: ElementOp) -> float:
    """Max-abs entry of ``[a, b]``; zero (within TOL) iff the elements commute."""
    m = a.matrix @ b.matrix - b.matrix @ a.matrix
    return float(np.max(np.abs(m)))
