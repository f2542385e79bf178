"""Pydantic request/response models shared by the service, client and CLI."""

from __future__ import annotations

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .montecarlo import DEFAULT_BLOCK_SIZE, DEFAULT_SEED, MAX_SEED

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]

PreparationName = Literal["product", "entangled"]
ModeName = Literal["analytic", "montecarlo", "both"]


class SweepSpec(BaseModel):
    """Inclusive linear sweep: ``steps`` evenly spaced values from start to stop."""

    model_config = ConfigDict(extra="forbid")

    start: FiniteFloat
    stop: FiniteFloat
    steps: int = Field(ge=1)

    def expand(self) -> list[float]:
        return np.linspace(self.start, self.stop, self.steps).tolist()


AngleGrid = Annotated[list[FiniteFloat], Field(min_length=1)] | SweepSpec


def expand_grid(grid: list[float] | SweepSpec) -> list[float]:
    """Materialize an angle grid (radians) as a plain list."""
    return grid.expand() if isinstance(grid, SweepSpec) else [float(v) for v in grid]


class RunRequest(BaseModel):
    """One batch run: a preparation swept over (phi, alpha) grid points."""

    model_config = ConfigDict(extra="forbid")

    preparation: PreparationName
    phi: AngleGrid
    alpha: AngleGrid
    mode: ModeName = "analytic"
    shots: int | None = Field(default=None, ge=1)
    seed: int | None = Field(default=None, ge=0, le=MAX_SEED)
    block_size: int = Field(default=DEFAULT_BLOCK_SIZE, ge=1)

    @model_validator(mode="after")
    def _shots_required_for_sampling(self) -> RunRequest:
        if self.mode != "analytic" and self.shots is None:
            raise ValueError(f"shots is required when mode is {self.mode!r}")
        return self

    def phi_values(self) -> list[float]:
        return expand_grid(self.phi)

    def alpha_values(self) -> list[float]:
        return expand_grid(self.alpha)


class ResultRow(BaseModel):
    """One grid point. Analytic columns are always present; sampling runs
    (mode 'montecarlo' or 'both') also fill the est_*/std_err_*/seed columns."""

    preparation: PreparationName
    phi: float
    alpha: float
    p_tprime: float
    p_rprime: float
    sub_mean_tprime: float
    sub_mean_rprime: float
    cond_mean_tprime: float | None
    cond_mean_rprime: float | None
    whole_mean: float
    sum_rule_residual: float
    est_sub_mean_tprime: float | None = None
    est_sub_mean_rprime: float | None = None
    est_whole_mean: float | None = None
    std_err_sub_mean_tprime: float | None = None
    std_err_sub_mean_rprime: float | None = None
    std_err_whole_mean: float | None = None
    seed: int | None = None


class RunSummary(BaseModel):
    """Whole-batch diagnostics printed after every run."""

    rows: int
    max_sum_rule_residual: float
    max_whole_mean_phi_variation: float


class RunResponse(BaseModel):
    preparation: PreparationName
    mode: ModeName
    rows: list[ResultRow]
    summary: RunSummary


class VerifyRequest(BaseModel):
    """Parameters of the acceptance run (defaults are the pinned ones)."""

    model_config = ConfigDict(extra="forbid")

    shots: int = Field(default=1_000_000, ge=2)
    seed: int = Field(default=DEFAULT_SEED, ge=0, le=MAX_SEED)


class CheckResult(BaseModel):
    """Outcome of one acceptance check."""

    criterion: int
    name: str
    passed: bool
    tolerance: float
    worst: float
    seconds: float
    detail: str


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[CheckResult]


class HealthResponse(BaseModel):
    name: str
    version: str
