"""Flat key=value experiment config files.

One setting per line, ``#`` starts a comment, keys are case-insensitive.
Angle grids are either a comma-separated list (``alpha = 0, 0.785``) or an
inclusive sweep (``phi = sweep(0, 6.283185307179586, 64)``). Angles are
radians unless ``degrees = true``, in which case every angle (list entries
and sweep bounds) is converted to radians at parse time; everything
downstream of the parser works in radians only.

Recognized keys: preparation (required), phi (required), alpha (required),
mode, shots, seed, block_size, output, degrees.
"""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .models import (
    AngleGrid,
    ModeName,
    PreparationName,
    RunRequest,
    SweepSpec,
    expand_grid,
)
from .montecarlo import DEFAULT_BLOCK_SIZE, MAX_SEED


class ConfigError(ValueError):
    """Config problem, with source file and line number where applicable."""

    def __init__(self, source: str, lineno: int | None, message: str) -> None:
        where = source if lineno is None else f"{source}:{lineno}"
        super().__init__(f"{where}: {message}")
        self.source = source
        self.lineno = lineno


class ExperimentConfig(BaseModel):
    """A parsed config file; angles already in radians."""

    model_config = ConfigDict(extra="forbid")

    preparation: PreparationName
    phi: AngleGrid
    alpha: AngleGrid
    mode: ModeName = "analytic"
    shots: int | None = Field(default=None, ge=1)
    seed: int | None = Field(default=None, ge=0, le=MAX_SEED)
    block_size: int = Field(default=DEFAULT_BLOCK_SIZE, ge=1)
    output: str | None = None
    degrees: bool = False

    def to_run_request(
        self, seed: int | None = None, mode: str | None = None
    ) -> RunRequest:
        """Build the service request, with optional seed/mode overrides."""
        return RunRequest(
            preparation=self.preparation,
            phi=self.phi,
            alpha=self.alpha,
            mode=mode if mode is not None else self.mode,  # type: ignore[arg-type]
            shots=self.shots,
            seed=seed if seed is not None else self.seed,
            block_size=self.block_size,
        )


_KNOWN_KEYS = (
    "preparation",
    "phi",
    "alpha",
    "mode",
    "shots",
    "seed",
    "block_size",
    "output",
    "degrees",
)
_REQUIRED_KEYS = ("preparation", "phi", "alpha")

_SWEEP_RE = re.compile(
    r"^sweep\(\s*(?P<start>[^,()\s]+)\s*,\s*(?P<stop>[^,()\s]+)\s*,\s*(?P<steps>[^,()\s]+)\s*\)$"
)


def _parse_float(token: str, source: str, lineno: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ConfigError(source, lineno, f"{what}: {token!r} is not a number") from None
    if not math.isfinite(value):
        raise ConfigError(source, lineno, f"{what}: {token!r} is not finite")
    return value


def _parse_int(token: str, source: str, lineno: int, what: str) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise ConfigError(
            source, lineno, f"{what}: {token!r} is not an integer"
        ) from None


def _parse_bool(token: str, source: str, lineno: int, what: str) -> bool:
    lowered = token.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(source, lineno, f"{what}: {token!r} is not a boolean")


def _parse_angles(
    token: str, source: str, lineno: int, what: str
) -> list[float] | SweepSpec:
    match = _SWEEP_RE.match(token)
    if match:
        steps = _parse_int(match["steps"], source, lineno, f"{what} sweep steps")
        if steps < 1:
            raise ConfigError(source, lineno, f"{what} sweep steps must be >= 1")
        return SweepSpec(
            start=_parse_float(match["start"], source, lineno, f"{what} sweep start"),
            stop=_parse_float(match["stop"], source, lineno, f"{what} sweep stop"),
            steps=steps,
        )
    if token.lower().startswith("sweep"):
        raise ConfigError(
            source, lineno, f"{what}: malformed sweep, expected sweep(start, stop, steps)"
        )
    parts = [p.strip() for p in token.split(",")]
    if not token or any(not p for p in parts):
        raise ConfigError(source, lineno, f"{what}: expected comma-separated numbers")
    return [_parse_float(p, source, lineno, what) for p in parts]


def _to_radians(grid: list[float] | SweepSpec) -> list[float] | SweepSpec:
    if isinstance(grid, SweepSpec):
        return SweepSpec(
            start=math.radians(grid.start), stop=math.radians(grid.stop), steps=grid.steps
        )
    return [math.radians(v) for v in grid]


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse config text; all errors are ConfigError with source:line prefixes."""
    entries: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not eq or not key:
            raise ConfigError(source, lineno, f"expected 'key = value', got {raw.strip()!r}")
        if key not in _KNOWN_KEYS:
            raise ConfigError(
                source, lineno, f"unknown key {key!r} (known: {', '.join(_KNOWN_KEYS)})"
            )
        if key in entries:
            raise ConfigError(
                source, lineno, f"duplicate key {key!r} (first set on line {entries[key][0]})"
            )
        if not value:
            raise ConfigError(source, lineno, f"key {key!r} has an empty value")
        entries[key] = (lineno, value)

    for key in _REQUIRED_KEYS:
        if key not in entries:
            raise ConfigError(source, None, f"missing required key {key!r}")

    fields: dict[str, object] = {}

    lineno, value = entries["preparation"]
    if value not in ("product", "entangled"):
        raise ConfigError(
            source, lineno, f"preparation must be 'product' or 'entangled', got {value!r}"
        )
    fields["preparation"] = value

    if "mode" in entries:
        lineno, value = entries["mode"]
        if value not in ("analytic", "montecarlo", "both"):
            raise ConfigError(
                source,
                lineno,
                f"mode must be 'analytic', 'montecarlo' or 'both', got {value!r}",
            )
        fields["mode"] = value

    degrees = False
    if "degrees" in entries:
        lineno, value = entries["degrees"]
        degrees = _parse_bool(value, source, lineno, "degrees")
    fields["degrees"] = degrees

    for key in ("phi", "alpha"):
        lineno, value = entries[key]
        grid = _parse_angles(value, source, lineno, key)
        fields[key] = _to_radians(grid) if degrees else grid

    for key, minimum in (("shots", 1), ("seed", 0), ("block_size", 1)):
        if key in entries:
            lineno, value = entries[key]
            number = _parse_int(value, source, lineno, key)
            if number < minimum:
                raise ConfigError(source, lineno, f"{key} must be >= {minimum}, got {number}")
            if key == "seed" and number > MAX_SEED:
                raise ConfigError(source, lineno, f"seed must fit in 64 bits, got {number}")
            fields[key] = number

    if "output" in entries:
        fields["output"] = entries["output"][1]

    if fields.get("mode", "analytic") != "analytic" and "shots" not in entries:
        lineno = entries["mode"][0]
        raise ConfigError(
            source, lineno, f"mode = {fields['mode']} requires a shots setting"
        )

    try:
        return ExperimentConfig(**fields)  # type: ignore[arg-type]
    except ValidationError as exc:  # backstop; parse checks above should catch first
        first = exc.errors()[0]
        raise ConfigError(
            source, None, f"{'.'.join(str(p) for p in first['loc'])}: {first['msg']}"
        ) from None


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and parse a config file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(str(p), None, f"cannot read config: {exc.strerror or exc}") from None
    return parse_config_text(text, source=str(p))


#: Contents of the example config shipped at configs/example.cfg.
EXAMPLE_CONFIG = """\
# Example run: entangled preparation, analytic values plus seeded sampling.
preparation = entangled
phi = sweep(0, 6.283185307179586, 25)   # one full turn, inclusive
alpha = 0, 0.39269908169872414, 0.7853981633974483
mode = both
shots = 20000
seed = 7
output = results.csv
"""

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "EXAMPLE_CONFIG",
    "expand_grid",
    "load_config",
    "parse_config_text",
]
