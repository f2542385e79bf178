"""Config parsing: grammar, errors with line numbers, units, request building."""

from __future__ import annotations

import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from mzx.config import (
    EXAMPLE_CONFIG,
    ConfigError,
    ExperimentConfig,
    load_config,
    parse_config_text,
)
from mzx.models import SweepSpec
from mzx.montecarlo import DEFAULT_BLOCK_SIZE

FULL_CONFIG = """\
# full-featured config
preparation = entangled   # inline comment
phi = sweep(0, 6.283185307179586, 8)
alpha = 0, 0.5, 1.0

mode = both
shots = 1_000
seed = 42
block_size = 2048
output = out.csv
degrees = false
"""


def test_parse_full_config():
    cfg = parse_config_text(FULL_CONFIG)
    assert cfg.preparation == "entangled"
    assert isinstance(cfg.phi, SweepSpec)
    assert cfg.phi.steps == 8
    assert cfg.alpha == [0.0, 0.5, 1.0]
    assert cfg.mode == "both"
    assert cfg.shots == 1000
    assert cfg.seed == 42
    assert cfg.block_size == 2048
    assert cfg.output == "out.csv"
    assert cfg.degrees is False


def test_parse_minimal_config_defaults():
    cfg = parse_config_text("preparation = product\nphi = 0\nalpha = 0\n")
    assert cfg.mode == "analytic"
    assert cfg.shots is None
    assert cfg.seed is None
    assert cfg.block_size == DEFAULT_BLOCK_SIZE
    assert cfg.output is None
    assert cfg.phi == [0.0]


def test_sweep_expansion_is_inclusive_linspace():
    cfg = parse_config_text("preparation = product\nphi = sweep(0, 1, 5)\nalpha = 0\n")
    assert isinstance(cfg.phi, SweepSpec)
    assert cfg.phi.expand() == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0], abs=1e-15)
    single = SweepSpec(start=2.0, stop=9.0, steps=1)
    assert single.expand() == [2.0]


def test_degrees_convert_lists_and_sweeps_at_parse_time():
    cfg = parse_config_text(
        "preparation = product\nphi = sweep(0, 360, 8)\nalpha = 0, 45, 90\ndegrees = yes\n"
    )
    assert isinstance(cfg.phi, SweepSpec)
    assert cfg.phi.stop == pytest.approx(2.0 * math.pi, abs=1e-12)
    assert cfg.alpha == pytest.approx([0.0, math.pi / 4.0, math.pi / 2.0], abs=1e-12)
    assert cfg.degrees is True


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("phi = 0\nalpha = 0\n", "missing required key 'preparation'"),
        ("preparation = product\nalpha = 0\n", "missing required key 'phi'"),
        ("preparation = photon\nphi = 0\nalpha = 0\n", ":1:"),
        ("preparation = product\nphi = zero\nalpha = 0\n", ":2:"),
        ("preparation = product\nphi = sweep(0, 1)\nalpha = 0\n", "malformed sweep"),
        ("preparation = product\nphi = sweep(0, 1, 0)\nalpha = 0\n", "steps"),
        ("preparation = product\nphi = 0,\nalpha = 0\n", "comma-separated"),
        ("preparation = product\nphi = 0\nalpha = 0\nwibble = 3\n", "unknown key 'wibble'"),
        ("preparation = product\nphi = 0\nphi = 1\nalpha = 0\n", "duplicate key 'phi'"),
        ("preparation = product\nphi = 0\nalpha = 0\nshots = -4\n", "shots must be >= 1"),
        ("preparation = product\nphi = 0\nalpha = 0\nseed = 18446744073709551616\n", "64 bits"),
        ("preparation = product\nphi = 0\nalpha = 0\nmode = quick\n", "mode must be"),
        ("preparation = product\nphi = 0\nalpha = 0\nmode = both\n", "requires a shots"),
        ("preparation = product\nphi = 0\nalpha = 0\ndegrees = maybe\n", "boolean"),
        ("preparation = product\nphi = inf\nalpha = 0\n", "finite"),
        ("just some words\n", "expected 'key = value'"),
        ("preparation =\nphi = 0\nalpha = 0\n", "empty value"),
    ],
)
def test_parse_errors_carry_location_and_reason(text, fragment):
    with pytest.raises(ConfigError) as err:
        parse_config_text(text, source="test.cfg")
    assert fragment in str(err.value)
    assert str(err.value).startswith("test.cfg")


def test_error_line_numbers_point_at_the_offending_line():
    text = "# comment\npreparation = product\n\nphi = 0\nalpha = oops\n"
    with pytest.raises(ConfigError) as err:
        parse_config_text(text, source="grid.cfg")
    assert str(err.value).startswith("grid.cfg:5:")


def test_load_config_reports_missing_file():
    with pytest.raises(ConfigError) as err:
        load_config("/no/such/file.cfg")
    assert "cannot read config" in str(err.value)


def test_load_config_round_trip(tmp_path: Path):
    path = tmp_path / "run.cfg"
    path.write_text(FULL_CONFIG, encoding="utf-8")
    cfg = load_config(path)
    assert cfg == parse_config_text(FULL_CONFIG, source="anything")


def test_to_run_request_passes_fields_and_overrides():
    cfg = parse_config_text(FULL_CONFIG)
    request = cfg.to_run_request()
    assert request.preparation == "entangled"
    assert request.mode == "both"
    assert request.shots == 1000
    assert request.seed == 42
    assert request.block_size == 2048
    overridden = cfg.to_run_request(seed=9, mode="analytic")
    assert overridden.seed == 9
    assert overridden.mode == "analytic"


def test_experiment_config_rejects_unknown_fields():
    with pytest.raises(ValidationError):
        ExperimentConfig(
            preparation="product", phi=[0.0], alpha=[0.0], wibble=1  # type: ignore[call-arg]
        )


def test_builtin_example_matches_the_shipped_file():
    shipped = Path(__file__).resolve().parent.parent / "configs" / "example.cfg"
    assert shipped.read_text(encoding="utf-8") == EXAMPLE_CONFIG
    cfg = parse_config_text(EXAMPLE_CONFIG)
    assert cfg.mode == "both"
    assert cfg.shots == 20000
    assert cfg.seed == 7
