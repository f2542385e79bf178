"""Command-line front-end: a thin client over the local or remote backend.

Exit codes: 0 success, 1 invalid config/arguments, 2 unwritable output,
3 internal consistency failure or unreachable server, 4 verification
failures. Seed precedence for runs: --seed flag, then the MZX_SEED
environment variable, then the config file, then the package default.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from pydantic import ValidationError

from .client import LocalClient, RemoteClient, ServiceError
from .config import ConfigError, ExperimentConfig, load_config
from .core import ConsistencyError
from .models import VerifyRequest
from .montecarlo import MAX_SEED
from .runner import render_csv

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_OUTPUT = 2
EXIT_INTERNAL = 3
EXIT_VERIFY = 4

SEED_ENV_VAR = "MZX_SEED"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzx",
        description=(
            "Exact statistics and seeded sampling for a two-arm interferometer "
            "with path-polarization preparations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="evaluate a config's (phi, alpha) grid as CSV")
    run_p.add_argument("--config", required=True, type=Path, help="experiment config file")
    run_p.add_argument(
        "--output",
        default=None,
        help="CSV destination; '-' for stdout (default: the config's output key, else stdout)",
    )
    run_p.add_argument("--seed", default=None, help="sampling seed, overrides MZX_SEED and config")
    run_p.add_argument(
        "--mode",
        choices=("analytic", "montecarlo", "both"),
        default=None,
        help="override the config's mode",
    )
    run_p.add_argument("--server", default=None, metavar="URL", help="use a served instance")

    verify_p = sub.add_parser("verify", help="run the acceptance checks")
    verify_p.add_argument("--shots", type=int, default=None, help="sampling-check shots (default 1000000)")
    verify_p.add_argument("--seed", default=None, help="sampling-check seed (default: pinned)")
    verify_p.add_argument("--server", default=None, metavar="URL", help="use a served instance")
    verify_p.add_argument("--json", action="store_true", help="emit the full report as JSON")

    serve_p = sub.add_parser("serve", help="serve the HTTP API")
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--port", type=int, default=8000)
    return parser


def _parse_seed(raw: str, origin: str) -> int:
    try:
        seed = int(raw, 10)
    except ValueError:
        raise ConfigError(origin, None, f"seed must be an integer, got {raw!r}") from None
    if not 0 <= seed <= MAX_SEED:
        raise ConfigError(origin, None, f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def _resolve_seed(flag_value: str | None, config: ExperimentConfig | None) -> int | None:
    if flag_value is not None:
        return _parse_seed(flag_value, "--seed")
    env_value = os.environ.get(SEED_ENV_VAR)
    if env_value is not None and env_value != "":
        return _parse_seed(env_value, SEED_ENV_VAR)
    return config.seed if config is not None else None


def _make_client(server: str | None) -> LocalClient | RemoteClient:
    return RemoteClient(server) if server else LocalClient()


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    request = config.to_run_request(seed=_resolve_seed(args.seed, config), mode=args.mode)
    with _make_client(args.server) as client:
        response = client.run(request)
    csv_text = render_csv(response)

    target = args.output if args.output is not None else config.output
    if target is None or target == "-":
        sys.stdout.write(csv_text)
        destination = "stdout"
    else:
        try:
            Path(target).write_text(csv_text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {target}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_OUTPUT
        destination = str(target)

    summary = response.summary
    print(
        f"{summary.rows} rows -> {destination} | "
        f"max_sum_rule_residual={summary.max_sum_rule_residual:.3e} "
        f"max_whole_mean_phi_variation={summary.max_whole_mean_phi_variation:.3e}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    fields: dict[str, int] = {}
    if args.shots is not None:
        fields["shots"] = args.shots
    seed = _resolve_seed(args.seed, None)
    if seed is not None:
        fields["seed"] = seed
    request = VerifyRequest(**fields)

    with _make_client(args.server) as client:
        report = client.verify(request)

    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            print(
                f"[{status}] criterion {check.criterion:>2} {check.name}: "
                f"worst={check.worst:.3e} tol={check.tolerance:.0e} "
                f"({check.seconds:.2f}s) {check.detail}"
            )
        good = sum(1 for check in report.checks if check.passed)
        print(f"overall: {'PASS' if report.passed else 'FAIL'} ({good}/{len(report.checks)} checks)")
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("mzx.service:app", host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_serve(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first["loc"]) or "request"
        print(f"error: {loc}: {first['msg']}", file=sys.stderr)
        return EXIT_CONFIG
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
