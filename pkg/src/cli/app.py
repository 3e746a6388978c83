"""Argument parsing, configuration precedence, output assembly and exit codes."""

import argparse
import json
import sys
from collections.abc import Sequence
from typing import Any

from pydantic import ValidationError as PydanticValidationError

from src import __version__
from src.cli.commands import COMMANDS, CommandResult
from src.cli.models import ScanConfig, load_config_file
from src.config import get_settings, override_settings
from src.shooting import Rectangle
from src.utils.exceptions import (
    ConfigurationError,
    InvariantViolationError,
    ProfileError,
    ValidationError,
    VortexSpectraError,
)
from src.utils.logger import get_logger, run_context, setup_logging
from src.utils.output import build_header, config_hash, emit, render_csv, render_json

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_INVARIANT = 3


class UsageError(Exception):
    """Raised by the parser instead of exiting."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> Any:
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _pair(text: str) -> tuple[float, float]:
    values = _float_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return values[0], values[1]


def _rect(text: str) -> Rectangle:
    try:
        return Rectangle.parse(text)
    except (ValidationError, PydanticValidationError, ValueError) as e:
        raise argparse.ArgumentTypeError(f"invalid rectangle {text!r}: {e}")


def _assignment(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return name.strip(), float(value)


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per computation; unset flags stay absent from the namespace."""
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file (flags take precedence)")
    common.add_argument("--output", help="Output path (stdout when absent)")
    common.add_argument("--format", choices=["csv", "json"], help="Output format")
    common.add_argument("--jobs", type=int, help="Worker threads (env VORTEX_SPECTRA_JOBS)")
    common.add_argument("--seed", type=int, help="Seed of randomized checks")
    common.add_argument("--nodes", type=int, help="Interior nodes of the radial grid")
    common.add_argument("--grid-scale", dest="grid_scale", type=float, help="Radial map scale")
    common.add_argument("--kind", help="Built-in profile kind")
    common.add_argument(
        "--param",
        dest="params",
        type=_assignment,
        action="append",
        help="Profile parameter NAME=VALUE",
    )
    common.add_argument("--profile-file", dest="profile_file", help="Stored profile samples (JSON)")
    common.add_argument("-m", dest="ms", type=_int_list, help="Azimuthal wavenumbers, comma list")
    common.add_argument("-k", dest="ks", type=_float_list, help="Axial wavenumbers, comma list")
    common.add_argument(
        "--tol", dest="tolerances", type=_assignment, action="append", help="Tolerance NAME=VALUE"
    )

    parser = _Parser(
        prog="vortex-spectra", description="Spectral stability of inviscid columnar vortices"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(
            name, parents=[common], argument_default=argparse.SUPPRESS, help=help_text
        )

    p = command("profile", "Sample or validate a vorticity profile")
    p.add_argument(
        "--validate",
        dest="validate_profile",
        action="store_true",
        help="Run the admissibility checks",
    )

    p = command("biot-savart", "Energy estimate ratios on random vorticity fields")
    p.add_argument("--samples", type=int, help="Random fields per sector")

    command("spectrum", "Spectrum of the discretized operator")

    p = command("scan-unstable", "Argument-principle count of unstable eigenvalues")
    p.add_argument("--rect", type=_rect, help="b_min,b_max,a_min,a_max")
    p.add_argument("--panels", type=int, help="Initial contour panels")

    p = command("kelvin", "Neutral Kelvin modes by shooting")
    p.add_argument("--b-range", dest="b_range", type=_pair, help="lo,hi (omega range when m = 0)")
    p.add_argument("--samples", type=int, help="Scan samples")

    p = command("critical-layer", "Local expansion and connection at the critical radius")
    p.add_argument("--b", type=float, help="Frequency parameter")
    p.add_argument("--order", type=int, help="Series truncation order")

    p = command("rankine", "Dispersion roots of the Rankine vortex")
    p.add_argument("--b-range", dest="b_range", type=_pair, help="lo,hi")
    p.add_argument("--samples", type=int, help="Scan samples")
    p.add_argument("--rect", type=_rect, help="Count roots in b_min,b_max,a_min,a_max")
    p.add_argument("--panels", type=int, help="Initial contour panels")

    p = command("resolvent", "Resolvent norms over sectors")
    p.add_argument("--s", type=_pair, help="re,im of the resolvent point")

    p = command("verify-appendix", "Closed-form checks of auxiliary estimates")
    selector = p.add_mutually_exclusive_group()
    selector.add_argument(
        "--check", choices=["bessel-limit", "angle-integral", "lamb-oseen-j", "b-bound"]
    )
    selector.add_argument(
        "--section",
        choices=["6.6", "6.7"],
        help="Check group: 6.6 is bessel-limit, 6.7 is lamb-oseen-j and b-bound",
    )
    p.add_argument("--nu", type=_float_list, help="Bessel orders, comma separated")
    return parser


def resolve_config(namespace: argparse.Namespace) -> ScanConfig:
    """Merge defaults, the config file and flags, in increasing precedence.

    Raises:
        ConfigurationError: If the config file cannot be read
        pydantic.ValidationError: If the merged configuration is invalid
    """
    flags = {
        key: value
        for key, value in vars(namespace).items()
        if key not in ("command", "config") and value is not None
    }
    for key in ("params", "tolerances"):
        if key in flags:
            flags[key] = dict(flags[key])
    merged: dict[str, Any] = {}
    config_path = getattr(namespace, "config", None)
    if config_path is not None:
        merged.update(load_config_file(config_path))
    merged.update(flags)
    if "jobs" not in merged:
        merged["jobs"] = get_settings().jobs
    if "seed" not in merged:
        merged["seed"] = get_settings().seed
    return ScanConfig.model_validate(merged)


def write_result(command: str, config: ScanConfig, result: CommandResult) -> None:
    header = build_header(command, config.provenance(), get_settings().tolerances())
    if config.format == "json":
        text = render_json(header, result.data)
    else:
        text = render_csv(header, result.columns, result.rows)
    emit(text, config.output)


def run(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit code.

    0 on success, 1 on usage, configuration or profile errors, 2 on numerical failures and 3 when
    a computed result contradicts a stability invariant.
    """
    setup_logging()
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        logger.error("Usage error", error=str(e))
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)

    command = namespace.command
    try:
        config = resolve_config(namespace)
        run_hash = config_hash(config.provenance())
        with override_settings(**config.tolerances), run_context(command, run_hash):
            provenance = json.dumps(config.provenance(), sort_keys=True)
            logger.info("Command started", command=command, config=provenance)
            result = COMMANDS[command](config)
            write_result(command, config, result)
        if result.violation is not None:
            raise InvariantViolationError(result.violation, details=result.violation_details)
    except InvariantViolationError as e:
        logger.error(
            "Command contradicts an invariant",
            command=command,
            error=e.message,
            details=e.details,
        )
        return EXIT_INVARIANT
    except (ValidationError, ConfigurationError, ProfileError, PydanticValidationError) as e:
        logger.error("Invalid configuration", command=command, error=str(e))
        return EXIT_USAGE
    except VortexSpectraError as e:
        logger.error("Numerical failure", command=command, error=e.message, details=e.details)
        return EXIT_NUMERICAL
    logger.info("Command finished", command=command)
    return EXIT_OK
