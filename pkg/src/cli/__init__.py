"""Batch driver."""

from .app import (
    EXIT_INVARIANT,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    build_parser,
    resolve_config,
    run,
)
from .commands import COMMANDS, CommandResult, load_profile
from .models import ScanConfig, load_config_file

__all__ = [
    "EXIT_INVARIANT",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_USAGE",
    "build_parser",
    "resolve_config",
    "run",
    "COMMANDS",
    "CommandResult",
    "load_profile",
    "ScanConfig",
    "load_config_file",
]
