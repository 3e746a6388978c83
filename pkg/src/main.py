"""Command-line entry point for vortex-spectra."""

import sys

from src.cli import run


def main() -> None:
    """Run the batch driver and exit with its code."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
