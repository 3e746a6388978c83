"""Deterministic CSV and JSON writers with provenance headers."""

import csv
import hashlib
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from src import __version__
from src.utils.logger import get_logger

logger = get_logger(__name__)


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays to JSON-serializable builtins."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, complex | np.complexfloating):
        return {"re": float(np.real(value)), "im": float(np.imag(value))}
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def canonical_json(payload: Any) -> str:
    """Serialize with sorted keys and no insignificant whitespace."""
    return json.dumps(_plain(payload), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash(config: dict[str, Any]) -> str:
    """First 16 hex digits of the SHA-256 of the canonical configuration."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()[:16]


def build_header(command: str, config: dict[str, Any], tolerances: dict[str, float]) -> dict[str, Any]:
    """Provenance header embedded in every output file."""
    return {
        "command": command,
        "config_hash": config_hash(config),
        "tolerances": dict(sorted(tolerances.items())),
        "version": __version__,
    }


def render_csv(header: dict[str, Any], columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render rows as RFC-4180 CSV preceded by ``# key=value`` comment lines."""
    buffer = io.StringIO()
    for key in sorted(header):
        value = header[key]
        text = canonical_json(value) if isinstance(value, dict | list) else str(value)
        buffer.write(f"# {key}={text}\n")
    writer = csv.writer(buffer, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    return buffer.getvalue()


def _format_cell(value: Any) -> str:
    if isinstance(value, float | np.floating):
        return repr(float(value))
    return str(_plain(value))


def render_json(header: dict[str, Any], data: Any) -> str:
    """Render ``{"header": ..., "data": ...}`` as UTF-8 JSON with sorted keys."""
    return json.dumps(
        {"header": _plain(header), "data": _plain(data)},
        sort_keys=True,
        indent=2,
        ensure_ascii=False,
    ) + "\n"


def emit(text: str, path: str | Path | None) -> None:
    """Write rendered output to ``path`` or stdout."""
    if path is None:
        print(text, end="")
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
    logger.info("Output written", path=str(target), size=len(text))
