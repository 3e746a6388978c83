"""Batch subcommands: each turns a resolved configuration into output rows."""

from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TypeVar

import numpy as np

from src.biot_savart import FourierSector, energy_estimate_ratio, random_vorticity
from src.cli.models import ScanConfig
from src.config import get_settings
from src.critical_layer import (
    RootCase,
    connection_coefficients,
    frobenius_series,
    upper_solution_check,
)
from src.operator import SPECTRUM_COLUMNS, build, resolvent_scan, spectrum
from src.profiles import (
    RadialGrid,
    VortexProfile,
    lamb_oseen_j_prime,
    make_builtin,
    profile_from_json,
    profile_record,
    validate_class_w,
)
from src.rankine import RANKINE_COLUMNS, count_unstable, find_rankine_roots
from src.shooting import (
    KELVIN_COLUMNS,
    Rectangle,
    find_axisymmetric_modes,
    find_kelvin_modes,
    scan_unstable,
    verify_b_lower_bound,
)
from src.specfun import (
    angle_integral,
    angle_integral_exact,
    bessel_limit_integral,
    bessel_limit_value,
)
from src.utils.exceptions import ConfigurationError
from src.utils.logger import get_logger

logger = get_logger(__name__)

T = TypeVar("T")

BESSEL_LIMIT_A = 1e-3
BESSEL_LIMIT_TOLERANCE = 0.01
ANGLE_TOLERANCE = 1e-10
B_BOUND_SLACK = 1e-10
B_BOUND_VALUES = [0.0, -1.0, -5.0]


@dataclass
class CommandResult:
    """Rows for CSV output, a payload for JSON output and an optional invariant violation."""

    columns: list[str]
    rows: list[list[Any]]
    data: Any
    violation: str | None = None
    violation_details: dict[str, Any] = field(default_factory=dict)


def load_profile(config: ScanConfig) -> VortexProfile:
    """Built-in profile, or the profile stored in ``profile_file``.

    Raises:
        ConfigurationError: If the profile file cannot be read
        ProfileError: If the kind is unknown
    """
    if config.profile_file is None:
        return make_builtin(config.kind, dict(config.params))
    path = Path(config.profile_file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(
            "Profile file cannot be read", details={"path": str(path), "error": str(e)}
        )
    return profile_from_json(text).to_profile()


def _grid(config: ScanConfig, operator: bool = False) -> RadialGrid:
    settings = get_settings()
    default = settings.operator_nodes if operator else settings.grid_nodes
    return RadialGrid(config.nodes or default, config.grid_scale or settings.grid_scale)


def _jobs(config: ScanConfig) -> int:
    return config.jobs or get_settings().jobs


def _cells(config: ScanConfig) -> list[tuple[int, float]]:
    return [(m, k) for m in config.ms for k in config.ks]


def _map(
    fn: Callable[[tuple[int, float]], T], cells: list[tuple[int, float]], jobs: int
) -> list[T]:
    """Evaluate ``fn`` on every cell; results keep the cell order for any ``jobs``."""
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, cells))


def run_profile(config: ScanConfig) -> CommandResult:
    profile = load_profile(config)
    grid = _grid(config)
    if config.validate_profile:
        report = validate_class_w(profile, grid)
        rows = [[c.name, c.passed, c.worst_radius, c.worst_value] for c in report.checks]
        violation = None
        if profile.class_w and not report.passed:
            violation = "A class-W profile failed its admissibility checks"
        return CommandResult(
            columns=["check", "passed", "worst_radius", "worst_value"],
            rows=rows,
            data=report.model_dump(mode="json"),
            violation=violation,
            violation_details={"failed": [c.name for c in report.checks if not c.passed]},
        )
    r = grid.r
    omega = np.real(np.asarray(profile.omega(r)))
    w = np.real(np.asarray(profile.W(r)))
    j = np.real(np.asarray(profile.j(r))) if profile.class_w else np.full(r.size, np.nan)
    return CommandResult(
        columns=["r", "W", "omega", "J"],
        rows=[[float(a), float(b), float(c), float(d)] for a, b, c, d in zip(r, w, omega, j)],
        data=profile_record(profile, grid).model_dump(mode="json"),
    )


def run_biot_savart(config: ScanConfig) -> CommandResult:
    grid = _grid(config)
    samples = config.samples or 50
    cells = _cells(config)

    def evaluate(cell: tuple[int, float]) -> list[Any]:
        m, k = cell
        sector = FourierSector(m, k)
        sector.require_k("biot-savart")
        rng = np.random.default_rng([config.seed, cells.index(cell)])
        ratios = [
            energy_estimate_ratio(sector, random_vorticity(sector, grid, rng))
            for _ in range(samples)
        ]
        return [m, k, grid.n, samples, max(ratios)]

    rows = _map(evaluate, cells, _jobs(config))
    columns = ["m", "k", "nodes", "samples", "max_ratio"]
    return CommandResult(columns=columns, rows=rows, data=[dict(zip(columns, row)) for row in rows])


def run_spectrum(config: ScanConfig) -> CommandResult:
    profile = load_profile(config)
    grid = _grid(config, operator=True)

    def evaluate(cell: tuple[int, float]) -> Any:
        return spectrum(build(FourierSector(*cell), profile, grid))

    reports = _map(evaluate, _cells(config), _jobs(config))
    rows = [row for report in reports for row in report.rows()]
    data = [report.model_dump(mode="json") for report in reports]
    return CommandResult(columns=SPECTRUM_COLUMNS, rows=rows, data=data)


def run_scan_unstable(config: ScanConfig) -> CommandResult:
    profile = load_profile(config)
    rect = config.rect or Rectangle(
        b_min=0.05, b_max=0.95, a_min=0.01, a_max=get_settings().rect_a_max
    )

    def evaluate(cell: tuple[int, float]) -> Any:
        return scan_unstable(FourierSector(*cell), profile, rect, panels=config.panels, jobs=1)

    results = _map(evaluate, _cells(config), _jobs(config))
    rows = [
        [
            res.m,
            res.k,
            res.rect.b_min,
            res.rect.b_max,
            res.rect.a_min,
            res.rect.a_max,
            res.winding,
            len(res.roots),
        ]
        for res in results
    ]
    unstable = [(res.m, res.k, res.winding) for res in results if res.winding != 0]
    violation = None
    if profile.class_w and unstable:
        violation = "Nonzero unstable winding for a class-W profile"
    return CommandResult(
        columns=["m", "k", "b_min", "b_max", "a_min", "a_max", "winding", "roots"],
        rows=rows,
        data=[res.model_dump(mode="json") for res in results],
        violation=violation,
        violation_details={"kind": profile.kind.value, "cells": unstable},
    )


def run_kelvin(config: ScanConfig) -> CommandResult:
    profile = load_profile(config)
    samples = config.samples or 200

    def evaluate(cell: tuple[int, float]) -> list[Any]:
        m, k = cell
        if m == 0:
            omega_range = config.b_range or (0.01, 2.0)
            return find_axisymmetric_modes(k, profile, omega_range, samples=samples, jobs=1)
        b_range = config.b_range or (1.0, 1.5)
        return find_kelvin_modes(FourierSector(m, k), profile, b_range, samples=samples, jobs=1)

    modes = [mode for found in _map(evaluate, _cells(config), _jobs(config)) for mode in found]
    return CommandResult(
        columns=KELVIN_COLUMNS,
        rows=[mode.row() for mode in modes],
        data=[mode.model_dump(mode="json") for mode in modes],
    )


def run_critical_layer(config: ScanConfig) -> CommandResult:
    profile = load_profile(config)
    rows: list[list[Any]] = []
    data: list[dict[str, Any]] = []
    for m, k in _cells(config):
        sector = FourierSector(m, k)
        expansion = frobenius_series(sector, profile, config.b, order=config.order)
        payload: dict[str, Any] = {"expansion": expansion.payload()}
        if expansion.case != RootCase.COMPLEX_CONJUGATE:
            connection = connection_coefficients(sector, profile, config.b, expansion)
            payload["connection"] = connection.payload()
            upper = upper_solution_check(sector, profile, config.b)
            payload["upper_solutions"] = {
                "positive": upper.positive,
                "gamma_plus": upper.gamma_plus,
                "gamma_minus": upper.gamma_minus,
            }
        data.append(payload)
        pairs = zip(expansion.coeffs_plus, expansion.coeffs_minus, strict=True)
        for n, (c_plus, c_minus) in enumerate(pairs):
            rows.append(
                [m, k, expansion.r_bar, n, c_plus.real, c_plus.imag, c_minus.real, c_minus.imag]
            )
    return CommandResult(
        columns=["m", "k", "r_bar", "n", "re_plus", "im_plus", "re_minus", "im_minus"],
        rows=rows,
        data=data,
    )


def run_rankine(config: ScanConfig) -> CommandResult:
    samples = config.samples or 2000
    cells = _cells(config)

    def evaluate(cell: tuple[int, float]) -> dict[str, Any]:
        m, k = cell
        roots = find_rankine_roots(m, k, config.b_range, samples=samples)
        entry: dict[str, Any] = {"m": m, "k": k, "roots": roots}
        if config.rect is not None:
            entry["scan"] = count_unstable(m, k, config.rect, panels=config.panels)
        return entry

    entries = _map(evaluate, cells, _jobs(config))
    rows = [root.row() for entry in entries for root in entry["roots"]]
    stray = [
        root.b
        for entry in entries
        for root in entry["roots"]
        if abs(root.b - 1.0) > 2.0 / abs(root.m)
    ]
    windings = [
        (e["m"], e["k"], e["scan"].winding)
        for e in entries
        if "scan" in e and e["scan"].winding != 0
    ]
    violation = None
    if stray or windings:
        violation = "Rankine roots off the imaginary axis or outside |1 - b| <= 2/|m|"
    data = [
        {
            "m": e["m"],
            "k": e["k"],
            "roots": [root.model_dump(mode="json") for root in e["roots"]],
            **({"scan": e["scan"].model_dump(mode="json")} if "scan" in e else {}),
        }
        for e in entries
    ]
    return CommandResult(
        columns=RANKINE_COLUMNS,
        rows=rows,
        data=data,
        violation=violation,
        violation_details={"stray_b": stray, "windings": windings},
    )


def run_resolvent(config: ScanConfig) -> CommandResult:
    profile = load_profile(config)
    grid = _grid(config, operator=True)
    cells = resolvent_scan(
        profile, config.ms, config.ks, complex(*config.s), grid=grid, jobs=_jobs(config)
    )
    return CommandResult(
        columns=["m", "k", "norm"],
        rows=[[c.m, c.k, c.norm] for c in cells],
        data=[c.model_dump(mode="json") for c in cells],
    )


def _check_bessel_limit(config: ScanConfig) -> CommandResult:
    rows = []
    for nu in config.nu:
        value = bessel_limit_integral(nu, BESSEL_LIMIT_A)
        limit = bessel_limit_value(nu)
        rows.append([nu, BESSEL_LIMIT_A, value, limit, abs(value - limit) / abs(limit)])
    failed = [row[0] for row in rows if row[-1] > BESSEL_LIMIT_TOLERANCE]
    columns = ["nu", "a", "quadrature", "limit", "relative_error"]
    return CommandResult(
        columns=columns,
        rows=rows,
        data=[dict(zip(columns, row)) for row in rows],
        violation="Bessel limit integral differs from its closed form" if failed else None,
        violation_details={"nu": failed},
    )


def _check_angle_integral(config: ScanConfig) -> CommandResult:
    rows = []
    for nu in config.nu:
        value, exact = angle_integral(nu), angle_integral_exact(nu)
        rows.append([nu, value, exact, abs(value - exact)])
    failed = [row[0] for row in rows if row[-1] > ANGLE_TOLERANCE]
    columns = ["nu", "quadrature", "exact", "error"]
    return CommandResult(
        columns=columns,
        rows=rows,
        data=[dict(zip(columns, row)) for row in rows],
        violation="Angle integral differs from its closed form" if failed else None,
        violation_details={"nu": failed},
    )


def _check_lamb_oseen_j(config: ScanConfig) -> CommandResult:
    grid = _grid(config)
    r = grid.r
    closed = np.asarray(lamb_oseen_j_prime(r), dtype=float)
    sampled = np.asarray(make_builtin("lamb-oseen").j_prime(r), dtype=float)
    # Tails below the underflow threshold carry no sign.
    increasing = r[(closed >= 0) & (np.abs(closed) > 1e-250)]
    rows = [[float(a), float(b), float(c)] for a, b, c in zip(r, closed, sampled)]
    columns = ["r", "j_prime", "j_prime_profile"]
    return CommandResult(
        columns=columns,
        rows=rows,
        data=[dict(zip(columns, row)) for row in rows],
        violation="J is not strictly decreasing for Lamb-Oseen" if increasing.size else None,
        violation_details={"radii": increasing.tolist()},
    )


def _check_b_bound(config: ScanConfig) -> CommandResult:
    profile = load_profile(config)
    r = _grid(config).r
    rows = []
    for m, k in _cells(config):
        margin = verify_b_lower_bound(profile, m, k, r, B_BOUND_VALUES)
        rows.append([profile.kind.value, m, k, margin])
    failed = [(row[1], row[2]) for row in rows if row[-1] < -B_BOUND_SLACK]
    columns = ["kind", "m", "k", "margin"]
    return CommandResult(
        columns=columns,
        rows=rows,
        data=[dict(zip(columns, row)) for row in rows],
        violation="B falls below 1 - 4/m^2" if failed else None,
        violation_details={"cells": failed},
    )


_CHECKS: dict[str, Callable[[ScanConfig], CommandResult]] = {
    "bessel-limit": _check_bessel_limit,
    "angle-integral": _check_angle_integral,
    "lamb-oseen-j": _check_lamb_oseen_j,
    "b-bound": _check_b_bound,
}


_SECTIONS: dict[str, list[str]] = {
    "6.6": ["bessel-limit"],
    "6.7": ["lamb-oseen-j", "b-bound"],
}


def _merge(results: dict[str, CommandResult]) -> CommandResult:
    """Stack check results under a leading ``check`` column; absent cells stay empty."""
    columns = ["check"]
    for result in results.values():
        columns += [c for c in result.columns if c not in columns]
    rows = []
    for name, result in results.items():
        for row in result.rows:
            cells = dict(zip(result.columns, row, strict=True))
            rows.append([name, *(cells.get(c, "") for c in columns[1:])])
    failed = {name: r for name, r in results.items() if r.violation is not None}
    return CommandResult(
        columns=columns,
        rows=rows,
        data={name: result.data for name, result in results.items()},
        violation="; ".join(r.violation or "" for r in failed.values()) or None,
        violation_details={name: r.violation_details for name, r in failed.items()},
    )


def run_verify_appendix(config: ScanConfig) -> CommandResult:
    if config.section is None:
        return _CHECKS[config.check](config)
    names = _SECTIONS[config.section]
    if len(names) == 1:
        return _CHECKS[names[0]](config)
    return _merge({name: _CHECKS[name](config) for name in names})


COMMANDS: dict[str, Callable[[ScanConfig], CommandResult]] = {
    "profile": run_profile,
    "biot-savart": run_biot_savart,
    "spectrum": run_spectrum,
    "scan-unstable": run_scan_unstable,
    "kelvin": run_kelvin,
    "critical-layer": run_critical_layer,
    "rankine": run_rankine,
    "resolvent": run_resolvent,
    "verify-appendix": run_verify_appendix,
}
