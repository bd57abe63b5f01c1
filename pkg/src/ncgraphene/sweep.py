"""Sweep configuration, record layout, and CSV/JSON emission.

A sweep is a Cartesian grid over (tau, theta_bar, eta_bar, scheme) evaluated
for a fixed particle number.  Configuration comes from a flat key = value
text file, optionally a named preset, and command-line overrides, merged in
that order.  Output is deterministic: row order is a pure function of the
configuration, grid points may be evaluated concurrently but are always
emitted in configuration order, and numbers are formatted to a fixed number
of significant digits so repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fock import spectrum_report
from .model import NCParams, PhysicalScales, UnitMode, reduced_landau_energy
from .partition import (
    PartitionEvaluation,
    Scheme,
    SumControl,
    evaluate,
    z_direct,
    z_euler_maclaurin,
    z_hurwitz,
)
from .thermo import thermo_point

SERIAL_ENV_VAR = "NC_GRAPHENE_NO_PARALLEL"

RUN_COLUMNS = (
    "tau", "theta_bar", "eta_bar", "scheme", "n_particles",
    "z", "f_bar", "u_bar", "s_bar", "c_bar", "tail_bound", "converged",
)
COMPARE_COLUMNS = (
    "tau", "theta_bar", "eta_bar", "z_hurwitz", "z_em", "z_direct",
    "rel_err_em_vs_hurwitz", "rel_err_em_vs_direct",
)
SPECTRUM_COLUMNS = ("theta_bar", "eta_bar", "n", "band", "energy_reduced")
FOCK_COLUMNS = (
    "theta_bar", "eta_bar", "position",
    "eigenvalue_numeric", "eigenvalue_analytic", "abs_error",
    "level_index", "trusted",
)

_INT_COLUMNS = {"n_particles", "n", "band", "position", "level_index"}
_BOOL_COLUMNS = {"converged", "trusted"}
_TEXT_COLUMNS = {"scheme"}

# canonical emission order of the schemes
_SCHEME_ORDER = {scheme: i for i, scheme in enumerate(Scheme)}


class ConfigError(ValueError):
    """Configuration problem with a field-level diagnostic message."""


# ----------------------------------------------------------------------
# Configuration
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TauGrid:
    start: float = 0.1
    stop: float = 10.0
    count: int = 100
    spacing: str = "linear"      # or "log"

    def validate(self):
        if not (math.isfinite(self.start) and self.start > 0.0):
            raise ConfigError(f"tau_start must be positive, got {self.start!r}")
        if not (math.isfinite(self.stop) and self.stop >= self.start):
            raise ConfigError(f"tau_stop must be >= tau_start, got {self.stop!r}")
        if self.count < 1:
            raise ConfigError(f"tau_count must be >= 1, got {self.count!r}")
        if self.spacing not in ("linear", "log"):
            raise ConfigError(f"tau_spacing must be 'linear' or 'log', got {self.spacing!r}")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class OutputSpec:
    path: str = "-"              # "-" means stdout
    fmt: str = "csv"
    precision: int = 12

    def validate(self):
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be 'csv' or 'json', got {self.fmt!r}")
        if not (6 <= self.precision <= 17):
            raise ConfigError(f"precision must be in [6, 17], got {self.precision!r}")


@dataclass(frozen=True)
class SweepConfig:
    tau_grid: TauGrid = TauGrid()
    theta_bars: tuple[float, ...] = (0.0,)
    eta_bars: tuple[float, ...] = (0.0,)
    schemes: tuple[Scheme, ...] = (Scheme.HURWITZ_ZETA,)
    n_particles: int = 1
    unit_mode: UnitMode = UnitMode.REDUCED
    si_field: float | None = None
    output: OutputSpec = OutputSpec()
    levels: int = 10             # level count for the spectrum table
    dim: int = 32                # Fock cutoff for fock-check
    sum_rel_tol: float = 1e-12
    sum_n_cap: int = 10_000_000

    def validate(self):
        self.tau_grid.validate()
        self.output.validate()
        for name, values in (("theta_bar", self.theta_bars), ("eta_bar", self.eta_bars)):
            if not values:
                raise ConfigError(f"{name} list must be non-empty")
            for v in values:
                if not math.isfinite(v) or v < 0.0:
                    raise ConfigError(f"{name} values must be finite and >= 0, got {v!r}")
        if not self.schemes:
            raise ConfigError("scheme list must be non-empty")
        if self.n_particles < 1:
            raise ConfigError(f"particles must be >= 1, got {self.n_particles!r}")
        if self.unit_mode == UnitMode.SI:
            if self.si_field is None or not math.isfinite(self.si_field) or self.si_field <= 0.0:
                raise ConfigError("SI unit mode requires a positive si_field (tesla)")
        if self.levels < 1:
            raise ConfigError(f"levels must be >= 1, got {self.levels!r}")
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim!r}")
        if not (0.0 < self.sum_rel_tol <= 1e-6):
            raise ConfigError(f"sum_rel_tol must be in (0, 1e-6], got {self.sum_rel_tol!r}")
        if self.sum_n_cap < 1_000:
            raise ConfigError(f"sum_n_cap must be >= 1000, got {self.sum_n_cap!r}")

    @property
    def sum_control(self) -> SumControl:
        return SumControl(rel_tol=self.sum_rel_tol, n_cap=self.sum_n_cap)

    def scales(self) -> PhysicalScales:
        return PhysicalScales.from_mode(self.unit_mode, self.si_field)

    def ordered_schemes(self) -> tuple[Scheme, ...]:
        return tuple(sorted(set(self.schemes), key=_SCHEME_ORDER.__getitem__))


# Configuration source merging: defaults, then file, then preset, then flags.

_DEFAULTS: dict[str, object] = {
    "tau_start": 0.1,
    "tau_stop": 10.0,
    "tau_count": 100,
    "tau_spacing": "linear",
    "theta_bar": (0.0,),
    "eta_bar": (0.0,),
    "schemes": (Scheme.HURWITZ_ZETA,),
    "particles": 1,
    "unit_mode": UnitMode.REDUCED,
    "si_field": None,
    "out": "-",
    "format": "csv",
    "precision": 12,
    "levels": 10,
    "dim": 32,
    "sum_rel_tol": 1e-12,
    "sum_n_cap": 10_000_000,
}


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in str(text).split(",") if part.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}: {exc}") from None
    if not values:
        raise ConfigError(f"empty numeric list {text!r}")
    return values


def parse_schemes(text: str) -> tuple[Scheme, ...]:
    names = [part.strip() for part in str(text).split(",") if part.strip() != ""]
    if names == ["all"]:
        return tuple(Scheme)
    schemes = []
    for name in names:
        try:
            schemes.append(Scheme(name))
        except ValueError:
            valid = ", ".join(s.value for s in Scheme)
            raise ConfigError(f"unknown scheme {name!r} (expected one of: {valid}, all)") from None
    if not schemes:
        raise ConfigError("scheme list must be non-empty")
    return tuple(schemes)


def parse_tau_spec(text: str) -> dict[str, object]:
    """Parse START:STOP:COUNT[:log|:linear] into tau_* config entries."""
    parts = str(text).split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"bad tau spec {text!r}; expected START:STOP:COUNT[:log]")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad tau spec {text!r}: {exc}") from None
    spacing = parts[3] if len(parts) == 4 else "linear"
    return {"tau_start": start, "tau_stop": stop, "tau_count": count, "tau_spacing": spacing}


def _parse_int(key):
    def cast(text):
        try:
            return int(str(text))
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {text!r}") from None
    return cast


def _parse_float(key):
    def cast(text):
        try:
            return float(str(text))
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {text!r}") from None
    return cast


def _parse_unit_mode(text):
    try:
        return UnitMode(str(text).lower())
    except ValueError:
        raise ConfigError(f"unit_mode must be 'reduced' or 'si', got {text!r}") from None


_FILE_CASTERS: dict[str, Callable[[str], object]] = {
    "tau_start": _parse_float("tau_start"),
    "tau_stop": _parse_float("tau_stop"),
    "tau_count": _parse_int("tau_count"),
    "tau_spacing": str,
    "theta_bar": parse_float_list,
    "eta_bar": parse_float_list,
    "schemes": parse_schemes,
    "particles": _parse_int("particles"),
    "unit_mode": _parse_unit_mode,
    "si_field": _parse_float("si_field"),
    "out": str,
    "format": str,
    "precision": _parse_int("precision"),
    "levels": _parse_int("levels"),
    "dim": _parse_int("dim"),
    "sum_rel_tol": _parse_float("sum_rel_tol"),
    "sum_n_cap": _parse_int("sum_n_cap"),
}


def parse_config_file(path: str) -> dict[str, object]:
    """Read a flat key = value file; raises ConfigError with line diagnostics."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    values: dict[str, object] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        caster = _FILE_CASTERS.get(key)
        if caster is None:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = caster(value)
        except ConfigError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return values


# Figure-reproduction presets.  Axis ranges are best-effort reconstructions;
# every entry can be overridden from the command line.
PRESETS: dict[str, dict[str, object]] = {
    "fig1": {
        "tau_start": 0.025, "tau_stop": 5.0, "tau_count": 200, "tau_spacing": "linear",
        "theta_bar": (0.0, 0.1), "eta_bar": (0.0, 0.1),
        "schemes": (Scheme.HURWITZ_ZETA,),
    },
    "fig2": {
        "tau_start": 0.025, "tau_stop": 5.0, "tau_count": 200, "tau_spacing": "linear",
        "theta_bar": (0.0, 0.1), "eta_bar": (0.0, 0.1),
        "schemes": (Scheme.HURWITZ_ZETA,),
    },
    "fig3": {
        "tau_start": 1.0, "tau_stop": 10.0, "tau_count": 3, "tau_spacing": "log",
        "theta_bar": tuple(np.linspace(0.0, 10.0, 21)),
        "eta_bar": tuple(np.linspace(0.0, 10.0, 21)),
        "schemes": (Scheme.HURWITZ_ZETA,),
    },
    "fig4": {
        "tau_start": 1.0, "tau_stop": 10.0, "tau_count": 3, "tau_spacing": "log",
        "theta_bar": tuple(np.linspace(0.0, 10.0, 21)),
        "eta_bar": tuple(np.linspace(0.0, 10.0, 21)),
        "schemes": (Scheme.HURWITZ_ZETA,),
    },
    "fig5": {
        "tau_start": 0.01, "tau_stop": 100.0, "tau_count": 200, "tau_spacing": "log",
        "theta_bar": (0.0, 0.001), "eta_bar": (0.0, 0.001),
        "schemes": tuple(Scheme),
        "sum_n_cap": 20_000_000,   # the direct sum near tau = 100 needs ~1e7 terms
    },
}


def load_config(path: str | None = None,
                preset: str | None = None,
                overrides: dict[str, object] | None = None) -> SweepConfig:
    """Merge defaults, config file, preset, and explicit overrides (last wins)."""
    merged = dict(_DEFAULTS)
    if path is not None:
        merged.update(parse_config_file(path))
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r} (expected one of: {', '.join(PRESETS)})")
        merged.update(PRESETS[preset])
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})

    config = SweepConfig(
        tau_grid=TauGrid(
            start=float(merged["tau_start"]),
            stop=float(merged["tau_stop"]),
            count=int(merged["tau_count"]),
            spacing=str(merged["tau_spacing"]),
        ),
        theta_bars=tuple(merged["theta_bar"]),
        eta_bars=tuple(merged["eta_bar"]),
        schemes=tuple(merged["schemes"]),
        n_particles=int(merged["particles"]),
        unit_mode=merged["unit_mode"] if isinstance(merged["unit_mode"], UnitMode)
        else _parse_unit_mode(merged["unit_mode"]),
        si_field=None if merged["si_field"] is None else float(merged["si_field"]),
        output=OutputSpec(
            path=str(merged["out"]),
            fmt=str(merged["format"]),
            precision=int(merged["precision"]),
        ),
        levels=int(merged["levels"]),
        dim=int(merged["dim"]),
        sum_rel_tol=float(merged["sum_rel_tol"]),
        sum_n_cap=int(merged["sum_n_cap"]),
    )
    config.validate()
    return config


# ----------------------------------------------------------------------
# Number formatting
# ----------------------------------------------------------------------

def format_float(value: float, precision: int) -> str:
    """Fixed significant-digit rendering; scientific notation outside
    [1e-4, 1e6), '.' decimal separator."""
    if value != value:
        return "nan"
    if value == 0.0:
        return "0"
    magnitude = abs(value)
    if math.isinf(magnitude):
        return "inf" if value > 0 else "-inf"
    if 1e-4 <= magnitude < 1e6:
        return f"{value:.{precision}g}"
    return f"{value:.{precision - 1}e}"


def format_cell(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format_float(float(value), precision)


def _typed_cell(column: str, text: str):
    """Re-parse a formatted cell into the value emitted in JSON output."""
    if text == "":
        return None
    if column in _TEXT_COLUMNS:
        return text
    if column in _BOOL_COLUMNS:
        return text == "true"
    if column in _INT_COLUMNS:
        return int(text)
    return float(text)


# ----------------------------------------------------------------------
# Row generation
# ----------------------------------------------------------------------

def _map_ordered(worker: Callable, items: Sequence) -> list:
    """Apply ``worker`` to every item, preserving input order in the result.

    Uses a thread pool unless NC_GRAPHENE_NO_PARALLEL=1 or the work list is
    small; results are identical either way because every item is independent.
    """
    if os.environ.get(SERIAL_ENV_VAR) == "1" or len(items) < 8:
        return [worker(item) for item in items]
    workers = min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, items))


@dataclass
class SweepResult:
    columns: tuple[str, ...]
    rows: list[tuple]
    nonconverged: int = 0
    messages: list[str] = field(default_factory=list)

    def formatted_rows(self, precision: int) -> list[list[str]]:
        return [[format_cell(v, precision) for v in row] for row in self.rows]


def _run_rows(config: SweepConfig, with_thermo: bool) -> SweepResult:
    control = config.sum_control
    items = [
        (theta, eta, scheme, float(tau))
        for theta in sorted(config.theta_bars)
        for eta in sorted(config.eta_bars)
        for scheme in config.ordered_schemes()
        for tau in config.tau_grid.values()
    ]

    def worker(item):
        theta, eta, scheme, tau = item
        params = NCParams(theta, eta)
        try:
            pe = evaluate(scheme, tau, params, control)
            if with_thermo:
                pt = thermo_point(pe, config.n_particles)
                thermal = (pt.f_bar, pt.u_bar, pt.s_bar, pt.c_bar)
            else:
                thermal = (None, None, None, None)
            return (tau, theta, eta, scheme.value, config.n_particles,
                    pe.z_value, *thermal, pe.tail_bound, pe.converged)
        except ValueError:
            return (tau, theta, eta, scheme.value, config.n_particles,
                    None, None, None, None, None, None, False)

    rows = _map_ordered(worker, items)
    bad = sum(1 for row in rows if not row[-1])
    return SweepResult(columns=RUN_COLUMNS, rows=rows, nonconverged=bad)


def partition_sweep(config: SweepConfig) -> SweepResult:
    """Z-only records over the configured grid (thermal columns left empty)."""
    return _run_rows(config, with_thermo=False)


def thermo_sweep_records(config: SweepConfig) -> SweepResult:
    """Full thermodynamic records over the configured grid.

    The direct sum is refused below tau = 1e-3 (the clamp region of the
    closed forms), matching the floor used by the evaluation schemes.
    """
    if Scheme.DIRECT_SUM in config.schemes:
        tau_min = float(config.tau_grid.values().min())
        if tau_min < 1e-3:
            raise ConfigError(
                f"direct scheme not available below tau = 1e-3 (grid reaches {tau_min:g})"
            )
    return _run_rows(config, with_thermo=True)


def compare_sweep(config: SweepConfig) -> SweepResult:
    """Side-by-side table of the three schemes and their relative deviations."""
    control = config.sum_control
    items = [
        (theta, eta, float(tau))
        for theta in sorted(config.theta_bars)
        for eta in sorted(config.eta_bars)
        for tau in config.tau_grid.values()
    ]

    def worker(item):
        theta, eta, tau = item
        params = NCParams(theta, eta)
        zh = z_hurwitz(tau, params).z_value
        ze = z_euler_maclaurin(tau, params).z_value
        direct = z_direct(tau, params, control)
        zd = direct.z_value
        return (tau, theta, eta, zh, ze, zd,
                (ze - zh) / ze, (ze - zd) / zd, direct.converged)

    evaluated = _map_ordered(worker, items)
    bad = sum(1 for row in evaluated if not row[-1])
    rows = [row[:-1] for row in evaluated]
    return SweepResult(columns=COMPARE_COLUMNS, rows=rows, nonconverged=bad)


def spectrum_table(config: SweepConfig) -> SweepResult:
    """Reduced level energies for n = 0..levels-1, both bands, per parameter set."""
    rows = []
    for theta in sorted(config.theta_bars):
        for eta in sorted(config.eta_bars):
            params = NCParams(theta, eta)
            for n in range(config.levels):
                for band in (1, -1):
                    rows.append((theta, eta, n, band, reduced_landau_energy(n, band, params)))
    return SweepResult(columns=SPECTRUM_COLUMNS, rows=rows)


FOCK_RESIDUAL_LIMIT = 1e-6


def fock_check_table(config: SweepConfig) -> SweepResult:
    """Numeric-vs-analytic eigenvalue table from the truncated-basis oracle."""
    if not (8 <= config.dim <= 512):
        raise ConfigError(f"fock-check dim must be in [8, 512], got {config.dim}")
    scales = config.scales()
    rows = []
    messages = []
    worst = 0.0
    for theta in sorted(config.theta_bars):
        for eta in sorted(config.eta_bars):
            params = NCParams(theta, eta)
            report = spectrum_report(params, scales, config.dim)
            dim = config.dim
            level_idx = np.concatenate([np.arange(dim - 1, -1, -1), np.arange(dim)])
            trusted = (level_idx >= 1) & (level_idx <= dim // 2)
            for i in range(2 * dim):
                rows.append((
                    theta, eta, i,
                    float(report.eigenvalues[i]), float(report.analytic[i]),
                    float(abs(report.eigenvalues[i] - report.analytic[i])),
                    int(level_idx[i]), bool(trusted[i]),
                ))
            messages.append(
                f"theta_bar={theta:g} eta_bar={eta:g} dim={dim}: "
                f"interior residual {report.interior_residual:.3e}"
            )
            worst = max(worst, report.interior_residual)
    bad = 1 if worst > FOCK_RESIDUAL_LIMIT else 0
    return SweepResult(columns=FOCK_COLUMNS, rows=rows, nonconverged=bad, messages=messages)


# ----------------------------------------------------------------------
# Serialization
# ----------------------------------------------------------------------

def write_result(result: SweepResult, output: OutputSpec, stream) -> None:
    formatted = result.formatted_rows(output.precision)
    if output.fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(result.columns)
        writer.writerows(formatted)
    else:
        records = [
            {column: _typed_cell(column, cell) for column, cell in zip(result.columns, row)}
            for row in formatted
        ]
        json.dump(records, stream, indent=2)
        stream.write("\n")
