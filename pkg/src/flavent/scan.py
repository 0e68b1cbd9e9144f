"""Distance sweeps and their CSV/JSON serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .measures import measure_grid
from .params import PARAM_KEYS, OscillationParams, default_params, flavor_name, params_from_dict

COLUMNS = (
    "x_m",
    "P_e",
    "P_mu",
    "P_tau",
    "C_e_mu",
    "C_e_tau",
    "C_mu_tau",
    "EN_emu_tau",
    "EN_etau_mu",
    "EN_mutau_e",
    "avg_EN",
)
PROB_COLUMNS = COLUMNS[:4]
MEASURE_COLUMNS = (COLUMNS[0],) + COLUMNS[4:]

SWEEP_KEYS = ("flavor", "x_min_m", "x_max_m", "points", "grid", "cross_validate")
DERIVED_KEYS = ("dm2_31_ev2", "dm2_32_ev2")


@dataclass(frozen=True)
class SweepConfig:
    source_flavor: str = "e"
    x_min: float = 1.0
    x_max: float = 1e12
    points: int = 600
    grid: str = "log"
    cross_validate: bool = False
    params: OscillationParams = field(default_factory=default_params)

    def __post_init__(self):
        object.__setattr__(self, "source_flavor", flavor_name(self.source_flavor))
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValueError("x_min and x_max must be finite")
        if not 0 < self.x_min < self.x_max:
            raise ValueError(f"need 0 < x_min < x_max, got {self.x_min!r}, {self.x_max!r}")
        if isinstance(self.points, bool) or not isinstance(self.points, int) or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points!r}")
        if self.grid not in ("log", "linear"):
            raise ValueError(f"grid must be 'log' or 'linear', got {self.grid!r}")

    @property
    def delta_cp(self) -> float:
        return self.params.delta_cp

    def distances(self) -> np.ndarray:
        if self.grid == "log":
            return np.geomspace(self.x_min, self.x_max, self.points)
        return np.linspace(self.x_min, self.x_max, self.points)

    def to_dict(self) -> dict[str, Any]:
        """Resolved configuration in the JSON config schema, plus derived splittings."""
        doc = {
            "flavor": self.source_flavor,
            "x_min_m": self.x_min,
            "x_max_m": self.x_max,
            "points": self.points,
            "grid": self.grid,
            "cross_validate": self.cross_validate,
        }
        doc.update(self.params.to_dict())
        doc["dm2_31_ev2"] = self.params.dm2_31
        doc["dm2_32_ev2"] = self.params.dm2_32
        return doc


def config_from_dict(doc: Mapping[str, Any] | None = None) -> SweepConfig:
    """Build a sweep config; absent keys take their defaults.

    Unknown keys are rejected. The derived ``dm2_31_ev2``/``dm2_32_ev2``
    written by :func:`emit_json` are accepted when they agree with the
    resolved parameters.
    """
    doc = dict(doc or {})
    unknown = set(doc) - set(SWEEP_KEYS) - set(PARAM_KEYS) - set(DERIVED_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    params = params_from_dict(doc)
    for key, value in (("dm2_31_ev2", params.dm2_31), ("dm2_32_ev2", params.dm2_32)):
        if key in doc and doc[key] != value:
            raise ValueError(f"{key}={doc[key]!r} is inconsistent with the splittings (expected {value!r})")

    def num(key, default):
        v = doc.get(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValueError(f"{key} must be a number, got {v!r}")
        return float(v)

    points = doc.get("points", 600)
    if isinstance(points, float) and points.is_integer():
        points = int(points)
    cross = doc.get("cross_validate", False)
    if not isinstance(cross, bool):
        raise ValueError(f"cross_validate must be a boolean, got {cross!r}")
    return SweepConfig(
        source_flavor=doc.get("flavor", "e"),
        x_min=num("x_min_m", 1.0),
        x_max=num("x_max_m", 1e12),
        points=points,
        grid=doc.get("grid", "log"),
        cross_validate=cross,
        params=params,
    )


def load_config(path) -> SweepConfig:
    """Read a JSON config file. An emitted sweep document is accepted too."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    if "config" in doc and "rows" in doc:
        doc = doc["config"]
    return config_from_dict(doc)


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    table: np.ndarray  # (points, len(COLUMNS))

    @property
    def rows(self) -> list[tuple[float, ...]]:
        return [tuple(float(v) for v in row) for row in self.table]

    def column(self, name: str) -> np.ndarray:
        return self.table[:, COLUMNS.index(name)]


def run_sweep(config: SweepConfig) -> SweepResult:
    """Evaluate every measure on the configured distance grid, in increasing x."""
    x = config.distances()
    probs, conc, ln, avg = measure_grid(config.source_flavor, x, config.params, config.cross_validate)
    table = np.column_stack([x, probs, conc, ln, avg])
    if not np.all(np.isfinite(table)):
        raise ArithmeticError("sweep produced non-finite values")
    return SweepResult(config, table)


def _select(columns: Sequence[str] | None) -> list[int]:
    columns = COLUMNS if columns is None else tuple(columns)
    bad = [c for c in columns if c not in COLUMNS]
    if bad:
        raise ValueError(f"unknown columns: {bad}")
    return [COLUMNS.index(c) for c in columns]


def _write(text: str, destination) -> None:
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(os.fspath(destination), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def format_csv(result: SweepResult, columns: Sequence[str] | None = None) -> str:
    idx = _select(columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([COLUMNS[i] for i in idx])
    for row in result.table:
        writer.writerow([repr(float(row[i])) for i in idx])
    return buf.getvalue()


def emit_csv(result: SweepResult, destination, columns: Sequence[str] | None = None) -> None:
    """Write the sweep as CSV with shortest round-trip float formatting."""
    _write(format_csv(result, columns), destination)


def format_json(result: SweepResult, columns: Sequence[str] | None = None) -> str:
    idx = _select(columns)
    rows = ",\n  ".join(json.dumps([float(row[i]) for i in idx]) for row in result.table)
    return (
        "{\n"
        f' "config": {json.dumps(result.config.to_dict(), indent=1).replace(chr(10), chr(10) + " ")},\n'
        f' "columns": {json.dumps([COLUMNS[i] for i in idx])},\n'
        f' "rows": [\n  {rows}\n ]\n'
        "}\n"
    )


def emit_json(result: SweepResult, destination, columns: Sequence[str] | None = None) -> None:
    """Write ``{"config": ..., "columns": ..., "rows": ...}`` as JSON."""
    _write(format_json(result, columns), destination)


def read_csv(source) -> tuple[list[str], np.ndarray]:
    """Parse a CSV written by :func:`emit_csv` into (header, float array)."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(os.fspath(source), encoding="utf-8", newline="") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)

