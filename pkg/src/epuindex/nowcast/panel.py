"""Monthly macro panel: CSV input, stationarity transformations, series alignment."""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from epuindex.errors import ConfigError, DataError
from epuindex.months import format_month, parse_month

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

TRANSFORMS = ("none", "difference", "log-difference")


@dataclass
class MacroPanel:
    """Transformed series on a contiguous month axis; NaN marks missing values.

    A differenced series loses its first month (it becomes NaN).
    """

    months: np.ndarray
    columns: dict[str, np.ndarray]
    transforms: dict[str, str]

    def __post_init__(self):
        self.months = np.asarray(self.months, dtype=np.int64)
        if len(self.months) and np.any(np.diff(self.months) != 1):
            raise DataError("panel months must be contiguous and increasing")
        for name, v in self.columns.items():
            if len(v) != len(self.months):
                raise DataError(f"panel column {name!r} has wrong length")

    @classmethod
    def from_raw(cls, months, raw: Mapping[str, np.ndarray],
                 transforms: Mapping[str, str] | None = None) -> "MacroPanel":
        transforms = dict(transforms or {})
        unknown = sorted(set(transforms) - set(raw))
        if unknown:
            raise ConfigError(f"transformation given for unknown panel column {unknown[0]!r}")
        months = np.asarray(months, dtype=np.int64)
        cols, tags = {}, {}
        for name, values in raw.items():
            tag = transforms.get(name, "none")
            cols[name] = transform(np.asarray(values, dtype=float), tag, name, months)
            tags[name] = tag
        return cls(months, cols, tags)

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def position(self, month: int) -> int:
        return int(month - self.months[0])


def transform(values: np.ndarray, tag: str, name: str = "?", months=None) -> np.ndarray:
    if tag == "none":
        return values.astype(float).copy()
    out = np.full(len(values), np.nan)
    if tag == "difference":
        out[1:] = values[1:] - values[:-1]
    elif tag == "log-difference":
        bad = np.flatnonzero(values <= 0)
        if bad.size:
            where = format_month(int(months[bad[0]])) if months is not None else f"row {bad[0]}"
            raise DataError(f"log-difference of non-positive value in {name!r} at {where}")
        with np.errstate(invalid="ignore"):
            lv = np.log(values)
        out[1:] = lv[1:] - lv[:-1]
    else:
        raise ConfigError(f"unknown transformation {tag!r} for {name!r}; expected one of {TRANSFORMS}")
    return out


def load_transforms(path) -> dict[str, str]:
    """Sidecar TOML: ``column = "tag"`` pairs, optionally under ``[transforms]``."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"transformation file not found: {path}")
    raw = tomllib.loads(path.read_text(encoding="utf-8"))
    raw = raw.get("transforms", raw)
    out = {}
    for k, v in raw.items():
        if v not in TRANSFORMS:
            raise ConfigError(f"{path}: unknown transformation {v!r} for {k!r}")
        out[k] = v
    return out


def read_panel_csv(path, transforms: Mapping[str, str] | None = None) -> MacroPanel:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"panel file not found: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "month" or len(header) < 2:
            raise DataError(f"{path}: first column must be 'month' followed by data columns")
        names = header[1:]
        if len(set(names)) != len(names):
            raise DataError(f"{path}: duplicate column names")
        months, rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: line {lineno} has {len(row)} fields, expected {len(header)}")
            try:
                months.append(parse_month(row[0]))
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from None
            vals = []
            for name, cell in zip(names, row[1:]):
                try:
                    vals.append(float(cell) if cell.strip() else math.nan)
                except ValueError:
                    raise DataError(f"{path}: line {lineno}: non-numeric value {cell!r} in {name!r}") from None
            rows.append(vals)
    if not months:
        raise DataError(f"{path}: no data rows")
    if any(b - a != 1 for a, b in zip(months, months[1:])):
        raise DataError(f"{path}: months must be consecutive")
    data = np.asarray(rows, dtype=float)
    raw = {name: data[:, j] for j, name in enumerate(names)}
    return MacroPanel.from_raw(months, raw, transforms)


def write_panel_csv(months, columns: Mapping[str, np.ndarray], path) -> None:
    names = list(columns)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["month", *names])
        for i, mo in enumerate(months):
            w.writerow([format_month(int(mo)), *("" if math.isnan(v) else repr(float(v))
                                                 for v in (columns[n][i] for n in names))])


def align(months_src, values, months_dst) -> np.ndarray:
    """Reindex a monthly series onto another month axis (NaN where absent)."""
    lookup = dict(zip(np.asarray(months_src).tolist(), np.asarray(values, dtype=float).tolist()))
    return np.array([lookup.get(m, math.nan) for m in np.asarray(months_dst).tolist()], dtype=float)
