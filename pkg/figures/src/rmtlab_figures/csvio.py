"""CSV input for the figure scripts: plain readers with named errors."""

from __future__ import annotations

import csv
import json
from typing import Dict, List, Sequence

import numpy as np

__all__ = ["FigureInputError", "read_table", "require_columns", "load_config_hash"]


class FigureInputError(ValueError):
    """Missing column, empty file, or unreadable input."""


def read_table(path: str) -> Dict[str, np.ndarray]:
    """Read one CSV into named columns (floats where possible)."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise FigureInputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise FigureInputError(f"empty CSV: {path}")
    header, body = rows[0], rows[1:]
    if not body:
        raise FigureInputError(f"CSV has a header but no data rows: {path}")
    cols: Dict[str, list] = {name: [] for name in header}
    for row in body:
        for name, value in zip(header, row):
            cols[name].append(value)
    out: Dict[str, np.ndarray] = {}
    for name, values in cols.items():
        try:
            out[name] = np.asarray([float(v) for v in values])
        except ValueError:
            out[name] = np.asarray(values)
    return out


def require_columns(table: Dict[str, np.ndarray], names: Sequence[str],
                    path: str) -> None:
    missing = [n for n in names if n not in table]
    if missing:
        raise FigureInputError(
            f"{path} is missing required column(s) {', '.join(missing)}")


def load_config_hash(summary_path: str) -> str:
    try:
        with open(summary_path) as fh:
            summary = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FigureInputError(f"cannot read summary {summary_path}: {exc}") from exc
    if "config_hash" not in summary:
        raise FigureInputError(f"{summary_path} carries no config_hash")
    return str(summary["config_hash"])
