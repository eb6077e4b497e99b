"""Headered-CSV and JSON readers/writers shared by the CLI and experiments.

All numeric output uses 12 significant digits; JSON keys are sorted so
identical results serialize to identical bytes.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import IngestionError


def fmt(value: float) -> str:
    return format(float(value), ".12g")


def _looks_numeric(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_series_csv(path) -> dict[str, np.ndarray]:
    """Parse a headered numeric CSV into an ordered {column: array} map."""
    path = Path(path)
    try:
        handle = path.open(newline="")
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc
    with handle:
        rows = csv.reader(handle)
        try:
            header = next(rows)
        except StopIteration:
            raise IngestionError(f"{path} is empty") from None
        header = [name.strip() for name in header]
        if all(_looks_numeric(name) for name in header):
            raise IngestionError(
                f"{path} has no header row (first line is all numeric)"
            )
        if len(set(header)) != len(header):
            raise IngestionError(f"{path} has duplicate column names")
        columns: list[list[float]] = [[] for _ in header]
        for line_no, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise IngestionError(
                    f"{path} line {line_no}: expected {len(header)} cells, "
                    f"got {len(row)}"
                )
            for name, cell, col in zip(header, row, columns):
                try:
                    col.append(float(cell))
                except ValueError:
                    raise IngestionError(
                        f"{path} line {line_no}: non-numeric value {cell!r} "
                        f"in column {name!r}"
                    ) from None
    if not columns[0]:
        raise IngestionError(f"{path} has a header but no data rows")
    return {name: np.asarray(col) for name, col in zip(header, columns)}


def write_series_csv(path, columns: dict[str, np.ndarray]) -> None:
    path = Path(path)
    arrays = [np.asarray(col) for col in columns.values()]
    length = arrays[0].size
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns.keys())
        for i in range(length):
            writer.writerow([fmt(arr[i]) for arr in arrays])


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if math.isnan(float(value)):
        return ""
    return fmt(value)


def write_table_csv(path, header: list[str], rows) -> None:
    """Rows of mixed str/number cells; numbers get the 12-digit format and
    NaN becomes an empty cell."""
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(cell) for cell in row])


def jsonable(obj):
    """Recursively convert to JSON-safe types; floats rounded to 12
    significant digits, NaN mapped to null."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(fmt(value))
    return obj


def write_json(path, obj) -> None:
    text = json.dumps(jsonable(obj), sort_keys=True, indent=2,
                      allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")
