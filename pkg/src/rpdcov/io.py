"""CSV matrices and JSON/CSV report serialization.

Matrix files are UTF-8 comma-separated, one observation per row, with an
optional single header line (detected by a non-numeric first row).
Values are written with 17 significant digits so a write-read round trip
reproduces every float64 exactly.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import sys
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .errors import ValidationError

SCHEMA_VERSION = 1


def _looks_numeric(line: str) -> bool:
    fields = [f.strip() for f in line.split(",")]
    if not fields or any(not f for f in fields):
        return False
    try:
        for f in fields:
            float(f)
    except ValueError:
        return False
    return True


def read_matrix(path) -> np.ndarray:
    """Load an (n, d) matrix from CSV, skipping a header row if present."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty matrix file")
    skip = 0 if _looks_numeric(lines[0]) else 1
    if skip == 1 and len(lines) == 1:
        raise ValidationError(f"{path}: header but no data rows")
    try:
        data = np.loadtxt(lines[skip:], delimiter=",", ndmin=2, dtype=np.float64)
    except ValueError as exc:
        raise ValidationError(f"{path}: could not parse CSV matrix ({exc})") from None
    return data


def write_matrix(path, X, header: Optional[str] = None) -> None:
    arr = np.atleast_2d(np.asarray(X, dtype=np.float64))
    np.savetxt(
        path,
        arr,
        delimiter=",",
        fmt="%.17g",
        header=header or "",
        comments="",
    )


def to_jsonable(obj: Any) -> Any:
    """Recursively convert dataclasses/arrays/scalars to JSON-safe values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def write_json(obj: Any, path: Optional[str] = None) -> None:
    """Serialize to ``path``, or stdout when path is None or ``-``."""
    payload = to_jsonable(obj)
    if isinstance(payload, dict):
        payload.setdefault("schema_version", SCHEMA_VERSION)
    text = json.dumps(payload, indent=2, sort_keys=False)
    if path is None or path == "-":
        sys.stdout.write(text + "\n")
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


def write_csv_rows(rows: list[dict], path: Optional[str] = None) -> None:
    """Write homogeneous dict rows as CSV with a header line."""
    if not rows:
        raise ValidationError("no rows to write")
    fieldnames = list(rows[0].keys())
    out = sys.stdout if path is None or path == "-" else open(path, "w", encoding="utf-8", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: to_jsonable(v) for k, v in row.items()})
    finally:
        if out is not sys.stdout:
            out.close()
