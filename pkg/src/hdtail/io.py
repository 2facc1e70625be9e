"""CSV reading and writing.

Samples are one row per observation with an optional header; the column
count defines the dimension.  Floats are written with ``repr`` so every
emitted file reads back bit-identically.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .depth import PointCloud
from .errors import DataError, InvalidArgumentError


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def read_table(path) -> tuple[list[str] | None, list[list[str]]]:
    """Header (or ``None``) and string rows of a CSV file, blank lines skipped."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        return None, []
    header = None
    if not all(_is_number(c) for c in rows[0] if c.strip()):
        header, rows = [c.strip() for c in rows[0]], rows[1:]
    return header, rows


def read_cloud(path, columns=None) -> PointCloud:
    """Load a :class:`PointCloud`; ``columns`` selects by index or header name."""
    header, rows = read_table(path)
    if not rows:
        raise DataError(f"{path}: no data rows")
    width = len(rows[0])
    try:
        arr = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric entry ({exc})") from exc
    except Exception as exc:
        raise DataError(f"{path}: ragged rows ({exc})") from exc
    if arr.ndim != 2 or arr.shape[1] != width:
        raise DataError(f"{path}: ragged rows")
    if columns is not None:
        idx = []
        for c in columns:
            if isinstance(c, str) and not c.isdigit():
                if header is None or c not in header:
                    raise DataError(f"{path}: unknown column {c!r}")
                idx.append(header.index(c))
            else:
                idx.append(int(c))
        arr = arr[:, idx]
    try:
        return PointCloud(arr)
    except InvalidArgumentError as exc:
        raise DataError(f"{path}: {exc}") from exc


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f):
            return ""
        return repr(f)
    return str(v)


def write_rows(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    return path


def write_cloud(path, cloud, header=True) -> Path:
    pts = cloud.points if isinstance(cloud, PointCloud) else np.atleast_2d(cloud)
    head = [f"x{i + 1}" for i in range(pts.shape[1])] if header else None
    return write_rows(path, head, pts.tolist())


def read_columns(path) -> dict[str, np.ndarray]:
    """Numeric columns of a headed CSV; empty cells become NaN."""
    header, rows = read_table(path)
    if header is None:
        raise DataError(f"{path}: expected a header row")
    cols = {h: [] for h in header}
    for r in rows:
        for h, c in zip(header, r):
            cols[h].append(c)
    out = {}
    for h, vals in cols.items():
        try:
            out[h] = np.array([float(v) if v.strip() else np.nan for v in vals])
        except ValueError:
            out[h] = np.array(vals, dtype=object)
    return out
