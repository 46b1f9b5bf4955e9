"""Canonical serialization: stable JSON, frontier CSV, atomic writes.

JSON is the canonical format and must be byte-identical for identical
inputs: keys sorted, two-space indent, trailing newline, numpy scalars
coerced to plain Python. CSV is the lossy tabular view of frontier
records only.
"""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

FRONTIER_COLUMNS = ("t", "strategy", "seed", "total_energy", "mean_energy")


def jsonable(obj):
    """Recursively coerce numpy scalars/arrays and set-likes to JSON types."""
    if isinstance(obj, dict):
        return {str(key): jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(item) for item in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(item) for item in obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(item) for item in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def _atomic_write(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    _atomic_write(path, canonical_json(obj))


def write_text(path, text: str):
    _atomic_write(path, text)


def frontier_csv(records) -> str:
    buffer = _io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FRONTIER_COLUMNS)
    for rec in records:
        row = rec.row() if hasattr(rec, "row") else rec
        writer.writerow([row[col] for col in FRONTIER_COLUMNS])
    return buffer.getvalue()


def write_frontier_csv(path, records):
    _atomic_write(path, frontier_csv(records))
