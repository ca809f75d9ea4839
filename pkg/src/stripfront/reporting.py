"""Deterministic JSON/CSV writers for experiment artifacts.

JSON is written with sorted keys and no NaN/Infinity (failed statistics
must be converted to ``None`` plus a reason upstream).  CSV numerics use
17 significant digits, which round-trips every float64 exactly.
"""

from __future__ import annotations

import csv
import json
import math


def fmt17(value) -> str:
    """Exact decimal form of a float (17 significant digits)."""
    return format(float(value), ".17g")


def csv_field(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt17(value)
    return str(value)


def write_csv(path, header, rows) -> None:
    """RFC-4180-style CSV with exact float formatting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([csv_field(v) for v in row])


def _check_finite(obj, where="payload"):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError(f"non-finite number in {where}; "
                         "report it as null with a reason instead")
    if isinstance(obj, dict):
        for key, val in obj.items():
            _check_finite(val, f"{where}.{key}")
    elif isinstance(obj, (list, tuple)):
        for i, val in enumerate(obj):
            _check_finite(val, f"{where}[{i}]")


def write_json(path, payload) -> None:
    """UTF-8 JSON, sorted keys, newline-terminated, NaN-free."""
    _check_finite(payload)
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
