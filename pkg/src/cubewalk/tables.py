"""Deterministic table and JSON serialization shared by the CLI and presets.

Floats are written with ``repr`` (shortest round-trip form), so output bytes
are a pure function of the computed values.
"""
from __future__ import annotations

import json

import numpy as np

SCHEMA_LINE = "# schema=1"


def fmt_cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def pyify(obj):
    """Recursively convert numpy scalars so json can serialize them."""
    if isinstance(obj, dict):
        return {k: pyify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [pyify(v) for v in obj]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_table(fh, columns, rows, fmt: str) -> None:
    if fmt == "json":
        payload = [dict(zip(columns, row)) for row in rows]
        fh.write(json.dumps(pyify(payload), indent=2) + "\n")
        return
    fh.write(SCHEMA_LINE + "\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(",".join(fmt_cell(v) for v in row) + "\n")


def dump_json(obj) -> str:
    return json.dumps(pyify(obj), indent=2) + "\n"
