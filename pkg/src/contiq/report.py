"""Deterministic JSON/CSV report emission.

Every float is rounded to 6 significant digits before serialization and keys
are sorted, so identical analyses produce byte-identical files.
"""
from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path

import numpy as np


def round_sig(x: float, sig: int = 6) -> float:
    """Round to ``sig`` significant digits (NaN/inf become None upstream)."""
    if x == 0:
        return 0.0
    return float(f"{x:.{sig}g}")


def jsonable(obj):
    """Recursively convert dataclasses/numpy values to JSON-ready data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v) or math.isinf(v):
            return None
        return round_sig(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    return obj


def write_json(path: str | Path, payload) -> None:
    text = json.dumps(jsonable(payload), sort_keys=True, indent=2)
    Path(path).write_text(text + "\n")


def format_float(x: float) -> str:
    if x is None or (isinstance(x, float) and (math.isnan(x) or math.isinf(x))):
        return ""
    return f"{x:.6g}"


def write_csv(path: str | Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, (float, np.floating)):
                cells.append(format_float(float(v)))
            elif isinstance(v, bool):
                cells.append("1" if v else "0")
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


PER_PARTICLE_HEADER = ["label", "area_um2", "diameter_um", "perimeter_um",
                       "circularity", "edge_um", "touches_border"]


def per_particle_rows(shapes) -> list[list]:
    return [[s.label, s.area_um2, s.equivalent_diameter_um, s.perimeter_um,
             s.circularity, s.edge_um, s.touches_border] for s in shapes]
