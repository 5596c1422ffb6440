"""Deterministic text formats: branch/normal CSV and the JSON run report."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .crossing import BranchSet, NormalCurve

BRANCH_COLUMNS = [
    "Lambda", "lambda_low", "lambda_high", "g_residual_low", "g_residual_high",
    "mid_eig_check_low", "mid_eig_check_high",
]
NORMAL_COLUMNS = ["branch_id", "Lambda", "lambda", "sign", "m_x", "m_y", "m_z", "mid_eigenvalue"]


def fmt(x) -> str:
    """Shortest round-trip decimal; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def branches_csv(branches: BranchSet) -> str:
    lines = [",".join(BRANCH_COLUMNS)]
    for Lam, row in branches.by_lambda().items():
        lo, hi = row.get("low"), row.get("high")
        lines.append(",".join([
            fmt(Lam),
            fmt(lo and lo.lam), fmt(hi and hi.lam),
            fmt(lo and lo.g_residual), fmt(hi and hi.g_residual),
            fmt(lo and lo.mid_eig_check), fmt(hi and hi.mid_eig_check),
        ]))
    return "\n".join(lines) + "\n"


def normals_csv(curves: list[NormalCurve]) -> str:
    lines = [",".join(NORMAL_COLUMNS)]
    for curve in curves:
        for p, m, mid in curve.points:
            lines.append(",".join([
                p.branch_id, fmt(p.Lambda), fmt(p.lam), curve.sign,
                fmt(m[0]), fmt(m[1]), fmt(m[2]), fmt(mid),
            ]))
    return "\n".join(lines) + "\n"


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _num17(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps_report(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with insertion-ordered keys and 17-significant-digit floats."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps_report(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps_report(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps_report(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num17(float(obj))
    return json.dumps(str(obj))
