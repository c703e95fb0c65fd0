"""Deterministic CSV and JSON emission for the command-line surface.

Floats are rendered with repr (shortest round-trip), so identical numeric
results serialise to identical bytes regardless of thread count or run.
"""

from __future__ import annotations

import json
import os
from typing import Sequence


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str, header: Sequence[str], columns: Sequence[Sequence]) -> str:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    n = len(columns[0]) if columns else 0
    lines = [",".join(header)]
    for i in range(n):
        lines.append(",".join(fmt(col[i]) for col in columns))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_json(path: str, obj) -> str:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return path
