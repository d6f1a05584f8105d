"""Deterministic CSV emission: 17 significant digits, fixed row order."""

from __future__ import annotations

import math
from pathlib import Path


def fmt(value) -> str:
    """Lossless text for floats; plain text for everything else."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def rows_to_text(header: str, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: Path, header: str, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(rows_to_text(header, rows), encoding="utf-8")
    return path
