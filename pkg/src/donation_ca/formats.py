"""Deterministic text renderers for the emitted artifacts.

Bitmaps use the plain portable-bitmap format P1 (1 = black = HIGH
reputation), one lattice row per line, which is diff-friendly and
parseable by any image tool.  CSV floats are written with Python's
shortest round-trip repr; identical inputs therefore always produce
byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np


def render_pbm(matrix) -> str:
    """Plain PBM (P1) text for a binary matrix, HIGH rendered black."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ValueError("PBM rendering needs a 2-D matrix")
    height, width = matrix.shape
    lines = ["P1", f"{width} {height}"]
    for row in matrix:
        lines.append("".join("1" if v else "0" for v in row))
    return "\n".join(lines) + "\n"


def parse_pbm(text: str) -> np.ndarray:
    """Inverse of render_pbm, accepting any plain-P1 whitespace layout."""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError("not a plain PBM (P1) file")
    width, height = int(tokens[1]), int(tokens[2])
    digits = "".join(tokens[3:])
    if len(digits) != width * height:
        raise ValueError("PBM pixel count does not match header")
    data = np.frombuffer(digits.encode(), dtype=np.uint8) - ord("0")
    return data.reshape(height, width)


def format_value(value) -> str:
    """Shortest decimal that round-trips; ints stay integral."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        f = float(value)
        if f != f:  # NaN: an empty cell
            return ""
        return repr(f)
    return str(value)


def render_csv(header, rows) -> str:
    """CSV text with a fixed header and LF newlines."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def render_meta(meta: dict) -> str:
    """Canonical JSON (sorted keys, 2-space indent) for meta files."""
    return json.dumps(meta, indent=2, sort_keys=True) + "\n"
