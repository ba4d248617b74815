"""Shared test helpers, including the independent rule-iteration oracle."""

from __future__ import annotations

import numpy as np


def naive_rule_rows(rule_number: int, initial, steps: int) -> np.ndarray:
    """Plain elementary-CA iteration, independent of the engine.

    Returns (steps+1) x N rows; next state of cell i is bit
    4*s[i-1] + 2*s[i] + s[i+1] of the rule number, indices mod N.
    """
    bits = [(rule_number >> k) & 1 for k in range(8)]
    rows = [list(int(v) for v in initial)]
    n = len(rows[0])
    for _ in range(steps):
        s = rows[-1]
        rows.append(
            [bits[4 * s[(i - 1) % n] + 2 * s[i] + s[(i + 1) % n]] for i in range(n)]
        )
    return np.array(rows, dtype=np.uint8)
