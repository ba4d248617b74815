"""Reductions over run histories: reputation counts, medians, averages.

Reputation counts are agent-keyed (identity survives mobility) and
exclude the initial row, which is configuration rather than behavior.
Replicate averages reseed each run with mix64(base_seed, salt, r) so
results are independent of execution order.
"""

from __future__ import annotations

import numpy as np

from .engine import History, SimConfig
from .seeds import mix64


def agent_reputation_counts(history: History) -> np.ndarray:
    """Per-agent count of HIGH states over rows 1..T."""
    return history.agent_matrix[1:].sum(axis=0, dtype=np.int64)


def donations_received_totals(history: History) -> np.ndarray:
    """Per-agent total donation value received over the run."""
    return history.received.sum(axis=0)


def median(values) -> float:
    """Midpoint of the sorted values; mean of the two central ones for
    even length."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("median of empty input")
    return float(np.median(values))


def site_spacetime(history: History) -> np.ndarray:
    """The (T+1) x N grid-site state matrix (HIGH renders black)."""
    return history.site_matrix.copy()


def replicate_seeds(base_seed: int, replicates: int, salt: int = 0) -> list[int]:
    if replicates < 1:
        raise ValueError("need at least one replicate")
    return [mix64(base_seed, salt, r) for r in range(replicates)]


def median_reputation(history: History) -> float:
    return median(agent_reputation_counts(history))


def median_donations(history: History) -> float:
    return median(donations_received_totals(history))


def averaged_median_reputation(
    sim: SimConfig, replicates: int, base_seed: int, salt: int = 0
) -> float:
    """Mean over replicates of the median per-agent reputation count."""
    medians = [
        median_reputation(sim.run(seed))
        for seed in replicate_seeds(base_seed, replicates, salt)
    ]
    return float(np.mean(medians))


def averaged_median_donations(
    sim: SimConfig, replicates: int, base_seed: int, salt: int = 0
) -> float:
    """Mean over replicates of the median per-agent donations received."""
    medians = [
        median_donations(sim.run(seed))
        for seed in replicate_seeds(base_seed, replicates, salt)
    ]
    return float(np.mean(medians))


def replicate_medians(
    sim: SimConfig, replicates: int, base_seed: int, salt: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """(reputation medians, donation medians) per replicate, one pass."""
    rep = np.empty(replicates, dtype=np.float64)
    don = np.empty(replicates, dtype=np.float64)
    for r, seed in enumerate(replicate_seeds(base_seed, replicates, salt)):
        history = sim.run(seed)
        rep[r] = median_reputation(history)
        don[r] = median_donations(history)
    return rep, don
