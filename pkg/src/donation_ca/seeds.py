"""Deterministic seed derivation for replicates and sweep points.

Every simulation draws from a PCG64 generator seeded with a single
64-bit integer.  Sub-seeds (one per sweep point per replicate, per
generation, ...) are derived with splitmix64 so that any execution
order, worker count, or subset of the work produces identical streams.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 output step (Steele, Lea & Flood's mixer)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def mix64(base: int, *components: int) -> int:
    """Fold integer components into `base`, one splitmix64 round each.

    mix64(seed, axis_index, replicate_index) is the scheme used for all
    sweep and replicate seeds; mix64 is injective enough in practice
    that distinct component tuples give unrelated streams.
    """
    h = splitmix64(base & _MASK)
    for c in components:
        h = splitmix64((h ^ (c & _MASK)) & _MASK)
    return h
