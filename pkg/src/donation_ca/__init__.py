"""Donation-game dynamics on a one-dimensional binary cellular automaton."""

__version__ = "0.1.0"
