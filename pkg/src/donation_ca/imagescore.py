"""Image-score donation game with adjacent or random partner pairing.

The classic well-mixed setup: agents carry a bounded integer image
score and a fixed threshold strategy k, and a donor gives (benefit b to
the recipient, cost c to itself) exactly when the recipient's image
looks >= k.  Donating raises the donor's image by 1, refusing lowers it
by 1.  This variant restricts recipients to lattice neighbors ("local"
pairing) and mixes positions with random pair swaps, to compare local
against fully random interaction payoffs under noise.

Noise: with probability a_p the donor's threshold judgment comes out
inverted; with probability a_e a real donation is booked against the
donor's image as if it had refused (the transfer itself still happens).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ImageGameParams:
    population: int = 100
    rounds: int = 5000
    benefit: float = 1.0
    cost: float = 0.1
    pairing: str = "local"  # "local" | "random"
    swap_pairs: int = 0
    a_p: float = 0.0
    a_e: float = 0.0
    image_min: int = -5
    image_max: int = 5
    k_min: int = -5
    k_max: int = 6

    def __post_init__(self):
        if self.population < 3:
            raise ValueError("population must be >= 3")
        if self.cost >= self.benefit:
            raise ValueError("cost must be smaller than benefit")
        if self.pairing not in ("local", "random"):
            raise ValueError(f"unknown pairing {self.pairing!r}")
        if self.swap_pairs < 0:
            raise ValueError("swap_pairs must be >= 0")
        for name, p in (("a_p", self.a_p), ("a_e", self.a_e)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p}")
        if self.image_min >= self.image_max:
            raise ValueError("empty image range")
        if self.k_min > self.k_max:
            raise ValueError("empty strategy range")


class ImageGame:
    """Mutable game state; images, payoffs and thresholds are keyed by
    agent id, positions by the pos_to_agent lattice map."""

    def __init__(self, params: ImageGameParams, seed: int):
        self.params = params
        self.rng = np.random.Generator(np.random.PCG64(seed))
        m = params.population
        self.thresholds = self.rng.integers(
            params.k_min, params.k_max + 1, size=m
        ).astype(np.int64)
        self.images = np.zeros(m, dtype=np.int64)
        self.payoffs = np.zeros(m, dtype=np.float64)
        self.pos_to_agent = np.arange(m)
        self.donations = 0
        self.rounds_played = 0

    def play_round(self) -> None:
        """One donor interaction followed by the per-round swaps.

        Draw order: donor position, recipient choice, perception flip
        (only when a_p > 0), action flip (only when a donation happened
        and a_e > 0), then swap index pairs.
        """
        p = self.params
        rng = self.rng
        m = p.population
        donor_pos = int(rng.integers(0, m))
        if p.pairing == "local":
            side = 1 if rng.integers(0, 2) else -1
            rec_pos = (donor_pos + side) % m
        else:
            rec_pos = (donor_pos + int(rng.integers(1, m))) % m
        donor = self.pos_to_agent[donor_pos]
        recipient = self.pos_to_agent[rec_pos]

        donates = self.images[recipient] >= self.thresholds[donor]
        if p.a_p > 0.0 and rng.random() < p.a_p:
            donates = not donates

        if donates:
            self.payoffs[donor] -= p.cost
            self.payoffs[recipient] += p.benefit
            self.donations += 1
            misread = p.a_e > 0.0 and rng.random() < p.a_e
            delta = -1 if misread else 1
        else:
            delta = -1
        self.images[donor] = min(p.image_max, max(p.image_min, self.images[donor] + delta))

        for _ in range(p.swap_pairs):
            i = int(rng.integers(0, m))
            j = int(rng.integers(0, m - 1))
            if j >= i:
                j += 1
            self.pos_to_agent[i], self.pos_to_agent[j] = (
                self.pos_to_agent[j],
                self.pos_to_agent[i],
            )
        self.rounds_played += 1


def run_image_game(params: ImageGameParams, seed: int) -> ImageGame:
    game = ImageGame(params, seed)
    for _ in range(params.rounds):
        game.play_round()
    return game


def average_payoff(game: ImageGame) -> float:
    """Mean payoff per agent; equals donations * (b - c) / population."""
    return float(game.payoffs.mean())
