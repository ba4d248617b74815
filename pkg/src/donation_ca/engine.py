"""Synchronous donation-game simulation on a periodic 1-D lattice.

Each iteration every cell acts as a donor against the snapshot of the
previous iteration (synchronous update), in a fixed phase order:

1. perception: each donor independently misreads each neighbor's
   state with probability e_r;
2. donation: the donor's strategy maps (perceived left, own state,
   perceived right) to shares for the two neighbors; a donor past its
   fatigue limit is forced to abstain;
3. delivery: recipients are credited, donors debited; received value
   never alters the recipient's state;
4. state: a donor that donated turns HIGH, except that with
   probability e_a the outcome is recorded as LOW; a donor that
   abstained turns LOW;
5. fatigue: consecutive-donation streaks advance or reset;
6. mobility: optional directed shift of even positions by +2, then
   `swap_pairs` sequential random pair transpositions.

RNG draws per step, in order: perception uniforms (2 x N, only when
e_r > 0), action uniforms (N, only when e_a > 0), swap indices (two
length-k batches, only when swap_pairs > 0).  Zero-probability features
consume nothing, so disabling them leaves all other streams untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .rules import (
    StrategyDescriptor,
    decide_donation,
    derive_rule_table,
    rule_table_from_number,
)

StrategyLike = Union[StrategyDescriptor, int]


@dataclass(frozen=True)
class NoiseParams:
    """Perception (e_r) and action (e_a) error probabilities."""

    e_r: float = 0.0
    e_a: float = 0.0

    def __post_init__(self):
        for name, p in (("e_r", self.e_r), ("e_a", self.e_a)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p}")


@dataclass(frozen=True)
class MobilityParams:
    """Random pair swaps per iteration and the deterministic +2 shift."""

    swap_pairs: int = 0
    directed: bool = False

    def __post_init__(self):
        if self.swap_pairs < 0:
            raise ValueError("swap_pairs must be >= 0")


class StrategySet:
    """Compiled share tables for the strategies present in a world.

    shares[s, k] are the (left, right) donation shares of strategy s in
    neighborhood k = 4L + 2C + R.  Raw Wolfram rules are supported for
    pattern generation: a donating neighborhood is booked as an even
    0.5/0.5 split so the value ledger stays consistent, but the split
    carries no strategy semantics.
    """

    def __init__(self, labels, numbers, shares):
        self.labels = tuple(labels)
        self.numbers = tuple(numbers)
        self.shares = np.asarray(shares, dtype=np.float64)
        assert self.shares.shape == (len(self.labels), 8, 2)
        # flat per-side tables for the hot lookup in step()
        self._left_flat = np.ascontiguousarray(self.shares[:, :, 0].reshape(-1))
        self._right_flat = np.ascontiguousarray(self.shares[:, :, 1].reshape(-1))

    def __len__(self) -> int:
        return len(self.labels)

    @classmethod
    def from_strategies(cls, strategies: Sequence[StrategyDescriptor]) -> "StrategySet":
        shares = np.zeros((len(strategies), 8, 2))
        for s, desc in enumerate(strategies):
            for k in range(8):
                left, center, right = (k >> 2) & 1, (k >> 1) & 1, k & 1
                shares[s, k] = decide_donation(desc, left, center, right)
        labels = [d.label for d in strategies]
        numbers = [derive_rule_table(d).rule_number for d in strategies]
        return cls(labels, numbers, shares)

    @classmethod
    def from_raw_numbers(cls, numbers: Sequence[int]) -> "StrategySet":
        shares = np.zeros((len(numbers), 8, 2))
        for s, n in enumerate(numbers):
            table = rule_table_from_number(n)
            for k in range(8):
                if table.bits[k]:
                    shares[s, k] = (0.5, 0.5)
        return cls([f"raw:{n}" for n in numbers], list(numbers), shares)


@dataclass
class StepRecord:
    """Outcome of one iteration.

    site_states is the post-mobility lattice row; donated and received
    are keyed by agent id, so sum(received) == count(donated) exactly
    (every donation has total value 1).
    """

    site_states: np.ndarray
    donated: np.ndarray
    received: np.ndarray


@dataclass
class History:
    """Full record of a run: T steps on top of the initial row.

    site_matrix rows are lattice views (column = grid position);
    agent_matrix, received and donated are keyed by agent id, which
    mobility never changes.
    """

    site_matrix: np.ndarray   # (T+1, N) uint8
    agent_matrix: np.ndarray  # (T+1, N) uint8
    received: np.ndarray      # (T, N) float64
    donated: np.ndarray       # (T, N) bool

    @property
    def steps(self) -> int:
        return self.site_matrix.shape[0] - 1

    @property
    def n_agents(self) -> int:
        return self.site_matrix.shape[1]


def directed_shift_permutation(n: int) -> np.ndarray:
    """Source-index permutation moving every even position +2 (mod n).

    new[q] = old[perm[q]].  Requires even n; with odd n the shifted even
    sublattice would collide with the fixed odd positions.
    """
    if n % 2 != 0:
        raise ValueError("directed shift requires an even lattice size")
    perm = np.arange(n)
    even = perm[::2]
    perm[::2] = (even - 2) % n
    return perm


class World:
    """Mutable lattice state plus its deterministic RNG.

    Position-indexed arrays (states, strat, fatigue, ids) travel with
    the agents under mobility; the donation tallies are indexed by
    agent id and never move.
    """

    def __init__(self, states, strategy_set, strategy_indices, noise, mobility,
                 fatigue_limit, rng):
        states = np.asarray(states, dtype=np.uint8)
        n = states.shape[0]
        if n < 3:
            raise ValueError("lattice needs at least 3 cells")
        if mobility.directed and n % 2 != 0:
            raise ValueError("directed movement requires an even lattice size")
        if mobility.swap_pairs > n:
            raise ValueError(f"swap_pairs capped at the lattice size ({n})")
        if fatigue_limit < 0:
            raise ValueError("fatigue_limit must be >= 0")
        strat = np.asarray(strategy_indices, dtype=np.intp)
        if strat.shape != (n,):
            raise ValueError("need one strategy index per cell")
        if len(strategy_set) and (strat.min() < 0 or strat.max() >= len(strategy_set)):
            raise ValueError("strategy index out of range")

        self.n = n
        self.states = states
        self.strategy_set = strategy_set
        self.strat = strat
        self.ids = np.arange(n, dtype=np.intp)
        self.fatigue = np.zeros(n, dtype=np.int64)
        self.donations_received = np.zeros(n, dtype=np.float64)
        self.donations_made = np.zeros(n, dtype=np.float64)
        self.noise = noise
        self.mobility = mobility
        self.fatigue_limit = fatigue_limit
        self.iteration = 0
        self.rng = rng
        self._directed_perm = (
            directed_shift_permutation(n) if mobility.directed else None
        )
        # scratch buffers and caches for step(); ids stay the identity
        # permutation until the first mobility event
        self._ids_identity = True
        self._strat8 = strat * 8
        self._left = np.empty(n, dtype=np.uint8)
        self._right = np.empty(n, dtype=np.uint8)
        self._idx = np.empty(n, dtype=np.intp)
        self._recv = np.empty(n, dtype=np.float64)

    def agent_states(self) -> np.ndarray:
        """Current states keyed by agent id instead of grid position."""
        out = np.empty(self.n, dtype=np.uint8)
        out[self.ids] = self.states
        return out


def _initial_states(n: int, init, rng: np.random.Generator) -> np.ndarray:
    if isinstance(init, str):
        if init == "random":
            return rng.integers(0, 2, size=n, dtype=np.uint8)
        if init == "single":
            states = np.zeros(n, dtype=np.uint8)
            states[n // 2] = 1
            return states
        if init == "checker":
            states = np.zeros(n, dtype=np.uint8)
            states[::2] = 1
            return states
        raise ValueError(f"unknown init mode {init!r}")
    states = np.asarray(init, dtype=np.uint8)
    if states.shape != (n,):
        raise ValueError(f"explicit init needs exactly {n} states")
    if not np.isin(states, (0, 1)).all():
        raise ValueError("explicit init states must be 0 or 1")
    return states


def init_world(
    n: int,
    strategy,
    *,
    init="random",
    noise: NoiseParams | None = None,
    mobility: MobilityParams | None = None,
    fatigue_limit: int = 0,
    seed: int = 0,
) -> World:
    """Build a world of n agents.

    `strategy` is a StrategyDescriptor or raw rule number (homogeneous
    population), or a length-n sequence of descriptors.  `init` is
    "random" (each cell HIGH with probability 1/2, drawn from the world
    RNG), "single" (one HIGH cell at n//2), "checker" (HIGH on even
    positions), or an explicit 0/1 sequence.
    """
    noise = noise or NoiseParams()
    mobility = mobility or MobilityParams()
    if isinstance(strategy, StrategyDescriptor):
        strategy_set = StrategySet.from_strategies([strategy])
        indices = np.zeros(n, dtype=np.intp)
    elif isinstance(strategy, (int, np.integer)):
        strategy_set = StrategySet.from_raw_numbers([int(strategy)])
        indices = np.zeros(n, dtype=np.intp)
    else:
        descriptors = list(strategy)
        if len(descriptors) != n:
            raise ValueError("per-agent strategy list must have length n")
        unique = sorted(set(descriptors), key=lambda d: d.label)
        strategy_set = StrategySet.from_strategies(unique)
        lookup = {d: i for i, d in enumerate(unique)}
        indices = np.array([lookup[d] for d in descriptors], dtype=np.intp)
    return make_world(
        n,
        strategy_set,
        indices,
        init=init,
        noise=noise,
        mobility=mobility,
        fatigue_limit=fatigue_limit,
        seed=seed,
    )


def make_world(
    n: int,
    strategy_set: StrategySet,
    strategy_indices,
    *,
    init="random",
    noise: NoiseParams | None = None,
    mobility: MobilityParams | None = None,
    fatigue_limit: int = 0,
    seed: int = 0,
) -> World:
    """Lower-level factory taking a pre-compiled strategy set."""
    rng = np.random.Generator(np.random.PCG64(seed))
    states = _initial_states(n, init, rng)
    return World(states, strategy_set, strategy_indices,
                 noise or NoiseParams(), mobility or MobilityParams(),
                 fatigue_limit, rng)


def step(world: World, record: bool = True) -> StepRecord | None:
    """Advance the world one iteration; see the module docstring.

    record=False skips building the StepRecord (tallies still
    accumulate), the fast path for long evolutionary runs.
    """
    n = world.n
    states = world.states
    rng = world.rng
    e_r = world.noise.e_r
    e_a = world.noise.e_a

    left = world._left
    right = world._right
    left[0] = states[-1]
    left[1:] = states[:-1]
    right[-1] = states[0]
    right[:-1] = states[1:]
    if e_r > 0.0:
        u = rng.random((2, n))
        np.bitwise_xor(left, u[0] < e_r, out=left)
        np.bitwise_xor(right, u[1] < e_r, out=right)

    # neighborhood code 4L + 2C + R, offset into the strategy's table row
    idx = world._idx
    idx[:] = left
    idx <<= 1
    idx |= states
    idx <<= 1
    idx |= right
    if len(world.strategy_set) > 1:
        idx += world._strat8
    share_left = world.strategy_set._left_flat[idx]
    share_right = world.strategy_set._right_flat[idx]

    if world.fatigue_limit > 0:
        tired = world.fatigue >= world.fatigue_limit
        if tired.any():
            share_left[tired] = 0.0
            share_right[tired] = 0.0

    made = share_left + share_right
    donated = made > 0.0
    # share given left arrives at position i-1, share given right at i+1
    received = world._recv
    received[:-1] = share_left[1:]
    received[-1] = share_left[0]
    received[1:] += share_right[:-1]
    received[0] += share_right[-1]

    ids = world.ids
    if world._ids_identity:
        world.donations_received += received
        world.donations_made += made
    else:
        world.donations_received[ids] += received
        world.donations_made[ids] += made

    new_states = np.empty(n, dtype=np.uint8)
    if e_a > 0.0:
        corrupted = rng.random(n) < e_a
        np.copyto(new_states, donated & ~corrupted)
    else:
        np.copyto(new_states, donated)

    if world.fatigue_limit > 0:
        world.fatigue += 1
        world.fatigue[~donated] = 0

    perm = world._directed_perm
    k = world.mobility.swap_pairs
    if k > 0:
        i_arr = rng.integers(0, n, size=k)
        j_arr = rng.integers(0, n - 1, size=k)
        j_arr = j_arr + (j_arr >= i_arr)
        swaps = np.arange(n)
        for i, j in zip(i_arr.tolist(), j_arr.tolist()):
            swaps[i], swaps[j] = swaps[j], swaps[i]
        perm = swaps if perm is None else perm[swaps]
    if perm is not None:
        new_states = new_states[perm]
        world.strat = world.strat[perm]
        world._strat8 = world._strat8[perm]
        world.fatigue = world.fatigue[perm]
        world.ids = world.ids[perm]
        world._ids_identity = False

    world.states = new_states
    world.iteration += 1

    if not record:
        return None
    donated_by_agent = np.empty(n, dtype=bool)
    donated_by_agent[ids] = donated
    received_by_agent = np.empty(n, dtype=np.float64)
    received_by_agent[ids] = received
    return StepRecord(new_states.copy(), donated_by_agent, received_by_agent)


def run(world: World, steps: int, record: bool = True) -> History | None:
    """Run `steps` iterations; return the History unless record=False.

    With record=False only the world tallies accumulate (the fast path
    for long evolutionary runs).
    """
    if steps < 1:
        raise ValueError("need at least one step")
    if not record:
        for _ in range(steps):
            step(world, record=False)
        return None

    n = world.n
    site = np.empty((steps + 1, n), dtype=np.uint8)
    agent = np.empty((steps + 1, n), dtype=np.uint8)
    received = np.empty((steps, n), dtype=np.float64)
    donated = np.empty((steps, n), dtype=bool)
    site[0] = world.states
    agent[0] = world.agent_states()
    for t in range(steps):
        rec = step(world)
        site[t + 1] = rec.site_states
        agent[t + 1][world.ids] = world.states
        received[t] = rec.received
        donated[t] = rec.donated
    return History(site, agent, received, donated)


@dataclass(frozen=True)
class SimConfig:
    """Immutable description of one homogeneous run; seed comes later.

    `strategy` is a StrategyDescriptor or a raw rule number; `init` is
    an init-mode string or an explicit tuple of 0/1 states.
    """

    n: int
    steps: int
    strategy: StrategyLike
    init: str | tuple[int, ...] = "random"
    noise: NoiseParams = field(default_factory=NoiseParams)
    mobility: MobilityParams = field(default_factory=MobilityParams)
    fatigue_limit: int = 0

    def build_world(self, seed: int) -> World:
        return init_world(
            self.n,
            self.strategy,
            init=self.init,
            noise=self.noise,
            mobility=self.mobility,
            fatigue_limit=self.fatigue_limit,
            seed=seed,
        )

    def run(self, seed: int, record: bool = True) -> History | None:
        world = self.build_world(seed)
        return run(world, self.steps, record=record)

    @property
    def rule_number(self) -> int:
        if isinstance(self.strategy, StrategyDescriptor):
            return derive_rule_table(self.strategy).rule_number
        return int(self.strategy)
