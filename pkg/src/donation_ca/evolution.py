"""Generational strategy evolution over the 12 curated donation rules.

Each generation the population plays the lattice game for a fixed
number of iterations; an agent's fitness is the total donation value it
received.  Offspring are drawn by fitness-proportional roulette, mutate
with probability p_m to a structurally similar rule (weight 1 - d/8 for
Hamming distance d between rule codes), and are placed on the grid in a
fresh uniform random permutation.  Strategies are the only inherited
trait: states re-randomize and fatigue/tallies reset every generation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import MobilityParams, NoiseParams, StrategySet, make_world, run
from .rules import curated_strategies


def hamming(rule_a: int, rule_b: int) -> int:
    """Number of differing bits between two 8-bit rule codes."""
    if not (0 <= rule_a <= 255 and 0 <= rule_b <= 255):
        raise ValueError("rule codes must be in 0..255")
    return (rule_a ^ rule_b).bit_count()


def mutation_matrix(rules) -> np.ndarray:
    """Row-stochastic strategy-transition matrix.

    Off-diagonal weight for parent r -> offspring s is 1 - d(r,s)/8;
    the diagonal is 0 (a mutation is always a different rule).  Pairs at
    distance 8 get weight 0 and are unreachable in a single mutation.
    """
    rules = list(rules)
    if len(set(rules)) != len(rules):
        raise ValueError("rules must be distinct")
    m = len(rules)
    probs = np.zeros((m, m), dtype=np.float64)
    for i, a in enumerate(rules):
        for j, b in enumerate(rules):
            if i != j:
                probs[i, j] = 1.0 - hamming(a, b) / 8.0
    row_sums = probs.sum(axis=1, keepdims=True)
    if (row_sums == 0).any():
        raise ValueError("a rule has no reachable mutation target")
    return probs / row_sums


def fitness(history, agent_id: int) -> float:
    """Total donation value the agent received over the generation."""
    return float(history.received[:, agent_id].sum())


def select_parents(fitnesses, rng: np.random.Generator, count: int | None = None) -> np.ndarray:
    """Fitness-proportional roulette; uniform when all fitness is zero."""
    fitnesses = np.asarray(fitnesses, dtype=np.float64)
    if (fitnesses < 0).any():
        raise ValueError("fitness must be nonnegative")
    count = len(fitnesses) if count is None else count
    total = fitnesses.sum()
    p = fitnesses / total if total > 0 else None
    return rng.choice(len(fitnesses), size=count, replace=True, p=p)


def mutate(parent_index: int, p_m: float, matrix: np.ndarray, rng: np.random.Generator) -> int:
    """Offspring strategy index: parent's, or a matrix-row draw with
    probability p_m."""
    if rng.random() < p_m:
        return int(rng.choice(matrix.shape[0], p=matrix[parent_index]))
    return int(parent_index)


@dataclass(frozen=True)
class EvolutionParams:
    population: int = 100
    generations: int = 100
    iterations: int = 300
    p_m: float = 0.001
    fatigue_limit: int = 0
    noise: NoiseParams = field(default_factory=NoiseParams)
    mobility: MobilityParams = field(default_factory=MobilityParams)

    def __post_init__(self):
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0.0 <= self.p_m <= 1.0:
            raise ValueError("p_m must be a probability")


@dataclass
class AbundanceSeries:
    """Per-generation population composition over the 12 rules.

    counts[g] describes the population entering generation g (row 0 is
    the initial population, row G the final one); every row sums to the
    population size.  mean_fitness[g] holds the per-rule mean fitness
    earned during generation g's run (NaN for absent rules); the final
    population never plays, so mean_fitness has one row less.
    site_matrix concatenates the per-generation lattice histories when
    recording is enabled.
    """

    rule_numbers: tuple[int, ...]
    counts: np.ndarray        # (G+1, 12) int64
    mean_fitness: np.ndarray  # (G, 12) float64
    site_matrix: np.ndarray | None = None


def run_generations(
    params: EvolutionParams,
    seed: int,
    initial_indices=None,
    record_sites: bool = False,
) -> AbundanceSeries:
    """Evolve a population for params.generations generations.

    The master RNG (PCG64(seed)) drives strategy initialization,
    selection, mutation and placement; each generation's lattice run
    gets its own world seed drawn from the master stream first.
    """
    strategies = curated_strategies()
    strategy_set = StrategySet.from_strategies(strategies)
    matrix = mutation_matrix(strategy_set.numbers)
    n = params.population
    rng = np.random.Generator(np.random.PCG64(seed))

    if initial_indices is None:
        indices = rng.integers(0, len(strategies), size=n)
    else:
        indices = np.asarray(initial_indices, dtype=np.intp)
        if indices.shape != (n,):
            raise ValueError("initial_indices must have length population")

    generations = params.generations
    counts = np.zeros((generations + 1, len(strategies)), dtype=np.int64)
    mean_fitness = np.full((generations, len(strategies)), np.nan)
    site_rows = [] if record_sites else None

    for g in range(generations):
        counts[g] = np.bincount(indices, minlength=len(strategies))
        world_seed = int(rng.integers(0, 2**63))
        world = make_world(
            n,
            strategy_set,
            indices,
            init="random",
            noise=params.noise,
            mobility=params.mobility,
            fatigue_limit=params.fatigue_limit,
            seed=world_seed,
        )
        history = run(world, params.iterations, record=record_sites)
        if site_rows is not None:
            site_rows.append(history.site_matrix)
        fit = world.donations_received  # agent-keyed totals

        for s in range(len(strategies)):
            mask = indices == s
            if mask.any():
                mean_fitness[g, s] = fit[mask].mean()

        parents = select_parents(fit, rng)
        offspring = indices[parents]
        mutants = rng.random(n) < params.p_m
        for i in np.flatnonzero(mutants):
            offspring[i] = rng.choice(len(strategies), p=matrix[offspring[i]])
        indices = offspring[rng.permutation(n)]

    counts[generations] = np.bincount(indices, minlength=len(strategies))
    site_matrix = np.concatenate(site_rows, axis=0) if site_rows else None
    return AbundanceSeries(strategy_set.numbers, counts, mean_fitness, site_matrix)
