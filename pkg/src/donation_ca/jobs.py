"""Experiment orchestration: configs in, artifact texts out.

Every replicate's seed is derived up front with mix64, and result rows
are assembled in config order, so the worker pool size (capped by the
DONATION_CA_THREADS environment variable) can never change a single
output byte.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from . import __version__
from .engine import MobilityParams, NoiseParams, SimConfig
from .evolution import EvolutionParams, run_generations
from .formats import render_csv, render_pbm
from .imagescore import ImageGameParams, average_payoff, run_image_game
from .metrics import median_donations, median_reputation
from .rules import parse_strategy_label
from .schemas import EvolveConfig, ImageScoreConfig, LatticeRunConfig, SweepConfig
from .seeds import mix64

SWEEP_CSV_HEADER = (
    "rule",
    "axis_value",
    "mean_median_reputation",
    "mean_median_donations",
    "replicates",
    "stddev",
)

RUN_CSV_HEADER = (
    "agent_id",
    "high_reputation_count",
    "donations_received",
    "donations_made",
)

IMAGESCORE_CSV_HEADER = ("pairing", "a_p", "a_e", "swap", "mean_payoff", "replicates")


def worker_count() -> int:
    """Bounded pool size; DONATION_CA_THREADS overrides the CPU count."""
    env = os.environ.get("DONATION_CA_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"DONATION_CA_THREADS must be an integer, got {env!r}")
    return max(1, min(8, os.cpu_count() or 1))


def _parallel_map(fn, tasks):
    workers = worker_count()
    if workers == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def _meta(command: str, config, **extra) -> dict:
    meta = {
        "command": command,
        "config": config.model_dump(mode="json"),
        "version": __version__,
    }
    meta.update(extra)
    return meta


def _strategy_of(cfg: LatticeRunConfig):
    if cfg.rule is not None:
        return parse_strategy_label(cfg.rule)
    return int(cfg.raw_rule)


def _sim_config(cfg: LatticeRunConfig) -> SimConfig:
    init = tuple(cfg.states) if cfg.init == "explicit" else cfg.init
    return SimConfig(
        n=cfg.n,
        steps=cfg.steps,
        strategy=_strategy_of(cfg),
        init=init,
        noise=NoiseParams(cfg.er, cfg.ea),
        mobility=MobilityParams(cfg.swap, cfg.directed),
        fatigue_limit=cfg.fatigue,
    )


def run_job(cfg: LatticeRunConfig) -> dict:
    """Single run: space-time bitmap plus per-agent metric rows."""
    sim = _sim_config(cfg)
    history = sim.run(cfg.seed)
    counts = history.agent_matrix[1:].sum(axis=0, dtype=np.int64)
    received = history.received.sum(axis=0)
    # donated is agent-keyed; every donation has total value 1
    made = history.donated.sum(axis=0, dtype=np.int64)
    rows = [
        (i, int(counts[i]), float(received[i]), int(made[i]))
        for i in range(cfg.n)
    ]
    return {
        "meta": _meta("run", cfg, rule_number=sim.rule_number),
        "pbm": render_pbm(history.site_matrix),
        "metrics_csv": render_csv(RUN_CSV_HEADER, rows),
    }


def _sweep_cell(cfg: SweepConfig, rule_label: str, value: float) -> SimConfig:
    swap, er, ea = cfg.swap, cfg.er, cfg.ea
    if cfg.axis == "swap":
        swap = int(value)
    elif cfg.axis == "er":
        er = value
    else:
        ea = value
    return SimConfig(
        n=cfg.n,
        steps=cfg.steps,
        strategy=parse_strategy_label(rule_label),
        init=cfg.init,
        noise=NoiseParams(er, ea),
        mobility=MobilityParams(swap, cfg.directed),
        fatigue_limit=cfg.fatigue,
    )


def sweep_job(cfg: SweepConfig) -> dict:
    """Replicated sweep: one CSV row per (rule, axis value).

    Replicate seeds are mix64(seed, rule_index, axis_index, replicate);
    stddev is the sample standard deviation (ddof=1, 0 for a single
    replicate) of the reputation medians.
    """
    tasks = [
        (ri, ai, r)
        for ri in range(len(cfg.rules))
        for ai in range(len(cfg.values))
        for r in range(cfg.replicates)
    ]

    def one(task):
        ri, ai, r = task
        sim = _sweep_cell(cfg, cfg.rules[ri], cfg.values[ai])
        history = sim.run(mix64(cfg.seed, ri, ai, r))
        return median_reputation(history), median_donations(history)

    results = _parallel_map(one, tasks)

    rows = []
    per_cell = cfg.replicates
    for ri, label in enumerate(cfg.rules):
        rule_number = parse_strategy_label(label).rule_number
        for ai, value in enumerate(cfg.values):
            base = (ri * len(cfg.values) + ai) * per_cell
            rep = np.array([results[base + r][0] for r in range(per_cell)])
            don = np.array([results[base + r][1] for r in range(per_cell)])
            stddev = float(rep.std(ddof=1)) if per_cell > 1 else 0.0
            axis_value = int(value) if cfg.axis == "swap" else value
            rows.append(
                (
                    rule_number,
                    axis_value,
                    float(rep.mean()),
                    float(don.mean()),
                    per_cell,
                    stddev,
                )
            )
    return {
        "meta": _meta("sweep", cfg),
        "csv": render_csv(SWEEP_CSV_HEADER, rows),
    }


def evolve_job(cfg: EvolveConfig) -> dict:
    """Generational evolution: abundance CSV, optional stacked bitmap."""
    params = EvolutionParams(
        population=cfg.population,
        generations=cfg.generations,
        iterations=cfg.gen_iters,
        p_m=cfg.pm,
        fatigue_limit=cfg.fatigue,
        noise=NoiseParams(cfg.er, cfg.ea),
        mobility=MobilityParams(cfg.swap, cfg.directed),
    )
    series = run_generations(params, cfg.seed, record_sites=cfg.bitmap)

    numbers = series.rule_numbers
    header = (
        ["generation"]
        + [f"count_{n}" for n in numbers]
        + ["mean_fitness"]
        + [f"mean_fitness_{n}" for n in numbers]
    )
    rows = []
    for g in range(cfg.generations + 1):
        row = [g] + [int(c) for c in series.counts[g]]
        if g < cfg.generations:
            fits = series.mean_fitness[g]
            weights = series.counts[g]
            overall = float(np.sum(np.where(weights > 0, fits, 0.0) * weights))
            row.append(overall / cfg.population)
            row.extend(float(f) for f in fits)
        else:
            # the final population never plays a generation
            row.append(float("nan"))
            row.extend([float("nan")] * len(numbers))
        rows.append(row)

    result = {
        "meta": _meta("evolve", cfg, rule_numbers=list(numbers)),
        "csv": render_csv(header, rows),
        "pbm": None,
    }
    if cfg.bitmap and series.site_matrix is not None:
        result["pbm"] = render_pbm(series.site_matrix)
    return result


def imagescore_job(cfg: ImageScoreConfig) -> dict:
    """Mean payoff per (pairing, noise, swap) cell over replicates.

    A noise level sets perception and action noise together; replicate
    seeds are mix64(seed, pairing_idx, noise_idx, swap_idx, replicate).
    """
    cells = list(product(range(len(cfg.pairings)), range(len(cfg.noise)),
                         range(len(cfg.swaps))))
    tasks = [(pi, ni, si, r) for (pi, ni, si) in cells for r in range(cfg.replicates)]

    def one(task):
        pi, ni, si, r = task
        params = ImageGameParams(
            population=cfg.population,
            rounds=cfg.rounds,
            benefit=cfg.benefit,
            cost=cfg.cost,
            pairing=cfg.pairings[pi],
            swap_pairs=cfg.swaps[si],
            a_p=cfg.noise[ni],
            a_e=cfg.noise[ni],
            image_min=cfg.image_min,
            image_max=cfg.image_max,
            k_min=cfg.k_min,
            k_max=cfg.k_max,
        )
        game = run_image_game(params, mix64(cfg.seed, pi, ni, si, r))
        return average_payoff(game)

    payoffs = _parallel_map(one, tasks)

    rows = []
    for c, (pi, ni, si) in enumerate(cells):
        cell = payoffs[c * cfg.replicates : (c + 1) * cfg.replicates]
        rows.append(
            (
                cfg.pairings[pi],
                cfg.noise[ni],
                cfg.noise[ni],
                cfg.swaps[si],
                float(np.mean(cell)),
                cfg.replicates,
            )
        )
    return {
        "meta": _meta("imagescore", cfg),
        "csv": render_csv(IMAGESCORE_CSV_HEADER, rows),
    }
