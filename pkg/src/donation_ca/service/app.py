"""HTTP front end for the simulator.

Each endpoint validates a config model, executes the corresponding job
synchronously and returns the rendered artifacts as text, leaving file
placement to the client.
"""

from __future__ import annotations

from fastapi import FastAPI

from .. import __version__
from ..jobs import evolve_job, imagescore_job, run_job, sweep_job
from ..rules import ALTRUIST, curated_strategies, derive_rule_table
from ..schemas import (
    EvolveConfig,
    EvolveResponse,
    ImageScoreConfig,
    ImageScoreResponse,
    LatticeRunConfig,
    RuleCatalog,
    RuleInfo,
    RunResponse,
    SweepConfig,
    SweepResponse,
)

app = FastAPI(
    title="donation-ca",
    version=__version__,
    description="Donation-game simulations on a 1-D binary cellular automaton",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/rules", response_model=RuleCatalog)
def rules() -> RuleCatalog:
    infos = [
        RuleInfo(
            label=d.label,
            rule_number=derive_rule_table(d).rule_number,
            family=d.family.value,
            directionality=d.directionality.value,
            hesitation=d.hesitation,
        )
        for d in curated_strategies() + [ALTRUIST]
    ]
    return RuleCatalog(rules=infos)


@app.post("/run", response_model=RunResponse)
def run(config: LatticeRunConfig) -> RunResponse:
    return RunResponse(**run_job(config))


@app.post("/sweep", response_model=SweepResponse)
def sweep(config: SweepConfig) -> SweepResponse:
    return SweepResponse(**sweep_job(config))


@app.post("/evolve", response_model=EvolveResponse)
def evolve(config: EvolveConfig) -> EvolveResponse:
    return EvolveResponse(**evolve_job(config))


@app.post("/imagescore", response_model=ImageScoreResponse)
def imagescore(config: ImageScoreConfig) -> ImageScoreResponse:
    return ImageScoreResponse(**imagescore_job(config))
