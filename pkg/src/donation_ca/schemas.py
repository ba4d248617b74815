"""Request/response models for the simulation service.

These are the wire format of the HTTP endpoints and, identically, the
JSON config format of the CLI; a stored config (or the `config` block
of any emitted meta.json) re-runs to byte-identical outputs.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from .rules import CURATED_RULE_NUMBERS, curated_strategies, parse_strategy_label

DEFAULT_RULE_LABELS = tuple(d.label for d in curated_strategies())


class LatticeRunConfig(BaseModel):
    """One lattice simulation: strategy, size, noise, mobility, seed."""

    rule: Optional[str] = None
    raw_rule: Optional[int] = Field(default=None, ge=0, le=255)
    n: int = Field(default=100, ge=3)
    steps: int = Field(default=300, ge=1)
    init: Literal["random", "single", "checker", "explicit"] = "random"
    states: Optional[list[int]] = None
    swap: int = Field(default=0, ge=0)
    directed: bool = False
    er: float = Field(default=0.0, ge=0.0, le=1.0)
    ea: float = Field(default=0.0, ge=0.0, le=1.0)
    fatigue: int = Field(default=0, ge=0)
    seed: int = 0

    @field_validator("rule")
    @classmethod
    def _rule_parses(cls, v):
        if v is not None:
            parse_strategy_label(v)
        return v

    @model_validator(mode="after")
    def _consistent(self):
        if (self.rule is None) == (self.raw_rule is None):
            raise ValueError("specify exactly one of rule / raw_rule")
        if self.init == "explicit":
            if self.states is None:
                raise ValueError("explicit init needs states")
            if len(self.states) != self.n:
                raise ValueError(f"explicit init needs exactly {self.n} states")
            if any(s not in (0, 1) for s in self.states):
                raise ValueError("explicit states must be 0 or 1")
        elif self.states is not None:
            raise ValueError("states only allowed with explicit init")
        if self.directed and self.n % 2 != 0:
            raise ValueError("directed movement requires an even lattice size")
        if self.swap > self.n:
            raise ValueError("swap pairs capped at the lattice size")
        return self


class SweepConfig(BaseModel):
    """Replicated metric sweep along one axis for a set of rules."""

    rules: list[str] = Field(default_factory=lambda: list(DEFAULT_RULE_LABELS))
    axis: Literal["swap", "er", "ea"]
    values: list[float] = Field(min_length=1)
    n: int = Field(default=100, ge=3)
    steps: int = Field(default=300, ge=1)
    init: Literal["random", "single", "checker"] = "random"
    swap: int = Field(default=0, ge=0)
    directed: bool = False
    er: float = Field(default=0.0, ge=0.0, le=1.0)
    ea: float = Field(default=0.0, ge=0.0, le=1.0)
    fatigue: int = Field(default=0, ge=0)
    replicates: int = Field(default=30, ge=1)
    seed: int = 0

    @field_validator("rules")
    @classmethod
    def _rules_parse(cls, v):
        if not v:
            raise ValueError("need at least one rule")
        for label in v:
            parse_strategy_label(label)
        return v

    @model_validator(mode="after")
    def _axis_values(self):
        for value in self.values:
            if self.axis == "swap":
                if value < 0 or value != int(value):
                    raise ValueError("swap values must be nonnegative integers")
                if value > self.n:
                    raise ValueError("swap values capped at the lattice size")
            elif not 0.0 <= value <= 1.0:
                raise ValueError(f"{self.axis} values must be probabilities")
        if self.swap > self.n:
            raise ValueError("swap pairs capped at the lattice size")
        if self.directed and self.n % 2 != 0:
            raise ValueError("directed movement requires an even lattice size")
        return self


class EvolveConfig(BaseModel):
    """Generational evolution over the 12-rule strategy space."""

    population: int = Field(default=100, ge=3)
    generations: int = Field(default=100, ge=1)
    gen_iters: int = Field(default=300, ge=1)
    pm: float = Field(default=0.001, ge=0.0, le=1.0)
    fatigue: int = Field(default=0, ge=0)
    swap: int = Field(default=0, ge=0)
    directed: bool = False
    er: float = Field(default=0.0, ge=0.0, le=1.0)
    ea: float = Field(default=0.0, ge=0.0, le=1.0)
    seed: int = 0
    bitmap: bool = False

    @model_validator(mode="after")
    def _consistent(self):
        if self.directed and self.population % 2 != 0:
            raise ValueError("directed movement requires an even population")
        if self.swap > self.population:
            raise ValueError("swap pairs capped at the population size")
        return self


class ImageScoreConfig(BaseModel):
    """Payoff comparison grid for the image-score variant."""

    population: int = Field(default=100, ge=3)
    rounds: int = Field(default=5000, ge=0)
    benefit: float = 1.0
    cost: float = 0.1
    pairings: list[Literal["local", "random"]] = Field(
        default_factory=lambda: ["local", "random"]
    )
    noise: list[float] = Field(default_factory=lambda: [0.0, 0.2])
    swaps: list[int] = Field(default_factory=lambda: [0, 2])
    image_min: int = -5
    image_max: int = 5
    k_min: int = -5
    k_max: int = 6
    replicates: int = Field(default=20, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _consistent(self):
        if self.cost >= self.benefit:
            raise ValueError("cost must be smaller than benefit")
        if not self.pairings:
            raise ValueError("need at least one pairing mode")
        if not self.noise:
            raise ValueError("need at least one noise level")
        for p in self.noise:
            if not 0.0 <= p <= 1.0:
                raise ValueError("noise levels must be probabilities")
        if not self.swaps or any(s < 0 for s in self.swaps):
            raise ValueError("swap levels must be nonnegative")
        if self.image_min >= self.image_max:
            raise ValueError("empty image range")
        if self.k_min > self.k_max:
            raise ValueError("empty strategy range")
        return self


class RunResponse(BaseModel):
    meta: dict
    pbm: str
    metrics_csv: str


class SweepResponse(BaseModel):
    meta: dict
    csv: str


class EvolveResponse(BaseModel):
    meta: dict
    csv: str
    pbm: Optional[str] = None


class ImageScoreResponse(BaseModel):
    meta: dict
    csv: str


class RuleInfo(BaseModel):
    label: str
    rule_number: int
    family: str
    directionality: str
    hesitation: bool


class RuleCatalog(BaseModel):
    rules: list[RuleInfo]
    curated_numbers: list[int] = Field(
        default_factory=lambda: list(CURATED_RULE_NUMBERS)
    )
