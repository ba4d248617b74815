"""Donation strategies and their cellular-automaton rule tables.

An agent on the ring is a binary cell: LOW (0, white) or HIGH (1, black)
reputation.  Each strategy decides, from the donor's own state and the
(perceived) states of its two neighbors, whether to donate and to whom.
Thresholding the total donated share over the 8 possible neighborhoods
yields an elementary CA rule table, so every strategy has a Wolfram
number and the noise-free dynamics can be cross-checked against plain
rule iteration.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

LOW = 0
HIGH = 1


class Family(enum.Enum):
    """The social logic a donor applies to a potential recipient."""

    IN_GROUP_BIAS = "IGB"          # donate only to same-reputation neighbors
    FEUDAL_SYSTEM = "FS"           # low-reputation donors donate upward only
    RANK_BASED_ASSISTANCE = "RBA"  # donate to equal-or-higher reputation
    ALTRUIST = "ALTRUIST"          # donate unconditionally


class Directionality(enum.Enum):
    BOTH = "both"
    LEFT_ONLY = "left"
    RIGHT_ONLY = "right"


@dataclass(frozen=True)
class StrategyDescriptor:
    """Semantic identity of a donation rule.

    (family, directionality, hesitation) determines the rule table
    uniquely.  Altruists ignore directionality and hesitation: they
    always donate to both neighbors.
    """

    family: Family
    directionality: Directionality = Directionality.BOTH
    hesitation: bool = False

    @property
    def label(self) -> str:
        if self.family is Family.ALTRUIST:
            return "ALTRUIST"
        tail = ":h" if self.hesitation else ""
        return f"{self.family.value}:{self.directionality.value}{tail}"

    @property
    def rule_number(self) -> int:
        return derive_rule_table(self).rule_number


class DonationDecision(NamedTuple):
    """Shares handed to the left and right neighbor; total is 0 or 1."""

    share_left: float
    share_right: float

    @property
    def total(self) -> float:
        return self.share_left + self.share_right


@dataclass(frozen=True)
class RuleTable:
    """8-entry neighborhood lookup for a binary 1-D CA.

    bits[k] is the donor's next state for the neighborhood (L, C, R)
    read as the 3-bit number k = 4L + 2C + R.  The Wolfram code is
    sum(bits[k] * 2**k).
    """

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) != 8 or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"rule table needs 8 binary entries, got {self.bits!r}")

    @property
    def rule_number(self) -> int:
        return sum(b << k for k, b in enumerate(self.bits))

    def next_state(self, left: int, center: int, right: int) -> int:
        return self.bits[4 * left + 2 * center + right]


def rule_table_from_number(n: int) -> RuleTable:
    """Rule table of a raw Wolfram code (pattern-generation mode)."""
    if not 0 <= n <= 255:
        raise ValueError(f"Wolfram rule number must be in 0..255, got {n}")
    return RuleTable(tuple((n >> k) & 1 for k in range(8)))


def eligibility(family: Family, donor: int, neighbor: int) -> bool:
    """Whether a neighbor in state `neighbor` qualifies as a recipient.

    In-group bias donates to equals, the feudal system only passes value
    from low to high, and rank-based assistance never donates downward.
    """
    if family is Family.IN_GROUP_BIAS:
        return neighbor == donor
    if family is Family.FEUDAL_SYSTEM:
        return donor == LOW and neighbor == HIGH
    if family is Family.RANK_BASED_ASSISTANCE:
        return neighbor >= donor
    if family is Family.ALTRUIST:
        return True
    raise ValueError(f"unknown family {family!r}")


def decide_donation(
    desc: StrategyDescriptor,
    perceived_left: int,
    donor: int,
    perceived_right: int,
) -> DonationDecision:
    """Donation shares for one donor given its perceived neighborhood.

    Directionality first restricts which sides are considered at all.
    One eligible side receives the full donation of 1; two eligible
    sides split 0.5/0.5 unless the strategy hesitates, in which case the
    donor abstains entirely.
    """
    if desc.family is Family.ALTRUIST:
        return DonationDecision(0.5, 0.5)

    left_ok = desc.directionality is not Directionality.RIGHT_ONLY and eligibility(
        desc.family, donor, perceived_left
    )
    right_ok = desc.directionality is not Directionality.LEFT_ONLY and eligibility(
        desc.family, donor, perceived_right
    )

    if left_ok and right_ok:
        if desc.hesitation:
            return DonationDecision(0.0, 0.0)
        return DonationDecision(0.5, 0.5)
    if left_ok:
        return DonationDecision(1.0, 0.0)
    if right_ok:
        return DonationDecision(0.0, 1.0)
    return DonationDecision(0.0, 0.0)


def derive_rule_table(desc: StrategyDescriptor) -> RuleTable:
    """CA rule table of a strategy: bit k is 1 iff the donor donates

    (total share > 0) in the noise-free neighborhood k = 4L + 2C + R.
    """
    bits = []
    for k in range(8):
        left, center, right = (k >> 2) & 1, (k >> 1) & 1, k & 1
        bits.append(1 if decide_donation(desc, left, center, right).total > 0 else 0)
    return RuleTable(tuple(bits))


# Canonical strategy set: the three family triples (both / left / right,
# no hesitation), then the hesitant both-sided variant of each family.
# Rule 90 is kept under in-group bias; the same table also models
# rank-based assistance with hesitation.
_CURATED = (
    StrategyDescriptor(Family.IN_GROUP_BIAS, Directionality.BOTH),                    # 219
    StrategyDescriptor(Family.IN_GROUP_BIAS, Directionality.LEFT_ONLY),               # 195
    StrategyDescriptor(Family.IN_GROUP_BIAS, Directionality.RIGHT_ONLY),              # 153
    StrategyDescriptor(Family.FEUDAL_SYSTEM, Directionality.BOTH),                    # 50
    StrategyDescriptor(Family.FEUDAL_SYSTEM, Directionality.LEFT_ONLY),               # 48
    StrategyDescriptor(Family.FEUDAL_SYSTEM, Directionality.RIGHT_ONLY),              # 34
    StrategyDescriptor(Family.RANK_BASED_ASSISTANCE, Directionality.BOTH),            # 251
    StrategyDescriptor(Family.RANK_BASED_ASSISTANCE, Directionality.LEFT_ONLY),       # 243
    StrategyDescriptor(Family.RANK_BASED_ASSISTANCE, Directionality.RIGHT_ONLY),      # 187
    StrategyDescriptor(Family.IN_GROUP_BIAS, Directionality.BOTH, hesitation=True),   # 90
    StrategyDescriptor(Family.RANK_BASED_ASSISTANCE, Directionality.BOTH, True),      # 72
    StrategyDescriptor(Family.FEUDAL_SYSTEM, Directionality.BOTH, hesitation=True),   # 18
)

ALTRUIST = StrategyDescriptor(Family.ALTRUIST)  # rule 255; not part of evolution

CURATED_RULE_NUMBERS = (219, 195, 153, 50, 48, 34, 251, 243, 187, 90, 72, 18)


def curated_strategies() -> list[StrategyDescriptor]:
    """The 12 socially interpretable strategies, in canonical order."""
    return list(_CURATED)


def parse_strategy_label(label: str) -> StrategyDescriptor:
    """Parse `FAMILY[:direction][:h]`, e.g. `IGB:both`, `RBA:left:h`."""
    parts = label.strip().split(":")
    name = parts[0].upper()
    families = {
        "IGB": Family.IN_GROUP_BIAS,
        "FS": Family.FEUDAL_SYSTEM,
        "RBA": Family.RANK_BASED_ASSISTANCE,
        "ALTRUIST": Family.ALTRUIST,
        "ALT": Family.ALTRUIST,
    }
    if name not in families:
        raise ValueError(f"unknown strategy family {parts[0]!r}")
    family = families[name]
    if family is Family.ALTRUIST:
        if len(parts) > 1:
            raise ValueError("ALTRUIST takes no direction or hesitation suffix")
        return ALTRUIST

    direction = Directionality.BOTH
    hesitation = False
    rest = parts[1:]
    if rest and rest[-1].lower() == "h":
        hesitation = True
        rest = rest[:-1]
    if rest:
        directions = {d.value: d for d in Directionality}
        if len(rest) != 1 or rest[0].lower() not in directions:
            raise ValueError(f"bad strategy spec {label!r}")
        direction = directions[rest[0].lower()]
    return StrategyDescriptor(family, direction, hesitation)
