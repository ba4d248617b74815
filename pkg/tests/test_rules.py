"""Strategy semantics and Wolfram-number derivation."""

import itertools

import pytest

from donation_ca.rules import (
    ALTRUIST,
    CURATED_RULE_NUMBERS,
    Directionality,
    Family,
    StrategyDescriptor,
    curated_strategies,
    decide_donation,
    derive_rule_table,
    eligibility,
    parse_strategy_label,
    rule_table_from_number,
)

LOW, HIGH = 0, 1

EXPECTED_NUMBERS = {
    "IGB:both": 219,
    "IGB:left": 195,
    "IGB:right": 153,
    "FS:both": 50,
    "FS:left": 48,
    "FS:right": 34,
    "RBA:both": 251,
    "RBA:left": 243,
    "RBA:right": 187,
    "IGB:both:h": 90,
    "RBA:both:h": 72,
    "FS:both:h": 18,
}


def all_descriptors():
    descs = [
        StrategyDescriptor(f, d, h)
        for f in (Family.IN_GROUP_BIAS, Family.FEUDAL_SYSTEM, Family.RANK_BASED_ASSISTANCE)
        for d in Directionality
        for h in (False, True)
    ]
    return descs + [ALTRUIST]


class TestEligibility:
    def test_igb_same_reputation(self):
        assert eligibility(Family.IN_GROUP_BIAS, HIGH, HIGH)
        assert eligibility(Family.IN_GROUP_BIAS, LOW, LOW)
        assert not eligibility(Family.IN_GROUP_BIAS, HIGH, LOW)

    def test_fs_upward_only(self):
        assert not eligibility(Family.FEUDAL_SYSTEM, HIGH, HIGH)
        assert eligibility(Family.FEUDAL_SYSTEM, LOW, HIGH)
        assert not eligibility(Family.FEUDAL_SYSTEM, LOW, LOW)

    def test_rba_never_downward(self):
        assert eligibility(Family.RANK_BASED_ASSISTANCE, LOW, LOW)
        assert eligibility(Family.RANK_BASED_ASSISTANCE, LOW, HIGH)
        assert eligibility(Family.RANK_BASED_ASSISTANCE, HIGH, HIGH)
        assert not eligibility(Family.RANK_BASED_ASSISTANCE, HIGH, LOW)


class TestDecideDonation:
    def test_split_between_two_eligible(self):
        desc = StrategyDescriptor(Family.RANK_BASED_ASSISTANCE, Directionality.BOTH)
        assert decide_donation(desc, LOW, LOW, LOW) == (0.5, 0.5)

    def test_hesitation_means_inaction(self):
        desc = StrategyDescriptor(Family.IN_GROUP_BIAS, Directionality.BOTH, True)
        assert decide_donation(desc, LOW, LOW, LOW) == (0.0, 0.0)

    def test_single_eligible_gets_full_donation(self):
        desc = StrategyDescriptor(Family.FEUDAL_SYSTEM, Directionality.BOTH, True)
        assert decide_donation(desc, HIGH, LOW, LOW) == (1.0, 0.0)

    def test_directionality_restricts_sides(self):
        left_only = StrategyDescriptor(Family.RANK_BASED_ASSISTANCE, Directionality.LEFT_ONLY)
        assert decide_donation(left_only, LOW, LOW, LOW) == (1.0, 0.0)
        right_only = StrategyDescriptor(Family.RANK_BASED_ASSISTANCE, Directionality.RIGHT_ONLY)
        assert decide_donation(right_only, LOW, LOW, LOW) == (0.0, 1.0)

    def test_altruist_always_splits(self):
        for left, donor, right in itertools.product((0, 1), repeat=3):
            assert decide_donation(ALTRUIST, left, donor, right) == (0.5, 0.5)

    def test_total_share_is_zero_or_one(self):
        for desc in all_descriptors():
            for left, donor, right in itertools.product((0, 1), repeat=3):
                total = decide_donation(desc, left, donor, right).total
                assert total in (0.0, 1.0)

    def test_half_shares_only_on_non_hesitant_double_eligibility(self):
        for desc in all_descriptors():
            for left, donor, right in itertools.product((0, 1), repeat=3):
                decision = decide_donation(desc, left, donor, right)
                if 0.5 in decision:
                    assert decision == (0.5, 0.5)
                    assert not desc.hesitation


class TestRuleDerivation:
    @pytest.mark.parametrize("label,expected", sorted(EXPECTED_NUMBERS.items()))
    def test_curated_numbers(self, label, expected):
        assert derive_rule_table(parse_strategy_label(label)).rule_number == expected

    def test_altruist_is_rule_255(self):
        assert derive_rule_table(ALTRUIST).rule_number == 255

    def test_curated_set(self):
        strategies = curated_strategies()
        assert len(strategies) == 12
        numbers = [derive_rule_table(d).rule_number for d in strategies]
        assert numbers == list(CURATED_RULE_NUMBERS)
        assert set(numbers) == {219, 195, 153, 50, 48, 34, 251, 243, 187, 90, 72, 18}

    def test_fs_hesitant_is_rule_18(self):
        desc = StrategyDescriptor(Family.FEUDAL_SYSTEM, Directionality.BOTH, True)
        assert desc in curated_strategies()
        assert derive_rule_table(desc).rule_number == 18

    def test_round_trip_against_raw_tables(self):
        # decision thresholding must reproduce the raw table of the
        # strategy's own rule number bit for bit
        for desc in curated_strategies() + [ALTRUIST]:
            table = derive_rule_table(desc)
            assert table.bits == rule_table_from_number(table.rule_number).bits

    def test_mirror_symmetry(self):
        reflect = {Directionality.LEFT_ONLY: Directionality.RIGHT_ONLY,
                   Directionality.RIGHT_ONLY: Directionality.LEFT_ONLY}
        for family in (Family.IN_GROUP_BIAS, Family.FEUDAL_SYSTEM,
                       Family.RANK_BASED_ASSISTANCE):
            for hesitation in (False, True):
                for direction, mirrored in reflect.items():
                    a = derive_rule_table(StrategyDescriptor(family, direction, hesitation))
                    b = derive_rule_table(StrategyDescriptor(family, mirrored, hesitation))
                    for k in range(8):
                        left, center, right = (k >> 2) & 1, (k >> 1) & 1, k & 1
                        reflected = 4 * right + 2 * center + left
                        assert a.bits[k] == b.bits[reflected]

    def test_mirror_pairs(self):
        pairs = {(195, 153), (48, 34), (243, 187)}
        seen = set()
        for left_label, right_label in (("IGB:left", "IGB:right"),
                                        ("FS:left", "FS:right"),
                                        ("RBA:left", "RBA:right")):
            a = derive_rule_table(parse_strategy_label(left_label)).rule_number
            b = derive_rule_table(parse_strategy_label(right_label)).rule_number
            seen.add((a, b))
        assert seen == pairs

    def test_hesitation_monotonicity(self):
        for family in (Family.IN_GROUP_BIAS, Family.FEUDAL_SYSTEM,
                       Family.RANK_BASED_ASSISTANCE):
            for direction in Directionality:
                bold = derive_rule_table(StrategyDescriptor(family, direction, False))
                shy = derive_rule_table(StrategyDescriptor(family, direction, True))
                assert all(s <= b for s, b in zip(shy.bits, bold.bits))


class TestRawTables:
    def test_all_zero_and_all_one(self):
        assert rule_table_from_number(0).bits == (0,) * 8
        assert rule_table_from_number(255).bits == (1,) * 8

    def test_rule_50_bits(self):
        table = rule_table_from_number(50)
        set_neighborhoods = {k for k in range(8) if table.bits[k]}
        assert set_neighborhoods == {0b001, 0b100, 0b101}

    def test_number_round_trip(self):
        for n in range(256):
            assert rule_table_from_number(n).rule_number == n

    @pytest.mark.parametrize("bad", [-1, 256, 1000])
    def test_out_of_range_rejected(self, bad):
        with pytest.raises(ValueError):
            rule_table_from_number(bad)


class TestLabels:
    def test_label_round_trip(self):
        for desc in all_descriptors():
            assert parse_strategy_label(desc.label) == desc

    def test_case_insensitive(self):
        assert parse_strategy_label("rba:BOTH:H") == StrategyDescriptor(
            Family.RANK_BASED_ASSISTANCE, Directionality.BOTH, True
        )

    @pytest.mark.parametrize("bad", ["XYZ:both", "ALTRUIST:left", "IGB:up", "IGB:both:x"])
    def test_bad_labels_rejected(self, bad):
        with pytest.raises(ValueError):
            parse_strategy_label(bad)
