import math
import random

import pytest

from pwlent.analysis import lap_count, lipschitz, max_crossing, variation
from pwlent.catalog import tent, zigzag
from pwlent.entropy import (
    constant_slope_entropy,
    entropy_bracket,
    horseshoe_search,
    lap_upper_sequence,
    rate_sequences,
)
from pwlent.errors import NotConstantSlope, NotSelfMap
from pwlent.pwl import Homeomorphism, conjugate, iterate, make_pwl
from pwlent.rationals import rat

from oracles import oracle_check_horseshoe, random_self_map

LOG2_3_2 = math.log2(1.5)


class TestLapUpperSequence:
    def test_full_tent(self, t2):
        rows = lap_upper_sequence(t2, 6)
        assert [c for _, c, _ in rows] == [2, 4, 8, 16, 32, 64]
        assert all(u == 1.0 for _, _, u in rows)

    def test_identity(self, ident):
        rows = lap_upper_sequence(ident, 5)
        assert all(c == 1 and u == 0.0 for _, c, u in rows)

    def test_low_tent_upper_at_ten(self, t32):
        rows = lap_upper_sequence(t32, 10)
        k, c, upper = rows[-1]
        assert k == 10
        assert LOG2_3_2 <= upper <= LOG2_3_2 + 0.25

    def test_not_self_map(self):
        f = make_pwl(0, 1, [0, 1], [0, 2])
        with pytest.raises(NotSelfMap):
            lap_upper_sequence(f, 3)

    def test_truncates_at_ceiling(self, t2):
        rows = lap_upper_sequence(t2, 20, max_segments=1000)
        assert 1 <= len(rows) < 20

    def test_strict_mode_raises(self, t2):
        from pwlent.errors import ResourceLimit

        with pytest.raises(ResourceLimit):
            lap_upper_sequence(t2, 20, max_segments=1000, strict=True)


class TestHorseshoeSearch:
    def test_full_tent_two_horseshoe(self, t2):
        shoe = horseshoe_search(t2, 1)
        assert shoe.s == 2
        assert shoe.interval == (rat(0), rat(1))
        assert shoe.partition == ((rat(0), rat(1, 2)), (rat(1, 2), rat(1)))
        assert oracle_check_horseshoe(t2, shoe)

    def test_identity_has_none(self, ident):
        assert horseshoe_search(ident, 1) is None

    def test_monotone_increasing_has_none(self):
        f = make_pwl(0, 1, [0, rat(1, 2), 1], [0, rat(3, 4), 1])
        assert horseshoe_search(f, 1) is None

    @pytest.mark.parametrize("m", [2, 4, 8])
    def test_zigzag_full_count(self, m):
        shoe = horseshoe_search(zigzag(m), 1)
        assert shoe.s == m
        assert oracle_check_horseshoe(zigzag(m), shoe)

    def test_second_iterate_of_tent(self, t2):
        shoe = horseshoe_search(t2, 2)
        assert shoe.s == 4 and shoe.k == 2
        assert oracle_check_horseshoe(t2, shoe)

    def test_random_maps_verified(self):
        rng = random.Random(139)
        found = 0
        for _ in range(60):
            f = random_self_map(rng)
            shoe = horseshoe_search(f, 1)
            if shoe is not None:
                found += 1
                assert shoe.s >= 2
                assert oracle_check_horseshoe(f, shoe)
        assert found > 5


class TestConstantSlope:
    def test_full_tent(self, t2):
        assert constant_slope_entropy(t2) == 1.0

    def test_contracting_tent_clamps_to_zero(self):
        assert constant_slope_entropy(tent(rat(1, 2))) == 0.0

    def test_zigzag_eight(self):
        assert constant_slope_entropy(zigzag(8)) == 3.0
        b = entropy_bracket(zigzag(8), 2)
        assert (b.lower_bits, b.upper_bits) == (3.0, 3.0)

    def test_rejects_mixed_slopes(self):
        f = make_pwl(0, 1, [0, rat(1, 2), 1], [0, rat(3, 4), rat(1, 4)])
        with pytest.raises(NotConstantSlope):
            constant_slope_entropy(f)

    def test_rejects_flat_pieces(self):
        f = make_pwl(0, 1, [0, rat(1, 2), 1], [rat(1, 4), rat(1, 4), rat(3, 4)])
        with pytest.raises(NotConstantSlope):
            constant_slope_entropy(f)


class TestEntropyBracket:
    def test_full_tent_exact(self, t2):
        b = entropy_bracket(t2, 6)
        assert (b.lower_bits, b.upper_bits) == (1.0, 1.0)

    def test_identity_zero(self, ident):
        b = entropy_bracket(ident, 6)
        assert (b.lower_bits, b.upper_bits) == (0.0, 0.0)

    def test_low_tent_contains_known_value(self, t32):
        b = entropy_bracket(t32, 20)
        assert b.lower_bits <= b.upper_bits
        assert abs(b.upper_bits - LOG2_3_2) <= 0.1
        # containment up to 1 ulp of float log rendering; the underlying
        # soundness comparison is exact big-integer arithmetic
        assert b.lower_bits - 1e-12 <= LOG2_3_2 <= b.upper_bits + 1e-12
        # the pure lap sequence also lands within tolerance on its own
        assert abs(min(r.upper_bits for r in b.evidence) - LOG2_3_2) <= 0.1

    def test_prefix_minimum_nonincreasing(self, t32):
        b = entropy_bracket(t32, 12)
        running = float("inf")
        prev = float("inf")
        for row in b.evidence:
            running = min(running, row.upper_bits)
            assert running <= prev
            prev = running

    def test_bracket_sound_on_random_maps(self):
        rng = random.Random(149)
        for _ in range(40):
            f = random_self_map(rng)
            b = entropy_bracket(f, 4)
            assert b.lower_bits <= b.upper_bits
            for row in b.evidence:
                if row.lower_bits is not None:
                    assert row.lower_bits <= b.upper_bits + 1e-12

    def test_resource_limit_partial_evidence(self):
        b = entropy_bracket(zigzag(8), 9, max_segments=1000)
        assert b.limited
        assert len(b.evidence) == 3  # laps 8, 64, 512, then 4096 > 1000
        assert (b.lower_bits, b.upper_bits) == (3.0, 3.0)
        assert b.limit_note


class TestIterateScaling:
    def test_third_power_upper_bounds(self, t2):
        g = iterate(t2, 3)
        rows_g = lap_upper_sequence(g, 4)
        rows_f = lap_upper_sequence(t2, 12)
        for j, _, upper in rows_g:
            assert upper == 3 * rows_f[3 * j - 1][2]

    def test_submultiplicative_laps(self, t2):
        rng = random.Random(151)
        maps = [t2] + [random_self_map(rng, max_segments=4) for _ in range(15)]
        for f in maps:
            counts = {k: lap_count(iterate(f, k)).count for k in range(1, 7)}
            for n in range(1, 4):
                for k in range(1, 4):
                    assert counts[n + k] <= counts[n] * counts[k]


class TestRateSequences:
    def test_full_tent_all_ones(self, t2):
        rs = rate_sequences(t2, 8)
        for row in rs.rows:
            assert row.crossings == 2**row.k
            assert row.crossing_rate_bits == 1.0
            assert row.variation == rat(2) ** row.k
            assert row.variation_rate_bits == 1.0
            assert row.lipschitz == rat(2) ** row.k
            assert row.lipschitz_rate_bits == 1.0

    def test_identity_all_zero(self, ident):
        rs = rate_sequences(ident, 4)
        for row in rs.rows:
            assert row.crossing_rate_bits == 0.0
            assert row.variation_rate_bits == 0.0
            assert row.lipschitz_rate_bits == 0.0

    def test_crossing_rate_below_lap_rate(self):
        rng = random.Random(157)
        for _ in range(25):
            f = random_self_map(rng, max_segments=5)
            for k in range(1, 4):
                g = iterate(f, k)
                assert max_crossing(g)[0] <= lap_count(g).count

    def test_lipschitz_subadditive(self):
        rng = random.Random(163)
        maps = [tent(2), tent(rat(3, 2))] + [random_self_map(rng, max_segments=4) for _ in range(10)]
        for f in maps:
            lips = {k: lipschitz(iterate(f, k)) for k in range(1, 7)}
            for n in range(1, 4):
                for k in range(1, 4):
                    assert lips[n + k] <= lips[n] * lips[k]

    def test_variation_dominated_every_k(self):
        rng = random.Random(167)
        for _ in range(20):
            f = random_self_map(rng, max_segments=5)
            for k in range(1, 4):
                g = iterate(f, k)
                assert variation(g) <= lipschitz(g) * (g.domain_hi - g.domain_lo)


class TestConjugacyEvidence:
    def test_lap_rows_identical_for_conjugates(self, t2):
        phis = [
            Homeomorphism(make_pwl(0, 1, [0, 1], [1, 0])),
            Homeomorphism(make_pwl(0, 1, [0, rat(2, 5), 1], [0, rat(1, 5), 1])),
        ]
        base = [c for _, c, _ in lap_upper_sequence(t2, 5)]
        for phi in phis:
            g = conjugate(t2, phi)
            assert [c for _, c, _ in lap_upper_sequence(g, 5)] == base
