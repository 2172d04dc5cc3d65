import random

import pytest

from pwlent.catalog import tent
from pwlent.entropy import entropy_bracket
from pwlent.periods import (
    PeriodSet,
    is_power_of_two,
    minimal_periods,
    periodic_points,
    positive_entropy_witness,
    sharkovsky_consistency,
    sharkovsky_less,
)
from pwlent.pwl import make_pwl
from pwlent.rationals import rat

from oracles import oracle_fixed_lower_bound, pointwise_iterate, random_self_map


class TestPeriodicPoints:
    def test_tent_fixed_points(self, t2):
        assert periodic_points(t2, 1).points == (rat(0), rat(2, 3))

    def test_tent_third_iterate(self, t2):
        pts = periodic_points(t2, 3).points
        assert len(pts) == 8
        for cycle in ((rat(2, 7), rat(4, 7), rat(6, 7)), (rat(2, 9), rat(4, 9), rat(8, 9))):
            assert all(x in pts for x in cycle)
        assert t2.eval(rat(2, 7)) == rat(4, 7)
        assert t2.eval(rat(4, 7)) == rat(6, 7)
        assert t2.eval(rat(6, 7)) == rat(2, 7)

    def test_identity_whole_domain_continuum(self, ident):
        pp = periodic_points(ident, 2)
        assert pp.points == ()
        assert pp.continua == ((rat(0), rat(1)),)

    def test_all_reported_points_fixed(self):
        rng = random.Random(211)
        for _ in range(40):
            f = random_self_map(rng)
            for n in (1, 2, 3):
                pp = periodic_points(f, n)
                for x in pp.points:
                    assert pointwise_iterate(f, x, n) == x
                for lo, hi in pp.continua:
                    mid = (lo + hi) / 2
                    assert pointwise_iterate(f, mid, n) == mid

    def test_counts_at_least_grid_sign_changes(self):
        rng = random.Random(223)
        for _ in range(25):
            f = random_self_map(rng, max_segments=5)
            for n in (1, 2, 3):
                pp = periodic_points(f, n)
                found = len(pp.points) + len(pp.continua)
                if pp.continua:
                    continue  # grid roots may all sit inside continua
                assert found >= oracle_fixed_lower_bound(f, n, grid=240)


class TestMinimalPeriods:
    def test_full_tent_all_periods_to_six(self, t2):
        ps = minimal_periods(t2, 6)
        assert ps.periods == frozenset({1, 2, 3, 4, 5, 6})
        assert (rat(2, 7), rat(4, 7), rat(6, 7)) in ps.cycles[3]

    def test_identity_only_period_one(self, ident):
        ps = minimal_periods(ident, 4)
        assert ps.periods == frozenset({1})
        assert ps.continuum_flags == frozenset({1, 2, 3, 4})

    def test_contraction_only_fixed_point(self):
        ps = minimal_periods(tent(rat(1, 2)), 4)
        assert ps.periods == frozenset({1})
        assert ps.cycles[1] == ((rat(0),),)

    def test_cycles_verify_exactly(self, t2):
        ps = minimal_periods(t2, 6)
        for n, cycles in ps.cycles.items():
            for cycle in cycles:
                for i, x in enumerate(cycle):
                    assert t2.eval(x) == cycle[(i + 1) % n]
                assert len(set(cycle)) == n

    def test_minimality_against_direct_orbits(self):
        rng = random.Random(227)
        for _ in range(25):
            f = random_self_map(rng, max_segments=6)
            ps = minimal_periods(f, 4)
            for n, cycles in ps.cycles.items():
                for cycle in cycles:
                    x = cycle[0]
                    for i in range(1, n):
                        assert pointwise_iterate(f, x, i) != x
                    assert pointwise_iterate(f, x, n) == x

    def test_reflection_continuum_flagged_not_claimed(self):
        flip = make_pwl(0, 1, [0, 1], [1, 0])
        ps = minimal_periods(flip, 4)
        assert ps.periods == frozenset({1})
        assert 2 in ps.continuum_flags
        assert sharkovsky_consistency(ps).consistent


class TestSharkovskyOrdering:
    def test_paper_display_examples(self):
        assert sharkovsky_less(3, 5)
        assert sharkovsky_less(2, 1)
        assert sharkovsky_less(6, 4)

    def test_full_order_prefix(self):
        expected = [3, 5, 7, 9, 11, 13, 15, 6, 10, 14, 12, 16, 8, 4, 2, 1]
        from pwlent.periods import _sharkovsky_key

        assert sorted(range(1, 17), key=_sharkovsky_key) == expected

    def test_strict_total_order(self):
        for p in range(1, 30):
            for q in range(1, 30):
                if p == q:
                    assert not sharkovsky_less(p, q)
                else:
                    assert sharkovsky_less(p, q) != sharkovsky_less(q, p)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            sharkovsky_less(0, 3)


class TestConsistency:
    def _ps(self, periods, up_to):
        return PeriodSet(
            up_to=up_to,
            periods=frozenset(periods),
            cycles={},
            continuum_flags=frozenset(),
        )

    def test_three_forces_tail(self):
        assert not sharkovsky_consistency(self._ps({3}, 6)).consistent
        assert sharkovsky_consistency(self._ps({1, 2, 3, 4, 5, 6}, 6)).consistent

    def test_singleton_one_is_tail(self):
        assert sharkovsky_consistency(self._ps({1}, 4)).consistent

    def test_four_without_two_violates(self):
        diag = sharkovsky_consistency(self._ps({4}, 4))
        assert (4, 2) in diag.violations

    def test_solver_outputs_consistent(self, t2):
        rng = random.Random(229)
        maps = [t2, tent(rat(3, 2))] + [random_self_map(rng, max_segments=5) for _ in range(15)]
        for f in maps:
            assert sharkovsky_consistency(minimal_periods(f, 5)).consistent


class TestPositiveEntropyWitness:
    def test_full_tent(self, t2):
        assert positive_entropy_witness(t2, 6) == 3

    def test_identity_none(self, ident):
        assert positive_entropy_witness(ident, 8) is None

    def test_contraction_none(self):
        assert positive_entropy_witness(tent(rat(1, 2)), 8) is None

    def test_witness_implies_positive_lower_bound(self):
        for alpha in (rat(3, 2), rat(2)):
            f = tent(alpha)
            witness = positive_entropy_witness(f, 6)
            assert witness is not None and not is_power_of_two(witness)
            assert entropy_bracket(f, 6).lower_bits > 0

    def test_low_tent_period_six(self, t32):
        # slope 3/2: the square has a 3-cycle, the map itself cannot
        assert positive_entropy_witness(t32, 6) == 6
