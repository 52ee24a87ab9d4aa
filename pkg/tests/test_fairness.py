import math
import random

import pytest

from fairstream.errors import UndefinedStatisticError
from fairstream.fairness import (ContingencyPair, GroupCounts, discrimination,
                                 mcnemar, phi_correlation, update)


class TestDiscrimination:
    def test_identical_rates_zero(self):
        assert discrimination(GroupCounts(5, 5, 5, 5)) == 0.0

    def test_direct_arithmetic(self):
        # favored 30/100 granted vs deprived 10/100
        gc = GroupCounts(deprived_pos=10, deprived_neg=90,
                         favored_pos=30, favored_neg=70)
        assert discrimination(gc) == pytest.approx(0.20, abs=1e-12)

    @pytest.mark.parametrize("gc", [
        GroupCounts(),                              # both empty
        GroupCounts(favored_pos=3, favored_neg=2),  # deprived empty
        GroupCounts(deprived_pos=1, deprived_neg=4),  # favored empty
    ])
    def test_empty_community_convention(self, gc):
        assert discrimination(gc) == 0.0

    def test_swap_antisymmetry(self):
        rng = random.Random(5)
        for _ in range(200):
            gc = GroupCounts(*(rng.randrange(1, 50) for _ in range(4)))
            swapped = GroupCounts(gc.favored_pos, gc.favored_neg,
                                  gc.deprived_pos, gc.deprived_neg)
            assert discrimination(gc) == pytest.approx(-discrimination(swapped))

    def test_scale_invariance(self):
        rng = random.Random(6)
        for _ in range(200):
            gc = GroupCounts(*(rng.randrange(0, 40) for _ in range(4)))
            k = rng.randrange(2, 9)
            scaled = GroupCounts(k * gc.deprived_pos, k * gc.deprived_neg,
                                 k * gc.favored_pos, k * gc.favored_neg)
            assert discrimination(scaled) == pytest.approx(discrimination(gc))

    def test_bounded(self):
        rng = random.Random(7)
        for _ in range(500):
            gc = GroupCounts(*(rng.randrange(0, 20) for _ in range(4)))
            assert abs(discrimination(gc)) <= 1.0

    def test_streaming_fold_matches_batch(self):
        # folding update over a stream equals the whole-stream computation
        rng = random.Random(8)
        for _ in range(20):
            events = [(rng.random() < 0.5, rng.random() < 0.3)
                      for _ in range(rng.randrange(1, 10_000))]
            folded = GroupCounts()
            for dep, pos in events:
                folded = update(folded, dep, pos)
            batch = GroupCounts()
            for dep, pos in events:
                batch.add(dep, pos)
            assert folded == batch
            assert discrimination(folded) == discrimination(batch)


class TestUpdate:
    def test_single_field_increments(self):
        base = GroupCounts()
        assert update(base, True, True) == GroupCounts(deprived_pos=1)
        assert update(base, False, False) == GroupCounts(favored_neg=1)
        assert base.total == 0  # update is non-mutating

    def test_all_four_updates(self):
        gc = GroupCounts()
        for dep in (True, False):
            for pos in (True, False):
                gc = update(gc, dep, pos)
        assert (gc.deprived_pos, gc.deprived_neg, gc.favored_pos, gc.favored_neg) \
            == (1, 1, 1, 1)
        assert gc.total == 4


class TestMcnemar:
    def test_continuity_corrected_value(self):
        # (|321-537|-1)^2 / 858
        chi2, df = mcnemar(ContingencyPair(493, 321, 537, 14841))
        assert df == 1
        assert chi2 == pytest.approx(46225 / 858, abs=1e-9)
        assert chi2 == pytest.approx(53.8753, abs=1e-3)

    def test_one_sided_discordance(self):
        chi2, _ = mcnemar(ContingencyPair(0, 0, 10, 0))
        assert chi2 == pytest.approx(8.1)

    def test_symmetric_discordance(self):
        chi2, _ = mcnemar(ContingencyPair(0, 5, 5, 0))
        assert chi2 == pytest.approx(0.1)

    def test_symmetry_in_b_c(self):
        rng = random.Random(9)
        for _ in range(100):
            b, c = rng.randrange(0, 100), rng.randrange(1, 100)
            assert mcnemar(ContingencyPair(0, b, c, 0)) == \
                mcnemar(ContingencyPair(0, c, b, 0))

    def test_no_discordant_pairs_is_undefined(self):
        with pytest.raises(UndefinedStatisticError):
            mcnemar(ContingencyPair(10, 0, 0, 20))


class TestPhiCorrelation:
    def test_self_correlation(self):
        x = [1, 0, 1, 1, 0]
        assert phi_correlation(x, x) == pytest.approx(1.0)

    def test_complement(self):
        x = [1, 0, 1, 1, 0]
        y = [1 - v for v in x]
        assert phi_correlation(x, y) == pytest.approx(-1.0)

    def test_independent_zero(self):
        assert phi_correlation((1, 1, 0, 0), (1, 0, 1, 0)) == pytest.approx(0.0)

    def test_constant_sequence_undefined(self):
        with pytest.raises(UndefinedStatisticError):
            phi_correlation([1, 1, 1], [1, 0, 1])
        with pytest.raises(UndefinedStatisticError):
            phi_correlation([1, 0, 1], [0, 0, 0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            phi_correlation([1, 0], [1, 0, 1])

    def test_matches_pearson_formula(self):
        rng = random.Random(10)
        for _ in range(50):
            n = rng.randrange(4, 200)
            x = [rng.randrange(2) for _ in range(n)]
            y = [rng.randrange(2) for _ in range(n)]
            if len(set(x)) < 2 or len(set(y)) < 2:
                continue
            mx = sum(x) / n
            my = sum(y) / n
            cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
            sx = math.sqrt(sum((a - mx) ** 2 for a in x))
            sy = math.sqrt(sum((b - my) ** 2 for b in y))
            assert phi_correlation(x, y) == pytest.approx(cov / (sx * sy), abs=1e-9)
