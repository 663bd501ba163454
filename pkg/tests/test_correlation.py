"""Spearman/Kendall kernels vs pair-enumeration oracles and invariances."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depthforge.study import average_ranks, kendall_tau, spearman_rho

from oracles import kendall_tau_pairs_oracle, spearman_rank_oracle


class TestSpearman:
    def test_identity(self):
        a = [3.0, 1.0, 4.0, 1.5]
        assert spearman_rho(a, a) == 1.0

    def test_reversal(self):
        a = [1.0, 2.0, 3.0, 4.0]
        assert spearman_rho(a, a[::-1]) == -1.0

    def test_hand_computed(self):
        assert spearman_rho([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)

    def test_constant_rejected(self):
        with pytest.raises(ValueError, match="zero rank variance"):
            spearman_rho([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_matches_oracle_with_ties(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(2, 60))
            a = rng.integers(0, 8, n).astype(float)
            b = rng.integers(0, 8, n).astype(float)
            try:
                want = spearman_rank_oracle(a, b)
            except ValueError:
                with pytest.raises(ValueError):
                    spearman_rho(a, b)
                continue
            assert spearman_rho(a, b) == pytest.approx(want, rel=1e-12)

    # Hundredths in [-100, 100]: exp(a/50) is then strictly increasing in
    # floating point too (spacing far above one ulp), so the transform cannot
    # merge distinct values.
    @given(
        st.lists(
            st.integers(min_value=-10_000, max_value=10_000).map(lambda k: k / 100.0),
            min_size=3,
            max_size=40,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_invariant_under_monotone_transform(self, values):
        a = np.asarray(values)
        b = np.arange(a.size, dtype=float)
        if np.unique(a).size < 2:
            return
        base = spearman_rho(a, b)
        transformed = spearman_rho(np.exp(a / 50.0), b)
        assert transformed == pytest.approx(base, rel=1e-12)


class TestKendall:
    def test_identity(self):
        assert kendall_tau([1.0, 2.0, 3.0], [4.0, 5.0, 6.0]) == 1.0

    def test_reversal(self):
        a = [1.0, 2.0, 3.0, 4.0, 5.0]
        assert kendall_tau(a, a[::-1]) == -1.0

    def test_hand_computed_third(self):
        assert kendall_tau([1, 2, 3], [1, 3, 2]) == pytest.approx(1 / 3)

    def test_all_tied_rejected(self):
        with pytest.raises(ValueError):
            kendall_tau([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])

    def test_matches_pair_oracle_exactly(self):
        rng = np.random.default_rng(1)
        for trial in range(500):
            n = int(rng.integers(2, 200))
            if trial % 2:
                a = rng.integers(0, 10, n).astype(float)
                b = rng.integers(0, 10, n).astype(float)
            else:
                a = rng.standard_normal(n)
                b = rng.standard_normal(n)
            try:
                want = kendall_tau_pairs_oracle(a, b)
            except ValueError:
                with pytest.raises(ValueError):
                    kendall_tau(a, b)
                continue
            got = kendall_tau(a, b)
            assert got == pytest.approx(want, rel=1e-12, abs=1e-15), (n, trial)

    def test_range(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            n = int(rng.integers(2, 50))
            a = rng.integers(0, 5, n).astype(float)
            b = rng.standard_normal(n)
            if np.unique(a).size < 2:
                continue
            assert -1.0 <= kendall_tau(a, b) <= 1.0


class TestAverageRanks:
    def test_no_ties(self):
        assert np.array_equal(average_ranks([30.0, 10.0, 20.0]), [3.0, 1.0, 2.0])

    def test_ties_averaged(self):
        assert np.array_equal(
            average_ranks([5.0, 1.0, 5.0, 0.0]), [3.5, 2.0, 3.5, 1.0]
        )
