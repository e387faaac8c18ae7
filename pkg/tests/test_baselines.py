import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from swkernel.baselines import (
    cosine_meanpool,
    cost_matrix,
    dtw,
    exact_wasserstein,
    linear_assignment,
    soft_dtw,
    softmin,
)
from swkernel.core import DegenerateInputError, InvalidArgumentError

from oracles import (
    brute_force_assignment_w2,
    brute_force_dtw,
    brute_force_soft_dtw,
    expanded_assignment_w2,
    monotonic_paths,
)


def seq(rng, n, d=2):
    return rng.normal(size=(n, d))


class TestDtw:
    def test_single_cell(self):
        assert dtw([[1.0, 2.0]], [[4.0, 6.0]]) == 12.5

    def test_identical(self):
        x = seq(np.random.default_rng(0), 6)
        assert dtw(x, x) == 0.0

    def test_two_by_three(self):
        # best path (1,1),(1,2)|(2,2),(2,3): costs 0, 0.5, 0
        assert dtw([[0.0], [2.0]], [[0.0], [1.0], [2.0]]) == 0.5
        assert brute_force_dtw([[0.0], [2.0]], [[0.0], [1.0], [2.0]]) == 0.5

    def test_path_enumeration_counts(self):
        # Delannoy numbers
        assert [len(monotonic_paths(n, n)) for n in (1, 2, 3, 4)] == [1, 3, 13, 63]

    @pytest.mark.parametrize("n", range(1, 5))
    @pytest.mark.parametrize("m", range(1, 5))
    def test_brute_force(self, n, m):
        rng = np.random.default_rng(10 * n + m)
        for _ in range(5):
            x, y = seq(rng, n), seq(rng, m)
            assert dtw(x, y) == pytest.approx(brute_force_dtw(x, y), abs=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(3)
        x, y = seq(rng, 5), seq(rng, 7)
        assert dtw(x, y) == pytest.approx(dtw(y, x), abs=1e-12)

    def test_empty(self):
        with pytest.raises(InvalidArgumentError):
            dtw([], [[1.0]])


class TestSoftDtw:
    def test_single_cell(self):
        for g in (1e-3, 1.0, 10.0):
            assert soft_dtw([[1.0]], [[3.0]], g) == 2.0

    @pytest.mark.parametrize("g", [0.0, -1.0, float("nan")])
    def test_bad_gamma(self, g):
        with pytest.raises(InvalidArgumentError):
            soft_dtw([[1.0]], [[2.0]], g)

    @pytest.mark.parametrize("n", range(1, 5))
    @pytest.mark.parametrize("m", range(1, 5))
    @pytest.mark.parametrize("g", [0.1, 1.0])
    def test_brute_force(self, n, m, g):
        rng = np.random.default_rng(100 * n + m)
        x, y = seq(rng, n), seq(rng, m)
        assert soft_dtw(x, y, g) == pytest.approx(brute_force_soft_dtw(x, y, g), abs=1e-10)

    def test_small_gamma_gap_bound(self):
        rng = np.random.default_rng(7)
        g = 1e-4
        for _ in range(20):
            x, y = seq(rng, 4), seq(rng, 4)
            assert abs(soft_dtw(x, y, g) - dtw(x, y)) <= g * math.log(3) * 8

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10_000), st.floats(1e-3, 10.0))
    def test_never_above_dtw(self, seed, g):
        rng = np.random.default_rng(seed)
        x, y = seq(rng, int(rng.integers(1, 7))), seq(rng, int(rng.integers(1, 7)))
        assert soft_dtw(x, y, g) <= dtw(x, y) + 1e-12

    def test_softmin_stable_for_large_values(self):
        assert softmin([1e6, 1e6 + 1, 1e6 + 2], 1e-3) == pytest.approx(1e6)
        assert softmin([np.inf, 2.0, np.inf], 1.0) == 2.0
        assert softmin([np.inf, np.inf], 1.0) == np.inf


class TestLinearAssignment:
    @pytest.mark.parametrize("n", [1, 2, 5, 17, 40])
    def test_matches_scipy(self, n):
        rng = np.random.default_rng(n)
        for _ in range(10):
            c = rng.random((n, n)) * rng.integers(1, 50)
            col, total = linear_assignment(c)
            r, s = linear_sum_assignment(c)
            assert total == pytest.approx(c[r, s].sum(), abs=1e-9)
            assert sorted(col.tolist()) == list(range(n))
            assert total == pytest.approx(c[np.arange(n), col].sum(), abs=1e-12)

    def test_integer_ties(self):
        c = np.ones((4, 4))
        assert linear_assignment(c)[1] == 4.0

    def test_non_square(self):
        with pytest.raises(InvalidArgumentError):
            linear_assignment(np.ones((2, 3)))


class TestExactWasserstein:
    def test_identical(self):
        x = seq(np.random.default_rng(0), 5)
        assert exact_wasserstein(x, x) == 0.0

    def test_single_coupling(self):
        assert exact_wasserstein([[0.0, 0.0]], [[3.0, 4.0]]) == 25.0

    @pytest.mark.parametrize("n", range(1, 7))
    def test_permutation_brute_force(self, n):
        rng = np.random.default_rng(n)
        for _ in range(10):
            x, y = seq(rng, n, 3), seq(rng, n, 3)
            assert exact_wasserstein(x, y) == pytest.approx(brute_force_assignment_w2(x, y), abs=1e-10)

    @pytest.mark.parametrize("n,m", [(1, 3), (2, 3), (4, 6), (5, 3), (6, 4)])
    def test_unequal_against_expanded_assignment(self, n, m):
        rng = np.random.default_rng(n * 7 + m)
        for _ in range(5):
            x, y = seq(rng, n), seq(rng, m)
            assert exact_wasserstein(x, y) == pytest.approx(expanded_assignment_w2(x, y), abs=1e-8)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(9)
        x, y = seq(rng, 5), seq(rng, 3)
        assert exact_wasserstein(x[::-1], y[[2, 0, 1]]) == pytest.approx(exact_wasserstein(x, y), abs=1e-9)

    def test_cost_convention(self):
        np.testing.assert_allclose(cost_matrix([[0.0, 0.0]], [[3.0, 4.0]]), [[12.5]])
        np.testing.assert_allclose(cost_matrix([[0.0, 0.0]], [[3.0, 4.0]], scale=1.0), [[25.0]])


class TestCosine:
    def test_identical(self):
        x = seq(np.random.default_rng(0), 4) + 3.0
        assert cosine_meanpool(x, x) == pytest.approx(1.0, abs=1e-15)

    def test_orthogonal(self):
        assert cosine_meanpool([[1.0, 0.0]], [[0.0, 2.0], [0.0, 4.0]]) == 0.0

    def test_collinear_means(self):
        assert cosine_meanpool([[1.0, 0.0], [0.0, 1.0]], [[1.0, 1.0]]) == pytest.approx(1.0, abs=1e-15)

    def test_zero_mean(self):
        with pytest.raises(DegenerateInputError):
            cosine_meanpool([[1.0], [-1.0]], [[1.0]])

    def test_order_free(self):
        rng = np.random.default_rng(2)
        x, y = seq(rng, 6), seq(rng, 4)
        assert cosine_meanpool(x[rng.permutation(6)], y) == pytest.approx(cosine_meanpool(x, y), abs=1e-14)
