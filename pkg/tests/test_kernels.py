import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from swkernel.core import InvalidArgumentError, sample_projections
from swkernel.kernels import (
    KernelConfig,
    gram,
    gram_from_projections,
    projected_costs,
    sw_hat,
    sw_rbf_hat,
    usw_rbf_hat,
)


def circle_mean(f):
    """Average of f(theta) over the unit circle by adaptive quadrature."""
    return integrate.quad(f, 0.0, 2 * math.pi, epsabs=1e-14, limit=200)[0] / (2 * math.pi)


def random_pair(seed, d=3, n=5, m=7):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, d)), rng.normal(size=(m, d))


class TestKernelConfig:
    @pytest.mark.parametrize("kw", [dict(gamma=0.0), dict(gamma=-1.0), dict(p=0.5), dict(projections=0)])
    def test_invalid(self, kw):
        with pytest.raises(InvalidArgumentError):
            KernelConfig(**kw)

    def test_defaults(self):
        cfg = KernelConfig()
        assert (cfg.gamma, cfg.p, cfg.projections) == (2.5, 2.0, 50)


class TestSwHat:
    def test_identical_is_zero(self):
        x, _ = random_pair(0)
        assert sw_hat(x, x, 2, sample_projections(3, 20, 0)) == 0.0

    @pytest.mark.parametrize("L", [1, 2, 7])
    def test_one_dimensional_exact(self, L):
        assert sw_hat([[0.0]], [[3.0]], 2, sample_projections(1, L, 11)) == 9.0

    def test_planar_mean_of_cos_squared(self):
        # E[psi_1^2] over the circle
        expected = circle_mean(lambda t: math.cos(t) ** 2)
        assert expected == pytest.approx(0.5, abs=1e-14)
        proj = sample_projections(2, 20000, 4)
        costs = projected_costs([[0.0, 0.0]], [[1.0, 0.0]], 2, proj)
        se = costs.std(ddof=1) / math.sqrt(costs.size)
        assert abs(sw_hat([[0.0, 0.0]], [[1.0, 0.0]], 2, proj) - expected) < 3 * se

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            sw_hat([[0.0, 1.0]], [[1.0]], 2, sample_projections(2, 3, 0))
        with pytest.raises(InvalidArgumentError):
            sw_hat([[0.0, 1.0]], [[1.0, 0.0]], 2, sample_projections(3, 3, 0))


class TestRbfKernels:
    def test_identical_is_one(self):
        x, _ = random_pair(1)
        cfg = KernelConfig(gamma=1.0, projections=30)
        proj = cfg.projection_set(3)
        assert usw_rbf_hat(x, x, cfg, proj) == 1.0
        assert sw_rbf_hat(x, x, cfg, proj) == 1.0

    @pytest.mark.parametrize("L", [1, 5])
    def test_one_dimensional_closed_form(self, L):
        cfg = KernelConfig(gamma=1.0, p=2, projections=L)
        proj = cfg.projection_set(1)
        assert usw_rbf_hat([[0.0]], [[3.0]], cfg, proj) == pytest.approx(math.exp(-9), rel=1e-15)
        assert sw_rbf_hat([[0.0]], [[3.0]], cfg, proj) == pytest.approx(math.exp(-9), rel=1e-15)

    @pytest.mark.parametrize("L", [3, 44, 97])
    def test_constant_costs_tie_exactly(self, L):
        # every direction in d=1 gives the same cost; the two estimators must coincide
        rng = np.random.default_rng(L)
        x, y = rng.normal(size=(4, 1)), rng.normal(size=(6, 1))
        cfg = KernelConfig(gamma=0.9, projections=L, seed=L)
        proj = cfg.projection_set(1)
        assert usw_rbf_hat(x, y, cfg, proj) == sw_rbf_hat(x, y, cfg, proj)

    def test_planar_quadrature(self):
        expected = circle_mean(lambda t: math.exp(-math.cos(t) ** 2))
        assert expected == pytest.approx(0.64503527044915, abs=1e-13)
        cfg = KernelConfig(gamma=1.0, p=2, projections=20000, seed=9)
        proj = cfg.projection_set(2)
        terms = np.exp(-projected_costs([[0.0, 0.0]], [[1.0, 0.0]], 2, proj))
        se = terms.std(ddof=1) / math.sqrt(terms.size)
        assert abs(usw_rbf_hat([[0.0, 0.0]], [[1.0, 0.0]], cfg, proj) - expected) < 3 * se

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0.05, 5.0), st.sampled_from([1.0, 2.0, 3.0]))
    def test_jensen_bound_and_range(self, seed, gamma, p):
        x, y = random_pair(seed)
        cfg = KernelConfig(gamma=gamma, p=p, projections=17, seed=seed)
        proj = cfg.projection_set(3)
        u = usw_rbf_hat(x, y, cfg, proj)
        s = sw_rbf_hat(x, y, cfg, proj)
        assert 0.0 < s <= u <= 1.0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_symmetry(self, seed):
        x, y = random_pair(seed)
        cfg = KernelConfig(gamma=1.0, projections=25, seed=seed)
        proj = cfg.projection_set(3)
        assert usw_rbf_hat(x, y, cfg, proj) == usw_rbf_hat(y, x, cfg, proj)
        assert sw_rbf_hat(x, y, cfg, proj) == sw_rbf_hat(y, x, cfg, proj)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_support_permutation_invariance(self, seed):
        x, y = random_pair(seed)
        rng = np.random.default_rng(seed)
        cfg = KernelConfig(gamma=0.7, projections=25, seed=seed)
        proj = cfg.projection_set(3)
        xp = x[rng.permutation(len(x))]
        yp = y[rng.permutation(len(y))]
        assert usw_rbf_hat(x, y, cfg, proj) == usw_rbf_hat(xp, yp, cfg, proj)
        assert sw_hat(x, y, 2, proj) == sw_hat(xp, yp, 2, proj)

    def test_deterministic_for_fixed_projection(self):
        x, y = random_pair(3)
        cfg = KernelConfig(gamma=1.3, projections=64, seed=5)
        a = usw_rbf_hat(x, y, cfg, cfg.projection_set(3))
        b = usw_rbf_hat(x, y, cfg, cfg.projection_set(3))
        assert a == b

    def test_value_one_only_for_zero_costs(self):
        # equal as sets => every projected W is zero
        x = [[0.0, 1.0], [2.0, -1.0]]
        cfg = KernelConfig(gamma=1.0, projections=10)
        assert usw_rbf_hat(x, x[::-1], cfg, cfg.projection_set(2)) == 1.0
        assert usw_rbf_hat(x, [[0.0, 1.0], [2.0, -0.5]], cfg, cfg.projection_set(2)) < 1.0


class TestGram:
    def test_single(self):
        g = gram([[[1.0, 2.0]]], KernelConfig())
        np.testing.assert_array_equal(g.entries, [[1.0]])

    def test_two_identical(self):
        x, _ = random_pair(0)
        g = gram([x, x.copy()], KernelConfig(gamma=1.0))
        np.testing.assert_array_equal(g.entries, np.ones((2, 2)))

    def test_empty(self):
        with pytest.raises(InvalidArgumentError):
            gram([], KernelConfig())

    def test_mixed_dims(self):
        with pytest.raises(InvalidArgumentError):
            gram([[[1.0]], [[1.0, 2.0]]], KernelConfig())

    def test_entries_match_pairwise_kernel(self):
        rng = np.random.default_rng(4)
        seqs = [rng.normal(size=(rng.integers(2, 8), 3)) for _ in range(5)]
        cfg = KernelConfig(gamma=1.0, projections=40, seed=8)
        g = gram(seqs, cfg, labels="abcde")
        proj = cfg.projection_set(3)
        for i in range(5):
            for j in range(5):
                expected = 1.0 if i == j else usw_rbf_hat(seqs[i], seqs[j], cfg, proj)
                assert g.entries[i, j] == expected
        assert g.labels == tuple("abcde")
        assert np.array_equal(g.entries, g.entries.T)

    def test_psd_random(self):
        rng = np.random.default_rng(12)
        seqs = [rng.normal(size=(rng.integers(3, 10), 3)) for _ in range(8)]
        g = gram(seqs, KernelConfig(gamma=1.0, p=2, projections=512))
        assert g.min_eigenvalue >= -1e-6

    def test_label_length_checked(self):
        with pytest.raises(InvalidArgumentError):
            gram_from_projections([[[1.0]]], KernelConfig(), sample_projections(1, 2, 0), labels=["a", "b"])
