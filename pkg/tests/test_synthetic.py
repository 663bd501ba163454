"""Synthetic generators: moments, determinism, density ordering."""

import numpy as np
import pytest

from depthforge.study import (
    ExponentialSpec,
    StudentTSpec,
    ToeplitzGaussianSpec,
    gen_exponential,
    gen_student_t,
    gen_toeplitz_gaussian,
    generate,
    quadratic_forms,
    toeplitz_sigma,
    true_density_rank,
)


class TestToeplitzGaussian:
    def test_sigma_d2(self):
        assert np.array_equal(
            toeplitz_sigma(2), np.array([[1.0, 0.5], [0.5, 1.0]])
        )

    def test_d1_unit_variance(self):
        x = gen_toeplitz_gaussian(ToeplitzGaussianSpec(dim=1, n=100_000, seed=0))
        assert abs(x.var() - 1.0) < 0.05

    def test_sample_covariance_matches_sigma(self):
        spec = ToeplitzGaussianSpec(dim=5, n=100_000, seed=1)
        x = gen_toeplitz_gaussian(spec)
        cov = np.cov(x.T, bias=True)
        assert np.max(np.abs(cov - spec.sigma)) < 0.02

    def test_seed_determinism_and_distinctness(self):
        a = gen_toeplitz_gaussian(ToeplitzGaussianSpec(dim=3, n=50, seed=9))
        b = gen_toeplitz_gaussian(ToeplitzGaussianSpec(dim=3, n=50, seed=9))
        c = gen_toeplitz_gaussian(ToeplitzGaussianSpec(dim=3, n=50, seed=10))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestStudentT:
    def test_large_nu_covariance_close_to_sigma(self):
        # cov = Sigma * nu/(nu-2); at nu=1e6 that factor is ~1.
        spec = StudentTSpec(dim=3, n=100_000, nu=1e6, seed=2)
        x = gen_student_t(spec)
        cov = np.cov(x.T, bias=True)
        assert np.max(np.abs(cov - spec.sigma)) < 0.03 * np.max(spec.sigma)

    def test_cauchy_heavy_tails(self):
        spec = StudentTSpec(dim=2, n=100_000, nu=1.0, seed=3)
        x = gen_student_t(spec)
        gaussian_range = 6.0  # |N(0,1)| essentially never exceeds this
        assert np.abs(x).max() > 100 * gaussian_range

    def test_symmetric_median_near_zero(self):
        spec = StudentTSpec(dim=1, n=100_000, nu=2.0, seed=4)
        x = gen_student_t(spec)
        assert abs(np.median(x)) < 0.02

    def test_invalid_nu(self):
        with pytest.raises(ValueError):
            StudentTSpec(dim=2, n=10, nu=0.0)


class TestExponential:
    def test_support_nonnegative(self):
        x = gen_exponential(4, 1000, seed=5)
        assert np.all(x >= 0.0)

    def test_unit_mean(self):
        x = gen_exponential(3, 100_000, seed=6)
        assert np.max(np.abs(x.mean(axis=0) - 1.0)) < 0.03

    def test_seed_determinism(self):
        assert np.array_equal(gen_exponential(2, 20, 7), gen_exponential(2, 20, 7))
        assert not np.array_equal(
            gen_exponential(2, 20, 7), gen_exponential(2, 20, 8)
        )


class TestGenerateDispatch:
    def test_all_specs(self):
        assert generate(ToeplitzGaussianSpec(dim=2, n=5, seed=0)).shape == (5, 2)
        assert generate(StudentTSpec(dim=2, n=5, nu=3, seed=0)).shape == (5, 2)
        assert generate(ExponentialSpec(dim=2, n=5, seed=0)).shape == (5, 2)

    def test_unknown_spec(self):
        with pytest.raises(TypeError):
            generate(object())


class TestDensityRank:
    def test_mode_ranks_first(self):
        spec = ToeplitzGaussianSpec(dim=3, n=10, seed=0)
        queries = np.vstack([np.zeros(3), np.ones(3), 2 * np.ones(3)])
        ranks = true_density_rank(spec, queries)
        assert ranks[0] == 1.0

    def test_tied_quadratic_forms_average(self):
        spec = ToeplitzGaussianSpec(dim=2, n=10, seed=0)
        q = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]])
        # (1,0) and (-1,0) have the same quadratic form by symmetry
        ranks = true_density_rank(spec, q)
        assert ranks[0] == ranks[1] == 2.5
        assert ranks[2] == 1.0

    def test_hand_computed_quadratic_forms(self):
        spec = ToeplitzGaussianSpec(dim=2, n=10, seed=0)
        # Sigma = [[1, .5], [.5, 1]]; Sigma^-1 = (4/3)*[[1, -.5], [-.5, 1]]
        q = np.array([[1.0, 1.0], [1.0, 0.0]])
        forms = quadratic_forms(spec, q)
        assert forms[0] == pytest.approx(4 / 3, rel=1e-12)
        assert forms[1] == pytest.approx(4 / 3, rel=1e-12)
        ranks = true_density_rank(spec, q)
        assert ranks[0] == ranks[1] == 1.5

    def test_affine_invariance_of_ordering(self):
        rng = np.random.default_rng(8)
        spec = ToeplitzGaussianSpec(dim=3, n=10, seed=0)
        queries = rng.standard_normal((20, 3))
        base = true_density_rank(spec, queries)

        class MovedSpec:
            def __init__(self, t, b):
                self.mu = t @ spec.mu + b
                self.sigma = t @ spec.sigma @ t.T

        t = rng.standard_normal((3, 3))
        t += 3 * np.eye(3)
        b = rng.standard_normal(3)
        moved = true_density_rank(MovedSpec(t, b), queries @ t.T + b)
        assert np.array_equal(base, moved)
