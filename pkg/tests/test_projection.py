"""Projection engine: oracle equivalence, determinism, linearity, errors."""

import numpy as np
import pytest

from depthforge import (
    Dataset,
    DimensionMismatch,
    ParallelConfig,
    project_naive,
    project_parallel,
    project_point,
)


class TestNaive:
    def test_identity_directions(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((7, 4))
        p = project_naive(Dataset(x), np.eye(4))
        assert np.array_equal(p.scores, x.T)

    def test_first_coordinate(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((9, 3))
        u = np.zeros((1, 3))
        u[0, 0] = 1.0
        p = project_naive(Dataset(x), u)
        assert np.array_equal(p.scores[0], x[:, 0])

    def test_hand_checked_small_product(self):
        x = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        u = np.array([[1.0, 1.0], [2.0, -1.0]])
        p = project_naive(Dataset(x), u)
        assert np.array_equal(p.scores, np.array([[3.0, 7.0, 11.0], [0.0, 2.0, 4.0]]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            project_naive(Dataset(np.ones((3, 2))), np.ones((4, 3)))


class TestParallelEquivalence:
    def test_randomized_shapes_bit_exact(self):
        rng = np.random.default_rng(2)
        for _ in range(40):
            n = int(rng.integers(1, 200))
            m = int(rng.integers(1, 200))
            d = int(rng.integers(1, 120))
            x = rng.standard_normal((n, d))
            u = rng.standard_normal((m, d))
            data = Dataset(x)
            ref = project_naive(data, u).scores
            for d_chunk in (1, 7, 256, d):
                for workers in (1, 3):
                    cfg = ParallelConfig(workers=workers, d_chunk=d_chunk)
                    got = project_parallel(data, u, cfg).scores
                    assert got.tobytes() == ref.tobytes()

    def test_worker_and_block_invariance(self):
        rng = np.random.default_rng(3)
        data = Dataset(rng.standard_normal((101, 17)))
        u = rng.standard_normal((53, 17))
        ref = project_parallel(data, u, ParallelConfig(workers=1)).scores
        for workers in (2, 4, 8):
            for block in (1, 13, 4096):
                got = project_parallel(
                    data, u, ParallelConfig(workers=workers, block_size=block)
                ).scores
                assert got.tobytes() == ref.tobytes()

    def test_linearity(self):
        rng = np.random.default_rng(4)
        x1 = rng.standard_normal((30, 6))
        x2 = rng.standard_normal((30, 6))
        u = rng.standard_normal((11, 6))
        a, b = 0.7, -1.3
        combo = project_parallel(Dataset(a * x1 + b * x2), u).scores
        s1 = project_parallel(Dataset(x1), u).scores
        s2 = project_parallel(Dataset(x2), u).scores
        assert np.allclose(combo, a * s1 + b * s2, rtol=1e-10, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            project_parallel(Dataset(np.ones((3, 2))), np.ones((4, 5)))


class TestProjectPoint:
    def test_zero_vector(self):
        u = np.random.default_rng(5).standard_normal((8, 3))
        u /= np.linalg.norm(u, axis=1)[:, None]
        assert np.array_equal(project_point(np.zeros(3), u), np.zeros(8))

    def test_self_inner_product(self):
        rng = np.random.default_rng(6)
        u = rng.standard_normal((4, 5))
        u /= np.linalg.norm(u, axis=1)[:, None]
        pz = project_point(u[0], u)
        assert pz[0] == pytest.approx(1.0, abs=1e-12)

    def test_matches_naive_on_singleton_dataset(self):
        rng = np.random.default_rng(7)
        z = rng.standard_normal(9)
        u = rng.standard_normal((31, 9))
        pz = project_point(z, u, ParallelConfig(workers=4, block_size=5))
        ref = project_naive(Dataset(z.reshape(1, -1)), u).scores[:, 0]
        assert np.array_equal(pz, ref)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            project_point(np.zeros(3), np.ones((2, 4)))


class TestDataset:
    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="non-finite"):
            Dataset(np.array([[1.0, np.nan]]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Dataset(np.empty((0, 3)))

    def test_row_vector_promoted(self):
        data = Dataset([1.0, 2.0, 3.0])
        assert data.n == 1
        assert data.dim == 3

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ParallelConfig(workers=0)
        with pytest.raises(ValueError):
            ParallelConfig(block_size=0)
        with pytest.raises(ValueError):
            ParallelConfig(d_chunk=0)
