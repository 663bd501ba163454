"""Counter RNG and direction sampling: published vectors, caps, determinism."""

import math

import numpy as np
import pytest
from scipy import stats

from depthforge import philox
from depthforge.directions import (
    CapSpec,
    Pole,
    SubStream,
    generate_batch,
    random_sphere,
    random_sphere_pole,
    reflect_to_pole,
)


class TestPhilox:
    # Known-answer vectors from the Random123 distribution (philox4x32, 10 rounds).
    def test_kat_zero(self):
        out = philox.philox4x32(np.zeros((4, 1), dtype=np.uint32), 0, 0)
        assert [int(w) for w in out[:, 0]] == [
            0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8,
        ]

    def test_kat_ones(self):
        ctr = np.full((4, 1), 0xFFFFFFFF, dtype=np.uint32)
        out = philox.philox4x32(ctr, 0xFFFFFFFF, 0xFFFFFFFF)
        assert [int(w) for w in out[:, 0]] == [
            0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD,
        ]

    def test_kat_pi_digits(self):
        ctr = np.array(
            [[0x243F6A88], [0x85A308D3], [0x13198A2E], [0x03707344]],
            dtype=np.uint32,
        )
        out = philox.philox4x32(ctr, 0xA4093822, 0x299F31D0)
        assert [int(w) for w in out[:, 0]] == [
            0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1,
        ]

    def test_uniforms_open_interval_and_deterministic(self):
        u1 = philox.uniforms(9, np.arange(1000), np.zeros(1000), 3, 7)
        u2 = philox.uniforms(9, np.arange(1000), np.zeros(1000), 3, 7)
        assert np.array_equal(u1, u2)
        assert np.all((u1 > 0.0) & (u1 < 1.0))

    def test_distinct_addresses_differ(self):
        base = philox.uniforms(9, np.arange(100), np.zeros(100), 0, 0)
        for seed, ref, query in [(10, 0, 0), (9, 1, 0), (9, 0, 1)]:
            other = philox.uniforms(seed, np.arange(100), np.zeros(100), ref, query)
            assert not np.array_equal(base, other)


class TestRandomSphere:
    def test_d1_is_sign(self):
        vals = {float(random_sphere(1, SubStream(seed=s))[0]) for s in range(64)}
        assert vals <= {1.0, -1.0}
        assert len(vals) == 2

    def test_unit_norm(self):
        for seed in range(20):
            u = random_sphere(7, SubStream(seed=seed))
            assert abs(np.linalg.norm(u) - 1.0) <= 1e-12

    def test_coordinate_means_clt(self):
        # 1e5 draws in d=3: per-coordinate mean within 4 sigma of zero,
        # sigma = 1/sqrt(3 * 1e5) for unit-sphere coordinates (E[u_i^2] = 1/3).
        n = 100_000
        blocks = np.arange(3, dtype=np.uint64)[None, :]
        idx = np.arange(n, dtype=np.uint64)[:, None]
        g = philox.normals(17, blocks, idx, 0, 0)
        u = g / np.linalg.norm(g, axis=1)[:, None]
        sigma = 1.0 / math.sqrt(3 * n)
        assert np.all(np.abs(u.mean(axis=0)) < 4 * sigma)

    def test_angle_uniformity_chi_square_d2(self):
        # Angles of 1e5 full-sphere draws in d=2, 36 bins, significance 0.001.
        n = 100_000
        blocks = np.arange(2, dtype=np.uint64)[None, :]
        idx = np.arange(n, dtype=np.uint64)[:, None]
        g = philox.normals(23, blocks, idx, 0, 0)
        u = g / np.linalg.norm(g, axis=1)[:, None]
        angles = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2 * np.pi)
        counts, _ = np.histogram(angles, bins=36, range=(0, 2 * np.pi))
        expected = n / 36
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert chi2 < stats.chi2.ppf(0.999, 35)


class TestCapSampling:
    def test_pole_validation(self):
        with pytest.raises(ValueError):
            Pole(np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            CapSpec(pole=Pole(np.array([1.0, 0.0])), epsilon=0.0)
        with pytest.raises(ValueError):
            CapSpec(pole=Pole(np.array([1.0, 0.0])), epsilon=2.0)

    def test_vanishing_cap_approaches_pole(self):
        pole = np.array([0.0, 0.6, 0.8])
        cap = CapSpec(pole=Pole(pole), epsilon=1e-9)
        u = random_sphere_pole(cap, SubStream(seed=5))
        assert pole @ u >= math.cos(1e-9) - 1e-10

    def test_identity_pole_keeps_polar_angle(self):
        d = 4
        pole = np.zeros(d)
        pole[0] = 1.0
        cap = CapSpec(pole=Pole(pole), epsilon=0.7)
        stream = SubStream(seed=11)
        u = random_sphere_pole(cap, stream)
        theta = float(stream.uniforms(1)[0]) * 0.7
        assert u[0] == pytest.approx(math.cos(theta), abs=0.0)

    def test_hemisphere_membership(self):
        # epsilon = pi/2 around an arbitrary pole: all draws on its hemisphere.
        pole = np.array([0.36, -0.48, 0.8, 0.0])
        pole = pole / np.linalg.norm(pole)
        cap = CapSpec(pole=Pole(pole), epsilon=math.pi / 2)
        batch = generate_batch(cap, 10_000, seed=3, refinement=0)
        dots = batch.directions @ pole
        assert np.all(dots >= -1e-10)

    def test_cap_membership_and_unit_norm(self):
        pole = np.array([0.2, 0.4, -0.4, 0.8])
        pole /= np.linalg.norm(pole)
        eps = math.pi / 4
        batch = generate_batch(CapSpec(Pole(pole), eps), 1000, seed=9, refinement=2)
        norms = np.linalg.norm(batch.directions, axis=1)
        assert np.all(np.abs(norms - 1.0) <= 1e-12)
        assert np.all(batch.directions @ pole >= math.cos(eps) - 1e-10)

    def test_antipodal_pole(self):
        pole = np.array([-1.0, 0.0, 0.0])
        batch = generate_batch(CapSpec(Pole(pole), 0.3), 200, seed=1, refinement=0)
        assert np.all(batch.directions @ pole >= math.cos(0.3) - 1e-10)

    def test_d1_returns_pole(self):
        cap = CapSpec(Pole(np.array([-1.0])), 0.5)
        batch = generate_batch(cap, 5, seed=0, refinement=0)
        assert np.array_equal(batch.directions, np.full((5, 1), -1.0))

    def test_reflection_preserves_inner_products(self):
        rng = np.random.default_rng(0)
        pole = rng.standard_normal(6)
        pole /= np.linalg.norm(pole)
        rows = rng.standard_normal((40, 6))
        before = rows @ rows.T
        reflected = reflect_to_pole(rows.copy(), pole)
        after = reflected @ reflected.T
        assert np.max(np.abs(after - before)) <= 1e-12


class TestBatchDeterminism:
    def test_same_key_same_batch(self):
        cap = CapSpec(Pole(np.array([1.0, 0.0, 0.0])), 0.5)
        b1 = generate_batch(cap, 64, seed=5, refinement=3)
        b2 = generate_batch(cap, 64, seed=5, refinement=3)
        assert np.array_equal(b1.directions, b2.directions)
        assert b1.seed_info == (5, 3)

    def test_rows_match_scalar_substreams(self):
        pole = np.array([0.6, 0.0, 0.8])
        cap = CapSpec(Pole(pole), 0.9)
        batch = generate_batch(cap, 16, seed=21, refinement=4, query=2)
        for j in (0, 3, 15):
            u = random_sphere_pole(
                cap, SubStream(seed=21, refinement=4, query=2, index=j)
            )
            assert np.array_equal(batch.directions[j], u)

    def test_prefix_stability_under_m(self):
        cap = CapSpec(Pole(np.array([1.0, 0.0])), 1.0)
        small = generate_batch(cap, 10, seed=7, refinement=1)
        large = generate_batch(cap, 200, seed=7, refinement=1)
        assert np.array_equal(small.directions, large.directions[:10])

    def test_zero_m_rejected(self):
        with pytest.raises(ValueError):
            generate_batch(CapSpec(Pole(np.array([1.0, 0.0])), 1.0), 0, 0, 0)
