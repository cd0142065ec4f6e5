"""STRESS contracts: spray geometry, envelope math, determinism."""
import numpy as np
import pytest

from dehaze import StressConfig, spray_sample, stress


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def philox(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


class TestSpraySample:
    def test_same_rng_state_same_samples(self):
        a = spray_sample((9, 9), (4, 4), 3.0, 50, philox(123))
        b = spray_sample((9, 9), (4, 4), 3.0, 50, philox(123))
        assert np.array_equal(a, b)

    def test_returns_n_valid_coordinates(self):
        got = spray_sample((7, 5), (3, 2), 10.0, 64, philox(9))
        assert got.shape == (64, 2)
        assert got[:, 0].min() >= 0 and got[:, 0].max() < 7
        assert got[:, 1].min() >= 0 and got[:, 1].max() < 5

    def test_radius_one_stays_in_3x3_box(self):
        """Offsets are radius * u rounded, so |dy|, |dx| <= 1."""
        got = spray_sample((9, 9), (4, 4), 1.0, 200, philox(123))
        assert np.all(np.abs(got - 4) <= 1)

    def test_center_excluded(self):
        # seeded: no sample exhausts its redraws, so none equals the center
        got = spray_sample((9, 9), (4, 4), 1.0, 200, philox(123))
        assert not np.any((got[:, 0] == 4) & (got[:, 1] == 4))

    def test_degenerate_1x1_clamps_onto_center(self):
        """Nowhere else to go: every sample clamps back to the only pixel."""
        got = spray_sample((1, 1), (0, 0), 1.0, 8, philox(5))
        assert np.array_equal(got, np.zeros((8, 2), dtype=got.dtype))


class TestStress:
    def test_constant_image_maps_to_half(self):
        out = stress(np.full((6, 7, 3), 0.42), StressConfig(n_iterations=3))
        assert np.all(out == 0.5)

    def test_single_pixel_image_maps_to_half(self):
        out = stress(np.full((1, 1, 3), 0.3), StressConfig(n_iterations=3))
        assert np.all(out == 0.5)

    def test_two_pixel_extremes_map_to_zero_and_one(self):
        img = np.zeros((1, 2, 3))
        img[0, 1] = 1.0
        out = stress(img, StressConfig(n_iterations=20))
        assert np.array_equal(out[0, 0], [0.0, 0.0, 0.0])
        assert np.array_equal(out[0, 1], [1.0, 1.0, 1.0])

    def test_output_in_unit_range(self, rng):
        img = rng.random((12, 10, 3))
        out = stress(img, StressConfig(n_iterations=8))
        assert out.min() >= 0.0
        assert out.max() <= 1.0

    def test_global_extremes_pin_to_envelope_ends(self, rng):
        img = rng.random((5, 5, 3)) * 0.8 + 0.1
        img[2, 3] = 1.0
        img[1, 1] = 0.0
        out = stress(img, StressConfig(n_iterations=30))
        assert np.array_equal(out[2, 3], [1.0, 1.0, 1.0])
        assert np.array_equal(out[1, 1], [0.0, 0.0, 0.0])

    def test_same_seed_bit_identical(self, rng):
        img = rng.random((8, 9, 3))
        cfg = StressConfig(n_iterations=10, seed=4)
        assert np.array_equal(stress(img, cfg), stress(img, cfg))

    def test_different_seed_differs(self, rng):
        img = rng.random((8, 9, 3))
        a = stress(img, StressConfig(n_iterations=10, seed=0))
        b = stress(img, StressConfig(n_iterations=10, seed=1))
        assert not np.array_equal(a, b)

    def test_channel_permutation_covariance_exact(self, rng):
        """Sprays are shared across channels, so permuting channels
        permutes the output bit-for-bit."""
        img = rng.random((6, 6, 3))
        cfg = StressConfig(n_iterations=10)
        base = stress(img, cfg)
        perm = [2, 0, 1]
        assert np.array_equal(stress(img[:, :, perm], cfg), base[:, :, perm])

    def test_default_radius_is_max_dimension(self, rng):
        """radius=None behaves exactly like radius=max(W, H)."""
        img = rng.random((4, 9, 3))
        a = stress(img, StressConfig(n_iterations=5, radius=None))
        b = stress(img, StressConfig(n_iterations=5, radius=9))
        assert np.array_equal(a, b)

    def test_bad_config_rejected(self):
        with pytest.raises(ValueError):
            StressConfig(n_samples=0)
        with pytest.raises(ValueError):
            StressConfig(n_iterations=0)
        with pytest.raises(ValueError):
            StressConfig(radius=0)
