"""ACE contracts: exact O(N^2) reference vs. level-interpolated fast path."""
import numpy as np
import pytest

from dehaze import AceConfig, SizeGuardError, ace_exact, ace_fast, ace_rgb, slope_function


@pytest.fixture
def rng():
    return np.random.default_rng(3)


class TestSlopeFunction:
    def test_saturates_at_unit_magnitude(self):
        d = np.array([-1.0, -0.3, -0.1, 0.0, 0.1, 0.3, 1.0])
        out = slope_function(d, alpha=5.0)
        assert np.array_equal(out, [-1.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.0])

    def test_linear_inside_the_band(self):
        assert slope_function(0.05, alpha=5.0) == pytest.approx(0.25, abs=1e-15)


class TestAceExact:
    def test_two_pixel_row_maps_to_zero_one(self):
        """Mutual distance 1: the darker pixel lands at 0, the brighter at 1."""
        out = ace_exact(np.array([[0.2, 0.8]]))
        assert np.array_equal(out, np.array([[0.0, 1.0]]))

    def test_constant_channel_maps_to_half(self):
        out = ace_exact(np.full((5, 7), 0.3))
        assert np.all(out == 0.5)

    def test_single_pixel_maps_to_half(self):
        assert ace_exact(np.array([[0.4]]))[0, 0] == 0.5

    def test_mirror_covariance_is_exact(self, rng):
        """The weight depends only on distance, so flipping the image
        flips the output bit-for-bit (order-independent summation)."""
        img = rng.random((6, 8))
        assert np.array_equal(ace_exact(img[:, ::-1]), ace_exact(img)[:, ::-1])
        assert np.array_equal(ace_exact(img[::-1, :]), ace_exact(img)[::-1, :])

    def test_output_attains_zero_and_one(self, rng):
        out = ace_exact(rng.random((8, 8)))
        assert out.min() == 0.0
        assert out.max() == 1.0

    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            ace_exact(np.zeros((65, 65)))

    def test_monotone_pair_ordering(self, rng):
        """A strictly brighter pixel at the same location cannot land below
        a darker one in a two-pixel image."""
        out = ace_exact(np.array([[0.1, 0.3, 0.9]]))
        assert out[0, 0] <= out[0, 1] <= out[0, 2]


class TestAceFast:
    def test_two_pixel_row_matches_exact(self):
        out = ace_fast(np.array([[0.2, 0.8]]))
        assert np.array_equal(out, np.array([[0.0, 1.0]]))

    def test_constant_channel_maps_to_half(self):
        assert np.all(ace_fast(np.full((6, 6), 0.7)) == 0.5)

    def test_single_pixel_maps_to_half(self):
        assert ace_fast(np.array([[0.9]]))[0, 0] == 0.5

    def test_close_to_exact_at_default_levels(self, rng):
        for _ in range(5):
            img = rng.random((8, 8))
            err = np.abs(ace_fast(img) - ace_exact(img)).max()
            assert err <= 0.05, f"fast path drifted {err} from the exact form"

    def test_more_levels_reduce_error(self, rng):
        img = rng.random((10, 10))
        ref = ace_exact(img)
        errs = [np.abs(ace_fast(img, AceConfig(levels=j)) - ref).max()
                for j in (4, 8, 16)]
        assert errs[2] <= errs[1] <= errs[0]

    def test_output_attains_zero_and_one(self, rng):
        out = ace_fast(rng.random((16, 16)))
        assert out.min() == 0.0
        assert out.max() == 1.0

    def test_levels_cover_endpoints(self, rng):
        """Values 0.0 and 1.0 interpolate without indexing past the level
        stack."""
        img = rng.random((6, 6))
        img[0, 0] = 0.0
        img[-1, -1] = 1.0
        out = ace_fast(img)
        assert np.isfinite(out).all()


class TestAceRgb:
    def test_channels_processed_independently(self, rng):
        img = rng.random((9, 9, 3))
        out = ace_rgb(img)
        for c in range(3):
            assert np.array_equal(out[:, :, c], ace_fast(img[:, :, c]))

    def test_exact_flag_switches_path(self, rng):
        img = rng.random((5, 5, 3))
        out = ace_rgb(img, exact=True)
        for c in range(3):
            assert np.array_equal(out[:, :, c], ace_exact(img[:, :, c]))

    def test_bad_config_rejected(self):
        with pytest.raises(ValueError):
            AceConfig(slope_alpha=0.0)
        with pytest.raises(ValueError):
            AceConfig(levels=1)
