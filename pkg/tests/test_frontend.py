"""Front-end contracts: joint stretch, pixel norm, weighted darkening."""
import numpy as np
import pytest

from dehaze import (DegenerateImageError, FrontendConfig, ShapeError,
                    apply_general_filter, lambda_constant, lambda_inverted,
                    normalize_init, pixel_norm, run_frontend)

# Frozen oracle values for the (0.6, 0.3, 0.1) pixel, computed by direct
# arithmetic: n = sqrt(0.36 + 0.09 + 0.01); channel - 0.35 * n, floored at 0.
NORM_631 = 0.6782329983125268
FILTERED_631 = (0.3626184505906156, 0.06261845059061561, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


class TestNormalizeInit:
    def test_attains_exact_zero_and_one(self, rng):
        """Joint stretch hits 0.0 and 1.0 exactly with default coefficients."""
        img = 0.2 + 0.6 * rng.random((16, 16, 3))
        out = normalize_init(img)
        assert out.min() == 0.0
        assert out.max() == 1.0

    def test_min_max_are_joint_over_channels(self):
        img = np.zeros((1, 2, 3))
        img[0, 0] = (0.2, 0.5, 0.4)
        img[0, 1] = (0.3, 0.9, 0.1)
        out = normalize_init(img)
        # channel extremes live in different channels; joint span is 0.8
        assert out[0, 1, 2] == 0.0
        assert out[0, 1, 1] == 1.0
        assert out[0, 0, 0] == pytest.approx((0.2 - 0.1) / 0.8, abs=1e-15)

    def test_idempotent_with_defaults(self, rng):
        img = rng.random((8, 8, 3))
        once = normalize_init(img)
        twice = normalize_init(once)
        assert np.max(np.abs(twice - once)) <= 1e-12

    def test_affine_coefficients(self, rng):
        img = rng.random((4, 4, 3))
        base = normalize_init(img)
        out = normalize_init(img, alpha=0.5, beta=0.25)
        assert np.allclose(out, 0.5 * base + 0.25, atol=1e-15)

    def test_full_range_image_unchanged(self, rng):
        img = rng.random((6, 6, 3))
        img[0, 0, 0] = 0.0
        img[-1, -1, -1] = 1.0
        out = normalize_init(img)
        assert np.array_equal(out, img)

    def test_constant_image_raises(self):
        with pytest.raises(DegenerateImageError):
            normalize_init(np.full((4, 4, 3), 0.5))


class TestPixelNorm:
    def test_frozen_value(self):
        img = np.array([[[0.6, 0.3, 0.1]]])
        assert pixel_norm(img)[0, 0] == pytest.approx(NORM_631, abs=1e-12)

    def test_range_bounds(self, rng):
        n = pixel_norm(rng.random((10, 10, 3)))
        assert n.min() >= 0.0
        assert n.max() <= np.sqrt(3.0)
        assert pixel_norm(np.ones((1, 1, 3)))[0, 0] == pytest.approx(
            np.sqrt(3.0), abs=1e-15)

    def test_matches_per_pixel_oracle(self, rng):
        img = rng.random((5, 4, 3))
        n = pixel_norm(img)
        for i in range(5):
            for j in range(4):
                expect = float(np.sqrt(sum(img[i, j, c] ** 2 for c in range(3))))
                assert n[i, j] == pytest.approx(expect, abs=1e-15)


class TestApplyGeneralFilter:
    def test_frozen_pixel_with_constant_035(self):
        img = np.array([[[0.6, 0.3, 0.1]]])
        out = apply_general_filter(img, lambda_constant(0.35, (1, 1)))
        for c in range(3):
            assert out[0, 0, c] == pytest.approx(FILTERED_631[c], abs=1e-12)

    def test_zero_weight_is_bit_identical(self, rng):
        img = rng.random((12, 9, 3))
        out = apply_general_filter(img, np.zeros((12, 9)))
        assert np.array_equal(out, img)
        assert not np.shares_memory(out, img)

    def test_clamps_below_at_zero(self):
        img = np.array([[[0.1, 0.9, 0.2]]])
        out = apply_general_filter(img, np.full((1, 1), 2.0))
        assert out[0, 0, 0] == 0.0
        assert out.min() >= 0.0

    def test_per_channel_weight_field(self, rng):
        img = rng.random((3, 3, 3))
        lam = rng.random((3, 3, 3)) * 0.2
        out = apply_general_filter(img, lam)
        n = pixel_norm(img)
        expect = np.clip(img - lam * n[:, :, None], 0.0, 1.0)
        assert np.array_equal(out, expect)

    def test_weight_shape_mismatch_raises(self, rng):
        img = rng.random((4, 4, 3))
        with pytest.raises(ShapeError):
            apply_general_filter(img, np.zeros((5, 4)))
        with pytest.raises(ShapeError):
            apply_general_filter(img, np.zeros((4, 4, 2)))

    def test_output_within_unit_range(self, rng):
        img = rng.random((8, 8, 3))
        out = apply_general_filter(img, np.full((8, 8), 0.35))
        assert out.min() >= 0.0
        assert out.max() <= 1.0


class TestWeightFields:
    def test_lambda_constant_negative_rejected(self):
        with pytest.raises(ValueError):
            lambda_constant(-0.1, (2, 2))

    def test_lambda_inverted_is_one_minus_input(self, rng):
        f = rng.random((5, 5, 3))
        assert np.array_equal(lambda_inverted(f), 1.0 - f)


class TestRunFrontend:
    def test_constant_zero_on_full_range_image_is_identity(self, rng):
        img = rng.random((8, 8, 3))
        img[0, 0, 0] = 0.0
        img[-1, -1, -1] = 1.0
        cfg = FrontendConfig(lambda_mode="constant", constant_c=0.0)
        assert np.array_equal(run_frontend(img, cfg), img)

    def test_constant_mode_matches_manual_composition(self, rng):
        img = rng.random((6, 6, 3))
        cfg = FrontendConfig(lambda_mode="constant", constant_c=0.35)
        f = normalize_init(img)
        expect = apply_general_filter(f, lambda_constant(0.35, (6, 6)))
        assert np.array_equal(run_frontend(img, cfg), expect)

    def test_inverted_mode_matches_manual_composition(self, rng):
        img = rng.random((6, 6, 3))
        cfg = FrontendConfig(lambda_mode="inverted")
        f = normalize_init(img)
        expect = apply_general_filter(f, lambda_inverted(f))
        assert np.array_equal(run_frontend(img, cfg), expect)

    def test_darkens_on_average(self, rng):
        """Positive weights only subtract, so the mean cannot rise."""
        img = rng.random((10, 10, 3))
        cfg = FrontendConfig(lambda_mode="constant", constant_c=0.35)
        f = normalize_init(img)
        assert run_frontend(img, cfg).mean() < f.mean()

    def test_unknown_mode_rejected_at_config(self):
        with pytest.raises(ValueError):
            FrontendConfig(lambda_mode="mystery")
