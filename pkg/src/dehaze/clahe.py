"""Contrast-limited adaptive histogram equalization, plus the two global
tone baselines (plain histogram equalization and gamma correction).

Histograms are float-valued over n_bins uniform bins on [0, 1]; mass above
clip_limit * tile_pixel_count is redistributed uniformly across all bins in
one pass, and the per-tile mapping is the clipped CDF. Pixels are remapped
by bilinear interpolation between the mappings of the four surrounding
tile centers (nearest tile outside the center lattice).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import require_field, require_rgb

TILE_MODES = ("frac", "fixed")


@dataclass
class ClaheConfig:
    """Clip limit, tile geometry, and histogram resolution.

    tile_mode "frac" uses tiles of ceil(dim / tile_denominator) pixels per
    axis (a 512x512 image with denominator 8 gets 64x64 tiles); "fixed"
    uses tile_side x tile_side tiles, clamped to the image dimensions.
    """
    clip_limit: float = 0.008
    tile_mode: str = "frac"
    tile_denominator: int = 8
    tile_side: int = 800
    n_bins: int = 256

    def __post_init__(self):
        if not 0.0 < self.clip_limit <= 1.0:
            raise ValueError(f"clip_limit must be in (0, 1], got {self.clip_limit}")
        if self.tile_mode not in TILE_MODES:
            raise ValueError(f"tile_mode must be one of {TILE_MODES}, got {self.tile_mode!r}")
        if self.tile_denominator < 1:
            raise ValueError("tile_denominator must be >= 1")
        if self.tile_side < 1:
            raise ValueError("tile_side must be >= 1")
        if self.n_bins < 2:
            raise ValueError("n_bins must be >= 2")


def tile_shape(cfg: ClaheConfig, height: int, width: int) -> tuple[int, int]:
    """Tile (rows, cols) in pixels for an image of the given size."""
    if cfg.tile_mode == "frac":
        return (-(-height // cfg.tile_denominator), -(-width // cfg.tile_denominator))
    return (min(cfg.tile_side, height), min(cfg.tile_side, width))


def _bin_indices(channel: np.ndarray, n_bins: int) -> np.ndarray:
    # v = 1.0 belongs to the top bin, not a phantom bin n_bins.
    return np.minimum((channel * n_bins).astype(np.intp), n_bins - 1)


def _clipped_cdf(bins: np.ndarray, n_bins: int, clip_limit: float) -> np.ndarray:
    hist = np.bincount(bins.ravel(), minlength=n_bins).astype(np.float64)
    npix = bins.size
    cap = clip_limit * npix
    excess = np.maximum(hist - cap, 0.0).sum()
    hist = np.minimum(hist, cap) + excess / n_bins
    return np.cumsum(hist) / npix


def _axis_weights(n: int, starts: np.ndarray,
                  sizes: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bracketing tile indices and blend weight for every pixel on one axis."""
    centers = starts + sizes / 2.0
    pos = np.arange(n) + 0.5
    hi = np.searchsorted(centers, pos)
    lo = np.clip(hi - 1, 0, len(centers) - 1)
    hi = np.clip(hi, 0, len(centers) - 1)
    gap = centers[hi] - centers[lo]
    w = np.where(hi > lo, (pos - centers[lo]) / np.where(gap > 0, gap, 1.0), 0.0)
    return lo, hi, w


def global_hist_eq(channel: np.ndarray, n_bins: int = 256) -> np.ndarray:
    """Plain histogram equalization of one channel: m(v) = CDF(v)."""
    ch = require_field(channel, "channel")
    bins = _bin_indices(ch, n_bins)
    cdf = _clipped_cdf(bins, n_bins, 1.0)
    return cdf[bins]


def clahe_channel(channel: np.ndarray, cfg: ClaheConfig | None = None) -> np.ndarray:
    """Clip-limited adaptive equalization of one channel in [0, 1].

    With a single tile and clip_limit 1.0 this reproduces global_hist_eq
    exactly (the interpolation weights collapse to the one mapping).
    """
    if cfg is None:
        cfg = ClaheConfig()
    ch = require_field(channel, "channel")
    h, w = ch.shape
    th, tw = tile_shape(cfg, h, w)
    ys = np.arange(0, h, th)
    xs = np.arange(0, w, tw)
    sy = np.minimum(th, h - ys)
    sx = np.minimum(tw, w - xs)

    bins = _bin_indices(ch, cfg.n_bins)
    lut = np.empty((len(ys), len(xs), cfg.n_bins))
    for r, (y0, hh) in enumerate(zip(ys, sy)):
        for c, (x0, ww) in enumerate(zip(xs, sx)):
            lut[r, c] = _clipped_cdf(bins[y0:y0 + hh, x0:x0 + ww],
                                     cfg.n_bins, cfg.clip_limit)

    lo_y, hi_y, wy = _axis_weights(h, ys, sy)
    lo_x, hi_x, wx = _axis_weights(w, xs, sx)
    t00 = lut[lo_y[:, None], lo_x[None, :], bins]
    t01 = lut[lo_y[:, None], hi_x[None, :], bins]
    t10 = lut[hi_y[:, None], lo_x[None, :], bins]
    t11 = lut[hi_y[:, None], hi_x[None, :], bins]
    wy = wy[:, None]
    wx = wx[None, :]
    return ((1.0 - wy) * ((1.0 - wx) * t00 + wx * t01)
            + wy * ((1.0 - wx) * t10 + wx * t11))


def clahe_rgb(img: np.ndarray, cfg: ClaheConfig | None = None) -> np.ndarray:
    """Channel-independent CLAHE of an (H, W, 3) image."""
    arr = require_rgb(img)
    return np.stack([clahe_channel(arr[:, :, c], cfg) for c in range(3)], axis=2)


def histeq_rgb(img: np.ndarray, n_bins: int = 256) -> np.ndarray:
    """Channel-independent global histogram equalization."""
    arr = require_rgb(img)
    return np.stack([global_hist_eq(arr[:, :, c], n_bins) for c in range(3)], axis=2)


def gamma_correct(img: np.ndarray, gamma: float) -> np.ndarray:
    """Pointwise v ** gamma; gamma must be positive."""
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    return require_rgb(img) ** gamma
