"""Automatic color equalization.

Each pixel's relative lightness is the inverse-distance-weighted average
of a saturated slope function of its differences to every other pixel.
The exact form is O(N^2) and guarded to small images; the fast form
evaluates the spatial sums at a few uniform reference levels with FFT
convolutions and interpolates per pixel between the bracketing levels.
Both finish with a per-channel min-max rescale to [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft

from .errors import SizeGuardError
from .image import require_field, require_rgb

# An output field with a span at or below this is treated as constant and
# mapped to 0.5; FFT round-off on a flat channel sits around 1e-15 and a
# min-max rescale would blow it up to full range.
FLAT_SPAN = 1e-12

EXACT_MAX_PIXELS = 64 * 64


@dataclass
class AceConfig:
    """Slope saturation strength and interpolation level count."""
    slope_alpha: float = 5.0
    levels: int = 8

    def __post_init__(self):
        if self.slope_alpha <= 0.0:
            raise ValueError(f"slope_alpha must be positive, got {self.slope_alpha}")
        if self.levels < 2:
            raise ValueError(f"levels must be >= 2, got {self.levels}")


def slope_function(d, alpha: float = 5.0):
    """Saturated contrast slope: clamp(alpha * d, -1, 1)."""
    return np.clip(alpha * np.asarray(d, dtype=np.float64), -1.0, 1.0)


def _rescale_unit(field: np.ndarray) -> np.ndarray:
    lo = field.min()
    hi = field.max()
    if hi - lo <= FLAT_SPAN:
        return np.full(field.shape, 0.5)
    return (field - lo) / (hi - lo)


def _inverse_distance_kernel(h: int, w: int) -> np.ndarray:
    """(2h-1, 2w-1) kernel of 1/distance with zero at the center tap."""
    dy = np.arange(2 * h - 1, dtype=np.float64) - (h - 1)
    dx = np.arange(2 * w - 1, dtype=np.float64) - (w - 1)
    dist = np.hypot(dy[:, None], dx[None, :])
    kernel = np.zeros_like(dist)
    np.divide(1.0, dist, out=kernel, where=dist > 0)
    return kernel


def ace_exact(channel: np.ndarray, cfg: AceConfig | None = None,
              max_pixels: int = EXACT_MAX_PIXELS) -> np.ndarray:
    """Direct O(N^2) evaluation for one channel; the reference form.

    Sums are accumulated with math.fsum, so the result is independent of
    pixel enumeration order (a mirrored image yields the exactly mirrored
    output). Guarded to max_pixels (default 64x64 equivalent).
    """
    if cfg is None:
        cfg = AceConfig()
    ch = require_field(channel, "channel")
    h, w = ch.shape
    if h * w > max_pixels:
        raise SizeGuardError(
            f"exact path limited to {max_pixels} pixels, got {h}x{w}")
    yy, xx = np.indices((h, w))
    yy = yy.ravel().astype(np.float64)
    xx = xx.ravel().astype(np.float64)
    v = ch.ravel()
    r = np.empty(v.size)
    for i in range(v.size):
        dist = np.hypot(yy - yy[i], xx - xx[i])
        wgt = np.zeros_like(dist)
        np.divide(1.0, dist, out=wgt, where=dist > 0)
        s = slope_function(v[i] - v, cfg.slope_alpha)
        den = math.fsum(wgt)
        r[i] = math.fsum(wgt * s) / den if den > 0 else 0.0
    return _rescale_unit(r.reshape(h, w))


def ace_fast(channel: np.ndarray, cfg: AceConfig | None = None) -> np.ndarray:
    """Level-interpolated evaluation for one channel.

    The weighted sum is computed at `levels` uniform reference values on
    [0, 1] (endpoints included) as a single zero-padded FFT convolution
    per level, normalized by the convolution of an all-ones field, and
    each pixel interpolates linearly between its two bracketing levels.
    """
    if cfg is None:
        cfg = AceConfig()
    ch = require_field(channel, "channel")
    h, w = ch.shape
    if h * w == 1:
        return np.full(ch.shape, 0.5)

    # Full linear convolution of (h, w) with (2h-1, 2w-1) needs 3h-2 rows;
    # padding that far keeps the circular wrap out of the cropped window.
    fh = fft.next_fast_len(3 * h - 2)
    fw = fft.next_fast_len(3 * w - 2)
    kernel_f = fft.rfft2(_inverse_distance_kernel(h, w), s=(fh, fw))

    def conv(field: np.ndarray) -> np.ndarray:
        out = fft.irfft2(fft.rfft2(field, s=(fh, fw)) * kernel_f, s=(fh, fw))
        return out[h - 1:2 * h - 1, w - 1:2 * w - 1]

    norm = conv(np.ones((h, w)))
    levels = np.linspace(0.0, 1.0, cfg.levels)
    stack = np.empty((cfg.levels, h * w))
    for j, level in enumerate(levels):
        stack[j] = (conv(slope_function(level - ch, cfg.slope_alpha)) / norm).ravel()

    pos = ch.ravel() * (cfg.levels - 1)
    idx = np.clip(pos.astype(np.intp), 0, cfg.levels - 2)
    frac = pos - idx
    cols = np.arange(h * w)
    r = (1.0 - frac) * stack[idx, cols] + frac * stack[idx + 1, cols]
    return _rescale_unit(r.reshape(h, w))


def ace_rgb(img: np.ndarray, cfg: AceConfig | None = None,
            exact: bool = False) -> np.ndarray:
    """Channel-independent ACE of an (H, W, 3) image in [0, 1]."""
    arr = require_rgb(img)
    run = ace_exact if exact else ace_fast
    return np.stack([run(arr[:, :, c], cfg) for c in range(3)], axis=2)
