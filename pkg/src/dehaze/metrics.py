"""Blind contrast-restoration metrics for before/after image pairs.

Edges are pixels whose Sobel gradient magnitude of the mean-channel
luminance exceeds a visibility threshold. The three numbers: e is the
relative gain in visible-edge count, sigma the fraction of pixels newly
driven to black or white, and r_bar the geometric mean of gradient
amplification over the restored image's edges.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import ShapeError
from .image import require_rgb

EDGE_THRESHOLD = 0.05
GRAD_EPS = 1e-6
BLACK_LEVEL = 1.0 / 255.0
WHITE_LEVEL = 254.0 / 255.0


def luminance(img: np.ndarray) -> np.ndarray:
    """Mean of the three channels, (H, W)."""
    return require_rgb(img).mean(axis=2)


def gradient_magnitude(lum: np.ndarray) -> np.ndarray:
    """3x3 Sobel magnitude scaled so a unit step has gradient 1.0."""
    gy = ndimage.sobel(lum, axis=0, mode="nearest")
    gx = ndimage.sobel(lum, axis=1, mode="nearest")
    return np.hypot(gy, gx) / 4.0


def visible_edges(img: np.ndarray, threshold: float = EDGE_THRESHOLD) -> np.ndarray:
    """Boolean mask of pixels with gradient magnitude above threshold."""
    return gradient_magnitude(luminance(img)) > threshold


def _check_pair(original: np.ndarray, restored: np.ndarray):
    a = require_rgb(original, "original")
    b = require_rgb(restored, "restored")
    if a.shape != b.shape:
        raise ShapeError(
            f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def metric_e(original: np.ndarray, restored: np.ndarray,
             threshold: float = EDGE_THRESHOLD) -> float:
    """Relative change in visible-edge count, (n_r - n_0) / n_0.

    When the original has no visible edges the raw restored count is
    returned instead (the ratio is undefined); evaluate() flags this.
    """
    a, b = _check_pair(original, restored)
    n0 = int(np.count_nonzero(visible_edges(a, threshold)))
    nr = int(np.count_nonzero(visible_edges(b, threshold)))
    if n0 == 0:
        return float(nr)
    return (nr - n0) / n0


def metric_sigma(original: np.ndarray, restored: np.ndarray) -> float:
    """Fraction of pixels saturated in the restored image but not before.

    Saturated means luminance <= 1/255 or >= 254/255.
    """
    a, b = _check_pair(original, restored)
    la = luminance(a)
    lb = luminance(b)
    sat_a = (la <= BLACK_LEVEL) | (la >= WHITE_LEVEL)
    sat_b = (lb <= BLACK_LEVEL) | (lb >= WHITE_LEVEL)
    return float(np.mean(sat_b & ~sat_a))


def metric_rbar(original: np.ndarray, restored: np.ndarray,
                threshold: float = EDGE_THRESHOLD) -> float:
    """Geometric mean of gradient ratios over the restored edge mask.

    Ratios are g_restored / (g_original + 1e-6); an empty edge mask gives
    the neutral value 1.0 (flagged by evaluate()).
    """
    a, b = _check_pair(original, restored)
    gb = gradient_magnitude(luminance(b))
    mask = gb > threshold
    if not mask.any():
        return 1.0
    ga = gradient_magnitude(luminance(a))
    ratios = gb[mask] / (ga[mask] + GRAD_EPS)
    return float(np.exp(np.mean(np.log(ratios))))


@dataclass
class MetricsReport:
    """One evaluation row; serializes with a fixed key order."""
    image: str
    config: str
    e: float
    sigma: float
    r_bar: float
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"image": self.image, "config": self.config, "e": self.e,
                "sigma": self.sigma, "r_bar": self.r_bar, "flags": self.flags}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def evaluate(original: np.ndarray, restored: np.ndarray,
             image_id: str = "", config_id: str = "",
             threshold: float = EDGE_THRESHOLD) -> MetricsReport:
    """All three metrics plus degeneracy flags for one image pair."""
    a, b = _check_pair(original, restored)
    flags = []
    if not visible_edges(a, threshold).any():
        flags.append("n0_zero")
    if not visible_edges(b, threshold).any():
        flags.append("empty_edge_mask")
    return MetricsReport(
        image=image_id,
        config=config_id,
        e=metric_e(a, b, threshold),
        sigma=metric_sigma(a, b),
        r_bar=metric_rbar(a, b, threshold),
        flags=flags,
    )
