"""Spatio-temporal retinex-inspired envelope stretching.

Every pixel is repeatedly compared against a small "spray" of random
samples drawn radially around it; the per-iteration min/max envelopes
(always including the pixel itself) are averaged over the iterations, and
the output is the pixel's position inside the averaged envelope. Sprays
are drawn once per iteration and shared by the three channels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import require_rgb

REDRAW_ROUNDS = 16


@dataclass
class StressConfig:
    """Spray size, iteration count, spray radius, and RNG seed.

    radius None means max(width, height) of the processed image.
    """
    n_samples: int = 5
    n_iterations: int = 150
    radius: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.n_iterations < 1:
            raise ValueError(f"n_iterations must be >= 1, got {self.n_iterations}")
        if self.radius is not None and self.radius < 1:
            raise ValueError(f"radius must be >= 1, got {self.radius}")


def _iteration_rng(seed: int, iteration: int) -> np.random.Generator:
    # Counter-style stream per iteration: sample draws do not depend on
    # how much randomness earlier iterations consumed.
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence([seed % (1 << 64), iteration])))


def _draw_sprays(rng: np.random.Generator, cy: np.ndarray, cx: np.ndarray,
                 height: int, width: int,
                 radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Radial samples around broadcast centers cy/cx, one per slot.

    Angle is uniform on [0, 2*pi); range is radius * u with u in (0, 1].
    Samples falling outside the image or onto their own center are redrawn
    up to REDRAW_ROUNDS times, then clamped to the border.
    """
    shape = cy.shape

    def offsets(size):
        theta = rng.uniform(0.0, 2.0 * np.pi, size)
        u = 1.0 - rng.random(size)
        rad = radius * u
        return (np.rint(rad * np.sin(theta)).astype(np.intp),
                np.rint(rad * np.cos(theta)).astype(np.intp))

    dy, dx = offsets(shape)
    sy = cy + dy
    sx = cx + dx
    bad = ((sy < 0) | (sy >= height) | (sx < 0) | (sx >= width)
           | ((sy == cy) & (sx == cx)))
    for _ in range(REDRAW_ROUNDS):
        if not bad.any():
            break
        slots = np.nonzero(bad)
        dy, dx = offsets(slots[0].size)
        ny = cy[slots] + dy
        nx = cx[slots] + dx
        sy[slots] = ny
        sx[slots] = nx
        bad[slots] = ((ny < 0) | (ny >= height) | (nx < 0) | (nx >= width)
                      | ((ny == cy[slots]) & (nx == cx[slots])))
    np.clip(sy, 0, height - 1, out=sy)
    np.clip(sx, 0, width - 1, out=sx)
    return sy, sx


def spray_sample(shape: tuple[int, int], center: tuple[int, int],
                 radius: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """n spray coordinates around one center, as an (n, 2) array of (y, x).

    Same RNG state, same samples. The center itself is only ever returned
    when border clamping leaves nowhere else to go (e.g. a 1x1 image).
    """
    height, width = shape
    cy = np.broadcast_to(np.intp(center[0]), (n,))
    cx = np.broadcast_to(np.intp(center[1]), (n,))
    sy, sx = _draw_sprays(rng, cy, cx, height, width, radius)
    return np.stack([sy, sx], axis=1)


def stress(img: np.ndarray, cfg: StressConfig | None = None) -> np.ndarray:
    """Envelope-stretched image in [0, 1], same shape as the input.

    Pixels whose averaged envelope is degenerate (constant images) map to
    0.5. Deterministic for a fixed (shape, config): iteration i uses its
    own counter-derived RNG stream.
    """
    if cfg is None:
        cfg = StressConfig()
    arr = require_rgb(img)
    h, w = arr.shape[:2]
    radius = float(cfg.radius if cfg.radius is not None else max(h, w))

    cy = np.broadcast_to(np.arange(h, dtype=np.intp)[:, None, None],
                         (h, w, cfg.n_samples))
    cx = np.broadcast_to(np.arange(w, dtype=np.intp)[None, :, None],
                         (h, w, cfg.n_samples))
    emin_sum = np.zeros_like(arr)
    emax_sum = np.zeros_like(arr)
    for i in range(cfg.n_iterations):
        rng = _iteration_rng(cfg.seed, i)
        sy, sx = _draw_sprays(rng, cy, cx, h, w, radius)
        vals = arr[sy, sx, :]
        emin_sum += np.minimum(vals.min(axis=2), arr)
        emax_sum += np.maximum(vals.max(axis=2), arr)

    emin = emin_sum / cfg.n_iterations
    emax = emax_sum / cfg.n_iterations
    span = emax - emin
    out = np.where(span > 0, (arr - emin) / np.where(span > 0, span, 1.0), 0.5)
    return np.clip(out, 0.0, 1.0)
