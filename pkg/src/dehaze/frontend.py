"""Global dehazing front-end: contrast stretch plus norm-weighted darkening.

Stage one stretches the image by its joint min/max over all pixels and
channels. Stage two subtracts, per pixel, a weight times the Euclidean
norm of the stretched RGB vector; the weight field is constant, the
inverted stretch itself, or a refined dark-channel prior.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateImageError, ShapeError
from .image import require_rgb

LAMBDA_MODES = ("constant", "inverted", "dcp")


@dataclass
class FrontendConfig:
    """Stretch coefficients and the choice of subtraction weight field."""
    alpha: float = 1.0
    beta: float = 0.0
    lambda_mode: str = "constant"
    constant_c: float = 0.35

    def __post_init__(self):
        if self.lambda_mode not in LAMBDA_MODES:
            raise ValueError(
                f"lambda_mode must be one of {LAMBDA_MODES}, got {self.lambda_mode!r}")


def normalize_init(img: np.ndarray, alpha: float = 1.0,
                   beta: float = 0.0) -> np.ndarray:
    """Affine min-max stretch: alpha * (x - min) / (max - min) + beta.

    min and max are scalars taken jointly over all pixels and all three
    channels, so with the default coefficients the output attains exactly
    0.0 and exactly 1.0 somewhere. Raises DegenerateImageError on a
    constant image.
    """
    arr = require_rgb(img)
    lo = float(arr.min())
    hi = float(arr.max())
    if hi <= lo:
        raise DegenerateImageError("cannot stretch a constant image")
    return alpha * ((arr - lo) / (hi - lo)) + beta


def pixel_norm(img: np.ndarray) -> np.ndarray:
    """Per-pixel Euclidean norm of the RGB vector, (H, W) in [0, sqrt(3)]."""
    arr = require_rgb(img)
    return np.sqrt(np.sum(arr * arr, axis=2))


def lambda_constant(c: float, shape: tuple[int, int]) -> np.ndarray:
    """Constant weight field of value c with the given (H, W) shape."""
    if c < 0.0:
        raise ValueError(f"constant weight must be >= 0, got {c}")
    return np.full(shape, float(c))


def lambda_inverted(f_init: np.ndarray) -> np.ndarray:
    """Per-channel inverted weight field: 1 - f_init, shape (H, W, 3)."""
    return 1.0 - require_rgb(f_init)


def apply_general_filter(f_init: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Subtract lam * ||f_init(x)||_2 from every channel, clamped to [0, 1].

    lam is either an (H, W) scalar field applied to all channels or an
    (H, W, 3) per-channel field. A zero field returns f_init bit-for-bit.
    """
    arr = require_rgb(f_init, "f_init")
    w = np.asarray(lam, dtype=np.float64)
    if w.ndim == 2:
        w = w[:, :, None]
    elif w.ndim != 3 or w.shape[2] != 3:
        raise ShapeError(f"weight field must be (H, W) or (H, W, 3), got {w.shape}")
    if w.shape[:2] != arr.shape[:2]:
        raise ShapeError(
            f"weight field shape {w.shape[:2]} does not match image {arr.shape[:2]}")
    norm = pixel_norm(arr)
    return np.clip(arr - w * norm[:, :, None], 0.0, 1.0)


def run_frontend(img: np.ndarray, cfg: FrontendConfig,
                 prior=None) -> np.ndarray:
    """Stretch, build the configured weight field, apply the filter.

    prior is a matting PriorConfig, only consulted in "dcp" mode (defaults
    are used when omitted). Oversized inputs in "dcp" mode are refined at
    a reduced working scale; see matting.dcp_lambda.
    """
    arr = require_rgb(img)
    f_init = normalize_init(arr, cfg.alpha, cfg.beta)
    if cfg.lambda_mode == "constant":
        lam = lambda_constant(cfg.constant_c, arr.shape[:2])
    elif cfg.lambda_mode == "inverted":
        lam = lambda_inverted(f_init)
    else:
        from .matting import PriorConfig, dcp_lambda
        lam = dcp_lambda(f_init, prior if prior is not None else PriorConfig())
    return apply_general_filter(f_init, lam)
