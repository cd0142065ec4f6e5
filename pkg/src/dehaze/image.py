"""Image I/O and shared raster primitives.

Images are plain numpy float64 arrays in [0, 1]: RGB as (H, W, 3), scalar
fields as (H, W). Decoding goes through Pillow (PNG, JPEG, binary PPM);
encoding always writes PNG.
"""
from __future__ import annotations

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, ShapeError


def require_rgb(img: np.ndarray, name: str = "image") -> np.ndarray:
    """Validate an (H, W, 3) float array and return it as float64."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ShapeError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    return arr.astype(np.float64, copy=False)


def require_field(field: np.ndarray, name: str = "field") -> np.ndarray:
    """Validate an (H, W) scalar field and return it as float64."""
    arr = np.asarray(field)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must have shape (H, W), got {arr.shape}")
    return arr.astype(np.float64, copy=False)


def load_image(path: str) -> np.ndarray:
    """Decode an 8-bit PNG/JPEG/PPM file to an (H, W, 3) float64 array.

    Channel values are scaled as c / 255. Grayscale inputs are replicated
    across the three channels. Raises FileNotFoundError if the path does
    not exist and DecodeError if the bytes are not a decodable image.
    """
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode != "RGB":
                im = im.convert("RGB")
            raw = np.asarray(im, dtype=np.float64)
    except FileNotFoundError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise DecodeError(f"cannot decode image file: {path}") from exc
    return raw / 255.0


def save_image(img: np.ndarray, path: str) -> None:
    """Encode an (H, W, 3) float array in [0, 1] as an 8-bit PNG.

    Quantization rounds half up: q = floor(v * 255 + 0.5). Filesystem
    failures (unwritable directory, disk full) propagate as OSError.
    """
    arr = require_rgb(img)
    q = np.floor(np.clip(arr, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    Image.fromarray(q, mode="RGB").save(path, format="PNG")


def global_minmax(img: np.ndarray) -> tuple[float, float]:
    """Joint (min, max) over all pixels and all three channels."""
    arr = require_rgb(img)
    return float(arr.min()), float(arr.max())


def synthesize_haze(clean: np.ndarray, transmission: np.ndarray,
                    airlight: tuple[float, float, float]) -> np.ndarray:
    """Blend a clean image toward a global airlight color.

    hazy = clean * t + airlight * (1 - t), with t an (H, W) field in
    [0, 1]. Used to manufacture test scenes with known ground truth.
    """
    arr = require_rgb(clean, "clean")
    t = require_field(transmission, "transmission")
    if t.shape != arr.shape[:2]:
        raise ShapeError(
            f"transmission shape {t.shape} does not match image {arr.shape[:2]}")
    if t.min() < 0.0 or t.max() > 1.0:
        raise ValueError("transmission values must lie in [0, 1]")
    a = np.asarray(airlight, dtype=np.float64).reshape(1, 1, 3)
    return arr * t[:, :, None] + a * (1.0 - t[:, :, None])


def bilinear_resize(field: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resampling of an (H, W) or (H, W, C) array.

    Pixel centers sit at index + 0.5; source coordinates are clamped to
    the valid range, so edges replicate.
    """
    arr = np.asarray(field, dtype=np.float64)
    h, w = arr.shape[:2]
    ys = (np.arange(out_h) + 0.5) * (h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (w / out_w) - 0.5
    ys = np.clip(ys, 0.0, h - 1.0)
    xs = np.clip(xs, 0.0, w - 1.0)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    if arr.ndim == 3:
        wy = wy[:, :, None]
        wx = wx[:, :, None]
    top = arr[np.ix_(y0, x0)] * (1.0 - wx) + arr[np.ix_(y0, x1)] * wx
    bot = arr[np.ix_(y1, x0)] * (1.0 - wx) + arr[np.ix_(y1, x1)] * wx
    return top * (1.0 - wy) + bot * wy
