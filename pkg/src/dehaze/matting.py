"""Dark-channel prior weight field with closed-form matting refinement.

The raw field is one minus the patch-wise dark channel of the image
normalized by a global airlight estimate. It is smoothed by solving
(L + beta * I) lam = beta * lam_hat, where L is the matting Laplacian
built from local window color statistics, then min-max normalized and
folded against its inversion so the final field lies in [0, 0.5].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage, sparse

from .errors import DegenerateImageError, ShapeError, SizeGuardError, SolverError
from .image import bilinear_resize, require_field, require_rgb

# Hard cap for assembling/solving the Laplacian, in total pixels
# (256x256-equivalent); memory and solve cost scale with pixel count.
MAX_MATTING_PIXELS = 256 * 256

AIRLIGHT_FLOOR = 0.05


@dataclass
class PriorConfig:
    """Patch geometry, matting regularization, and solver knobs."""
    patch_radius: int = 7
    matting_eps: float = 1e-7
    matting_window_radius: int = 1
    beta: float = 1e-4
    cg_tol: float = 1e-5
    cg_max_iter: int = 2000
    airlight_fraction: float = 0.001

    def __post_init__(self):
        if self.patch_radius < 0:
            raise ValueError("patch_radius must be >= 0")
        if self.matting_eps <= 0.0:
            raise ValueError("matting_eps must be positive")
        if self.matting_window_radius < 1:
            raise ValueError("matting_window_radius must be >= 1")
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if self.cg_tol <= 0.0:
            raise ValueError("cg_tol must be positive")
        if self.cg_max_iter < 1:
            raise ValueError("cg_max_iter must be >= 1")
        if not 0.0 < self.airlight_fraction <= 1.0:
            raise ValueError("airlight_fraction must be in (0, 1]")


def dark_channel(img: np.ndarray, patch_radius: int = 7) -> np.ndarray:
    """Min over channels, then min over a (2r+1)^2 patch around each pixel.

    Border patches are truncated to the image (replicated edges give the
    same minimum as truncation).
    """
    arr = require_rgb(img)
    per_pixel = arr.min(axis=2)
    if patch_radius == 0:
        return per_pixel
    return ndimage.minimum_filter(per_pixel, size=2 * patch_radius + 1,
                                  mode="nearest")


def estimate_atmospheric_light(img: np.ndarray, dark: np.ndarray,
                               fraction: float = 0.001) -> np.ndarray:
    """Airlight color from the brightest of the haziest pixels.

    Among the ceil(fraction * N) pixels with the largest dark-channel
    values, picks the one with the largest channel sum; ties break toward
    the lowest flat index. Components are floored at 0.05 so later ratios
    stay bounded.
    """
    arr = require_rgb(img)
    dk = require_field(dark, "dark")
    if dk.shape != arr.shape[:2]:
        raise ShapeError(
            f"dark channel shape {dk.shape} does not match image {arr.shape[:2]}")
    n = dk.size
    n_top = max(1, int(np.ceil(fraction * n)))
    order = np.argsort(-dk.ravel(), kind="stable")[:n_top]
    flat = arr.reshape(n, 3)
    pick = order[int(np.argmax(flat[order].sum(axis=1)))]
    return np.maximum(flat[pick], AIRLIGHT_FLOOR)


def lambda_dcp(f_init: np.ndarray, airlight: np.ndarray,
               patch_radius: int = 7) -> np.ndarray:
    """Raw prior field: 1 - dark_channel(f_init / airlight), in [0, 1]."""
    arr = require_rgb(f_init, "f_init")
    a = np.asarray(airlight, dtype=np.float64).reshape(1, 1, 3)
    return np.clip(1.0 - dark_channel(arr / a, patch_radius), 0.0, 1.0)


def matting_laplacian(img: np.ndarray, eps: float = 1e-7,
                      window_radius: int = 1,
                      max_pixels: int = MAX_MATTING_PIXELS) -> sparse.csr_matrix:
    """N x N matting Laplacian from local window color statistics.

    For every full (2r+1)^2 window k with pixel matrix W_k, mean mu_k and
    biased covariance S_k, the block contribution is
    delta_ij - (1 + (I_i - mu_k)^T (S_k + eps/m I)^-1 (I_j - mu_k)) / m
    with m the window pixel count. The assembled matrix is symmetrized as
    (L + L^T) / 2, which is bitwise symmetric (IEEE addition commutes);
    rows sum to zero and L is PSD. Guarded to max_pixels total pixels.
    """
    arr = require_rgb(img)
    h, w = arr.shape[:2]
    n = h * w
    if n > max_pixels:
        raise SizeGuardError(
            f"matting Laplacian limited to {max_pixels} pixels, got {h}x{w}")
    side = 2 * window_radius + 1
    m = side * side
    if h < side or w < side:
        # No full window fits; the zero matrix is the empty-sum Laplacian.
        return sparse.csr_matrix((n, n))

    win_idx = sliding_window_view(np.arange(n).reshape(h, w), (side, side))
    win_idx = win_idx.reshape(-1, m)
    pix = arr.reshape(n, 3)[win_idx]                       # (k, m, 3)
    mu = pix.mean(axis=1, keepdims=True)
    cent = pix - mu
    cov = cent.transpose(0, 2, 1) @ cent / m
    inv = np.linalg.inv(cov + (eps / m) * np.eye(3))
    quad = np.einsum("kic,kcd,kjd->kij", cent, inv, cent, optimize=True)
    block = np.eye(m) - (1.0 + quad) / m
    rows = np.repeat(win_idx, m, axis=1).ravel()
    cols = np.tile(win_idx, (1, m)).ravel()
    lap = sparse.coo_matrix((block.ravel(), (rows, cols)), shape=(n, n)).tocsr()
    # duplicate summation order is not mirror-consistent in the sparse
    # conversion; fold with the transpose for bitwise symmetry
    return (lap + lap.T.tocsr()) * 0.5


def refine_lambda(lam_hat: np.ndarray, lap: sparse.csr_matrix,
                  beta: float = 1e-4, tol: float = 1e-5,
                  max_iter: int = 2000) -> np.ndarray:
    """Solve (L + beta I) lam = beta * lam_hat by preconditioned CG.

    Jacobi-preconditioned, warm-started at lam_hat (a constant field is
    already the exact solution and converges immediately). Convergence is
    relative: ||b - A x|| <= tol * ||b||. Raises SolverError with the
    final relative residual if the iteration cap is hit.
    """
    field = require_field(lam_hat, "lam_hat")
    n = field.size
    if lap.shape != (n, n):
        raise ShapeError(
            f"Laplacian shape {lap.shape} does not match field size {n}")
    b = beta * field.ravel()
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros(field.shape)

    a_mat = (lap + beta * sparse.identity(n, format="csr")).tocsr()
    diag = a_mat.diagonal()
    x = field.ravel().copy()
    r = b - a_mat @ x
    z = r / diag
    p = z.copy()
    rz = float(r @ z)
    for _ in range(max_iter):
        if np.linalg.norm(r) <= tol * b_norm:
            return x.reshape(field.shape)
        ap = a_mat @ p
        step = rz / float(p @ ap)
        x += step * p
        r -= step * ap
        z = r / diag
        rz_next = float(r @ z)
        p = z + (rz_next / rz) * p
        rz = rz_next
    final = float(np.linalg.norm(r))
    if final <= tol * b_norm:
        return x.reshape(field.shape)
    raise SolverError(
        f"CG did not reach tol={tol} in {max_iter} iterations "
        f"(relative residual {final / b_norm:.3e})", residual=final / b_norm)


def combine_lambda(lam: np.ndarray) -> np.ndarray:
    """Min-max normalize the refined field and fold it against its inverse.

    Output is the pointwise minimum of the normalized field and one minus
    it, so values lie in [0, 0.5]. A constant field has no normalization
    and raises DegenerateImageError.
    """
    field = require_field(lam, "lam")
    lo = float(field.min())
    hi = float(field.max())
    if hi <= lo:
        raise DegenerateImageError("refined weight field is constant")
    norm = (field - lo) / (hi - lo)
    return np.minimum(norm, 1.0 - norm)


def dcp_lambda(f_init: np.ndarray, cfg: PriorConfig | None = None,
               downscale: bool = True) -> np.ndarray:
    """Full prior pipeline: airlight, raw field, refinement, combination.

    Images beyond the Laplacian pixel guard are (with downscale=True)
    refined on a bilinearly reduced copy and the finished field is
    bilinearly enlarged back; with downscale=False the guard error
    propagates. The airlight always comes from the full-size image.
    """
    if cfg is None:
        cfg = PriorConfig()
    arr = require_rgb(f_init, "f_init")
    h, w = arr.shape[:2]
    air = estimate_atmospheric_light(
        arr, dark_channel(arr, cfg.patch_radius), cfg.airlight_fraction)

    work = arr
    if h * w > MAX_MATTING_PIXELS and downscale:
        scale = (MAX_MATTING_PIXELS / (h * w)) ** 0.5
        wh = max(3, int(h * scale))
        ww = max(3, int(w * scale))
        wh = max(3, min(wh, MAX_MATTING_PIXELS // ww))
        work = bilinear_resize(arr, wh, ww)

    lam_hat = lambda_dcp(work, air, cfg.patch_radius)
    lap = matting_laplacian(work, cfg.matting_eps, cfg.matting_window_radius)
    refined = refine_lambda(lam_hat, lap, cfg.beta, cfg.cg_tol, cfg.cg_max_iter)
    lam = combine_lambda(refined)
    if work is not arr:
        lam = np.clip(bilinear_resize(lam, h, w), 0.0, 0.5)
    return lam
