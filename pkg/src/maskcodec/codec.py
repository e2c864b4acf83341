"""Mask compression: fixed-size DCT vectors and the resize-grid baseline.

Encoding a binary mask of any H x W size:

1. bilinearly resize to the canonical K x K grid,
2. take the 2D DCT of the resized grid,
3. keep the first N coefficients in zigzag order.

Decoding reverses each step (zero-filling the dropped coefficients) and
binarizes at a threshold.  ``grid_encode``/``grid_decode`` implement the
baseline that skips the transform and stores the K x K grid itself,
binarized.

Resizing uses the half-pixel-centers convention: output sample i reads the
source at position (i + 0.5) * (src / dst) - 0.5, clamped to the valid
range, interpolating linearly between the two nearest samples per axis.
Resizing to the identical size is an exact identity.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .transform import dct2_fast, idct2_fast, zigzag_scan, zigzag_unscan


@dataclass(frozen=True)
class CodecConfig:
    """Codec parameters: grid size K, vector length N, decode threshold."""

    k: int = 128
    n: int = 300
    binarize_threshold: float = 0.5
    resize_convention: str = "half-pixel-centers"

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidArgumentError(f"K must be a positive integer, got {self.k!r}")
        if not isinstance(self.n, int) or not 1 <= self.n <= self.k * self.k:
            raise InvalidArgumentError(
                f"N must satisfy 1 <= N <= K*K = {self.k * self.k}, got {self.n!r}"
            )
        if not 0.0 < float(self.binarize_threshold) < 1.0:
            raise InvalidArgumentError(
                f"binarize_threshold must lie in (0, 1), got {self.binarize_threshold!r}"
            )
        if self.resize_convention != "half-pixel-centers":
            raise InvalidArgumentError(
                f"unsupported resize convention {self.resize_convention!r}"
            )


@dataclass(frozen=True)
class DctMaskVector:
    """An encoded mask: N zigzag-ordered DCT coefficients of the K x K grid."""

    k: int
    n: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64)
        if c.ndim != 1 or c.size != self.n:
            raise InvalidArgumentError(
                f"coeffs must be a 1D array of length N={self.n}, got shape {c.shape}"
            )
        if not 1 <= self.n <= self.k * self.k:
            raise InvalidArgumentError(
                f"N must satisfy 1 <= N <= K*K = {self.k * self.k}, got {self.n}"
            )
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)


def _as_mask(mask, name: str = "mask") -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidArgumentError(
            f"{name} must be a non-empty 2D array, got shape {arr.shape}"
        )
    if arr.dtype == bool:
        return arr.astype(np.float64)
    arr = arr.astype(np.float64)
    if not np.isfinite(arr).all():
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return arr


def _axis_weights(src: int, dst: int):
    # Half-pixel-centers sampling positions, clamped so border samples clamp
    # to edge rather than extrapolate.
    pos = (np.arange(dst) + 0.5) * (src / dst) - 0.5
    pos = np.clip(pos, 0.0, src - 1.0)
    lo = np.floor(pos).astype(np.intp)
    hi = np.minimum(lo + 1, src - 1)
    w = pos - lo
    return lo, hi, w


def resize_bilinear(image, out_h: int, out_w: int) -> np.ndarray:
    """Resize a 2D array with bilinear interpolation (half-pixel centers)."""
    img = _as_mask(image, "image")
    if not (isinstance(out_h, (int, np.integer)) and isinstance(out_w, (int, np.integer))):
        raise InvalidArgumentError("output size must be integral")
    if out_h < 1 or out_w < 1:
        raise InvalidArgumentError(f"output size must be >= 1, got {out_h}x{out_w}")
    src_h, src_w = img.shape
    if (src_h, src_w) == (out_h, out_w):
        return img.copy()
    lo_r, hi_r, w_r = _axis_weights(src_h, int(out_h))
    lo_c, hi_c, w_c = _axis_weights(src_w, int(out_w))
    # Rows first, then columns; the two passes commute.
    rows = img[lo_r] * (1.0 - w_r)[:, None] + img[hi_r] * w_r[:, None]
    return rows[:, lo_c] * (1.0 - w_c)[None, :] + rows[:, hi_c] * w_c[None, :]


def encode(mask, config: CodecConfig = CodecConfig()) -> DctMaskVector:
    """Binary mask of any size -> N-coefficient DCT vector."""
    m = _as_mask(mask)
    grid = resize_bilinear(m, config.k, config.k)
    coeffs = dct2_fast(grid)
    return DctMaskVector(k=config.k, n=config.n, coeffs=zigzag_scan(coeffs, config.n))


def decode_soft(vector: DctMaskVector, out_h: int, out_w: int,
                config: CodecConfig | None = None) -> np.ndarray:
    """Reconstruct the real-valued mask; no thresholding, no clamping."""
    if not isinstance(vector, DctMaskVector):
        raise InvalidArgumentError(
            f"vector must be a DctMaskVector, got {type(vector).__name__}"
        )
    if config is not None and (config.k, config.n) != (vector.k, vector.n):
        raise InvalidArgumentError(
            f"config (K={config.k}, N={config.n}) does not match "
            f"vector (K={vector.k}, N={vector.n})"
        )
    grid = idct2_fast(zigzag_unscan(vector.coeffs, vector.k))
    return resize_bilinear(grid, out_h, out_w)


def decode(vector: DctMaskVector, out_h: int, out_w: int,
           config: CodecConfig | None = None) -> np.ndarray:
    """Reconstruct a binary mask (uint8 0/1), thresholding the soft decode."""
    threshold = config.binarize_threshold if config is not None else 0.5
    soft = decode_soft(vector, out_h, out_w, config)
    return (soft >= threshold).astype(np.uint8)


def grid_encode(mask, k: int, threshold: float = 0.5) -> np.ndarray:
    """Baseline: resize to K x K and binarize, skipping the transform."""
    m = _as_mask(mask)
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidArgumentError(f"K must be a positive integer, got {k!r}")
    return (resize_bilinear(m, int(k), int(k)) >= threshold).astype(np.uint8)


def grid_decode(grid, out_h: int, out_w: int, threshold: float = 0.5) -> np.ndarray:
    """Baseline inverse: resize the K x K grid back up and binarize."""
    g = _as_mask(grid, "grid")
    return (resize_bilinear(g, out_h, out_w) >= threshold).astype(np.uint8)


def _paired(a, b):
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise InvalidArgumentError(
            f"vectors must have identical shapes, got {va.shape} and {vb.shape}"
        )
    if not (np.isfinite(va).all() and np.isfinite(vb).all()):
        raise InvalidArgumentError("vectors contain non-finite values")
    return va, vb


def _reduce(per_element: np.ndarray, reduction: str) -> float:
    if reduction == "sum":
        return float(per_element.sum())
    if reduction == "mean":
        return float(per_element.mean())
    raise InvalidArgumentError(
        f"reduction must be 'sum' or 'mean', got {reduction!r}"
    )


def l1_distance(a, b, reduction: str = "sum") -> float:
    """Absolute coefficient differences, summed or averaged."""
    va, vb = _paired(a, b)
    return _reduce(np.abs(va - vb), reduction)


def smooth_l1_distance(a, b, beta: float = 1.0, reduction: str = "sum") -> float:
    """Huber-style distance: quadratic below ``beta``, linear above."""
    if not beta > 0.0:
        raise InvalidArgumentError(f"beta must be positive, got {beta!r}")
    va, vb = _paired(a, b)
    d = np.abs(va - vb)
    per = np.where(d < beta, 0.5 * d * d / beta, d - 0.5 * beta)
    return _reduce(per, reduction)
