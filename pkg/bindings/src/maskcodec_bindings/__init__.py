"""Batch front end for the mask codec, aimed at training pipelines.

Every function is a thin shim: the per-item work runs in the core package,
so batch outputs are bitwise-equal to calling the core API item by item.
Masks cross the boundary as row-major {0,1} arrays, coefficients as
contiguous float64 matrices with one row per item.
"""

import numpy as np

import maskcodec
from maskcodec import (CodecConfig, DctMaskVector, InvalidArgumentError,
                       decode, decode_soft, encode, l1_distance,
                       smooth_l1_distance)

__version__ = "0.1.0"
core_version = maskcodec.__version__

__all__ = ["encode_batch", "decode_batch", "l1_batch", "smooth_l1_batch",
           "__version__", "core_version"]


def encode_batch(masks, k: int = 128, n: int = 300) -> np.ndarray:
    """Encode a sequence of masks into an (len(masks), N) float64 matrix.

    Row i is exactly the core encoding of ``masks[i]``.  An empty sequence
    yields a (0, N) matrix.
    """
    config = CodecConfig(k=k, n=n)
    items = list(masks)
    out = np.empty((len(items), config.n), dtype=np.float64)
    for i, mask in enumerate(items):
        out[i] = encode(mask, config).coeffs
    return out


def decode_batch(matrix, k: int, sizes, threshold: float = 0.5,
                 return_soft: bool = False):
    """Decode each matrix row at its own (H, W) from ``sizes``.

    Returns a list of binary uint8 masks, or (masks, soft_grids) when
    ``return_soft`` is set.  Row i must pair with sizes[i].
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2:
        raise InvalidArgumentError(f"matrix must be 2D, got shape {m.shape}")
    size_list = [(int(h), int(w)) for h, w in sizes]
    if len(size_list) != m.shape[0]:
        raise InvalidArgumentError(
            f"got {m.shape[0]} rows but {len(size_list)} sizes")
    config = CodecConfig(k=k, n=m.shape[1] if m.shape[1] else 1,
                         binarize_threshold=threshold)
    masks = []
    softs = []
    for row, (h, w) in zip(m, size_list):
        vector = DctMaskVector(k=k, n=row.size, coeffs=row)
        masks.append(decode(vector, h, w, config))
        if return_soft:
            softs.append(decode_soft(vector, h, w))
    return (masks, softs) if return_soft else masks


def _batch_pairs(pred, target):
    a = np.asarray(pred, dtype=np.float64)
    b = np.asarray(target, dtype=np.float64)
    if a.ndim != 2 or a.shape != b.shape:
        raise InvalidArgumentError(
            f"pred and target must be equal-shape 2D matrices, got "
            f"{a.shape} and {b.shape}")
    return a, b


def _aggregate(per_row: np.ndarray, aggregate):
    if aggregate is None:
        return per_row
    if aggregate == "sum":
        return float(per_row.sum())
    if aggregate == "mean":
        return float(per_row.mean())
    raise InvalidArgumentError(
        f"aggregate must be None, 'sum', or 'mean', got {aggregate!r}")


def l1_batch(pred, target, reduction: str = "sum", aggregate=None):
    """Row-wise core l1 distance; optionally aggregated to a scalar."""
    a, b = _batch_pairs(pred, target)
    per_row = np.array([l1_distance(a[i], b[i], reduction)
                        for i in range(a.shape[0])])
    return _aggregate(per_row, aggregate)


def smooth_l1_batch(pred, target, beta: float = 1.0, reduction: str = "sum",
                    aggregate=None):
    """Row-wise core smooth-l1 distance; optionally aggregated."""
    a, b = _batch_pairs(pred, target)
    per_row = np.array([smooth_l1_distance(a[i], b[i], beta, reduction)
                        for i in range(a.shape[0])])
    return _aggregate(per_row, aggregate)
