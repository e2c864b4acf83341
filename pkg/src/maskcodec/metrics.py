"""Representation-quality measurement: IoU, dataset aggregation, error maps.

``evaluate_representation`` runs a whole mask stream through a codec
(either the DCT vector codec or the resize-grid baseline), reconstructing
each mask at its own size and averaging per-instance IoU.  The report also
carries a 20-bin IoU histogram so quality spread is visible, not just the
mean.  ``coefficient_stats`` accumulates per-dimension mean and variance of
the encoded vectors in one streaming pass.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codec import CodecConfig, decode, encode, grid_decode, grid_encode
from .errors import InvalidArgumentError

HISTOGRAM_BINS = 20


@dataclass(frozen=True)
class RepQualityReport:
    """Aggregate quality of one codec configuration over a mask stream."""

    method: str
    k: int
    n: int | None
    instance_count: int
    mean_iou: float
    iou_histogram: np.ndarray = field(repr=False)

    def __post_init__(self):
        hist = np.asarray(self.iou_histogram, dtype=np.int64)
        if hist.shape != (HISTOGRAM_BINS,):
            raise InvalidArgumentError(
                f"iou_histogram must have {HISTOGRAM_BINS} bins, got shape {hist.shape}"
            )
        if int(hist.sum()) != self.instance_count:
            raise InvalidArgumentError(
                f"histogram sums to {int(hist.sum())}, expected instance_count "
                f"{self.instance_count}"
            )
        if not 0.0 <= self.mean_iou <= 1.0:
            raise InvalidArgumentError(
                f"mean_iou must lie in [0, 1], got {self.mean_iou!r}"
            )
        hist.flags.writeable = False
        object.__setattr__(self, "iou_histogram", hist)


@dataclass(frozen=True)
class CoeffStats:
    """Per-dimension mean and population variance of encoded vectors."""

    n: int
    mean: np.ndarray = field(repr=False)
    variance: np.ndarray = field(repr=False)
    instance_count: int = 0

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        var = np.asarray(self.variance, dtype=np.float64)
        if mean.shape != (self.n,) or var.shape != (self.n,):
            raise InvalidArgumentError(
                f"mean and variance must both have shape ({self.n},), got "
                f"{mean.shape} and {var.shape}"
            )
        if (var < 0).any():
            raise InvalidArgumentError("variance entries must be nonnegative")
        mean.flags.writeable = False
        var.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "variance", var)


def _as_binary(mask, name: str) -> np.ndarray:
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise InvalidArgumentError(f"{name} must be 2D, got shape {arr.shape}")
    if arr.dtype != bool:
        if not np.isin(arr, (0, 1)).all():
            raise InvalidArgumentError(f"{name} must contain only 0/1 values")
        arr = arr.astype(bool)
    return arr


def iou(a, b) -> float:
    """Intersection over union of two binary masks; empty vs empty is 1.0."""
    ma = _as_binary(a, "a")
    mb = _as_binary(b, "b")
    if ma.shape != mb.shape:
        raise InvalidArgumentError(
            f"masks must have identical shapes, got {ma.shape} and {mb.shape}"
        )
    union = np.count_nonzero(ma | mb)
    if union == 0:
        return 1.0
    return np.count_nonzero(ma & mb) / union


def error_map(gt, rec) -> np.ndarray:
    """Pixels where the reconstruction disagrees with ground truth (XOR)."""
    mg = _as_binary(gt, "gt")
    mr = _as_binary(rec, "rec")
    if mg.shape != mr.shape:
        raise InvalidArgumentError(
            f"masks must have identical shapes, got {mg.shape} and {mr.shape}"
        )
    return (mg ^ mr).astype(np.uint8)


def reconstruct(mask, method: str, k: int, n: int | None = None,
                config: CodecConfig | None = None) -> np.ndarray:
    """Run one mask through the chosen codec and back at its own size."""
    m = np.asarray(mask)
    if m.ndim != 2:
        raise InvalidArgumentError(f"mask must be 2D, got shape {m.shape}")
    h, w = m.shape
    if method == "dct":
        if n is None:
            raise InvalidArgumentError("method 'dct' requires a vector dimension N")
        threshold = config.binarize_threshold if config is not None else 0.5
        cfg = CodecConfig(k=int(k), n=int(n), binarize_threshold=threshold)
        return decode(encode(m, cfg), h, w, cfg)
    if method == "grid":
        threshold = config.binarize_threshold if config is not None else 0.5
        return grid_decode(grid_encode(m, int(k), threshold), h, w, threshold)
    raise InvalidArgumentError(f"method must be 'dct' or 'grid', got {method!r}")


def _iou_histogram(ious: np.ndarray) -> np.ndarray:
    hist, _ = np.histogram(ious, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
    return hist.astype(np.int64)


def evaluate_representation(masks, method: str, k: int, n: int | None = None,
                            config: CodecConfig | None = None,
                            threads: int = 1) -> RepQualityReport:
    """Mean per-instance IoU of a codec over a stream of binary masks.

    ``threads`` > 1 reconstructs instances on a thread pool; the codec is
    pure, and results are collected in stream order, so the report is
    identical either way.
    """
    if method not in ("dct", "grid"):
        raise InvalidArgumentError(f"method must be 'dct' or 'grid', got {method!r}")
    if method == "dct" and n is None:
        raise InvalidArgumentError("method 'dct' requires a vector dimension N")

    def one(mask) -> float:
        return iou(reconstruct(mask, method, k, n, config), _as_binary(mask, "mask"))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ious = np.array(list(pool.map(one, masks)))
    else:
        ious = np.array([one(m) for m in masks])
    if ious.size == 0:
        raise InvalidArgumentError("mask stream is empty")
    return RepQualityReport(
        method=method,
        k=int(k),
        n=None if method == "grid" else int(n),
        instance_count=int(ious.size),
        mean_iou=float(ious.mean()),
        iou_histogram=_iou_histogram(ious),
    )


def coefficient_stats(masks, config: CodecConfig = CodecConfig()) -> CoeffStats:
    """Streaming per-dimension mean and population variance of encodings."""
    count = 0
    mean = np.zeros(config.n)
    m2 = np.zeros(config.n)
    for mask in masks:
        v = encode(mask, config).coeffs
        count += 1
        delta = v - mean
        mean += delta / count
        m2 += delta * (v - mean)
    if count == 0:
        raise InvalidArgumentError("mask stream is empty")
    variance = np.maximum(m2 / count, 0.0)
    return CoeffStats(n=config.n, mean=mean, variance=variance, instance_count=count)
