"""Annotation ingestion: COCO-style instance files, RLE, polygons, synthetics.

The parser reads the standard instances JSON layout (top-level ``images``
and ``annotations`` arrays).  Segmentations come in three shapes: polygon
lists, raw RLE (integer counts), and the compressed RLE byte-string format
of the COCO mask API.  All three decode to full-image binary masks;
``instance_masks`` then crops each one to its tight bounding box, the
domain on which representation quality is measured.

``generate_synthetic`` provides a deterministic dataset-free corpus of
ellipses, convex polygons, and two-shape unions for testing and regression
baselines.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import IntegrityError, InvalidArgumentError, ParseError


@dataclass(frozen=True)
class InstanceAnnotation:
    """One instance: image reference, category, crowd flag, segmentation.

    ``segmentation`` is either a list of flat polygon coordinate lists
    (x1, y1, x2, y2, ...) or an RLE dict with ``counts`` (integer list, or
    compressed string) and ``size`` [H, W].
    """

    id: int
    image_id: int
    image_height: int
    image_width: int
    category_id: int
    iscrowd: int
    segmentation: object


@dataclass(frozen=True)
class AnnotationSet:
    """Parsed annotation file: image sizes by id plus instance list."""

    images: dict
    annotations: list


def parse_annotations(document: str) -> AnnotationSet:
    """Parse a COCO-style instances document (text content, not a path).

    Unknown fields are ignored.  A structurally broken document raises
    ParseError with the byte offset when known; an annotation pointing at
    an image id that is not in the ``images`` array raises IntegrityError.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid annotation document: {exc.msg}", offset=exc.pos)
    if not isinstance(doc, dict):
        raise ParseError("annotation document must be a JSON object", offset=0)
    if "images" not in doc or "annotations" not in doc:
        raise ParseError("document lacks 'images' and 'annotations' arrays")

    images = {}
    for entry in doc["images"]:
        try:
            images[entry["id"]] = (int(entry["height"]), int(entry["width"]))
        except (TypeError, KeyError) as exc:
            raise ParseError(f"image entry missing field: {exc}") from exc

    annotations = []
    for index, entry in enumerate(doc["annotations"]):
        if not isinstance(entry, dict):
            raise ParseError(f"annotation {index} is not an object")
        image_id = entry.get("image_id")
        if image_id not in images:
            raise IntegrityError(
                f"annotation {entry.get('id', index)} references unknown "
                f"image id {image_id!r}"
            )
        seg = entry.get("segmentation")
        _check_segmentation(seg, entry.get("id", index))
        h, w = images[image_id]
        annotations.append(InstanceAnnotation(
            id=entry.get("id", index),
            image_id=image_id,
            image_height=h,
            image_width=w,
            category_id=entry.get("category_id", 0),
            iscrowd=int(entry.get("iscrowd", 0)),
            segmentation=seg,
        ))
    return AnnotationSet(images=images, annotations=annotations)


def _check_segmentation(seg, ann_id):
    if isinstance(seg, list):
        if not seg:
            raise ParseError(f"annotation {ann_id} has an empty polygon list")
        for poly in seg:
            if not isinstance(poly, (list, tuple)) or len(poly) < 6 or len(poly) % 2:
                raise ParseError(
                    f"annotation {ann_id} polygon needs an even coordinate "
                    f"count of at least 6"
                )
    elif isinstance(seg, dict):
        if "counts" not in seg or "size" not in seg:
            raise ParseError(f"annotation {ann_id} RLE lacks 'counts' or 'size'")
    else:
        raise ParseError(f"annotation {ann_id} has no usable segmentation")


def decode_rle(counts, h: int, w: int) -> np.ndarray:
    """Decode raw column-major RLE counts; the first run is zeros."""
    c = np.asarray(counts)
    if c.ndim != 1 or c.size == 0:
        raise InvalidArgumentError("counts must be a non-empty 1D sequence")
    if not np.issubdtype(c.dtype, np.integer):
        if not (np.asarray(counts, dtype=np.float64) % 1 == 0).all():
            raise InvalidArgumentError("counts must be integers")
        c = c.astype(np.int64)
    if (c < 0).any():
        raise InvalidArgumentError("counts must be nonnegative")
    if h < 1 or w < 1:
        raise InvalidArgumentError(f"mask size must be positive, got {h}x{w}")
    total = int(c.sum())
    if total != h * w:
        raise InvalidArgumentError(
            f"counts sum to {total}, expected H*W = {h * w}"
        )
    bits = np.repeat(np.arange(c.size, dtype=np.int64) % 2, c).astype(np.uint8)
    return bits.reshape((h, w), order="F")


def _runs(mask: np.ndarray) -> np.ndarray:
    # Column-major run lengths, alternating zero/one runs, zeros first.
    flat = mask.ravel(order="F")
    change = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate(([0], change, [flat.size]))
    counts = np.diff(bounds)
    if flat[0]:
        counts = np.concatenate(([0], counts))
    return counts


def encode_rle(mask) -> bytes:
    """Encode a binary mask as the COCO compressed RLE byte string."""
    m = np.asarray(mask)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidArgumentError(
            f"mask must be a non-empty 2D array, got shape {m.shape}"
        )
    if m.dtype != bool and not np.isin(m, (0, 1)).all():
        raise InvalidArgumentError("mask must contain only 0/1 values")
    counts = _runs(m.astype(bool))
    out = bytearray()
    for i, count in enumerate(counts):
        x = int(count)
        if i > 2:
            x -= int(counts[i - 2])
        more = True
        while more:
            group = x & 0x1F
            x >>= 5
            # Stop once the remaining bits are pure sign extension of the
            # group's top bit; otherwise set the continuation flag.
            more = (x != -1) if (group & 0x10) else (x != 0)
            if more:
                group |= 0x20
            out.append(group + 48)
    return bytes(out)


def decode_compressed_rle(encoded, h: int, w: int) -> np.ndarray:
    """Decode the COCO compressed RLE byte-string form."""
    if isinstance(encoded, str):
        data = encoded.encode("ascii", errors="replace")
    elif isinstance(encoded, (bytes, bytearray)):
        data = bytes(encoded)
    else:
        raise InvalidArgumentError(
            f"encoded must be bytes or str, got {type(encoded).__name__}"
        )
    counts = []
    p = 0
    while p < len(data):
        x = 0
        k = 0
        start = p
        more = True
        while more:
            if p >= len(data):
                raise ParseError("truncated RLE string", offset=start)
            group = data[p] - 48
            if not 0 <= group < 64:
                raise ParseError(
                    f"RLE byte {data[p]} outside the 48..111 alphabet", offset=p
                )
            x |= (group & 0x1F) << (5 * k)
            more = bool(group & 0x20)
            p += 1
            k += 1
            if not more and (group & 0x10):
                x |= -1 << (5 * k)
        if len(counts) > 2:
            x += counts[-2]
        if x < 0:
            raise ParseError(f"negative run length {x}", offset=start)
        counts.append(x)
    if not counts:
        raise ParseError("empty RLE string", offset=0)
    return decode_rle(counts, h, w)


def rasterize_polygons(polygons, h: int, w: int) -> np.ndarray:
    """Fill a union of polygons on an H x W grid.

    A pixel is set iff its center (x + 0.5, y + 0.5) is inside the polygon
    under the even-odd rule; centers exactly on a left or top boundary are
    included, on a right or bottom boundary excluded.  Coordinates may be
    fractional and may run outside the grid (the fill is clipped).
    """
    if h < 1 or w < 1:
        raise InvalidArgumentError(f"mask size must be positive, got {h}x{w}")
    polys = list(polygons)
    if not polys:
        raise InvalidArgumentError("need at least one polygon")
    mask = np.zeros((h, w), dtype=bool)
    for poly in polys:
        coords = np.asarray(poly, dtype=np.float64).ravel()
        if coords.size < 6 or coords.size % 2:
            raise InvalidArgumentError(
                f"polygon needs at least 3 (x, y) points, got {coords.size} values"
            )
        if not np.isfinite(coords).all():
            raise InvalidArgumentError("polygon contains non-finite coordinates")
        mask |= _fill_polygon(coords[0::2], coords[1::2], h, w)
    return mask.astype(np.uint8)


def _fill_polygon(xs: np.ndarray, ys: np.ndarray, h: int, w: int) -> np.ndarray:
    x1, y1 = xs, ys
    x2, y2 = np.roll(xs, -1), np.roll(ys, -1)
    out = np.zeros((h, w), dtype=bool)
    # Rows whose center scanline can intersect the polygon at all.
    r_lo = max(0, int(np.floor(ys.min() - 0.5)))
    r_hi = min(h, int(np.ceil(ys.max() + 0.5)))
    for r in range(r_lo, r_hi):
        yc = r + 0.5
        # Half-open span per edge so shared vertices count once; horizontal
        # edges never satisfy either branch.
        hit = ((y1 <= yc) & (yc < y2)) | ((y2 <= yc) & (yc < y1))
        if not hit.any():
            continue
        t = (yc - y1[hit]) / (y2[hit] - y1[hit])
        crossings = np.sort(x1[hit] + t * (x2[hit] - x1[hit]))
        for a, b in zip(crossings[0::2], crossings[1::2]):
            ia = max(0, int(np.ceil(a - 0.5)))
            ib = min(w, int(np.ceil(b - 0.5)))
            if ia < ib:
                out[r, ia:ib] = True
    return out


def annotation_mask(ann: InstanceAnnotation) -> np.ndarray:
    """Decode one annotation's segmentation to a full-image binary mask."""
    seg = ann.segmentation
    h, w = ann.image_height, ann.image_width
    if isinstance(seg, list):
        return rasterize_polygons(seg, h, w)
    size = seg.get("size")
    if not (isinstance(size, (list, tuple)) and len(size) == 2):
        raise IntegrityError(f"annotation {ann.id} RLE 'size' must be [H, W]")
    if (int(size[0]), int(size[1])) != (h, w):
        raise IntegrityError(
            f"annotation {ann.id} RLE size {size} does not match image "
            f"size {(h, w)}"
        )
    counts = seg["counts"]
    if isinstance(counts, (str, bytes, bytearray)):
        return decode_compressed_rle(counts, h, w)
    return decode_rle(counts, h, w)


def tight_crop(mask) -> np.ndarray | None:
    """Crop to the bounding box of set pixels; None when the mask is empty."""
    m = np.asarray(mask)
    rows = np.flatnonzero(m.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(m.any(axis=0))
    return m[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1]


class InstanceMaskStream:
    """Iterable of (annotation, tight-bbox mask crop) pairs with filtering.

    Annotations whose decoded mask has no set pixels are skipped and
    counted in ``skipped_empty`` (final after full iteration).  ``min_area``
    filters on the decoded mask's set-pixel count, not the annotation's
    declared area.
    """

    def __init__(self, annotation_set: AnnotationSet, min_area: int | None = None,
                 categories=None, include_crowd: bool = False):
        if not isinstance(annotation_set, AnnotationSet):
            raise InvalidArgumentError(
                f"expected an AnnotationSet, got {type(annotation_set).__name__}"
            )
        self._set = annotation_set
        self.min_area = min_area
        self.categories = None if categories is None else frozenset(categories)
        self.include_crowd = include_crowd
        self.skipped_empty = 0
        self.yielded = 0

    def __iter__(self):
        for ann in self._set.annotations:
            if ann.iscrowd and not self.include_crowd:
                continue
            if self.categories is not None and ann.category_id not in self.categories:
                continue
            full = annotation_mask(ann)
            if self.min_area is not None and np.count_nonzero(full) < self.min_area:
                continue
            crop = tight_crop(full)
            if crop is None:
                self.skipped_empty += 1
                continue
            self.yielded += 1
            yield ann, crop


def instance_masks(annotation_set: AnnotationSet, min_area: int | None = None,
                   categories=None, include_crowd: bool = False) -> InstanceMaskStream:
    """Stream of (annotation, tight-bbox crop) pairs after filtering."""
    return InstanceMaskStream(annotation_set, min_area=min_area,
                              categories=categories, include_crowd=include_crowd)


def _ellipse(rng: np.random.Generator, h: int, w: int) -> np.ndarray:
    cx = rng.uniform(0.25 * w, 0.75 * w)
    cy = rng.uniform(0.25 * h, 0.75 * h)
    rx = rng.uniform(0.15 * w, 0.45 * w)
    ry = rng.uniform(0.15 * h, 0.45 * h)
    theta = rng.uniform(0.0, np.pi)
    yy, xx = np.mgrid[0:h, 0:w]
    dx = (xx + 0.5) - cx
    dy = (yy + 0.5) - cy
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    u = (dx * cos_t + dy * sin_t) / rx
    v = (-dx * sin_t + dy * cos_t) / ry
    return (u * u + v * v <= 1.0).astype(np.uint8)


def _convex_polygon(rng: np.random.Generator, h: int, w: int) -> np.ndarray:
    while True:
        pts = np.column_stack([
            rng.uniform(0.1 * w, 0.9 * w, size=8),
            rng.uniform(0.1 * h, 0.9 * h, size=8),
        ])
        try:
            hull = ConvexHull(pts)
        except QhullError:
            continue
        verts = pts[hull.vertices]
        return rasterize_polygons([verts.ravel()], h, w)


def generate_synthetic(seed: int, count: int, size_range=(32, 256)):
    """Deterministic corpus of non-empty masks; same seed, same bits.

    Each mask is an ellipse, a convex polygon, or the union of two such
    shapes, at a size drawn uniformly (per axis, inclusive) from
    ``size_range``.
    """
    if count < 1:
        raise InvalidArgumentError(f"count must be >= 1, got {count}")
    lo, hi = int(size_range[0]), int(size_range[1])
    if not 1 <= lo <= hi:
        raise InvalidArgumentError(f"invalid size range {size_range!r}")
    rng = np.random.default_rng(seed)

    def one():
        h = int(rng.integers(lo, hi + 1))
        w = int(rng.integers(lo, hi + 1))
        kind = int(rng.integers(0, 3))
        if kind == 0:
            return _ellipse(rng, h, w)
        if kind == 1:
            return _convex_polygon(rng, h, w)
        a = _ellipse(rng, h, w) if rng.integers(0, 2) else _convex_polygon(rng, h, w)
        b = _ellipse(rng, h, w) if rng.integers(0, 2) else _convex_polygon(rng, h, w)
        return (a | b).astype(np.uint8)

    def masks():
        for _ in range(count):
            m = one()
            while not m.any():
                m = one()
            yield m

    return masks()
