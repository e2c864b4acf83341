"""Compact mask representations: DCT coefficient vectors vs binary grids.

A binary mask of any size is resized to a K x K grid, transformed with the
2D DCT, and truncated to its first N zigzag-ordered coefficients.  Decoding
inverts each step.  The package bundles the codec, a resize-grid baseline,
quality metrics (per-instance IoU over annotation sets or synthetic
corpora), COCO-style annotation ingestion, and a CLI.
"""

from .codec import (CodecConfig, DctMaskVector, decode, decode_soft, encode,
                    grid_decode, grid_encode, l1_distance, resize_bilinear,
                    smooth_l1_distance)
from .dataset import (AnnotationSet, InstanceAnnotation, annotation_mask,
                      decode_compressed_rle, decode_rle, encode_rle,
                      generate_synthetic, instance_masks, parse_annotations,
                      rasterize_polygons, tight_crop)
from .errors import (IntegrityError, InvalidArgumentError, MaskCodecError,
                     ParseError)
from .metrics import (CoeffStats, RepQualityReport, coefficient_stats,
                      error_map, evaluate_representation, iou, reconstruct)
from .transform import (dct2_fast, dct2_naive, idct2_fast, idct2_naive,
                        zigzag_order, zigzag_scan, zigzag_unscan)

__version__ = "0.1.0"

__all__ = [
    "AnnotationSet",
    "CodecConfig",
    "CoeffStats",
    "DctMaskVector",
    "InstanceAnnotation",
    "IntegrityError",
    "InvalidArgumentError",
    "MaskCodecError",
    "ParseError",
    "RepQualityReport",
    "annotation_mask",
    "coefficient_stats",
    "decode",
    "decode_compressed_rle",
    "decode_rle",
    "decode_soft",
    "dct2_fast",
    "dct2_naive",
    "encode",
    "encode_rle",
    "error_map",
    "evaluate_representation",
    "generate_synthetic",
    "grid_decode",
    "grid_encode",
    "idct2_fast",
    "idct2_naive",
    "instance_masks",
    "iou",
    "l1_distance",
    "parse_annotations",
    "rasterize_polygons",
    "reconstruct",
    "resize_bilinear",
    "smooth_l1_distance",
    "tight_crop",
    "zigzag_order",
    "zigzag_scan",
    "zigzag_unscan",
    "__version__",
]
