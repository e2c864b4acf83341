import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maskcodec import (IntegrityError, InvalidArgumentError, ParseError,
                       annotation_mask, decode_compressed_rle, decode_rle,
                       encode_rle, generate_synthetic, instance_masks,
                       parse_annotations, rasterize_polygons, tight_crop)

p = pytest.mark.parametrize

# Golden compressed-RLE pair: 5x5 mask whose column-major runs are
# [3,2,4,1,6,2,7]; the delta at index 3 (1 - 2 = -1) exercises the
# sign-extension byte, which lands on 'O'.
GOLDEN_STRING = b"324O211"
GOLDEN_MASK = np.array([
    [0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0],
    [1, 0, 0, 0, 0],
    [1, 1, 0, 0, 0],
], dtype=np.uint8)


def minimal_document(segmentation, h=10, w=10, iscrowd=0, category_id=1):
    return json.dumps({
        "images": [{"id": 7, "height": h, "width": w}],
        "annotations": [{"id": 1, "image_id": 7, "category_id": category_id,
                         "iscrowd": iscrowd, "segmentation": segmentation}],
    })


class TestParseAnnotations:
    def test_minimal_polygon_document(self):
        aset = parse_annotations(minimal_document([[1, 1, 8, 1, 8, 8]]))
        assert aset.images == {7: (10, 10)}
        assert len(aset.annotations) == 1
        ann = aset.annotations[0]
        assert ann.id == 1 and ann.image_id == 7
        assert ann.image_height == 10 and ann.image_width == 10
        assert ann.category_id == 1 and ann.iscrowd == 0

    def test_unknown_image_id(self):
        doc = json.dumps({
            "images": [{"id": 1, "height": 4, "width": 4}],
            "annotations": [{"id": 9, "image_id": 2,
                             "segmentation": [[0, 0, 3, 0, 3, 3]]}],
        })
        with pytest.raises(IntegrityError, match="9"):
            parse_annotations(doc)

    def test_malformed_json_reports_offset(self):
        with pytest.raises(ParseError) as info:
            parse_annotations('{"images": [}')
        assert info.value.offset == 12
        assert "byte offset 12" in str(info.value)

    def test_non_object_document(self):
        with pytest.raises(ParseError):
            parse_annotations("[1, 2, 3]")

    def test_missing_top_level_arrays(self):
        with pytest.raises(ParseError):
            parse_annotations('{"images": []}')

    def test_short_polygon_rejected(self):
        with pytest.raises(ParseError):
            parse_annotations(minimal_document([[0, 0, 1, 1]]))

    def test_rle_segmentation_accepted(self):
        seg = {"counts": [50, 10, 40], "size": [10, 10]}
        aset = parse_annotations(minimal_document(seg))
        assert aset.annotations[0].segmentation == seg

    def test_unknown_fields_ignored(self):
        doc = json.dumps({
            "info": {"year": 2017},
            "licenses": [],
            "images": [{"id": 3, "height": 5, "width": 5, "file_name": "x.jpg"}],
            "annotations": [{"id": 4, "image_id": 3, "bbox": [0, 0, 2, 2],
                             "area": 4.0, "segmentation": [[0, 0, 2, 0, 2, 2]]}],
        })
        assert len(parse_annotations(doc).annotations) == 1


class TestRawRle:
    def test_definitional_2x2(self):
        assert np.array_equal(decode_rle([1, 2, 1], 2, 2),
                              [[0, 1], [1, 0]])

    def test_all_zero_and_all_one(self):
        assert not decode_rle([12], 3, 4).any()
        assert decode_rle([0, 12], 3, 4).all()

    def test_column_major_prefix(self):
        h, w, r = 4, 5, 7
        mask = decode_rle([r, h * w - r], h, w)
        flat = mask.ravel(order="F")
        assert not flat[:r].any() and flat[r:].all()

    def test_sum_mismatch_rejected(self):
        with pytest.raises(InvalidArgumentError):
            decode_rle([3, 3], 2, 2)

    def test_negative_count_rejected(self):
        with pytest.raises(InvalidArgumentError):
            decode_rle([-1, 5], 2, 2)


class TestCompressedRle:
    def test_golden_encode(self):
        assert encode_rle(GOLDEN_MASK) == GOLDEN_STRING

    def test_golden_decode(self):
        assert np.array_equal(decode_compressed_rle(GOLDEN_STRING, 5, 5),
                              GOLDEN_MASK)

    def test_golden_cross_check_against_reference(self):
        # Optional: only runs where the reference COCO mask API is present.
        mask_util = pytest.importorskip("pycocotools.mask")
        ref = mask_util.encode(np.asfortranarray(GOLDEN_MASK))
        assert ref["counts"] == GOLDEN_STRING
        assert np.array_equal(mask_util.decode(ref), GOLDEN_MASK)

    @p("builder", [
        lambda: np.zeros((3, 7), dtype=np.uint8),
        lambda: np.ones((6, 2), dtype=np.uint8),
        lambda: np.eye(5, dtype=np.uint8),
        lambda: np.array([[1]], dtype=np.uint8),
        lambda: np.array([[0]], dtype=np.uint8),
    ])
    def test_edge_case_round_trips(self, builder):
        m = builder()
        assert np.array_equal(decode_compressed_rle(encode_rle(m), *m.shape), m)

    def test_random_round_trips(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            h = int(rng.integers(1, 40))
            w = int(rng.integers(1, 40))
            m = (rng.random((h, w)) < rng.random()).astype(np.uint8)
            assert np.array_equal(decode_compressed_rle(encode_rle(m), h, w), m)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 24), st.integers(1, 24), st.integers(0, 2 ** 31))
    def test_round_trip_property(self, h, w, seed):
        m = (np.random.default_rng(seed).random((h, w)) < 0.5).astype(np.uint8)
        assert np.array_equal(decode_compressed_rle(encode_rle(m), h, w), m)

    def test_accepts_str_input(self):
        assert np.array_equal(
            decode_compressed_rle(GOLDEN_STRING.decode("ascii"), 5, 5),
            GOLDEN_MASK)

    def test_truncated_string_rejected(self):
        # 'P' has the continuation flag set, so the stream must not end there.
        with pytest.raises(ParseError):
            decode_compressed_rle(b"3P", 5, 5)

    def test_out_of_range_byte_rejected(self):
        with pytest.raises(ParseError):
            decode_compressed_rle(b"3\x204", 5, 5)

    def test_large_run_multi_group(self):
        m = np.zeros((100, 100), dtype=np.uint8)
        m[60:, 40:] = 1
        assert np.array_equal(decode_compressed_rle(encode_rle(m), 100, 100), m)


def ray_cast_inside(px, py, xs, ys):
    # Plain even-odd ray cast to +x, written against the edge list directly.
    inside = False
    n = len(xs)
    for i in range(n):
        x1, y1 = xs[i], ys[i]
        x2, y2 = xs[(i + 1) % n], ys[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            x_cross = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < x_cross:
                inside = not inside
    return inside


class TestRasterizePolygons:
    def test_rectangle_block(self):
        got = rasterize_polygons([[0, 0, 4, 0, 4, 3, 0, 3]], 10, 10)
        expected = np.zeros((10, 10), dtype=np.uint8)
        expected[0:3, 0:4] = 1
        assert np.array_equal(got, expected)

    def test_rectangle_brute_force_all_pixels(self):
        poly = [0, 0, 4, 0, 4, 3, 0, 3]
        got = rasterize_polygons([poly], 10, 10)
        xs, ys = poly[0::2], poly[1::2]
        for r in range(10):
            for c in range(10):
                assert got[r, c] == ray_cast_inside(c + 0.5, r + 0.5, xs, ys)

    def test_random_polygons_match_ray_cast(self):
        rng = np.random.default_rng(23)
        for _ in range(15):
            n = int(rng.integers(3, 9))
            xs = rng.uniform(-2, 18, n) + 0.317
            ys = rng.uniform(-2, 14, n) + 0.177
            poly = np.column_stack([xs, ys]).ravel()
            got = rasterize_polygons([poly], 12, 16)
            for r in range(12):
                for c in range(16):
                    assert got[r, c] == ray_cast_inside(c + 0.5, r + 0.5, xs, ys)

    def test_zero_area_sliver(self):
        assert not rasterize_polygons([[1, 1, 5, 5, 1, 1]], 8, 8).any()

    def test_union_of_disjoint_triangles(self):
        t1 = [0, 0, 4, 0, 0, 4]
        t2 = [8, 8, 12, 8, 8, 12]
        both = rasterize_polygons([t1, t2], 14, 14)
        assert np.array_equal(both, rasterize_polygons([t1], 14, 14)
                              | rasterize_polygons([t2], 14, 14))

    def test_out_of_bounds_clipped(self):
        got = rasterize_polygons([[-5, -5, 20, -5, 20, 20, -5, 20]], 6, 6)
        assert got.all()

    def test_fractional_coordinates(self):
        got = rasterize_polygons([[0.6, 0.6, 3.4, 0.6, 3.4, 2.4, 0.6, 2.4]], 5, 5)
        expected = np.zeros((5, 5), dtype=np.uint8)
        expected[1:2, 1:3] = 1  # centers (1.5, 1.5) and (2.5, 1.5) only
        assert np.array_equal(got, expected)

    def test_too_few_points_rejected(self):
        with pytest.raises(InvalidArgumentError):
            rasterize_polygons([[0, 0, 1, 1]], 4, 4)

    def test_no_polygons_rejected(self):
        with pytest.raises(InvalidArgumentError):
            rasterize_polygons([], 4, 4)


class TestInstanceMasks:
    def test_full_image_rle_crop(self):
        seg = {"counts": [0, 100], "size": [10, 10]}
        aset = parse_annotations(minimal_document(seg))
        items = list(instance_masks(aset))
        assert len(items) == 1
        ann, crop = items[0]
        assert ann.id == 1
        assert crop.shape == (10, 10) and crop.all()

    def test_category_filter(self):
        aset = parse_annotations(minimal_document([[1, 1, 8, 1, 8, 8]]))
        assert list(instance_masks(aset, categories={99})) == []
        assert len(list(instance_masks(aset, categories={1}))) == 1

    def test_crowd_excluded_by_default(self):
        seg = {"counts": [0, 100], "size": [10, 10]}
        aset = parse_annotations(minimal_document(seg, iscrowd=1))
        assert list(instance_masks(aset)) == []
        assert len(list(instance_masks(aset, include_crowd=True))) == 1

    def test_min_area_uses_set_pixels(self):
        aset = parse_annotations(minimal_document([[0, 0, 3, 0, 3, 3, 0, 3]]))
        assert len(list(instance_masks(aset, min_area=9))) == 1
        assert list(instance_masks(aset, min_area=10)) == []

    def test_empty_masks_skipped_and_counted(self):
        aset = parse_annotations(minimal_document([[1, 1, 5, 5, 1, 1]]))
        stream = instance_masks(aset)
        assert list(stream) == []
        assert stream.skipped_empty == 1

    def test_crop_tightness(self):
        aset = parse_annotations(minimal_document([[2, 3, 7, 3, 7, 6, 2, 6]]))
        for _, crop in instance_masks(aset):
            assert crop[0].any() and crop[-1].any()
            assert crop[:, 0].any() and crop[:, -1].any()

    def test_annotation_mask_compressed_rle(self):
        seg = {"counts": GOLDEN_STRING.decode("ascii"), "size": [5, 5]}
        aset = parse_annotations(minimal_document(seg, h=5, w=5))
        assert np.array_equal(annotation_mask(aset.annotations[0]), GOLDEN_MASK)

    def test_rle_size_mismatch_rejected(self):
        seg = {"counts": [0, 25], "size": [5, 5]}
        aset = parse_annotations(minimal_document(seg, h=10, w=10))
        with pytest.raises(IntegrityError):
            annotation_mask(aset.annotations[0])


class TestTightCrop:
    def test_empty_returns_none(self):
        assert tight_crop(np.zeros((4, 4))) is None

    def test_single_pixel(self):
        m = np.zeros((6, 6), dtype=np.uint8)
        m[4, 2] = 1
        assert tight_crop(m).shape == (1, 1)


class TestGenerateSynthetic:
    def test_bitwise_determinism(self):
        a = list(generate_synthetic(7, 12, (16, 64)))
        b = list(generate_synthetic(7, 12, (16, 64)))
        assert len(a) == len(b) == 12
        for ma, mb in zip(a, b):
            assert ma.dtype == mb.dtype == np.uint8
            assert np.array_equal(ma, mb)

    def test_different_seeds_differ(self):
        a = next(iter(generate_synthetic(1, 1, (32, 32))))
        b = next(iter(generate_synthetic(2, 1, (32, 32))))
        assert not np.array_equal(a, b)

    def test_all_non_empty_and_in_range(self):
        for m in generate_synthetic(3, 40, (16, 48)):
            assert m.any()
            assert 16 <= m.shape[0] <= 48 and 16 <= m.shape[1] <= 48

    def test_count_validated(self):
        with pytest.raises(InvalidArgumentError):
            generate_synthetic(1, 0)

    def test_size_range_validated(self):
        with pytest.raises(InvalidArgumentError):
            generate_synthetic(1, 1, (0, 8))
