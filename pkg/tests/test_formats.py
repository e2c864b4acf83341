import numpy as np
import pytest

from maskcodec import (CodecConfig, DctMaskVector, InvalidArgumentError,
                       ParseError, encode)
from maskcodec.formats import (mask_from_pgm, parse_pgm, pgm_from_mask,
                               pgm_from_unit_grid, read_vector_file,
                               write_pgm, write_vector_file)

p = pytest.mark.parametrize


class TestPgm:
    def test_round_trip(self):
        rng = np.random.default_rng(31)
        img = rng.integers(0, 256, size=(9, 14), dtype=np.uint8)
        assert np.array_equal(parse_pgm(write_pgm(img)), img)

    def test_header_layout(self):
        data = write_pgm(np.zeros((2, 3), dtype=np.uint8))
        assert data.startswith(b"P5\n3 2\n255\n")
        assert len(data) == len(b"P5\n3 2\n255\n") + 6

    def test_comments_and_whitespace(self):
        pixels = bytes(range(6))
        data = b"P5 # magic\n# a comment line\n 3\t2 # size\n255\n" + pixels
        img = parse_pgm(data)
        assert img.shape == (2, 3)
        assert img.tobytes() == pixels

    def test_mask_threshold_at_128(self):
        data = write_pgm(np.array([[0, 127, 128, 255]], dtype=np.uint8))
        assert mask_from_pgm(data).tolist() == [[0, 0, 1, 1]]

    def test_mask_round_trip(self):
        m = (np.arange(20).reshape(4, 5) % 3 == 0).astype(np.uint8)
        assert np.array_equal(mask_from_pgm(pgm_from_mask(m)), m)

    def test_unit_grid_scaling(self):
        grid = np.array([[0.0, 0.5, 1.0, -0.3, 1.7]])
        img = parse_pgm(pgm_from_unit_grid(grid))
        assert img.tolist() == [[0, 128, 255, 0, 255]]

    def test_rejects_wrong_magic(self):
        with pytest.raises(ParseError):
            parse_pgm(b"P2\n2 2\n255\n....")

    def test_rejects_wrong_maxval(self):
        with pytest.raises(ParseError):
            parse_pgm(b"P5\n2 2\n65535\n" + bytes(8))

    def test_rejects_truncated_pixels(self):
        with pytest.raises(ParseError) as info:
            parse_pgm(b"P5\n4 4\n255\n" + bytes(7))
        assert info.value.offset is not None

    def test_rejects_truncated_header(self):
        with pytest.raises(ParseError):
            parse_pgm(b"P5\n4")

    def test_write_rejects_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            write_pgm(np.array([[300]]))

    def test_mask_write_rejects_non_binary(self):
        with pytest.raises(InvalidArgumentError):
            pgm_from_mask(np.array([[2]]))


class TestVectorFile:
    def test_round_trip_bit_exact(self):
        rng = np.random.default_rng(41)
        coeffs = rng.standard_normal(50) * np.logspace(-12, 3, 50)
        v = DctMaskVector(k=16, n=50, coeffs=coeffs)
        back = read_vector_file(write_vector_file(v))
        assert back.k == 16 and back.n == 50
        assert np.array_equal(back.coeffs, coeffs)

    def test_encoded_mask_round_trip(self):
        m = (np.random.default_rng(2).random((20, 20)) < 0.5).astype(np.uint8)
        v = encode(m, CodecConfig(k=16, n=100))
        back = read_vector_file(write_vector_file(v))
        assert np.array_equal(back.coeffs, v.coeffs)

    def test_layout(self):
        v = DctMaskVector(k=2, n=3, coeffs=np.array([1.0, -0.5, 0.0]))
        text = write_vector_file(v)
        assert text.splitlines()[:3] == ["maskvec 1", "K 2", "N 3"]
        assert len(text.splitlines()) == 6

    def test_rejects_missing_magic(self):
        with pytest.raises(ParseError):
            read_vector_file("K 2\nN 1\n0.0\n")

    def test_rejects_wrong_count(self):
        with pytest.raises(ParseError):
            read_vector_file("maskvec 1\nK 2\nN 3\n0.0\n1.0\n")

    def test_rejects_bad_coefficient(self):
        with pytest.raises(ParseError) as info:
            read_vector_file("maskvec 1\nK 2\nN 2\n0.0\npotato\n")
        assert info.value.offset is not None

    def test_rejects_non_finite(self):
        with pytest.raises(ParseError):
            read_vector_file("maskvec 1\nK 2\nN 1\ninf\n")

    def test_rejects_n_beyond_grid(self):
        with pytest.raises(ParseError):
            read_vector_file("maskvec 1\nK 1\nN 2\n0.0\n1.0\n")

    def test_accepts_trailing_blank_lines(self):
        back = read_vector_file("maskvec 1\nK 2\nN 1\n0.5\n\n\n")
        assert back.coeffs.tolist() == [0.5]
