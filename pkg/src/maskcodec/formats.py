"""File formats: binary PGM (P5) images and the coefficient-vector file.

PGM carries masks and grayscale panels: masks are written as 0/255 and read
back by thresholding at 128.  The vector file is a line-oriented text
format, one coefficient per line at 17 significant digits, so encoded
vectors round-trip through text bit-exactly and diff cleanly:

    maskvec 1
    K 128
    N 300
    <coeff 0>
    ...
"""

import numpy as np

from .codec import DctMaskVector
from .errors import InvalidArgumentError, ParseError

VECTOR_MAGIC = "maskvec 1"


def parse_pgm(data: bytes) -> np.ndarray:
    """Parse a binary PGM (P5, maxval 255) into a uint8 H x W array."""
    if not isinstance(data, (bytes, bytearray)):
        raise InvalidArgumentError(
            f"expected bytes, got {type(data).__name__}"
        )
    data = bytes(data)
    pos = 0

    def token():
        nonlocal pos
        while pos < len(data):
            if data[pos:pos + 1].isspace():
                pos += 1
            elif data[pos:pos + 1] == b"#":
                while pos < len(data) and data[pos] != 0x0A:
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ParseError("truncated PGM header", offset=start)
        return data[start:pos], start

    magic, at = token()
    if magic != b"P5":
        raise ParseError(f"not a binary PGM (magic {magic!r})", offset=at)
    dims = []
    for _ in range(3):
        tok, at = token()
        if not tok.isdigit():
            raise ParseError(f"non-numeric PGM header field {tok!r}", offset=at)
        dims.append(int(tok))
    w, h, maxval = dims
    if maxval != 255:
        raise ParseError(f"PGM maxval must be 255, got {maxval}", offset=at)
    if w < 1 or h < 1:
        raise ParseError(f"PGM size must be positive, got {w}x{h}", offset=at)
    pos += 1  # single whitespace byte after the header
    if len(data) - pos < h * w:
        raise ParseError(
            f"PGM pixel data truncated: need {h * w} bytes, have {len(data) - pos}",
            offset=pos,
        )
    pixels = np.frombuffer(data, dtype=np.uint8, count=h * w, offset=pos)
    return pixels.reshape(h, w).copy()


def write_pgm(gray) -> bytes:
    """Serialize a uint8 H x W array as binary PGM."""
    g = np.asarray(gray)
    if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
        raise InvalidArgumentError(
            f"image must be a non-empty 2D array, got shape {g.shape}"
        )
    if g.dtype != np.uint8:
        if not np.isin(g, np.arange(256)).all():
            raise InvalidArgumentError("pixel values must be integers in 0..255")
        g = g.astype(np.uint8)
    h, w = g.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + g.tobytes()


def mask_from_pgm(data: bytes) -> np.ndarray:
    """Read a PGM as a binary mask: values >= 128 are foreground."""
    return (parse_pgm(data) >= 128).astype(np.uint8)


def pgm_from_mask(mask) -> bytes:
    """Write a binary mask as a 0/255 PGM."""
    m = np.asarray(mask)
    if m.dtype != bool and not np.isin(m, (0, 1)).all():
        raise InvalidArgumentError("mask must contain only 0/1 values")
    return write_pgm(m.astype(np.uint8) * 255)


def pgm_from_unit_grid(grid) -> bytes:
    """Write a real grid as PGM, mapping [0, 1] linearly onto 0..255.

    Values outside [0, 1] (decode ringing) are clipped first.
    """
    g = np.asarray(grid, dtype=np.float64)
    scaled = np.rint(np.clip(g, 0.0, 1.0) * 255.0).astype(np.uint8)
    return write_pgm(scaled)


def write_vector_file(vector: DctMaskVector) -> str:
    """Serialize an encoded vector as text; exact float64 round trip."""
    if not isinstance(vector, DctMaskVector):
        raise InvalidArgumentError(
            f"expected a DctMaskVector, got {type(vector).__name__}"
        )
    lines = [VECTOR_MAGIC, f"K {vector.k}", f"N {vector.n}"]
    lines.extend(format(c, ".17g") for c in vector.coeffs)
    return "\n".join(lines) + "\n"


def read_vector_file(text: str) -> DctMaskVector:
    """Parse the vector file format back into a DctMaskVector."""
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8", errors="replace")
    lines = text.splitlines()
    offsets = []
    at = 0
    for line in lines:
        offsets.append(at)
        at += len(line.encode("utf-8")) + 1

    def fail(i, msg):
        raise ParseError(msg, offset=offsets[i] if i < len(offsets) else at)

    if not lines or lines[0].strip() != VECTOR_MAGIC:
        fail(0, f"missing '{VECTOR_MAGIC}' header line")
    header = {}
    for i, name in ((1, "K"), (2, "N")):
        if i >= len(lines):
            fail(i, f"missing '{name}' header line")
        parts = lines[i].split()
        if len(parts) != 2 or parts[0] != name or not parts[1].isdigit():
            fail(i, f"expected '{name} <positive integer>', got {lines[i]!r}")
        header[name] = int(parts[1])
    k, n = header["K"], header["N"]
    body = [(i, line) for i, line in enumerate(lines[3:], start=3) if line.strip()]
    if len(body) != n:
        raise ParseError(
            f"expected {n} coefficient lines, found {len(body)}",
            offset=offsets[3] if len(offsets) > 3 else at,
        )
    coeffs = np.empty(n)
    for slot, (i, line) in enumerate(body):
        try:
            coeffs[slot] = float(line)
        except ValueError:
            fail(i, f"bad coefficient {line.strip()!r}")
    if not np.isfinite(coeffs).all():
        raise ParseError("coefficients must be finite")
    try:
        return DctMaskVector(k=k, n=n, coeffs=coeffs)
    except InvalidArgumentError as exc:
        raise ParseError(f"inconsistent vector header: {exc}") from exc
