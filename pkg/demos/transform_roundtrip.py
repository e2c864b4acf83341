"""
Transform walk-through: forward DCT, zigzag ordering, lossless round trip
==========================================================================

Shows the two transform routes agreeing, energy preservation, and how the
zigzag scan orders coefficients by frequency.
"""

import numpy as np

from maskcodec import (dct2_fast, dct2_naive, idct2_fast, zigzag_order,
                       zigzag_scan, zigzag_unscan)

# a small test pattern: soft-edged disk on an 8x8 grid
yy, xx = np.mgrid[0:8, 0:8]
disk = ((xx - 3.5) ** 2 + (yy - 3.5) ** 2 <= 9).astype(float)
print("input grid:")
print(disk.astype(int))

# the two forward routes compute the same coefficients
c_fast = dct2_fast(disk)
c_naive = dct2_naive(disk)
print("\nmax |fast - naive|:", np.abs(c_fast - c_naive).max())

# Parseval: squared L2 norm survives the transform
print("spatial energy:   ", (disk ** 2).sum())
print("coefficient energy:", (c_fast ** 2).sum())

# the inverse undoes the forward transform exactly (up to round-off)
back = idct2_fast(c_fast)
print("round-trip error:", np.abs(back - disk).max())

# zigzag order walks anti-diagonals, low frequencies first
print("\nfirst 10 zigzag positions:", zigzag_order(8)[:10].tolist())

# energy concentrates early in the scan: keeping a short prefix already
# captures most of the signal
full = zigzag_scan(c_fast, 64)
for n in (4, 8, 16, 32, 64):
    kept = (full[:n] ** 2).sum() / (full ** 2).sum()
    print(f"first {n:2d} coefficients hold {kept * 100:6.2f}% of the energy")

# truncating and inverting gives the best N-term approximation in L2
rec = idct2_fast(zigzag_unscan(full[:8], 8))
print("\n8-coefficient reconstruction, rounded:")
print(np.round(rec, 1))
