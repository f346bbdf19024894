"""Pure-Python versions of the compiled kernels in ``_ckernels.pyx``."""

from __future__ import annotations

import math
from collections import deque

import numpy as np


def flood_fill_count(free: np.ndarray, hblock: np.ndarray) -> int:
    """Number of free cells reachable from the first free cell (4-neighbour moves).

    ``hblock[i, j]`` forbids the move between cells ``(i, j)`` and ``(i, j + 1)``.
    """
    ny, nx = free.shape
    flat = free.ravel().tolist()
    hb = hblock.ravel().tolist()
    nb = nx - 1
    try:
        start = flat.index(1)
    except ValueError:
        return 0
    seen = bytearray(ny * nx)
    seen[start] = 1
    queue = deque([start])
    count = 1
    while queue:
        c = queue.popleft()
        i, j = divmod(c, nx)
        if j + 1 < nx and not hb[i * nb + j] and flat[c + 1] and not seen[c + 1]:
            seen[c + 1] = 1
            queue.append(c + 1)
            count += 1
        if j > 0 and not hb[i * nb + j - 1] and flat[c - 1] and not seen[c - 1]:
            seen[c - 1] = 1
            queue.append(c - 1)
            count += 1
        if i + 1 < ny and flat[c + nx] and not seen[c + nx]:
            seen[c + nx] = 1
            queue.append(c + nx)
            count += 1
        if i > 0 and flat[c - nx] and not seen[c - nx]:
            seen[c - nx] = 1
            queue.append(c - nx)
            count += 1
    return count


def points_in_domain(xs, ys, y_lo, y_hi, mid, slit_x, slit_s0, slit_s1,
                     tooth_apex, tooth_hw, tooth_anchor, slit_tol=0.0):
    """Float membership of each ``(xs[i], ys[i])`` in the strip minus obstacles."""
    slits = list(zip(slit_x.tolist(), slit_s0.tolist(), slit_s1.tolist()))
    teeth = list(zip(tooth_apex.tolist(), tooth_hw.tolist(), tooth_anchor.tolist()))
    out = np.empty(len(xs), dtype=np.uint8)
    for i, (x, y) in enumerate(zip(xs.tolist(), ys.tolist())):
        ok = y_lo < y < y_hi
        if ok:
            for sx, s0, s1 in slits:
                if abs(x - sx) <= slit_tol and s0 <= y <= s1:
                    ok = False
                    break
        if ok:
            for apex, hw, anchor in teeth:
                s = (x - apex) / hw
                if abs(s) <= 1.0:
                    h = math.exp(1.0 - 1.0 / (1.0 - s * s)) if abs(s) < 1.0 else 0.0
                    if anchor > 0:
                        if y <= y_lo + (mid - y_lo) * h:
                            ok = False
                            break
                    elif y >= y_hi - (y_hi - mid) * h:
                        ok = False
                        break
        out[i] = ok
    return out
