"""The compiled kernels agree with the pure-Python fallback."""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from tubehyp import _pykernels, kernels
from tubehyp.geometry import connectivity_grid, kernel_arrays

ckernels = pytest.importorskip("tubehyp._ckernels", reason="compiled extension not built")


@pytest.mark.parametrize("name", ["fig1", "fig2", "fig1_mut"])
def test_membership_agrees(name, request):
    dom = request.getfixturevalue(name)
    rng = np.random.default_rng(31)
    xs = rng.uniform(-8, 8, 50_000)
    ys = rng.uniform(-0.5, 4.5, xs.size)
    # include points exactly on slits and tooth apexes
    extra = [(s.x.mid, y) for s in dom.slits() for y in (s.span.lo, s.span.hi, 2.0)]
    extra += [(t.apex.value, 2.0) for t in dom.teeth()]
    if extra:
        ex, ey = map(np.array, zip(*extra))
        xs, ys = np.concatenate([xs, ex]), np.concatenate([ys, ey])
    arrs = kernel_arrays(dom)
    for tol in (0.0, 1e-3):
        a = _pykernels.points_in_domain(xs, ys, *arrs, slit_tol=tol)
        b = ckernels.points_in_domain(xs, ys, *arrs, slit_tol=tol)
        assert np.array_equal(np.asarray(a), np.asarray(b))


@pytest.mark.parametrize("name", ["fig1", "fig2"])
def test_flood_fill_agrees(name, request):
    free, hblock, _, _ = connectivity_grid(request.getfixturevalue(name), 0.05)
    assert _pykernels.flood_fill_count(free, hblock) == ckernels.flood_fill_count(free, hblock) == int(free.sum())


def test_flood_fill_detects_wall():
    free = np.ones((6, 8), dtype=np.uint8)
    hblock = np.zeros((6, 7), dtype=np.uint8)
    hblock[:, 3] = 1
    assert _pykernels.flood_fill_count(free, hblock) == ckernels.flood_fill_count(free, hblock) == 24
    assert _pykernels.flood_fill_count(np.zeros((2, 2), np.uint8), np.zeros((2, 1), np.uint8)) == 0


def test_backend_selection():
    assert kernels.BACKEND == "cython"
    env = {**os.environ, "TUBEHYP_PURE_PYTHON": "1"}
    out = subprocess.run(
        [sys.executable, "-c", "from tubehyp import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"
