"""Compare the compiled and pure-Python kernels on the connectivity and membership workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from tubehyp import _pykernels
from tubehyp.geometry import build_figure1, build_figure2, connectivity_grid, kernel_arrays

try:
    from tubehyp import _ckernels
except ImportError:
    _ckernels = None


def _workloads():
    for domain in (build_figure1(), build_figure2()):
        free, hblock, xs, ys = connectivity_grid(domain, 2e-2)
        rng = np.random.default_rng(0)
        px = rng.uniform(-8.0, 8.0, 200_000)
        py = rng.uniform(0.0, 4.0, 200_000)
        arrs = kernel_arrays(domain)
        yield f"{domain.name} flood fill {free.shape[1]}x{free.shape[0]}", lambda m, f=free, h=hblock: m.flood_fill_count(f, h)
        yield f"{domain.name} membership 2e5 pts", lambda m, a=arrs, x=px, y=py: m.points_in_domain(x, y, *a)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    mods = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels is not None else [])
    if _ckernels is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'workload':36s} " + " ".join(f"{name:>10s}" for name, _ in mods) + "   speedup")
    for label, fn in _workloads():
        results = [fn(m) for _, m in mods]
        if len(results) == 2:
            a, b = results
            same = np.array_equal(np.asarray(a), np.asarray(b))
            assert same, f"backends disagree on {label}"
        times = [min(timeit.repeat(lambda m=m: fn(m), number=1, repeat=args.repeat)) for _, m in mods]
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else ""
        print(f"{label:36s} " + " ".join(f"{t * 1e3:8.1f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
