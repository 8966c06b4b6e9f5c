"""Time the compiled and pure-Python eigen-kernels on the Rayleigh pencils.

Usage: python3 benchmarks/bench_kernels.py [--grids 256 1024 4096] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hardylab import _kernels_py
from hardylab.model import build_model
from hardylab.rayleigh import assemble, rayleigh_nodes

try:
    from hardylab import _kernels as _compiled
except ImportError:
    _compiled = None


def best_time(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", type=int, nargs="+", default=[256, 1024, 4096])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    m = build_model(2)
    print(f"{'grid':>6} {'python [ms]':>12} {'cython [ms]':>12} {'speedup':>8} {'identical':>9}")
    for g in args.grids:
        pen = assemble(m, rayleigh_nodes(m, 1e-4 * m.diam, g))
        call = (pen.kd, pen.ko, pen.md, pen.mo, np.ones(len(pen.kd)), 0.0, 1e-8, 10_000)
        tp = best_time(lambda: _kernels_py.inverse_iteration(*call), args.repeat)
        ref = _kernels_py.inverse_iteration(*call)
        if _compiled is None:
            print(f"{g:>6} {1e3 * tp:>12.3f} {'n/a':>12} {'n/a':>8} {'n/a':>9}")
            continue
        tc = best_time(lambda: _compiled.inverse_iteration(*call), args.repeat)
        out = _compiled.inverse_iteration(*call)
        same = out[0] == ref[0] and np.array_equal(out[1], ref[1])
        print(f"{g:>6} {1e3 * tp:>12.3f} {1e3 * tc:>12.3f} {tp / tc:>8.1f} {str(same):>9}")


if __name__ == "__main__":
    main()
