"""Compare the compiled kernels against their pure-numpy fallbacks.

Run:  python3 benchmarks/bench_kernels.py

Covers the two hot paths: the missing-extension-demand scan that closes
and certifies generic graph models, and the monochromatic 2-d box scan.
Both paths must agree exactly; the benchmark asserts that before timing.
"""

from __future__ import annotations

import time

import numpy as np

from fraisse.classes import builtin
from fraisse.kernels import (
    USE_NUMBA,
    _missing_graph_demands_numpy,
    find_mono_box_2d,
    missing_graph_demands,
)
from fraisse.limits import build_generic_model
from fraisse.ramsey import random_point_coloring


def _time(fn, repeat: int = 5) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_demand_scan():
    model = build_generic_model(builtin("G"), level=3, size_cap=200)
    size = model.structure.size
    adj = np.zeros((size, size), dtype=np.uint8)
    name = model.structure.signature.names[0]
    for a, b in model.structure.relations[name]:
        adj[a, b] = 1
    vmax = size - 1
    fast = missing_graph_demands(adj, vmax, 3)
    slow = _missing_graph_demands_numpy(adj, vmax, 3)
    assert fast == slow, "kernel paths disagree on the demand scan"
    t_fast = _time(lambda: missing_graph_demands(adj, vmax, 3))
    t_slow = _time(lambda: _missing_graph_demands_numpy(adj, vmax, 3))
    label = "numba" if USE_NUMBA else "numpy (numba disabled)"
    print(f"demand scan, {size} vertices, level 3:")
    print(f"  selected path ({label}): {t_fast * 1e3:8.2f} ms")
    print(f"  pure-numpy fallback:     {t_slow * 1e3:8.2f} ms")
    if USE_NUMBA and t_fast > 0:
        print(f"  speedup: {t_slow / t_fast:.1f}x")


def bench_mono_box():
    grids = [
        np.array(random_point_coloring(2, 64, 2, seed).point_map).reshape(64, 64)
        for seed in range(20)
    ]

    def run():
        for grid in grids:
            find_mono_box_2d(grid, 3, 0)

    # agreement check against a fresh itertools-based reference
    import itertools

    def reference(grid, m, color):
        n = grid.shape[0]
        for rows in itertools.combinations(range(n), m):
            sub = grid[list(rows)]
            cols = np.flatnonzero((sub == color).all(axis=0))
            if len(cols) >= m:
                return list(rows), list(cols[:m])
        return None

    for grid in grids[:5]:
        assert (find_mono_box_2d(grid, 3, 0) is None) == (
            reference(grid, 3, 0) is None
        )
    t = _time(run, repeat=3)
    label = "numba" if USE_NUMBA else "numpy (numba disabled)"
    print(f"mono-box scan, 20 grids of 64x64, m=3 ({label}): {t * 1e3:8.2f} ms")


if __name__ == "__main__":
    bench_demand_scan()
    bench_mono_box()
