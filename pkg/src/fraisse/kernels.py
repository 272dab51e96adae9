"""Accelerated inner loops with a pure-NumPy fallback.

Two searches dominate the package's runtime: scanning all (subset, type)
extension demands of a graph (used by generic-model closure and
extension-property certification, ~C(N,3)*8 demands at level 3), and
scanning all combinations of index sets for a monochromatic sub-box of a
colored grid.  Both are plain nested integer loops, so they carry
``numba.njit`` kernels.

Set the environment variable ``FRAISSE_PURE_NUMPY=1`` to skip numba and
use the vectorized NumPy fallbacks instead (slower but dependency-light);
``benchmarks/bench_kernels.py`` compares the two paths.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

USE_NUMBA = os.environ.get("FRAISSE_PURE_NUMPY", "") != "1"

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if USE_NUMBA:

    @njit(cache=True)
    def _missing_graph_demands_numba(adj, vmax, level):  # pragma: no cover
        """Missing (D, type-mask) demands among subsets whose maximum
        element is ``vmax``; rows are (d0, d1, d2, mask) with -1 padding."""
        n = adj.shape[0]
        out = np.empty((8 * (1 + vmax + (vmax * (vmax - 1)) // 2), 4), np.int64)
        count = 0
        # size-1 subsets {vmax}
        if level >= 1:
            realized = np.zeros(2, np.uint8)
            for v in range(n):
                if v != vmax:
                    realized[adj[vmax, v]] = 1
            for mask in range(2):
                if realized[mask] == 0:
                    out[count, 0] = vmax
                    out[count, 1] = -1
                    out[count, 2] = -1
                    out[count, 3] = mask
                    count += 1
        # size-2 subsets {d0, vmax}
        if level >= 2:
            for d0 in range(vmax):
                realized = np.zeros(4, np.uint8)
                for v in range(n):
                    if v != d0 and v != vmax:
                        realized[adj[d0, v] + 2 * adj[vmax, v]] = 1
                for mask in range(4):
                    if realized[mask] == 0:
                        out[count, 0] = d0
                        out[count, 1] = vmax
                        out[count, 2] = -1
                        out[count, 3] = mask
                        count += 1
        # size-3 subsets {d0, d1, vmax}
        if level >= 3:
            for d0 in range(vmax):
                for d1 in range(d0 + 1, vmax):
                    realized = np.zeros(8, np.uint8)
                    for v in range(n):
                        if v != d0 and v != d1 and v != vmax:
                            realized[
                                adj[d0, v] + 2 * adj[d1, v] + 4 * adj[vmax, v]
                            ] = 1
                    for mask in range(8):
                        if realized[mask] == 0:
                            out[count, 0] = d0
                            out[count, 1] = d1
                            out[count, 2] = vmax
                            out[count, 3] = mask
                            count += 1
        return out[:count]

    @njit(cache=True)
    def _mono_box_2d_numba(grid, m, color):  # pragma: no cover
        """First pair of row/column index sets of size m whose product is
        constantly ``color``; returns a flat array [rows..., cols...] or an
        empty array."""
        n0, n1 = grid.shape
        rows = np.empty(m, np.int64)
        cols = np.empty(m, np.int64)
        # iterate over m-combinations of rows via odometer
        idx = np.arange(m)
        while True:
            # columns where all chosen rows have the color
            good = np.empty(n1, np.uint8)
            ngood = 0
            for j in range(n1):
                ok = True
                for r in range(m):
                    if grid[idx[r], j] != color:
                        ok = False
                        break
                good[j] = 1 if ok else 0
                if ok:
                    ngood += 1
            if ngood >= m:
                taken = 0
                for j in range(n1):
                    if good[j] == 1 and taken < m:
                        cols[taken] = j
                        taken += 1
                for r in range(m):
                    rows[r] = idx[r]
                out = np.empty(2 * m, np.int64)
                out[:m] = rows
                out[m:] = cols
                return out
            # advance odometer
            pos = m - 1
            while pos >= 0 and idx[pos] == n0 - m + pos:
                pos -= 1
            if pos < 0:
                break
            idx[pos] += 1
            for q in range(pos + 1, m):
                idx[q] = idx[q - 1] + 1
        return np.empty(0, np.int64)


def missing_graph_demands(adj: np.ndarray, vmax: int, level: int) -> list:
    """Missing extension demands (subset with max element ``vmax``, type
    mask) of a graph adjacency matrix, as (points, mask) pairs.

    A demand for subset D = (d_0 < ... < d_{s-1}) and mask b asks for a
    vertex v outside D with adj[d_i, v] == bit i of b for all i.
    """
    if USE_NUMBA:
        rows = _missing_graph_demands_numba(
            np.ascontiguousarray(adj, dtype=np.uint8), vmax, level
        )
        return [
            (tuple(int(x) for x in row[:3] if x >= 0), int(row[3]))
            for row in rows
        ]
    return _missing_graph_demands_numpy(adj, vmax, level)


def _missing_graph_demands_numpy(adj: np.ndarray, vmax: int, level: int) -> list:
    n = adj.shape[0]
    a = adj.astype(np.int8)
    out = []
    others = np.ones(n, dtype=bool)
    others[vmax] = False

    def scan(points):
        weights = np.zeros(n, dtype=np.int8)
        alive = others.copy()
        for bit, d in enumerate(points):
            weights = weights + (a[d] << bit)
            alive[d] = False
        realized = np.zeros(2 ** len(points), dtype=bool)
        realized[weights[alive]] = True
        for mask in np.flatnonzero(~realized):
            out.append((points, int(mask)))

    if level >= 1:
        scan((vmax,))
    if level >= 2:
        for d0 in range(vmax):
            scan((d0, vmax))
    if level >= 3:
        for d0, d1 in itertools.combinations(range(vmax), 2):
            scan((d0, d1, vmax))
    return out


def graph_demand_met(adj: np.ndarray, points: tuple, mask: int) -> bool:
    """Quick recheck of a single demand against a (possibly grown) graph."""
    n = adj.shape[0]
    alive = np.ones(n, dtype=bool)
    ok = alive
    for bit, d in enumerate(points):
        want = bool((mask >> bit) & 1)
        ok = ok & (adj[d].astype(bool) == want)
        alive[d] = False
    return bool(np.any(ok & alive))


def find_mono_box_2d(grid: np.ndarray, m: int, color: int):
    """First (rows, cols) index sets of size m with ``grid`` constantly
    ``color`` on their product, or None."""
    if USE_NUMBA:
        flat = _mono_box_2d_numba(
            np.ascontiguousarray(grid, dtype=np.int64), m, color
        )
        if flat.size == 0:
            return None
        return tuple(int(x) for x in flat[:m]), tuple(int(x) for x in flat[m:])
    mask = grid == color
    n0 = grid.shape[0]
    for rows in itertools.combinations(range(n0), m):
        common = np.flatnonzero(np.logical_and.reduce(mask[list(rows)]))
        if common.size >= m:
            return rows, tuple(int(c) for c in common[:m])
    return None
