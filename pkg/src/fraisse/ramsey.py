"""Monochromatic combinatorial boxes in colored grids.

A combinatorial box of side m in the grid n^k is a product of k index
sets of size m.  The point finder looks for a box on which a point
coloring is constant; the directed finder works with colorings of
(unordered, possibly degenerate) pairs and demands constancy separately
for every *direction*: the sign vector recording, coordinate by
coordinate, how the two endpoints compare.  Normalizing the first
nonzero sign to +1 leaves (3^k + 1)/2 directions, the all-zero vector
standing for singletons.

The upper-bound calculator evaluates the standard recursions on top of
a pluggable classical Ramsey bound (default: the additive multicolor
bound for 2-subsets, pigeonhole for 1-subsets).  Values are guaranteed
sufficient, never tight, and explode quickly; everything is big-integer
arithmetic.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .kernels import find_mono_box_2d

import numpy as np


# -- directions -----------------------------------------------------------------


def directions(k: int) -> list[tuple[int, ...]]:
    """All sign vectors of length k over {-1, 0, 1} whose first nonzero
    entry is +1, plus the zero vector, in lexicographic order."""
    if k < 1:
        raise ValueError(f"k {k} < 1")
    out = []
    for t in itertools.product((-1, 0, 1), repeat=k):
        nonzero = next((x for x in t if x != 0), None)
        if nonzero is None or nonzero == 1:
            out.append(t)
    return out


def leq_t(a, b, t) -> bool:
    """Pointwise comparison along a direction: coordinate i must satisfy
    a_i < b_i, a_i = b_i, or a_i > b_i as t_i is 1, 0, or -1."""
    for x, y, s in zip(a, b, t):
        if s == 1 and not x < y:
            return False
        if s == 0 and x != y:
            return False
        if s == -1 and not x > y:
            return False
    return True


def direction_of(a, b) -> tuple[int, ...]:
    """The unique direction t with a <=_t b, for a <=_lex b."""
    if tuple(a) > tuple(b):
        raise ValueError("expected a <=_lex b")
    return tuple((x < y) - (x > y) for x, y in zip(a, b))


# -- colorings -------------------------------------------------------------------


@dataclass
class BoxColoring:
    """A coloring of the grid n^k: point colors in row-major order, and
    optionally colors for unordered (possibly degenerate) pairs of
    points, keyed by lexicographically ordered point indices."""

    k: int
    n: int
    colors: int
    point_map: list | None = None
    pair_map: dict | None = None

    def __post_init__(self):
        size = self.n**self.k
        if self.point_map is not None:
            if len(self.point_map) != size:
                raise ValueError(
                    f"point map has {len(self.point_map)} entries, grid has {size}"
                )
            bad = [c for c in self.point_map if not 0 <= c < self.colors]
            if bad:
                raise ValueError(f"color {bad[0]} out of range({self.colors})")
        if self.pair_map is not None:
            for (a, b), c in self.pair_map.items():
                if not (0 <= a <= b < size):
                    raise ValueError(f"bad pair key ({a}, {b})")
                if not 0 <= c < self.colors:
                    raise ValueError(f"color {c} out of range({self.colors})")

    def points(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.n), repeat=self.k))

    def index(self, point) -> int:
        idx = 0
        for c in point:
            idx = idx * self.n + c
        return idx

    def point_color(self, point) -> int:
        return self.point_map[self.index(point)]

    def pair_color(self, a, b) -> int:
        i, j = sorted((self.index(a), self.index(b)))
        return self.pair_map[(i, j)]

    def to_json(self) -> dict:
        data = {"k": self.k, "n": self.n, "colors": self.colors}
        if self.point_map is not None:
            data["points"] = list(self.point_map)
        if self.pair_map is not None:
            data["pairs"] = {
                f"[{a},{b}]": c for (a, b), c in sorted(self.pair_map.items())
            }
        return data

    @classmethod
    def from_json(cls, data: dict) -> "BoxColoring":
        pair_map = None
        if "pairs" in data:
            pair_map = {}
            for key, c in data["pairs"].items():
                a, b = json.loads(key)
                pair_map[(a, b)] = c
        return cls(
            int(data["k"]),
            int(data["n"]),
            int(data["colors"]),
            list(data["points"]) if "points" in data else None,
            pair_map,
        )


def random_point_coloring(k: int, n: int, colors: int, seed: int) -> BoxColoring:
    rng = random.Random(seed)
    return BoxColoring(
        k, n, colors, [rng.randrange(colors) for _ in range(n**k)]
    )


def random_pair_coloring(k: int, n: int, colors: int, seed: int) -> BoxColoring:
    rng = random.Random(seed)
    size = n**k
    pair_map = {
        (a, b): rng.randrange(colors)
        for a in range(size)
        for b in range(a, size)
    }
    return BoxColoring(k, n, colors, None, pair_map)


# -- the point finder -------------------------------------------------------------


def find_monochromatic_box(coloring: BoxColoring, m: int):
    """Index sets Y_0..Y_{k-1} of size m whose product box is constant
    under the point coloring, or None after exhaustive search.

    Search order: color-major, then lexicographic over index-set
    combinations, so the first hit is canonical.  Per color, only indices
    whose axis-aligned slice meets the color enough times are candidates.
    """
    if coloring.point_map is None:
        raise ValueError("point finder needs a point map")
    if m > coloring.n:
        raise ValueError(f"m {m} exceeds side {coloring.n}")
    k, n = coloring.k, coloring.n
    if k == 2:
        grid = np.array(coloring.point_map, dtype=np.int64).reshape(n, n)
        for color in range(coloring.colors):
            hit = find_mono_box_2d(grid, m, color)
            if hit is not None:
                return [list(hit[0]), list(hit[1])]
        return None
    points = coloring.points()
    for color in range(coloring.colors):
        slices = [
            [
                i
                for i in range(n)
                if sum(
                    1
                    for p in points
                    if p[axis] == i and coloring.point_color(p) == color
                )
                >= m ** (k - 1)
            ]
            for axis in range(k)
        ]
        if any(len(s) < m for s in slices):
            continue
        for sets in itertools.product(
            *(itertools.combinations(s, m) for s in slices)
        ):
            if all(
                coloring.point_color(p) == color for p in itertools.product(*sets)
            ):
                return [list(s) for s in sets]
    return None


# -- the directed finder -------------------------------------------------------------


def check_directed_box(coloring: BoxColoring, sets) -> bool:
    """Independent constancy re-check: for every direction t, the colors
    of the pairs a <=_t b inside the box agree."""
    box = list(itertools.product(*sets))
    for t in directions(coloring.k):
        seen = None
        for a in box:
            for b in box:
                if leq_t(a, b, t):
                    c = coloring.pair_color(a, b)
                    if seen is None:
                        seen = c
                    elif c != seen:
                        return False
    return True


def find_monochromatic_directed_box(coloring: BoxColoring, m: int):
    """Index sets Y_0..Y_{k-1} of size m such that the pair coloring is
    constant on each direction class of the box, or None (exhaustive)."""
    if coloring.pair_map is None:
        raise ValueError("directed finder needs a pair map")
    if m > coloring.n:
        raise ValueError(f"m {m} exceeds side {coloring.n}")
    k, n = coloring.k, coloring.n
    dirs = directions(k)
    for sets in itertools.product(
        *(itertools.combinations(range(n), m) for _ in range(k))
    ):
        box = list(itertools.product(*sets))
        ok = True
        for t in dirs:
            seen = None
            for a in box:
                for b in box:
                    if leq_t(a, b, t):
                        c = coloring.pair_color(a, b)
                        if seen is None:
                            seen = c
                        elif c != seen:
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return [list(s) for s in sets]
    return None


# -- upper bounds ------------------------------------------------------------------------


def multicolor_ramsey_upper(sizes: tuple[int, ...]) -> int:
    """Upper bound for the 2-subset multicolor Ramsey number: any
    len(sizes)-coloring of the pairs of this many points yields, for some
    i, a set of sizes[i] points whose pairs all carry color i.

    Few small colors use the additive recurrence
    R(v) <= 2 - r + sum_i R(.., v_i - 1, ..); otherwise the multinomial
    bound (sum (v_i - 1))! / prod (v_i - 1)! (which the recurrence never
    beats asymptotically but is always valid)."""
    sizes = tuple(sorted(sizes))
    if len(sizes) <= 3 and sum(sizes) <= 40:
        return _ramsey2(sizes)
    total = math.factorial(sum(s - 1 for s in sizes))
    for s in sizes:
        total //= math.factorial(s - 1)
    return total


@lru_cache(maxsize=None)
def _ramsey2(sizes: tuple[int, ...]) -> int:
    if any(s <= 1 for s in sizes):
        return 1
    if len(sizes) == 1:
        return sizes[0]
    total = 2 - len(sizes)
    for i in range(len(sizes)):
        smaller = sizes[:i] + (sizes[i] - 1,) + sizes[i + 1 :]
        total += _ramsey2(tuple(sorted(smaller)))
    return total


def box_ramsey_upper_bound(
    k: int, colors: int, m: int, kind: str = "point", ramsey2=None
) -> int:
    """A grid side guaranteed to contain a monochromatic side-m box.

    Point kind: dimension 1 is the pigeonhole colors*(m-1)+1; each added
    dimension colors the slices of the previous box by their full induced
    coloring and pigeonholes again with colors**(side**k) super-colors.

    Directed kind: dimension 1 reduces to the classical 2-subset Ramsey
    number at clique size colors*(m-1)+1 (constant pair color on a
    clique, then pigeonhole the point colors); each added dimension first
    solves dimension k with colors**(|directions| * 2) super-colors
    (pair-of-slices colorings split by direction and endpoint order),
    then pigeonholes the new axis with colors**(side**2) induced colors.
    """
    if min(k, colors, m) < 1:
        raise ValueError(f"need k, colors, m >= 1, got {(k, colors, m)}")
    if kind not in ("point", "directed"):
        raise ValueError(f"unknown kind {kind!r}")
    if ramsey2 is None:
        ramsey2 = multicolor_ramsey_upper
    if colors == 1:
        return m
    if kind == "point":
        n = colors * (m - 1) + 1
        for dim in range(2, k + 1):
            n = max(n, (m - 1) * colors ** (n ** (dim - 1)) + 1)
        return max(n, m)
    s = colors * (m - 1) + 1
    n = ramsey2((s,) * colors)
    for dim in range(2, k + 1):
        inner_colors = colors ** (len(directions(dim - 1)) * 2)
        n_prev = box_ramsey_upper_bound(
            dim - 1, inner_colors, m, kind="directed", ramsey2=ramsey2
        )
        if n_prev.bit_length() > 64:
            raise OverflowError(
                f"directed bound explodes at dimension {dim}: the inner side "
                f"already needs {n_prev.bit_length()} bits"
            )
        axis_colors = colors ** (n_prev**2)
        s_axis = axis_colors * (m - 1) + 1
        n_axis = ramsey2((s_axis,) * axis_colors)
        n = max(n_prev, n_axis)
    return max(n, m)
