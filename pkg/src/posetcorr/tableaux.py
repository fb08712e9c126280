"""Young diagrams, standard Young tableaux counts, corner inequalities and
the hook walk.

Cells are 1-indexed ``(row, col)`` pairs.  A shape is a :class:`SkewShape`;
straight shapes have an empty inner partition.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Iterator, Sequence

from . import counting
from .inequalities import PreconditionViolated, UnknownCheck
from .poset import Poset, from_relations
from .rng import SplitMix64
from .verdict import EQUALITY, FAILS, HOLDS, VACUOUS, Verdict, product_verdict, ratio_verdict

Cell = tuple[int, int]
Partition = tuple[int, ...]


class EmptyShape(ValueError):
    pass


class NonIntegralDeterminant(ArithmeticError):
    pass


def partition(parts: Iterable[int]) -> Partition:
    """Normalize to a weakly decreasing tuple without zeros."""
    p = tuple(int(v) for v in parts if v)
    if any(v < 0 for v in p) or any(a < b for a, b in zip(p, p[1:])):
        raise ValueError(f"not a partition: {p}")
    return p


def conjugate(lam: Sequence[int]) -> Partition:
    lam = partition(lam)
    return tuple(sum(1 for v in lam if v >= j) for j in range(1, (lam[0] if lam else 0) + 1))


def part_sum(lam: Sequence[int], mu: Sequence[int]) -> Partition:
    a, b = partition(lam), partition(mu)
    return tuple(x + y for x, y in itertools.zip_longest(a, b, fillvalue=0))


def part_union(lam: Sequence[int], mu: Sequence[int]) -> Partition:
    return tuple(sorted(partition(lam) + partition(mu), reverse=True))


def sort1(beta: Sequence[int], gamma: Sequence[int]) -> Partition:
    return part_union(beta, gamma)[0::2]


def sort2(beta: Sequence[int], gamma: Sequence[int]) -> Partition:
    return part_union(beta, gamma)[1::2]


def halve(lam: Sequence[int]) -> Partition:
    lam = partition(lam)
    if any(v % 2 for v in lam):
        raise ValueError("partition has odd parts")
    return tuple(v // 2 for v in lam)


@dataclass(frozen=True)
class SkewShape:
    outer: Partition
    inner: Partition = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "outer", partition(self.outer))
        object.__setattr__(self, "inner", partition(self.inner))
        if len(self.inner) > len(self.outer) or any(m > l for l, m in zip(self.outer, self.inner)):
            raise ValueError(f"{self.inner} is not contained in {self.outer}")

    @classmethod
    def parse(cls, text: str) -> "SkewShape":
        """``"10,9,9,7/4,3,1"`` or ``"3,2"``."""
        outer, _, inner = text.partition("/")
        to = lambda s: tuple(int(v) for v in s.replace(" ", "").split(",") if v)  # noqa: E731
        return cls(to(outer), to(inner))

    def __str__(self) -> str:
        s = ",".join(map(str, self.outer))
        return s + ("/" + ",".join(map(str, self.inner)) if self.inner else "")

    @property
    def is_straight(self) -> bool:
        return not self.inner

    def row_bounds(self, i: int) -> tuple[int, int]:
        lo = self.inner[i - 1] if i <= len(self.inner) else 0
        hi = self.outer[i - 1] if i <= len(self.outer) else 0
        return lo, hi

    @property
    def cells(self) -> tuple[Cell, ...]:
        return tuple(
            (i, j) for i in range(1, len(self.outer) + 1) for j in range(self.row_bounds(i)[0] + 1, self.row_bounds(i)[1] + 1)
        )

    @property
    def size(self) -> int:
        return sum(self.outer) - sum(self.inner)

    def __contains__(self, cell: Cell) -> bool:
        i, j = cell
        if i < 1:
            return False
        lo, hi = self.row_bounds(i)
        return lo < j <= hi

    def conjugate(self) -> "SkewShape":
        return SkewShape(conjugate(self.outer), conjugate(self.inner))

    def remove(self, cells: Iterable[Cell]) -> "SkewShape | None":
        """The shape with ``cells`` deleted, or None if that is not a skew diagram."""
        gone = set(cells)
        if not gone <= set(self.cells):
            return None
        return shape_from_cells(set(self.cells) - gone)


def as_shape(shape) -> SkewShape:
    if isinstance(shape, SkewShape):
        return shape
    if isinstance(shape, str):
        return SkewShape.parse(shape)
    return SkewShape(tuple(shape))


def shape_from_cells(cells: set[Cell]) -> SkewShape | None:
    """Recover ``lambda/mu`` from a cell set, or None if it is not order-convex."""
    if not cells:
        return SkewShape(())
    rows = max(i for i, _ in cells)
    outer = [0] * rows
    for i, j in cells:
        outer[i - 1] = max(outer[i - 1], j)
    for i in range(rows - 2, -1, -1):
        outer[i] = max(outer[i], outer[i + 1])
    down = {(i, j) for i in range(1, rows + 1) for j in range(1, outer[i - 1] + 1)}
    rest = down - cells
    inner = [0] * rows
    for i, j in rest:
        inner[i - 1] = max(inner[i - 1], j)
    # the complement inside the down-closure must itself be a Young diagram
    if any(inner[i] < inner[i + 1] for i in range(rows - 1)):
        return None
    if rest != {(i, j) for i in range(1, rows + 1) for j in range(1, inner[i - 1] + 1)}:
        return None
    return SkewShape(tuple(outer), tuple(inner))


def corners(shape) -> list[Cell]:
    s = as_shape(shape)
    return [(i, j) for i, j in s.cells if (i + 1, j) not in s and (i, j + 1) not in s]


def boundary(shape) -> list[Cell]:
    s = as_shape(shape)
    return [(i, j) for i, j in s.cells if (i + 1, j) not in s or (i, j + 1) not in s]


def adjacent_unique_cover(shape, corner: Cell) -> list[Cell]:
    """Boundary squares v directly left of or above ``corner`` whose only
    successor inside the diagram is ``corner`` itself."""
    s = as_shape(shape)
    i, j = corner
    if corner not in corners(s):
        raise PreconditionViolated(f"{corner} is not a corner")
    out = []
    for v, other in (((i - 1, j), (i - 1, j + 1)), ((i, j - 1), (i + 1, j - 1))):
        if v in s and other not in s:
            out.append(v)
    return sorted(out)


# -- counting ---------------------------------------------------------------------


def hook_length_count(lam: Sequence[int]) -> int:
    lam = partition(lam)
    conj = conjugate(lam)
    hooks = prod(lam[i - 1] - j + conj[j - 1] - i + 1 for i in range(1, len(lam) + 1) for j in range(1, lam[i - 1] + 1))
    return factorial(sum(lam)) // hooks


def _inv_fact(m: int) -> Fraction:
    return Fraction(0) if m < 0 else Fraction(1, factorial(m))


def _det(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    a = [r[:] for r in rows]
    n, det = len(a), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def aitken_feit_count(shape) -> int:
    s = as_shape(shape)
    lam, mu = s.outer, s.inner + (0,) * (len(s.outer) - len(s.inner))
    l = len(lam)
    M = [[_inv_fact(lam[i] - mu[j] - i + j) for j in range(l)] for i in range(l)]
    val = factorial(s.size) * _det(M)
    if val.denominator != 1:
        raise NonIntegralDeterminant(f"{s}: {val}")
    return int(val)


def shape_poset(shape) -> tuple[Poset, tuple[Cell, ...]]:
    """Cell poset ordered by (i, j) <= (i', j') iff i <= i' and j <= j'."""
    s = as_shape(shape)
    cells = s.cells
    idx = {c: k for k, c in enumerate(cells)}
    rel = [(idx[c], idx[d]) for c in cells for d in ((c[0] + 1, c[1]), (c[0], c[1] + 1)) if d in idx]
    return from_relations(len(cells), rel), cells


@lru_cache(maxsize=1 << 16)
def _syt_count(s: SkewShape) -> int:
    return hook_length_count(s.outer) if s.is_straight else aitken_feit_count(s)


def syt_count(shape, method: str = "formula") -> int:
    """|SYT(shape)|: hook lengths or Aitken-Feit (``"formula"``), or linear
    extensions of the cell poset (``"poset"``)."""
    s = as_shape(shape)
    if method == "poset":
        return counting.count(shape_poset(s)[0])
    if method != "formula":
        raise ValueError(f"unknown method {method!r}")
    return _syt_count(s)


def _count_or_none(s: SkewShape | None) -> int | None:
    return None if s is None else syt_count(s)


# -- partitions and skew shapes for sweeps ----------------------------------------


@lru_cache(maxsize=None)
def partitions_of(n: int, max_part: int | None = None) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    top = n if max_part is None else min(n, max_part)
    return tuple((k,) + rest for k in range(top, 0, -1) for rest in partitions_of(n - k, k))


def straight_shapes(max_size: int, min_size: int = 1) -> Iterator[SkewShape]:
    for n in range(min_size, max_size + 1):
        for lam in partitions_of(n):
            yield SkewShape(lam)


def contained_partitions(lam: Partition) -> Iterator[Partition]:
    def rec(i: int, cap: int) -> Iterator[Partition]:
        if i == len(lam):
            yield ()
            return
        for v in range(min(cap, lam[i]), -1, -1):
            for rest in rec(i + 1, v):
                yield partition((v,) + rest)

    seen = set()
    for p in rec(0, lam[0] if lam else 0):
        if p not in seen:
            seen.add(p)
            yield p


def _translate_key(s: SkewShape) -> tuple[Cell, ...]:
    cs = s.cells
    r0 = min(i for i, _ in cs)
    c0 = min(j for _, j in cs)
    return tuple(sorted((i - r0, j - c0) for i, j in cs))


def skew_shapes(max_size: int, min_size: int = 1, max_inner: int = 4) -> Iterator[SkewShape]:
    """Proper skew shapes with ``min_size <= |lambda/mu| <= max_size`` and
    ``1 <= |mu| <= max_inner``, one per cell set up to translation.

    Disconnected diagrams can be spread arbitrarily far apart, so some cap on
    the inner partition is needed to make the family finite.
    """
    seen: set[tuple[Cell, ...]] = set()
    for total in range(2, max_size + max_inner + 1):
        for lam in partitions_of(total):
            for mu in contained_partitions(lam):
                if mu and sum(mu) <= max_inner and min_size <= total - sum(mu) <= max_size:
                    s = SkewShape(lam, mu)
                    key = _translate_key(s)
                    if key not in seen:
                        seen.add(key)
                        yield s


# -- inequality checks ---------------------------------------------------------------


def _vacuous(check_id: str, witness: dict) -> Verdict:
    return Verdict(check_id, Fraction(0), Fraction(0), "n/a", VACUOUS, witness)


def _wit(shape: SkewShape, **cells) -> dict:
    params = {k: list(v) if isinstance(v, tuple) else v for k, v in cells.items()}
    return {"shape": str(shape), "params": params}


def _require_corners(s: SkewShape, *xs: Cell) -> None:
    cs = set(corners(s))
    if len(set(xs)) != len(xs) or not all(x in cs for x in xs):
        raise PreconditionViolated("expected distinct corners")


def _require_adjacent(s: SkewShape, x: Cell, v: Cell) -> None:
    if v not in adjacent_unique_cover(s, x):
        raise PreconditionViolated(f"{v} is not a boundary square adjacent to {x}")


def _counts(s: SkewShape, *removals: Sequence[Cell]) -> list[int] | None:
    out = []
    for cells in removals:
        c = _count_or_none(s.remove(cells))
        if c is None:
            return None
        out.append(c)
    return out


def yt_corner_lc(shape, x: Cell, y: Cell, v: Cell, w: Cell) -> Verdict:
    s = as_shape(shape)
    wit = _wit(s, x=x, y=y, v=v, w=w)
    _require_corners(s, x)
    _require_corners(s, y)
    _require_adjacent(s, x, v)
    _require_adjacent(s, y, w)
    # x == y is allowed; removing one corner twice is not a shape
    c = None if x == y else _counts(s, (x, y), (x, v), (y, w))
    if c is None:
        return _vacuous("yt-corner-lc", wit)
    return product_verdict("yt-corner-lc", c[0] ** 2, c[1] * c[2], ">=", wit)


def _is_self_conjugate(s: SkewShape) -> bool:
    return conjugate(s.outer) == s.outer and conjugate(s.inner) == s.inner


def yt_self_conj(shape, x: Cell, v: Cell) -> Verdict:
    s = as_shape(shape)
    y = (x[1], x[0])
    wit = _wit(s, x=x, v=v)
    if not _is_self_conjugate(s):
        raise PreconditionViolated("outer and inner partitions must be self-conjugate")
    _require_corners(s, x, y)
    _require_adjacent(s, x, v)
    c = _counts(s, (x, y), (x, v))
    if c is None:
        return _vacuous("yt-self-conj", wit)
    return product_verdict("yt-self-conj", c[0], c[1], ">=", wit)


def hook_shape(a: int, b: int) -> Partition:
    return partition((a,) + (1,) * b)


def yt_hook_lc(lam, a: int, b: int) -> Verdict:
    lam = partition(as_shape(lam).outer)
    wit = {"shape": ",".join(map(str, lam)), "params": {"a": a, "b": b}}
    if not (lam and 1 < a < lam[0] and 1 < b < len(lam)):
        raise PreconditionViolated("needs 1 < a < lambda_1 and 1 < b < length")
    # a hook that does not fit inside lam leaves no tableaux at all
    shapes = (_skew_or_none(lam, hook_shape(aa, bb)) for aa, bb in ((a, b), (a + 1, b - 1), (a - 1, b + 1)))
    counts = [0 if sk is None else syt_count(sk) for sk in shapes]
    return product_verdict("yt-hook-lc", counts[0] ** 2, counts[1] * counts[2], ">=", wit)


def yt_three(shape, x: Cell, y: Cell, z: Cell, u: Cell) -> Verdict:
    s = as_shape(shape)
    wit = _wit(s, x=x, y=y, z=z, u=u)
    _require_corners(s, x, y, z)
    _require_adjacent(s, z, u)
    c = _counts(s, (u, z), (x, y), (x, z), (y, z))
    if c is None:
        return _vacuous("yt-three", wit)
    return ratio_verdict("yt-three", c[0] * c[1], c[2] * c[3], 2, "<=", wit)


def _skew_or_none(outer, inner) -> SkewShape | None:
    try:
        return SkewShape(outer, inner)
    except ValueError:
        return None


def okounkov(lam, mu, nu, alpha) -> Verdict:
    A, B = SkewShape(lam, mu), SkewShape(nu, alpha)
    wit = {"shape": str(A), "params": {"second": str(B)}}
    if A.size != B.size:
        raise PreconditionViolated("the two skew shapes must have equal size")
    try:
        C = SkewShape(halve(part_sum(A.outer, B.outer)), halve(part_sum(A.inner, B.inner)))
    except ValueError as exc:
        raise PreconditionViolated(str(exc)) from None
    return product_verdict("okounkov", syt_count(C) ** 2, syt_count(A) * syt_count(B), ">=", wit)


def fflp(lam, mu, nu, alpha) -> Verdict:
    A, B = SkewShape(lam, mu), SkewShape(nu, alpha)
    wit = {"shape": str(A), "params": {"second": str(B)}}
    C1 = SkewShape(sort1(A.outer, B.outer), sort1(A.inner, B.inner))
    C2 = SkewShape(sort2(A.outer, B.outer), sort2(A.inner, B.inner))
    N = A.size + B.size
    if comb(N, C1.size) > comb(N, A.size):
        raise PreconditionViolated("sorted shapes are too unbalanced for the count form")
    return product_verdict("fflp", syt_count(C1) * syt_count(C2), syt_count(A) * syt_count(B), ">=", wit)


def fflp_corners(shape, x: Cell, y: Cell) -> Verdict:
    """v directly left of x and w directly above y."""
    s = as_shape(shape)
    v, w = (x[0], x[1] - 1), (y[0] - 1, y[1])
    wit = _wit(s, x=x, y=y, v=v, w=w)
    _require_corners(s, x, y)
    _require_adjacent(s, x, v)
    _require_adjacent(s, y, w)
    c = _counts(s, (y,), (x, y, v), (x, v), (y, w))
    if c is None:
        return _vacuous("fflp-corners", wit)
    return product_verdict("fflp-corners", c[0] * c[1], c[2] * c[3], ">=", wit)


def hw_sandwich(lam, x: Cell, y: Cell) -> Verdict:
    """n/(n-1) <= Pr[f(y)=n-1 | f(x)=n] / Pr[f(y)=n] <= 2 on a straight shape."""
    s = as_shape(lam)
    if not s.is_straight or s.size < 3:
        raise PreconditionViolated("needs a straight shape with at least 3 cells")
    _require_corners(s, x, y)
    c, cx, cy, cxy = (syt_count(s.remove(r)) for r in ((), (x,), (y,), (x, y)))
    r = Fraction(c * cxy, cx * cy)
    lo = Fraction(s.size, s.size - 1)
    status = FAILS if (r < lo or r > 2) else EQUALITY if r in (lo, 2) else HOLDS
    return Verdict("hw-sandwich", r, Fraction(2), "in [n/(n-1),2]", status, _wit(s, x=x, y=y))


SYT_CHECKS = {
    "yt-corner-lc": yt_corner_lc,
    "yt-self-conj": yt_self_conj,
    "yt-hook-lc": yt_hook_lc,
    "yt-three": yt_three,
    "okounkov": okounkov,
    "fflp": fflp,
    "fflp-corners": fflp_corners,
    "hw-sandwich": hw_sandwich,
}


def check_syt_inequality(check_id: str, *args, **kwargs) -> Verdict:
    try:
        fn = SYT_CHECKS[check_id]
    except KeyError:
        raise UnknownCheck(check_id) from None
    return fn(*args, **kwargs)


def _adjacent_or_empty(s: SkewShape, x: Cell) -> list[Cell]:
    return adjacent_unique_cover(s, x)


def shape_bindings(check_id: str, shape) -> Iterator[tuple]:
    """Every admissible argument tuple for a single-shape check."""
    s = as_shape(shape)
    cs = corners(s)
    if check_id == "yt-corner-lc":
        for x, y in itertools.product(cs, repeat=2):
            for v in _adjacent_or_empty(s, x):
                for w in _adjacent_or_empty(s, y):
                    yield (s, x, y, v, w)
    elif check_id == "yt-self-conj":
        if _is_self_conjugate(s):
            for x in cs:
                if x[0] != x[1] and (x[1], x[0]) in cs:
                    for v in _adjacent_or_empty(s, x):
                        yield (s, x, v)
    elif check_id == "yt-hook-lc":
        if s.is_straight and s.outer:
            for a in range(2, s.outer[0]):
                for b in range(2, len(s.outer)):
                    yield (s, a, b)
    elif check_id == "yt-three":
        for z in cs:
            for u in _adjacent_or_empty(s, z):
                for x, y in itertools.combinations([c for c in cs if c != z], 2):
                    yield (s, x, y, z, u)
    elif check_id == "fflp-corners":
        for x, y in itertools.permutations(cs, 2):
            if (x[0], x[1] - 1) in _adjacent_or_empty(s, x) and (y[0] - 1, y[1]) in _adjacent_or_empty(s, y):
                yield (s, x, y)
    elif check_id == "hw-sandwich":
        if s.is_straight and s.size >= 3:
            for x, y in itertools.permutations(cs, 2):
                yield (s, x, y)
    else:
        raise UnknownCheck(check_id)


def pair_bindings(check_id: str, shapes: Sequence[SkewShape]) -> Iterator[tuple]:
    """Admissible (lambda, mu, nu, alpha) tuples for the two-shape checks."""
    for A, B in itertools.combinations_with_replacement(shapes, 2):
        args = (A.outer, A.inner, B.outer, B.inner)
        if check_id == "okounkov":
            if A.size == B.size and all(v % 2 == 0 for v in part_sum(A.outer, B.outer) + part_sum(A.inner, B.inner)):
                yield args
        elif check_id == "fflp":
            N = A.size + B.size
            C1 = sort1(A.outer, B.outer)
            if comb(N, sum(C1) - sum(sort1(A.inner, B.inner))) <= comb(N, A.size):
                yield args
        else:
            raise UnknownCheck(check_id)


# -- hook walk ------------------------------------------------------------------


def hook(lam, cell: Cell) -> list[Cell]:
    """Cells strictly right of or strictly below ``cell`` in a straight shape."""
    lam = partition(as_shape(lam).outer)
    conj = conjugate(lam)
    i, j = cell
    return [(i, r) for r in range(j + 1, lam[i - 1] + 1)] + [(s, j) for s in range(i + 1, conj[j - 1] + 1)]


def _walk(cells: tuple[Cell, ...], hooks: dict[Cell, list[Cell]], rng: SplitMix64) -> Cell:
    cur = cells[rng.below(len(cells))]
    while hooks[cur]:
        h = hooks[cur]
        cur = h[rng.below(len(h))]
    return cur


def hook_walk_sample(lam, seed: int) -> Cell:
    """One corner drawn by the hook walk, deterministic in ``seed``."""
    return hook_walk_samples(lam, 1, seed)[0]


def hook_walk_samples(lam, count: int, seed: int) -> list[Cell]:
    s = as_shape(lam)
    if not s.is_straight:
        raise ValueError("the hook walk is defined for straight shapes")
    if not s.size:
        raise EmptyShape("the hook walk needs a nonempty shape")
    rng = SplitMix64(seed)
    cells = s.cells
    hooks = {c: hook(s, c) for c in cells}
    return [_walk(cells, hooks, rng) for _ in range(count)]


def corner_distribution(lam) -> dict[Cell, Fraction]:
    s = as_shape(lam)
    if not s.size:
        raise EmptyShape("empty shape has no corners")
    total = syt_count(s)
    return {x: Fraction(syt_count(s.remove([x])), total) for x in corners(s)}


def total_variation(samples: Sequence[Cell], dist: dict[Cell, Fraction]) -> float:
    freq = Counter(samples)
    n = len(samples)
    keys = set(freq) | set(dist)
    return 0.5 * sum(abs(freq.get(k, 0) / n - float(dist.get(k, 0))) for k in keys)
