"""Exact counts of linear extensions.

Two independent routes are provided for every quantity:

* ``method="dp"`` walks the lattice of order ideals (downsets).  A linear
  extension is a maximal chain ∅ = D0 ⊂ D1 ⊂ ... ⊂ Dn = X; ``f(x) = k``
  means ``x`` is the element added at step k.
* ``method="enum"`` materializes every linear extension and filters.

Values are 1-indexed, so ``f(x) = 1`` means ``x`` comes first.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .poset import Poset, bits, mask_of, restrict

ENUM_CAP = 12
IDEAL_BUDGET = 1 << 22


class CapExceeded(RuntimeError):
    pass


class RangeError(ValueError):
    pass


class InconsistentEvent(ValueError):
    pass


# -- ideal lattice ----------------------------------------------------------


@dataclass
class IdealLattice:
    ideals: list[int]                 # sorted by size, BFS order
    index: dict[int, int]
    below: list[int]                  # extensions of the ideal itself
    above: list[int]                  # extensions of its complement
    by_size: list[list[int]]          # ideal indices grouped by size
    moves: list[list[tuple[int, int]]]  # (element, successor index)


@lru_cache(maxsize=1 << 14)
def ideal_lattice(P: Poset, budget: int = IDEAL_BUDGET) -> IdealLattice:
    n = P.n
    down = P.down
    ideals = [0]
    index = {0: 0}
    moves: list[list[tuple[int, int]]] = []
    k = 0
    while k < len(ideals):
        D = ideals[k]
        out = []
        for e in range(n):
            if not (D >> e & 1) and not (down[e] & ~D):
                nxt = D | 1 << e
                j = index.get(nxt)
                if j is None:
                    j = len(ideals)
                    if j >= budget:
                        raise CapExceeded(f"more than {budget} order ideals")
                    index[nxt] = j
                    ideals.append(nxt)
                out.append((e, j))
        moves.append(out)
        k += 1
    # BFS from the empty ideal adds one element at a time, so the list is
    # already sorted by ideal size.
    by_size: list[list[int]] = [[] for _ in range(n + 1)]
    for i, D in enumerate(ideals):
        by_size[D.bit_count()].append(i)
    below = [0] * len(ideals)
    below[0] = 1
    for i in range(len(ideals)):
        b = below[i]
        for _, j in moves[i]:
            below[j] += b
    above = [0] * len(ideals)
    above[-1] = 1
    for i in range(len(ideals) - 1, -1, -1):
        if moves[i]:
            above[i] = sum(above[j] for _, j in moves[i])
    return IdealLattice(ideals, index, below, above, by_size, moves)


def num_ideals(P: Poset) -> int:
    return len(ideal_lattice(P).ideals)


# -- enumeration (reference path) -------------------------------------------


@lru_cache(maxsize=256)
def _extensions(P: Poset, cap: int) -> tuple[tuple[int, ...], ...]:
    if P.n > cap:
        raise CapExceeded(f"enumeration capped at n={cap}, got n={P.n}")
    n = P.n
    out: list[tuple[int, ...]] = []
    f = [0] * n

    def rec(placed: int, step: int) -> None:
        if step > n:
            out.append(tuple(f))
            return
        for e in range(n):
            if not (placed >> e & 1) and not (P.down[e] & ~placed):
                f[e] = step
                rec(placed | 1 << e, step + 1)

    rec(0, 1)
    out.sort()
    return tuple(out)


def enumerate_extensions(P: Poset, cap: int = ENUM_CAP) -> Iterator[tuple[int, ...]]:
    """Yield every linear extension as a tuple ``f`` with ``f[x]`` the value
    of element ``x``, in lexicographic order."""
    yield from _extensions(P, cap)


# -- counts ------------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _count_dp(P: Poset) -> int:
    return ideal_lattice(P).below[-1]


def count(P: Poset, method: str = "dp") -> int:
    """Number of linear extensions e(P)."""
    if method == "dp":
        return _count_dp(P)
    return len(_extensions(P, ENUM_CAP))


@lru_cache(maxsize=1 << 16)
def _value_counts_dp(P: Poset, a: int) -> tuple[int, ...]:
    L = ideal_lattice(P)
    out = [0] * (P.n + 1)
    bit = 1 << a
    need = P.down[a]
    for size in range(P.n):
        total = 0
        for i in L.by_size[size]:
            D = L.ideals[i]
            if not (D & bit) and not (need & ~D):
                total += L.below[i] * L.above[L.index[D | bit]]
        out[size + 1] = total
    return tuple(out)


def value_counts(P: Poset, a: int, method: str = "dp") -> tuple[int, ...]:
    """``(0, e_1, ..., e_n)`` where ``e_k`` counts extensions with f(a) = k."""
    if method == "dp":
        return _value_counts_dp(P, a)
    out = [0] * (P.n + 1)
    for f in _extensions(P, ENUM_CAP):
        out[f[a]] += 1
    return tuple(out)


def count_with_value(P: Poset, a: int, k: int, method: str = "dp") -> int:
    if not 1 <= k <= P.n:
        raise RangeError(f"value {k} outside 1..{P.n}")
    return value_counts(P, a, method)[k]


@lru_cache(maxsize=1 << 16)
def _fmin_counts_dp(P: Poset, A: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    L = ideal_lattice(P)
    eq = [0] * (P.n + 1)
    gt = [0] * (P.n + 1)
    for size in range(P.n + 1):
        for i in L.by_size[size]:
            D = L.ideals[i]
            if D & A:
                continue
            gt[size] += L.below[i] * L.above[i]
            if size < P.n:
                for e, j in L.moves[i]:
                    if A >> e & 1:
                        eq[size + 1] += L.below[i] * L.above[j]
    return tuple(eq), tuple(gt)


def fmin_counts(P: Poset, A: Iterable[int] | int, method: str = "dp") -> tuple[int, ...]:
    """``(0, m_1, ..., m_n)`` with ``m_k = #{f : min f(A) = k}``."""
    a = mask_of(A)
    if not a:
        raise ValueError("f_min of the empty set is undefined")
    if method == "dp":
        return _fmin_counts_dp(P, a)[0]
    out = [0] * (P.n + 1)
    idx = bits(a)
    for f in _extensions(P, ENUM_CAP):
        out[min(f[i] for i in idx)] += 1
    return tuple(out)


def fmin_count(P: Poset, A: Iterable[int] | int, k: int, method: str = "dp") -> int:
    if not 1 <= k <= P.n:
        raise RangeError(f"value {k} outside 1..{P.n}")
    return count_event(P, EventSpec().fmin_eq(A, k), method)


@lru_cache(maxsize=1 << 14)
def _first_hit_dp(P: Poset, groups: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    L = ideal_lattice(P)
    zero = (0,) * len(groups)
    level: dict[tuple[int, tuple[int, ...]], int] = {(0, zero): 1}
    for step in range(1, P.n + 1):
        nxt: dict[tuple[int, tuple[int, ...]], int] = {}
        for (i, hits), c in level.items():
            for e, j in L.moves[i]:
                h = hits
                for g, G in enumerate(groups):
                    if not h[g] and G >> e & 1:
                        h = h[:g] + (step,) + h[g + 1:]
                key = (j, h)
                nxt[key] = nxt.get(key, 0) + c
        level = nxt
    return {h: c for (_, h), c in level.items()}


def first_hit_counts(
    P: Poset, groups: Sequence[Iterable[int] | int], method: str = "dp"
) -> dict[tuple[int, ...], int]:
    """Joint distribution of ``(min f(G1), min f(G2), ...)`` as counts.

    Singleton groups give the joint distribution of element values.  An empty
    group always reports 0.
    """
    gs = tuple(mask_of(g) for g in groups)
    if method == "dp":
        return dict(_first_hit_dp(P, gs))
    out: Counter = Counter()
    idx = [bits(g) for g in gs]
    for f in _extensions(P, ENUM_CAP):
        out[tuple(min((f[i] for i in ix), default=0) for ix in idx)] += 1
    return dict(out)


def cross_product_table(P: Poset, x: int, y: int, z: int, method: str = "dp") -> dict[tuple[int, int], int]:
    """``(k, l) -> F(k, l)``: extensions with f(y)-f(x) = k, f(z)-f(y) = l >= 1."""
    if len({x, y, z}) != 3:
        raise ValueError("x, y, z must be distinct")
    out: dict[tuple[int, int], int] = {}
    for (fx, fy, fz), c in first_hit_counts(P, [1 << x, 1 << y, 1 << z], method).items():
        k, l = fy - fx, fz - fy
        if k >= 1 and l >= 1:
            out[(k, l)] = out.get((k, l), 0) + c
    return out


def cross_product_counts(P: Poset, x: int, y: int, z: int, k: int, l: int, method: str = "dp") -> int:
    if k < 1 or l < 1:
        raise RangeError("k and l must be positive")
    return cross_product_table(P, x, y, z, method).get((k, l), 0)


# -- events -------------------------------------------------------------------


@dataclass(frozen=True)
class EventSpec:
    """A conjunction of constraints on a random linear extension.

    ``clauses`` holds ``(v, mask, negate)``: the element receiving value ``v``
    lies in ``mask`` (or outside it when ``negate``).  Nonpositive ``v`` counts
    from the top, so ``0`` is value n and ``-1`` is value n-1.
    """

    anchor: tuple[int, int] | None = None
    clauses: tuple[tuple[int, int, bool], ...] = ()
    fmin: tuple[int, str, int] | None = None

    def with_anchor(self, a: int, k: int) -> "EventSpec":
        return replace(self, anchor=(a, k))

    def value_in(self, v: int, S: Iterable[int] | int) -> "EventSpec":
        return replace(self, clauses=self.clauses + ((v, mask_of(S), False),))

    def value_not_in(self, v: int, S: Iterable[int] | int) -> "EventSpec":
        return replace(self, clauses=self.clauses + ((v, mask_of(S), True),))

    def value_is(self, v: int, x: int) -> "EventSpec":
        return self.value_in(v, 1 << x)

    def fmin_eq(self, A: Iterable[int] | int, k: int) -> "EventSpec":
        return replace(self, fmin=(mask_of(A), "=", k))

    def fmin_gt(self, A: Iterable[int] | int, k: int) -> "EventSpec":
        return replace(self, fmin=(mask_of(A), ">", k))

    def resolve(self, n: int) -> tuple[dict[int, int], tuple[int, int] | None]:
        full = (1 << n) - 1
        allowed: dict[int, int] = {}
        for v, m, neg in self.clauses:
            value = v if v > 0 else n + v
            if not 1 <= value <= n:
                raise InconsistentEvent(f"value {v} is out of range for n={n}")
            m = full & ~m if neg else m & full
            allowed[value] = allowed.get(value, full) & m
        if self.anchor is not None:
            a, k = self.anchor
            if not (0 <= a < n and 1 <= k <= n):
                raise InconsistentEvent(f"anchor {self.anchor} out of range for n={n}")
        return allowed, self.anchor

    def holds(self, f: Sequence[int]) -> bool:
        n = len(f)
        inv = [0] * (n + 1)
        for x, v in enumerate(f):
            inv[v] = x
        allowed, anchor = self.resolve(n)
        if anchor is not None and f[anchor[0]] != anchor[1]:
            return False
        for v, m in allowed.items():
            if not (m >> inv[v] & 1):
                return False
        if self.fmin is not None:
            A, op, k = self.fmin
            low = min(f[i] for i in bits(A))
            if (op == "=" and low != k) or (op == ">" and low <= k):
                return False
        return True


def _count_event_fast(P: Poset, ev: EventSpec) -> int | None:
    n = P.n
    allowed, anchor = ev.resolve(n)
    if ev.fmin is not None:
        if allowed or anchor is not None:
            return None
        A, op, k = ev.fmin
        eq, gt = _fmin_counts_dp(P, A)
        if op == "=":
            return eq[k] if 1 <= k <= n else 0
        return gt[k] if 0 <= k <= n else 0
    if anchor is not None:
        a, k = anchor
        allowed[k] = allowed.get(k, P.full) & (1 << a)
    low = [v for v in allowed if v <= 2]
    L = max(low, default=0)
    high = [v for v in allowed if v > L and v >= n - 1]
    H = min(high, default=n + 1)
    if any(L < v < H for v in allowed if anchor is None or v != anchor[1]):
        return None
    middle = anchor if anchor is not None and L < anchor[1] < H else None
    if middle is not None:
        if not allowed.pop(middle[1]):
            return 0
    avoid = 1 << middle[0] if middle is not None else 0
    full = P.full

    def count_rest(R: int) -> int:
        Q, kept = restrict(P, R)
        if middle is None:
            return _count_dp(Q)
        return _value_counts_dp(Q, kept.index(middle[0]))[middle[1] - L]

    def peel_top(R: int, v: int) -> int:
        if v < H:
            return count_rest(R)
        cand = allowed.get(v, full) & R & ~avoid
        return sum(peel_top(R & ~(1 << u), v - 1) for u in bits(cand) if not (P.up[u] & R))

    def peel_low(R: int, v: int) -> int:
        if v > L:
            return peel_top(R, n)
        cand = allowed.get(v, full) & R & ~avoid
        return sum(peel_low(R & ~(1 << u), v + 1) for u in bits(cand) if not (P.down[u] & R))

    return peel_low(full, 1)


def count_event(P: Poset, ev: EventSpec, method: str = "dp") -> int:
    """Number of linear extensions satisfying ``ev``.

    The fast path peels forced bottom/top values and counts what remains
    (values 1, 2, n-1, n plus an anchor), or uses the ideal lattice for f_min
    events.  Other shapes fall back to enumeration.
    """
    if method == "dp":
        return _count_event_dp(P, ev)
    ev.resolve(P.n)
    return sum(1 for f in _extensions(P, ENUM_CAP) if ev.holds(f))


@lru_cache(maxsize=1 << 18)
def _count_event_dp(P: Poset, ev: EventSpec) -> int:
    fast = _count_event_fast(P, ev)
    if fast is not None:
        return fast
    ev.resolve(P.n)
    return sum(1 for f in _extensions(P, ENUM_CAP) if ev.holds(f))
