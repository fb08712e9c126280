"""Finite posets on the ground set 0..n-1.

A poset is stored transitively closed: ``down[j]`` is the bitmask of all
elements strictly below ``j``.  Subsets of the ground set ("element sets")
are plain ``frozenset`` objects at the public surface and bitmasks inside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

MAX_ELEMENTS = 63


class CycleError(ValueError):
    """The generating relation is not antisymmetric after closure."""


def mask_of(elems: Iterable[int] | int) -> int:
    if isinstance(elems, int):
        return elems
    m = 0
    for e in elems:
        m |= 1 << e
    return m


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def elems_of(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


@dataclass(frozen=True)
class Poset:
    n: int
    down: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    @cached_property
    def up(self) -> tuple[int, ...]:
        up = [0] * self.n
        for j, d in enumerate(self.down):
            for i in bits(d):
                up[i] |= 1 << j
        return tuple(up)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def less(self, i: int, j: int) -> bool:
        return bool(self.down[j] >> i & 1)

    def comparable(self, i: int, j: int) -> bool:
        return i == j or self.less(i, j) or self.less(j, i)

    @property
    def rel(self) -> list[list[bool]]:
        return [[self.less(i, j) for j in range(self.n)] for i in range(self.n)]

    def relations(self) -> list[tuple[int, int]]:
        return [(i, j) for j in range(self.n) for i in bits(self.down[j])]

    def lower_covers(self, y: int) -> int:
        """Mask of elements covered by ``y``."""
        d = self.down[y]
        return sum(1 << i for i in bits(d) if not (self.up[i] & d))

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs ``(x, y)`` with ``y`` covering ``x``, sorted."""
        return sorted((x, y) for y in range(self.n) for x in bits(self.lower_covers(y)))

    def validate(self) -> None:
        if len(self.down) != self.n:
            raise ValueError("down has wrong length")
        for j, d in enumerate(self.down):
            if d >> self.n:
                raise ValueError("relation mentions elements outside the ground set")
            if d >> j & 1:
                raise CycleError(f"element {j} is below itself")
            for i in bits(d):
                if self.down[i] & ~d:
                    raise ValueError("relation is not transitively closed")

    def to_dict(self) -> dict:
        out: dict = {"n": self.n, "relations": [list(p) for p in self.covers()]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "Poset":
        P = from_relations(int(doc["n"]), [tuple(p) for p in doc.get("relations", [])])
        if doc.get("labels") is not None:
            P = Poset(P.n, P.down, tuple(str(s) for s in doc["labels"]))
        return P

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, covers={self.covers()})"


def from_relations(n: int, pairs: Iterable[Sequence[int]]) -> Poset:
    """Transitive closure of ``pairs`` (``(i, j)`` meaning i < j)."""
    if n < 0 or n > MAX_ELEMENTS:
        raise ValueError(f"n must be in 0..{MAX_ELEMENTS}")
    down = [0] * n
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"pair {(i, j)} out of range")
        if i == j:
            raise CycleError(f"reflexive pair {(i, j)}")
        down[j] |= 1 << i
    changed = True
    while changed:
        changed = False
        for j in range(n):
            d = down[j]
            for i in bits(d):
                d |= down[i]
            if d != down[j]:
                down[j] = d
                changed = True
            if d >> j & 1:
                raise CycleError(f"cycle through element {j}")
    return Poset(n, tuple(down))


def chain(n: int) -> Poset:
    return Poset(n, tuple((1 << j) - 1 for j in range(n)))


def antichain(n: int) -> Poset:
    return Poset(n, (0,) * n)


def dual(P: Poset) -> Poset:
    return Poset(P.n, P.up, P.labels)


@lru_cache(maxsize=1 << 16)
def restrict(P: Poset, keep: int) -> tuple[Poset, tuple[int, ...]]:
    """Induced subposet on ``keep`` plus the kept elements in order.

    Elements are relabeled by order-preserving compaction; the second value
    maps new indices back to the original ones.
    """
    kept = tuple(bits(keep & P.full))
    index = {e: k for k, e in enumerate(kept)}
    down = []
    for e in kept:
        m = 0
        for i in bits(P.down[e] & keep):
            m |= 1 << index[i]
        down.append(m)
    labels = tuple(P.labels[e] for e in kept) if P.labels is not None else None
    return Poset(len(kept), tuple(down), labels), kept


def delete(P: Poset, S: Iterable[int] | int) -> Poset:
    return restrict(P, P.full & ~mask_of(S))[0]


def parallel_sum(P: Poset, Q: Poset) -> Poset:
    shift = P.n
    down = P.down + tuple(d << shift for d in Q.down)
    return Poset(P.n + Q.n, down)


def linear_sum(P: Poset, Q: Poset) -> Poset:
    shift = P.n
    down = P.down + tuple((d << shift) | P.full for d in Q.down)
    return Poset(P.n + Q.n, down)


def minimal_mask(P: Poset) -> int:
    return sum(1 << i for i in range(P.n) if not P.down[i])


def maximal_mask(P: Poset) -> int:
    return sum(1 << i for i in range(P.n) if not P.up[i])


def minimals(P: Poset) -> frozenset[int]:
    return elems_of(minimal_mask(P))


def maximals(P: Poset) -> frozenset[int]:
    return elems_of(maximal_mask(P))


def up_ideal(P: Poset, b: int) -> frozenset[int]:
    return elems_of(P.up[b] | 1 << b)


def up_closure_mask(P: Poset, A: int) -> int:
    m = 0
    for b in bits(A):
        m |= P.up[b] | 1 << b
    return m


def up_closure(P: Poset, A: Iterable[int] | int) -> frozenset[int]:
    return elems_of(up_closure_mask(P, mask_of(A)))


def natural_closure(P: Poset, A: Iterable[int] | int) -> frozenset[int]:
    """``A↑ ∖ B↑`` where ``B`` is the set of minimal elements outside ``A``."""
    a = mask_of(A)
    mins = minimal_mask(P)
    if a & ~mins:
        raise ValueError("natural_closure needs a subset of the minimal elements")
    return elems_of(up_closure_mask(P, a) & ~up_closure_mask(P, mins & ~a))


def unique_covers(P: Poset, x: int) -> frozenset[int]:
    return frozenset(y for y in range(P.n) if P.lower_covers(y) == 1 << x)


def is_upset(P: Poset, S: int) -> bool:
    return all(not (P.up[i] & ~S) for i in bits(S))


def is_downset(P: Poset, S: int) -> bool:
    return all(not (P.down[i] & ~S) for i in bits(S))


def permutation_poset(sigma: Sequence[int]) -> Poset:
    """Two-dimensional poset of a permutation given in one-line notation.

    ``sigma`` holds the values 1..n; position i is below position j iff
    i < j and sigma(i) < sigma(j).
    """
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError("sigma must be a permutation of 1..n")
    down = [sum(1 << i for i in range(j) if sigma[i] < sigma[j]) for j in range(n)]
    return Poset(n, tuple(down))


def zigzag_poset(n: int) -> Poset:
    """Fence x1 < y1 > x2 < y2 > ...; x's sit at even indices."""
    pairs = [(i, i + 1) if i % 2 == 0 else (i + 1, i) for i in range(n - 1)]
    return from_relations(n, pairs)


# -- canonical form ---------------------------------------------------------


def _refine(P: Poset, colors: list[int]) -> list[int]:
    while True:
        sig = [
            (
                colors[v],
                tuple(sorted(colors[u] for u in bits(P.down[v]))),
                tuple(sorted(colors[u] for u in bits(P.up[v]))),
            )
            for v in range(P.n)
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(ranks) == len(set(colors)):
            return new
        colors = new


def _encode(P: Poset, order: list[int]) -> bytes:
    pos = {v: k for k, v in enumerate(order)}
    rows = []
    for v in order:
        m = 0
        for u in bits(P.down[v]):
            m |= 1 << pos[u]
        rows.append(m)
    width = (P.n + 7) // 8 or 1
    return bytes([P.n]) + b"".join(r.to_bytes(width, "big") for r in rows)


def canonical_form(P: Poset) -> bytes:
    """Isomorphism-invariant byte string.

    Individualization/refinement search over vertex orderings, keeping the
    lexicographically smallest encoding.  Twins (equal down- and up-sets) are
    interchangeable, so only one per twin class is individualized.
    """
    if P.n == 0:
        return b"\x00"
    start = [(len(bits(P.down[v])), len(bits(P.up[v]))) for v in range(P.n)]
    ranks = {s: r for r, s in enumerate(sorted(set(start)))}
    colors = _refine(P, [ranks[s] for s in start])
    best: list[bytes] = []

    def search(colors: list[int]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        if len(cells) == P.n:
            code = _encode(P, sorted(range(P.n), key=colors.__getitem__))
            if not best or code < best[0]:
                best[:] = [code]
            return
        target = min(c for c, vs in cells.items() if len(vs) > 1)
        seen = set()
        for v in cells[target]:
            twin = (P.down[v], P.up[v])
            if twin in seen:
                continue
            seen.add(twin)
            # individualized vertex sorts first within its old cell
            trial = [2 * c + (1 if (c == target and u != v) else 0) for u, c in enumerate(colors)]
            search(_refine(P, trial))

    search(colors)
    return best[0]


def is_isomorphic(P: Poset, Q: Poset) -> bool:
    return P.n == Q.n and canonical_form(P) == canonical_form(Q)
