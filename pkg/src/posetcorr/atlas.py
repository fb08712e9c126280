"""The symmetric matrix M(P, a, k) on two copies of X - a, and exact
hyperbolicity testing."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import counting
from .counting import EventSpec, RangeError
from .poset import Poset, bits, delete
from .verdict import Verdict, product_verdict


class NotSymmetric(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class AtlasIdentityError(AssertionError):
    """A diagonal entry disagreed with its combinatorial interpretation."""


Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AtlasMatrix:
    P: Poset
    a: int
    k: int
    others: tuple[int, ...]
    min_down: frozenset[int]
    max_up: frozenset[int]
    entries: Matrix

    @property
    def d(self) -> int:
        return len(self.entries)

    def down_pos(self, x: int) -> int:
        return self.others.index(x)

    def up_pos(self, x: int) -> int:
        return len(self.others) + self.others.index(x)

    def index_map(self) -> dict[str, dict[int, int]]:
        return {
            "down": {x: self.down_pos(x) for x in self.others},
            "up": {x: self.up_pos(x) for x in self.others},
        }

    def down_vector(self, S) -> list[int]:
        """Characteristic vector of ``S`` inside the Z_down copy."""
        v = [0] * self.d
        for x in S:
            v[self.down_pos(x)] = 1
        return v

    def up_vector(self, S) -> list[int]:
        v = [0] * self.d
        for x in S:
            v[self.up_pos(x)] = 1
        return v

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "anchor": self.a,
            "k": self.k,
            "down": list(self.others),
            "up": list(self.others),
            "entries": [list(r) for r in self.entries],
        }


def _N(P: Poset, a: int, k: int, ev: EventSpec) -> int:
    return counting.count_event(P, ev.with_anchor(a, k))


@lru_cache(maxsize=1 << 14)
def build_matrix(P: Poset, a: int, k: int) -> AtlasMatrix:
    n = P.n
    if not 0 <= a < n:
        raise ValueError(f"anchor {a} outside the ground set")
    if not 2 <= k <= n - 1:
        raise RangeError(f"k must satisfy 2 <= k <= n-1, got k={k}, n={n}")
    ab = 1 << a
    others = tuple(x for x in range(n) if x != a)
    mins = [x for x in others if not (P.down[x] & ~ab)]
    maxs = [x for x in others if not (P.up[x] & ~ab)]
    m = n - 1
    M = [[0] * (2 * m) for _ in range(2 * m)]
    pos = {x: i for i, x in enumerate(others)}
    E = EventSpec()

    for x in mins:
        i = pos[x]
        diag = _N(P, a, k + 1, E.value_is(1, x)) - _N(P, a, k + 1, E.value_is(2, x))
        check = _N(P, a, k + 1, E.value_is(1, x).value_in(2, P.up[x]))
        if diag != check:
            raise AtlasIdentityError(f"down-diagonal mismatch at x={x}: {diag} != {check}")
        M[i][i] = diag
        for y in mins:
            if y != x:
                M[i][pos[y]] = _N(P, a, k + 1, E.value_is(1, x).value_is(2, y))
        for y in maxs:
            if y != x:
                M[i][m + pos[y]] = M[m + pos[y]][i] = _N(P, a, k, E.value_is(1, x).value_is(0, y))

    for x in maxs:
        i = m + pos[x]
        diag = _N(P, a, k - 1, E.value_is(0, x)) - _N(P, a, k - 1, E.value_is(-1, x))
        check = _N(P, a, k - 1, E.value_is(0, x).value_in(-1, P.down[x]))
        if diag != check:
            raise AtlasIdentityError(f"up-diagonal mismatch at x={x}: {diag} != {check}")
        M[i][i] = diag
        for y in maxs:
            if y != x:
                M[i][m + pos[y]] = _N(P, a, k - 1, E.value_is(0, x).value_is(-1, y))

    return AtlasMatrix(P, a, k, others, frozenset(mins), frozenset(maxs), tuple(map(tuple, M)))


def _rows(M) -> Matrix:
    return M.entries if isinstance(M, AtlasMatrix) else tuple(tuple(int(v) for v in r) for r in M)


def is_symmetric(M) -> bool:
    A = _rows(M)
    return all(len(r) == len(A) for r in A) and all(
        A[i][j] == A[j][i] for i in range(len(A)) for j in range(i)
    )


def char_poly(M) -> list[int]:
    """Coefficients of det(tI - M), leading coefficient first.

    Faddeev-LeVerrier over the integers; each division is exact.
    """
    A = _rows(M)
    d = len(A)
    coeffs = [1]
    B = [[0] * d for _ in range(d)]
    for k in range(1, d + 1):
        c_prev = coeffs[-1]
        for i in range(d):
            B[i][i] += c_prev
        # B <- A @ B
        Bc = list(zip(*B))
        AB = [[sum(x * y for x, y in zip(row, col)) for col in Bc] for row in A]
        tr = sum(sum(x * y for x, y in zip(A[i], Bc[i])) for i in range(d))
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("non-integral trace quotient")
        coeffs.append(q)
        B = AB
    return coeffs


def sign_variations(coeffs: Sequence[int]) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


@dataclass(frozen=True)
class HypReport:
    is_hyperbolic: bool
    positive_eigenvalue_count: int
    char_poly: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "is_hyperbolic": self.is_hyperbolic,
            "positive_eigenvalue_count": self.positive_eigenvalue_count,
            "char_poly": [str(c) for c in self.char_poly],
        }


def check_hyp(M) -> HypReport:
    """Count positive eigenvalues of a symmetric integer matrix exactly.

    A real-rooted polynomial has exactly as many positive roots as sign
    variations (Descartes), once trailing zero coefficients are dropped.
    """
    if not is_symmetric(M):
        raise NotSymmetric("matrix is not symmetric")
    p = char_poly(M)
    stripped = list(p)
    while len(stripped) > 1 and stripped[-1] == 0:
        stripped.pop()
    pos = sign_variations(stripped)
    return HypReport(pos <= 1, pos, tuple(p))


def bilinear(M, u: Sequence[int], v: Sequence[int]) -> int:
    A = _rows(M)
    if len(u) != len(A) or len(v) != len(A):
        raise DimensionMismatch(f"vectors of length {len(u)}, {len(v)} against d={len(A)}")
    return sum(ui * sum(a * vj for a, vj in zip(row, v)) for ui, row in zip(u, A) if ui)


# -- identities --------------------------------------------------------------


def row_identity_failures(P: Poset, a: int, k: int) -> list[str]:
    M = build_matrix(P, a, k)
    A, m, E = M.entries, len(M.others), EventSpec()
    bad = []
    for x in M.min_down:
        i = M.down_pos(x)
        if sum(A[i][:m]) != _N(P, a, k + 1, E.value_is(1, x)):
            bad.append(f"min/down x={x}")
        if sum(A[i][m:]) != _N(P, a, k, E.value_is(1, x)):
            bad.append(f"min/up x={x}")
    for x in M.max_up:
        i = M.up_pos(x)
        if sum(A[i][:m]) != _N(P, a, k, E.value_is(0, x)):
            bad.append(f"max/down x={x}")
        if sum(A[i][m:]) != _N(P, a, k - 1, E.value_is(0, x)):
            bad.append(f"max/up x={x}")
    return bad


def check_row_identities(P: Poset, a: int, k: int) -> bool:
    return not row_identity_failures(P, a, k)


def check_diagonal_identity(P: Poset, a: int, k: int) -> bool:
    """Diagonal entries equal their nonnegative event counts.

    ``build_matrix`` already refuses to return a matrix that violates this;
    here the comparison is made again directly against the stored entries.
    """
    M = build_matrix(P, a, k)
    E = EventSpec()
    for x in M.min_down:
        if M.entries[M.down_pos(x)][M.down_pos(x)] != _N(P, a, k + 1, E.value_is(1, x).value_in(2, P.up[x])):
            return False
    for x in M.max_up:
        if M.entries[M.up_pos(x)][M.up_pos(x)] != _N(P, a, k - 1, E.value_is(0, x).value_in(-1, P.down[x])):
            return False
    return True


def deletion_bilinears(P: Poset, a: int, k: int, x: int, y: int) -> dict[str, tuple[int, int]]:
    """The three quadratic-form values used for the strong deletion bound,
    each paired with its direct count.

    ``x`` and ``y`` must be distinct minimal elements of P other than ``a``.
    Vectors: x-hat and y-hat are the down-copies of x and y, z-hat is the
    up-indicator of all of X - a.
    """
    if x == y or a in (x, y) or P.down[x] or P.down[y]:
        raise ValueError("x and y must be distinct minimal elements of P other than a")
    M = build_matrix(P, a, k)
    xh = M.down_vector([x])
    yh = M.down_vector([y])
    zh = M.up_vector(M.others)

    def ek(Q: Poset, anchor: int) -> int:
        return counting.count_with_value(Q, anchor, k - 1) if 1 <= k - 1 <= Q.n else 0

    def shifted(S: set[int]) -> int:
        return a - sum(1 for s in S if s < a)

    return {
        "xy": (bilinear(M, xh, yh), ek(delete(P, {x, y}), shifted({x, y}))),
        "xz": (bilinear(M, xh, zh), ek(delete(P, {x}), shifted({x}))),
        "zz": (bilinear(M, zh, zh), ek(P, a)),
    }


# -- lemmas on hyperbolic forms ----------------------------------------------


def _gram(M, x, y, z) -> tuple[int, int, int, int, int, int]:
    return (
        bilinear(M, x, x), bilinear(M, y, y), bilinear(M, z, z),
        bilinear(M, x, y), bilinear(M, x, z), bilinear(M, y, z),
    )


def quart_sides(xx, yy, zz, xy, xz, yz) -> tuple[int, int]:
    return (yz * xx - xy * xz) ** 2, (xy * xy - xx * yy) * (xz * xz - xx * zz)


def tri_sides(xx, yy, zz, xy, xz, yz) -> tuple[int, int]:
    return yy * xz * xz + zz * xy * xy, 2 * xy * xz * yz


def half_sides(xx, yy, zz, xy, xz, yz) -> tuple[int, int]:
    return zz * xy, 2 * xz * yz


def two_of_three_count(xx, yy, zz, xy, xz, yz) -> int:
    """How many of the three conditional-correlation inequalities hold."""
    return (xx * yz <= xy * xz) + (yy * xz <= xy * yz) + (zz * xy <= xz * yz)


def shephard_value(xx, yy, zz, xy, xz, yz) -> int:
    """Determinant of the 3x3 Gram matrix of x, y, z under M."""
    return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz)


def lemma_quart(M, x, y, z) -> Verdict:
    lhs, rhs = quart_sides(*_gram(M, x, y, z))
    return product_verdict("lemma-quart", lhs, rhs, "<=")


def lemma_tri(M, x, y, z) -> Verdict:
    lhs, rhs = tri_sides(*_gram(M, x, y, z))
    return product_verdict("lemma-tri", lhs, rhs, "<=")


def lemma_half(M, x, y, z) -> Verdict:
    lhs, rhs = half_sides(*_gram(M, x, y, z))
    return product_verdict("lemma-half", lhs, rhs, "<=")


def lemma_two_of_three(M, x, y, z) -> Verdict:
    return product_verdict("lemma-two-of-three", two_of_three_count(*_gram(M, x, y, z)), 2, ">=")


def shephard_det(M, x, y, z) -> Verdict:
    return product_verdict("shephard-det", shephard_value(*_gram(M, x, y, z)), 0, ">=")


LEMMAS = {
    "lemma-quart": lemma_quart,
    "lemma-tri": lemma_tri,
    "lemma-half": lemma_half,
    "lemma-two-of-three": lemma_two_of_three,
    "shephard-det": shephard_det,
}


def positivity_witness(M, x, y, z) -> tuple[str, list[int] | None]:
    """Either ``("kernel", None)`` when Mx = My = Mz = 0, or ``("witness", v)``
    with v >= 0 such that <x+tv, M(x+tv)> > 0 for every t > 0, and likewise
    for y and z.

    For a matrix with nonnegative entries the all-ones vector works whenever
    M is nonzero, since each expansion coefficient in t is then nonnegative
    and the t^2 coefficient is positive.
    """
    A = _rows(M)
    d = len(A)
    if any(v < 0 for r in A for v in r):
        raise ValueError("entries must be nonnegative")
    zero = [0] * d
    if all(_matvec(A, w) == zero for w in (x, y, z)):
        return "kernel", None
    ones = [1] * d
    if bilinear(A, ones, ones) <= 0:
        raise ArithmeticError("no nonnegative witness found")
    for w in (x, y, z):
        c0, c1, c2 = bilinear(A, w, w), 2 * bilinear(A, w, ones), bilinear(A, ones, ones)
        if c0 < 0 or c1 < 0 or c2 <= 0:
            raise ArithmeticError("all-ones perturbation is not positive")
    return "witness", ones


def _matvec(A: Matrix, v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in A]
