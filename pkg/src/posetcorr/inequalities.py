"""Registry of correlation inequalities as exact predicates, plus sweeps.

Each registered check turns a poset and a parameter binding into a
:class:`~posetcorr.verdict.Verdict`.  Ratio statements are decided in
cross-multiplied form; a zero denominator gives ``Vacuous`` unless the
product form itself fails.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Iterator

from . import counting
from .atlas import bilinear, build_matrix
from .counting import EventSpec
from .poset import (
    Poset,
    bits,
    elems_of,
    mask_of,
    maximal_mask,
    minimal_mask,
    permutation_poset,
    restrict,
    unique_covers,
    up_closure_mask,
)
from .verdict import EQUALITY, FAILS, HOLDS, VACUOUS, Verdict, judge, product_verdict, ratio_verdict


class UnknownCheck(KeyError):
    pass


class PreconditionViolated(ValueError):
    pass


# -- small counting helpers ----------------------------------------------------


def _e(P: Poset, removed: int = 0) -> int:
    return counting.count(restrict(P, P.full & ~removed)[0])


def _ek(P: Poset, a: int, k: int, removed: int = 0) -> int:
    """e_k of P minus ``removed`` with the anchor ``a`` kept."""
    Q, kept = restrict(P, P.full & ~removed)
    if not 1 <= k <= Q.n:
        return 0
    return counting.value_counts(Q, kept.index(a))[k]


def _N(P: Poset, ev: EventSpec, method: str = "dp") -> int:
    return counting.count_event(P, ev, method)


def _pr(P: Poset, ev: EventSpec, method: str = "dp") -> Fraction:
    return Fraction(_N(P, ev, method), counting.count(P, method))


def _one_two(P: Poset, first: int, second: int, first_in: bool = True, second_in: bool = True) -> EventSpec:
    """Event "value 1 lies (or not) in ``first`` and value 2 in ``second``"."""
    ev = EventSpec()
    ev = ev.value_in(1, first) if first_in else ev.value_not_in(1, first)
    return ev.value_in(2, second) if second_in else ev.value_not_in(2, second)


def _witness(P: Poset, params: dict) -> dict:
    return {"poset": P.to_dict(), "params": serialize_params(params)}


def serialize_params(params: dict) -> dict:
    out = {}
    for key, val in params.items():
        if isinstance(val, (frozenset, set)):
            out[key] = sorted(val)
        elif isinstance(val, tuple):
            out[key] = list(val)
        else:
            out[key] = val
    return out


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise PreconditionViolated(msg)


def _distinct(*xs: int) -> bool:
    return len(set(xs)) == len(xs)


def _in_range(P: Poset, *xs: int) -> None:
    for x in xs:
        _require(0 <= x < P.n, f"element {x} outside 0..{P.n - 1}")


def _subset(P: Poset, S) -> int:
    m = mask_of(S)
    _require(m and not (m & ~P.full), "subset must be nonempty and inside the ground set")
    return m


# -- check definitions ---------------------------------------------------------


CheckFn = Callable[[Poset, dict, str], Verdict]
BindFn = Callable[[Poset, "SweepConfig"], Iterator[dict]]


@dataclass(frozen=True)
class CheckDef:
    id: str
    params: tuple[str, ...]
    fn: CheckFn
    bindings: BindFn
    conjecture: bool = False
    summary: str = ""


REGISTRY: dict[str, CheckDef] = {}


def register(check: CheckDef, replace: bool = False) -> CheckDef:
    if check.id in REGISTRY and not replace:
        raise ValueError(f"check {check.id!r} already registered")
    REGISTRY[check.id] = check
    return check


def unregister(check_id: str) -> None:
    REGISTRY.pop(check_id, None)


def get_check(check_id: str) -> CheckDef:
    try:
        return REGISTRY[check_id]
    except KeyError:
        raise UnknownCheck(check_id) from None


def check_ids(conjecture: bool | None = None) -> list[str]:
    return sorted(c for c, d in REGISTRY.items() if conjecture is None or d.conjecture == conjecture)


def check(check_id: str, P: Poset, params: dict | None = None, method: str = "dp", **kw) -> Verdict:
    """Evaluate one registered inequality on ``P`` with the given bindings."""
    params = dict(params or {}, **kw)
    spec = get_check(check_id)
    missing = [p for p in spec.params if p not in params]
    if missing:
        raise PreconditionViolated(f"{check_id} needs parameters {missing}")
    return spec.fn(P, params, method)


def _def(check_id: str, params: str, bindings: BindFn, conjecture: bool = False, summary: str = ""):
    def wrap(fn: CheckFn) -> CheckFn:
        register(CheckDef(check_id, tuple(params.split()), fn, bindings, conjecture, summary))
        return fn

    return wrap


# -- sweep configuration and binding generators ---------------------------------


@dataclass(frozen=True)
class SweepConfig:
    exhaustive_max_n: int = 6     # all subsets up to this n
    max_random_subsets: int = 512
    seed: int = 0


def _rng(P: Poset, cfg: SweepConfig, tag: str) -> random.Random:
    return random.Random(f"{cfg.seed}|{tag}|{P.n}|{P.down}")


def _subsets_of(P: Poset, pool: int, cfg: SweepConfig, tag: str) -> list[int]:
    """Nonempty subsets of ``pool``: all of them for small posets, else a
    seeded random sample."""
    elems = bits(pool)
    if not elems:
        return []
    if P.n <= cfg.exhaustive_max_n or (1 << len(elems)) - 1 <= cfg.max_random_subsets:
        return [mask_of(c) for r in range(1, len(elems) + 1) for c in itertools.combinations(elems, r)]
    rng = _rng(P, cfg, tag)
    seen: set[int] = set()
    while len(seen) < cfg.max_random_subsets:
        seen.add(mask_of(e for e in elems if rng.random() < 0.5) or 1 << rng.choice(elems))
    return sorted(seen)


def _subset_pairs(P: Poset, pool: int, cfg: SweepConfig, tag: str, disjoint: bool, ordered: bool) -> list[tuple[int, int]]:
    subs = _subsets_of(P, pool, cfg, tag)
    pairs = [
        (A, B)
        for i, A in enumerate(subs)
        for j, B in enumerate(subs)
        if (ordered or i <= j) and (not disjoint or not A & B) and (not disjoint or A != B)
    ]
    if P.n > cfg.exhaustive_max_n and len(pairs) > cfg.max_random_subsets:
        pairs = sorted(_rng(P, cfg, tag + "/pairs").sample(pairs, cfg.max_random_subsets))
    return pairs


def _min_pairs(P: Poset) -> Iterator[tuple[int, int]]:
    return itertools.combinations(bits(minimal_mask(P)), 2)


def _b_min_pair(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    if P.n > 2:
        for x, y in _min_pairs(P):
            yield {"x": x, "y": y}


def _b_elem(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for x in range(P.n):
        yield {"x": x}


def _b_elem_pair_sym(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for x in range(P.n):
        for y in range(x, P.n):
            yield {"x": x, "y": y}


def _b_elem_k(lo: int, hi_offset: int) -> BindFn:
    def gen(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
        for x in range(P.n):
            for k in range(lo, P.n + hi_offset + 1):
                yield {"x": x, "k": k}

    return gen


def _b_subset(P: Poset, cfg: SweepConfig, tag: str = "A") -> Iterator[dict]:
    if P.n >= 2:
        for A in _subsets_of(P, P.full, cfg, tag):
            yield {"A": elems_of(A)}


def _b_subset_k(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for A in _subsets_of(P, P.full, cfg, "A"):
        for k in range(2, P.n):
            yield {"A": elems_of(A), "k": k}


# -- the registry ---------------------------------------------------------------


def _corr_del_parts(P: Poset, x: int, y: int) -> tuple[int, int]:
    _in_range(P, x, y)
    _require(P.n > 2, "needs n > 2")
    _require(x != y and not P.down[x] and not P.down[y], "x, y must be distinct minimal elements")
    return _e(P) * _e(P, 1 << x | 1 << y), _e(P, 1 << x) * _e(P, 1 << y)


@_def("corr-del-lower", "x y", _b_min_pair, summary="n/(n-1) <= e(P)e(P-x-y)/(e(P-x)e(P-y))")
def _corr_del_lower(P, p, method):
    num, den = _corr_del_parts(P, p["x"], p["y"])
    return ratio_verdict("corr-del-lower", num, den, Fraction(P.n, P.n - 1), ">=", _witness(P, p))


@_def("corr-del-upper", "x y", _b_min_pair, summary="e(P)e(P-x-y)/(e(P-x)e(P-y)) <= 2")
def _corr_del_upper(P, p, method):
    num, den = _corr_del_parts(P, p["x"], p["y"])
    return ratio_verdict("corr-del-upper", num, den, 2, "<=", _witness(P, p))


def _b_strong(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    if P.n <= 2:
        return
    for a in range(P.n):
        ab = 1 << a
        mins = [x for x in range(P.n) if x != a and not (P.down[x] & ~ab)]
        for x, y in itertools.combinations(mins, 2):
            for k in range(1, P.n - 1):
                yield {"a": a, "k": k, "x": x, "y": y}


@_def("corr-del-strong", "a k x y", _b_strong, summary="e_k(P)e_k(P-x-y) <= 2 e_k(P-x)e_k(P-y)")
def _corr_del_strong(P, p, method):
    a, k, x, y = p["a"], p["k"], p["x"], p["y"]
    _in_range(P, a, x, y)
    _require(P.n > 2 and 1 <= k <= P.n - 2, "needs n > 2 and 1 <= k <= n-2")
    ab = 1 << a
    _require(_distinct(a, x, y), "a, x, y must be distinct")
    _require(not (P.down[x] & ~ab) and not (P.down[y] & ~ab), "x, y must be minimal in P - a")
    lhs = _ek(P, a, k) * _ek(P, a, k, 1 << x | 1 << y)
    rhs = 2 * _ek(P, a, k, 1 << x) * _ek(P, a, k, 1 << y)
    return product_verdict("corr-del-strong", lhs, rhs, "<=", _witness(P, p))


def corr_del_via_strong(P: Poset, x: int, y: int) -> tuple[int, int]:
    """The deletion ratio obtained through the strong form on P + {a}.

    Returns ``(lhs, rhs)`` of the strong inequality for the new isolated
    anchor at value 1; these equal e(P)e(P-x-y) and 2 e(P-x)e(P-y).
    """
    Pp = Poset(P.n + 1, P.down + (0,))
    a = P.n
    v = _corr_del_strong(Pp, {"a": a, "k": 1, "x": x, "y": y}, "dp")
    return int(v.lhs), int(v.rhs)


@_def("cov-upper", "x y", _b_elem_pair_sym, summary="(E[f(x)f(y)] + E[min]) / (E[f(x)]E[f(y)]) <= 2")
def _cov_upper(P, p, method):
    from . import statistics as st

    x, y = p["x"], p["y"]
    _in_range(P, x, y)
    num = st.mean_product(P, x, y, method) + st.mean_min(P, x, y, method)
    den = st.mean(P, x, method) * st.mean(P, y, method)
    return ratio_verdict("cov-upper", num, den, 2, "<=", _witness(P, p))


def _value_row(P: Poset, x: int, method: str) -> tuple[int, ...]:
    return counting.value_counts(P, x, method)


@_def("stanley", "x k", _b_elem_k(2, -1), summary="e_k^2 >= e_{k-1} e_{k+1}")
def _stanley(P, p, method):
    x, k = p["x"], p["k"]
    _in_range(P, x)
    _require(2 <= k <= P.n - 1, "needs 2 <= k <= n-1")
    e = _value_row(P, x, method)
    return product_verdict("stanley", e[k] ** 2, e[k - 1] * e[k + 1], ">=", _witness(P, p))


def _tail(P: Poset, x: int, method: str) -> list[Fraction]:
    """``t[j] = Pr[f(x) > j]`` for j = 0..n+1."""
    e = _value_row(P, x, method)
    tot = sum(e)
    out = [Fraction(sum(e[j + 1:]), tot) for j in range(P.n + 1)]
    return out + [Fraction(0)]


@_def("stanley-cdf", "x k", _b_elem_k(1, -1), summary="Pr[f>k]^2 >= Pr[f>k-1]Pr[f>k+1]")
def _stanley_cdf(P, p, method):
    x, k = p["x"], p["k"]
    _in_range(P, x)
    _require(1 <= k <= P.n - 1, "needs 1 <= k <= n-1")
    t = _tail(P, x, method)
    return product_verdict("stanley-cdf", t[k] ** 2, t[k - 1] * t[k + 1], ">=", _witness(P, p))


@_def("stanley-first2", "x", _b_elem, summary="Pr[f=1]Pr[f>1] <= Pr[f=2]")
def _stanley_first2(P, p, method):
    x = p["x"]
    _in_range(P, x)
    e = _value_row(P, x, method) + (0, 0)
    tot = counting.count(P, method)
    lhs = Fraction(e[1], tot) * Fraction(tot - e[1], tot)
    return product_verdict("stanley-first2", lhs, Fraction(e[2], tot), "<=", _witness(P, p))


def _fmin_row(P: Poset, A: int, method: str) -> tuple[int, ...]:
    return counting.fmin_counts(P, A, method) + (0, 0)


@_def("ext-stanley-conj", "A k", _b_subset_k, conjecture=True, summary="Pr[fmin(A)=k]^2 >= Pr[k-1]Pr[k+1]")
def _ext_stanley(P, p, method):
    A, k = _subset(P, p["A"]), p["k"]
    _require(2 <= k <= P.n - 1, "needs 2 <= k <= n-1")
    m = _fmin_row(P, A, method)
    tot = counting.count(P, method)
    lhs = Fraction(m[k], tot) ** 2
    rhs = Fraction(m[k - 1], tot) * Fraction(m[k + 1], tot)
    return product_verdict("ext-stanley-conj", lhs, rhs, ">=", _witness(P, p))


def _fmin_probs(P: Poset, A: int, method: str) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Pr[1 in f(A)], Pr[1 not in f(A)], Pr[1,2 not in f(A)], Pr[1 not in, 2 in]."""
    m = _fmin_row(P, A, method)
    tot = counting.count(P, method)
    p1 = Fraction(m[1], tot)
    p2 = Fraction(m[2], tot)
    return p1, 1 - p1, 1 - p1 - p2, p2


@_def("subset-ext1", "A", _b_subset, summary="Pr[1 not in f(A)]^2 >= Pr[1,2 not in f(A)]")
def _subset_ext1(P, p, method):
    A = _subset(P, p["A"])
    _require(P.n >= 2, "needs n >= 2")
    _, q1, q12, _ = _fmin_probs(P, A, method)
    return product_verdict("subset-ext1", q1 ** 2, q12, ">=", _witness(P, p))


@_def("subset-ext2", "A", _b_subset, summary="Pr[1 in f(A)]Pr[1 not in f(A)] <= Pr[1 not in f(A), 2 in f(A)]")
def _subset_ext2(P, p, method):
    A = _subset(P, p["A"])
    _require(P.n >= 2, "needs n >= 2")
    p1, q1, _, p2 = _fmin_probs(P, A, method)
    return product_verdict("subset-ext2", p1 * q1, p2, "<=", _witness(P, p))


@_def("subset-two", "A", _b_subset, summary="Pr[1 in, 2 not in]^2 >= Pr[1,2 in]Pr[1,2 not in]")
def _subset_two(P, p, method):
    A = _subset(P, p["A"])
    _require(P.n >= 2, "needs n >= 2")
    lhs = _pr(P, _one_two(P, A, A, True, False), method) ** 2
    rhs = _pr(P, _one_two(P, A, A, True, True), method) * _pr(P, _one_two(P, A, A, False, False), method)
    return product_verdict("subset-two", lhs, rhs, ">=", _witness(P, p))


def _b_multi_cov(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for A, B in _subset_pairs(P, P.full, cfg, "AB", disjoint=False, ordered=False):
        yield {"A": elems_of(A), "B": elems_of(B)}


@_def("multi-cov", "A B", _b_multi_cov, summary="(E[fmin(A)fmin(B)] + E[fmin(A u B)]) / (E[fmin A]E[fmin B]) <= 2")
def _multi_cov(P, p, method):
    from . import statistics as st

    A, B = _subset(P, p["A"]), _subset(P, p["B"])
    num = st.mean_fmin_product(P, A, B, method) + st.mean_fmin(P, A | B, method)
    den = st.mean_fmin(P, A, method) * st.mean_fmin(P, B, method)
    return ratio_verdict("multi-cov", num, den, 2, "<=", _witness(P, p))


def _disjoint_minimal(P: Poset, *sets) -> list[int]:
    masks = [_subset(P, S) for S in sets]
    mins = minimal_mask(P)
    _require(all(not (m & ~mins) for m in masks), "subsets must consist of minimal elements")
    _require(all(not (a & b) for a, b in itertools.combinations(masks, 2)), "subsets must be disjoint")
    return masks


def _self_pair(P: Poset, A: int, method: str) -> Fraction:
    """Pr[1 in f(A), 2 in f(A up)]."""
    return _pr(P, _one_two(P, A, up_closure_mask(P, A)), method)


def _b_disjoint_pairs(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for A, B in _subset_pairs(P, minimal_mask(P), cfg, "minAB", disjoint=True, ordered=False):
        yield {"A": elems_of(A), "B": elems_of(B)}


@_def("disjoint-lc", "A B", _b_disjoint_pairs, summary="Pr[1 in A, 2 in B]^2 >= Pr[1 in A, 2 in A up]Pr[1 in B, 2 in B up]")
def _disjoint_lc(P, p, method):
    A, B = _disjoint_minimal(P, p["A"], p["B"])
    lhs = _pr(P, _one_two(P, A, B), method) ** 2
    rhs = _self_pair(P, A, method) * _self_pair(P, B, method)
    return product_verdict("disjoint-lc", lhs, rhs, ">=", _witness(P, p))


def _three_parts(P: Poset, A: int, B: int, C: int, method: str) -> tuple[Fraction, Fraction]:
    num = _self_pair(P, C, method) * _pr(P, _one_two(P, A, B), method)
    den = _pr(P, _one_two(P, A, C), method) * _pr(P, _one_two(P, B, C), method)
    return num, den


def _b_disjoint_triples(ordered_c: bool) -> BindFn:
    def gen(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
        subs = _subsets_of(P, minimal_mask(P), cfg, "minABC")
        triples = []
        for A, B, C in itertools.combinations(subs, 3):
            if A & B or A & C or B & C:
                continue
            if ordered_c:
                triples += [(A, B, C), (A, C, B), (B, C, A)]
            else:
                triples.append((A, B, C))
        if P.n > cfg.exhaustive_max_n and len(triples) > cfg.max_random_subsets:
            triples = sorted(_rng(P, cfg, "triples").sample(triples, cfg.max_random_subsets))
        for A, B, C in triples:
            yield {"A": elems_of(A), "B": elems_of(B), "C": elems_of(C)}

    return gen


@_def("three-half", "A B C", _b_disjoint_triples(True), summary="three-subset ratio <= 2")
def _three_half(P, p, method):
    A, B, C = _disjoint_minimal(P, p["A"], p["B"], p["C"])
    num, den = _three_parts(P, A, B, C, method)
    return ratio_verdict("three-half", num, den, 2, "<=", _witness(P, p))


@_def("three-perm", "A B C", _b_disjoint_triples(False), summary="some choice of C' makes the ratio <= 1")
def _three_perm(P, p, method):
    A, B, C = _disjoint_minimal(P, p["A"], p["B"], p["C"])
    names = {"A": A, "B": B, "C": C}
    good = []
    for c in "ABC":
        a, b = (names[o] for o in "ABC" if o != c)
        num, den = _three_parts(P, a, b, names[c], method)
        if num <= den:
            good.append(c)
    return product_verdict("three-perm", len(good), 1, ">=", _witness(P, p), satisfied_C=good)


@_def("second-moment", "x", _b_elem, summary="1 <= E[f^2]/E[f]^2 < 2")
def _second_moment(P, p, method):
    from . import statistics as st

    x = p["x"]
    _in_range(P, x)
    r = st.second_moment_ratio(P, x, method)
    status = FAILS if (r < 1 or r >= 2) else EQUALITY if r == 1 else HOLDS
    return Verdict("second-moment", r, Fraction(2), "in [1,2)", status, _witness(P, p))


def _b_unique_cover_lc(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for x, y in _min_pairs(P):
        for v in sorted(unique_covers(P, x)):
            for w in sorted(unique_covers(P, y)):
                yield {"x": x, "y": y, "v": v, "w": w}


@_def("unique-cover-lc", "x y v w", _b_unique_cover_lc, summary="e(P-x-y)^2 >= e(P-x-v)e(P-y-w)")
def _unique_cover_lc(P, p, method):
    x, y, v, w = p["x"], p["y"], p["v"], p["w"]
    _in_range(P, x, y, v, w)
    _require(x != y and not P.down[x] and not P.down[y], "x, y must be distinct minimal elements")
    _require(v in unique_covers(P, x) and w in unique_covers(P, y), "v, w must be unique covers of x, y")
    lhs = _e(P, 1 << x | 1 << y) ** 2
    rhs = _e(P, 1 << x | 1 << v) * _e(P, 1 << y | 1 << w)
    return product_verdict("unique-cover-lc", lhs, rhs, ">=", _witness(P, p))


def _b_unique_cover_three(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    mins = bits(minimal_mask(P))
    for z in mins:
        for u in sorted(unique_covers(P, z)):
            for x, y in itertools.combinations([m for m in mins if m != z], 2):
                yield {"x": x, "y": y, "z": z, "u": u}


@_def("unique-cover-three", "x y z u", _b_unique_cover_three, summary="e(P-u-z)e(P-x-y) <= 2e(P-x-z)e(P-y-z)")
def _unique_cover_three(P, p, method):
    x, y, z, u = p["x"], p["y"], p["z"], p["u"]
    _in_range(P, x, y, z, u)
    _require(_distinct(x, y, z) and not (P.down[x] or P.down[y] or P.down[z]), "x, y, z must be distinct minimal elements")
    _require(u in unique_covers(P, z), "u must be a unique cover of z")
    b = lambda *s: mask_of(s)  # noqa: E731
    lhs = _e(P, b(u, z)) * _e(P, b(x, y))
    rhs = 2 * _e(P, b(x, z)) * _e(P, b(y, z))
    return product_verdict("unique-cover-three", lhs, rhs, "<=", _witness(P, p))


def upper_sets(P: Poset) -> list[int]:
    """All upper sets of P as masks, via complements of order ideals."""
    return sorted(P.full & ~D for D in counting.ideal_lattice(P).ideals)


def _b_fishburn(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    ups = upper_sets(P)
    pairs = [(A, B) for i, A in enumerate(ups) for B in ups[i:]]
    if P.n > cfg.exhaustive_max_n and len(pairs) > cfg.max_random_subsets:
        pairs = sorted(_rng(P, cfg, "fishburn").sample(pairs, cfg.max_random_subsets))
    for A, B in pairs:
        yield {"A": elems_of(A), "B": elems_of(B)}


@_def("fishburn", "A B", _b_fishburn, summary="|AuB|!|AnB|!/(|A|!|B|!) <= e(AuB)e(AnB)/(e(A)e(B))")
def _fishburn(P, p, method):
    from .poset import is_upset

    A, B = mask_of(p["A"]), mask_of(p["B"])
    _require(not ((A | B) & ~P.full), "subsets must lie in the ground set")
    _require(is_upset(P, A) and is_upset(P, B), "A and B must be upper sets")
    sz = lambda m: factorial(m.bit_count())  # noqa: E731
    ext = lambda m: counting.count(restrict(P, m)[0], method)  # noqa: E731
    lhs = Fraction(sz(A | B) * sz(A & B), sz(A) * sz(B))
    rhs = Fraction(ext(A | B) * ext(A & B), ext(A) * ext(B))
    return product_verdict("fishburn", lhs, rhs, "<=", _witness(P, p))


def _b_incomparable(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for x in range(P.n):
        for y in range(P.n):
            if not P.comparable(x, y):
                yield {"x": x, "y": y}


@_def("winkler", "x y", _b_incomparable, summary="E[f(x)] <= E[f(x) | f(x) > f(y)]")
def _winkler(P, p, method):
    from . import statistics as st

    x, y = p["x"], p["y"]
    _in_range(P, x, y)
    _require(not P.comparable(x, y), "x, y must be incomparable")
    joint = counting.first_hit_counts(P, [1 << x, 1 << y], method)
    num = sum(i * c for (i, j), c in joint.items() if i > j)
    den = sum(c for (i, j), c in joint.items() if i > j)
    return ratio_verdict("winkler", num, den, st.mean(P, x, method), ">=", _witness(P, p))


def _b_cpc(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for x, y, z in itertools.permutations(range(P.n), 3):
        for k in range(1, P.n):
            for l in range(1, P.n - k):
                yield {"x": x, "y": y, "z": z, "k": k, "l": l}


@_def("cpc-conj", "x y z k l", _b_cpc, conjecture=True, summary="F(k,l)F(k+1,l+1) <= F(k+1,l)F(k,l+1)")
def _cpc(P, p, method):
    x, y, z, k, l = p["x"], p["y"], p["z"], p["k"], p["l"]
    _in_range(P, x, y, z)
    _require(_distinct(x, y, z) and k >= 1 and l >= 1, "needs distinct x, y, z and k, l >= 1")
    F = counting.cross_product_table(P, x, y, z, method)
    g = lambda a, b: F.get((a, b), 0)  # noqa: E731
    return product_verdict("cpc-conj", g(k, l) * g(k + 1, l + 1), g(k + 1, l) * g(k, l + 1), "<=", _witness(P, p))


def _b_min_max(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    if P.n > 2:
        for x in bits(minimal_mask(P)):
            for y in bits(maximal_mask(P)):
                if x != y:
                    yield {"x": x, "y": y}


def _reverse_parts(P: Poset, x: int, y: int) -> tuple[int, int]:
    _in_range(P, x, y)
    _require(P.n > 2, "needs n > 2")
    _require(x != y and not P.down[x] and not P.up[y], "x must be minimal and y maximal, distinct")
    return _e(P) * _e(P, 1 << x | 1 << y), _e(P, 1 << x) * _e(P, 1 << y)


@_def("reverse-upper", "x y", _b_min_max, summary="ratio <= n/(n-1) for x minimal, y maximal")
def _reverse_upper(P, p, method):
    num, den = _reverse_parts(P, p["x"], p["y"])
    return ratio_verdict("reverse-upper", num, den, Fraction(P.n, P.n - 1), "<=", _witness(P, p))


@_def("reverse-conj", "x y", _b_min_max, conjecture=True, summary="ratio >= 1/2 for x minimal, y maximal")
def _reverse_conj(P, p, method):
    num, den = _reverse_parts(P, p["x"], p["y"])
    return ratio_verdict("reverse-conj", num, den, Fraction(1, 2), ">=", _witness(P, p))


@_def("log-petrov", "x", _b_elem, summary="E[Z^2] <= 2E[Z]^2 for Z = f(x)")
def _log_petrov(P, p, method):
    from . import statistics as st

    x = p["x"]
    _in_range(P, x)
    return product_verdict("log-petrov", st.mean_square(P, x, method), 2 * st.mean(P, x, method) ** 2, "<=", _witness(P, p))


def _b_anchor_subset(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    if P.n < 3:
        return
    for a in range(P.n):
        for A in _subsets_of(P, P.full & ~(1 << a), cfg, f"a{a}"):
            for k in range(3, P.n + 1):
                yield {"a": a, "A": elems_of(A), "k": k}


def _anchor_subset(P: Poset, p: dict) -> tuple[int, int, int]:
    a, k = p["a"], p["k"]
    _in_range(P, a)
    A = _subset(P, p["A"])
    _require(P.n >= 3 and 3 <= k <= P.n, "needs n >= 3 and 3 <= k <= n")
    _require(not A >> a & 1, "A must avoid the anchor")
    return a, k, A


@_def("lemma-nform-cdf", "a A k", _b_anchor_subset,
      summary="N_k(1 not in A, 2 in A)^2 >= N_k(1 in A, 2 in A up) N_k(1,2 not in A)")
def _lemma_nform_cdf(P, p, method):
    a, k, A = _anchor_subset(P, p)
    up = up_closure_mask(P, A)
    N = lambda ev: _N(P, ev.with_anchor(a, k), method)  # noqa: E731
    lhs = N(_one_two(P, A, A, False, True)) ** 2
    rhs = N(_one_two(P, A, up)) * N(_one_two(P, A, A, False, False))
    return product_verdict("lemma-nform-cdf", lhs, rhs, ">=", _witness(P, p))


@_def("lemma-yinyang", "a A k", _b_anchor_subset,
      summary="N_k(1 in A)^2 >= N_k(1 in A, 2 in A up) e_k(P)")
def _lemma_yinyang(P, p, method):
    a, k, A = _anchor_subset(P, p)
    up = up_closure_mask(P, A)
    N = lambda ev: _N(P, ev.with_anchor(a, k), method)  # noqa: E731
    lhs = N(EventSpec().value_in(1, A)) ** 2
    rhs = N(_one_two(P, A, up)) * counting.count_with_value(P, a, k, method)
    return product_verdict("lemma-yinyang", lhs, rhs, ">=", _witness(P, p))


def _b_interpret(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    for a in range(P.n):
        ab = 1 << a
        pool = sum(1 << x for x in range(P.n) if x != a and not (P.down[x] & ~ab))
        subs = _subsets_of(P, pool, cfg, f"interp{a}")
        for k in range(2, P.n):
            for A in subs:
                for B in subs:
                    if A == B or not A & B:
                        yield {"a": a, "k": k, "A": elems_of(A), "B": elems_of(B)}


@_def("lemma-interpret", "a k A B", _b_interpret,
      summary="<x_A, M x_B> equals N_{k+1}(1 in A, 2 in B) or N_{k+1}(1 in A, 2 in A up)")
def _lemma_interpret(P, p, method):
    a, k = p["a"], p["k"]
    _in_range(P, a)
    _require(2 <= k <= P.n - 1, "needs 2 <= k <= n-1")
    A, B = _subset(P, p["A"]), _subset(P, p["B"])
    ab = 1 << a
    pool = sum(1 << x for x in range(P.n) if x != a and not (P.down[x] & ~ab))
    _require(not ((A | B) & ~pool), "subsets must be minimal elements of P - a")
    _require(A == B or not A & B, "subsets must be equal or disjoint")
    M = build_matrix(P, a, k)
    val = bilinear(M, M.down_vector(bits(A)), M.down_vector(bits(B)))
    second = up_closure_mask(P, A) if A == B else B
    want = _N(P, _one_two(P, A, second).with_anchor(a, k + 1), method)
    return product_verdict("lemma-interpret", val, want, "=", _witness(P, p))


# -- permutation posets ---------------------------------------------------------


def minimal_records(sigma) -> list[int]:
    """0-based positions i with sigma(j) > sigma(i) for all j < i."""
    out, best = [], None
    for i, s in enumerate(sigma):
        if best is None or s < best:
            out.append(i)
            best = s
    return out


def _no_bindings(P: Poset, cfg: SweepConfig) -> Iterator[dict]:
    return iter(())


@_def("bruhat-bounds", "sigma a b", _no_bindings,
      summary="n/(n-1) <= Pr[w(a)=1, w(b)=2 | w <= sigma] / (Pr[w(a)=1 | .] Pr[w(b)=1 | .]) <= 2")
def _bruhat(P, p, method):
    sigma, a, b = tuple(p["sigma"]), p["a"], p["b"]
    Q = permutation_poset(sigma)
    n = Q.n
    _require(n > 2, "needs n > 2")
    recs = minimal_records(sigma)
    _require(a != b and a in recs and b in recs, "a, b must be distinct minimal records")
    tot = counting.count(Q, method)
    both = counting.count_event(Q, EventSpec().value_is(1, a).value_is(2, b), method)
    pa = counting.count_with_value(Q, a, 1, method)
    pb = counting.count_with_value(Q, b, 1, method)
    r = Fraction(both * tot, pa * pb)
    lo = Fraction(n, n - 1)
    status = FAILS if (r < lo or r > 2) else EQUALITY if r in (lo, 2) else HOLDS
    return Verdict("bruhat-bounds", r, Fraction(2), "in [n/(n-1),2]", status,
                   {"poset": Q.to_dict(), "params": serialize_params(p)}, {"lower": f"{lo.numerator}/{lo.denominator}"})


def bruhat_bindings(n: int) -> Iterator[dict]:
    for sigma in itertools.permutations(range(1, n + 1)):
        for a, b in itertools.combinations(minimal_records(sigma), 2):
            yield {"sigma": sigma, "a": a, "b": b}


# -- sweeps -------------------------------------------------------------------------


@dataclass
class SweepReport:
    verdicts: list[Verdict] = field(default_factory=list)   # everything not Holds
    summary: dict[str, Counter] = field(default_factory=dict)
    extremes: dict[str, tuple[Verdict, Verdict]] = field(default_factory=dict)  # smallest, largest lhs

    def add(self, v: Verdict) -> None:
        self.summary.setdefault(v.check_id, Counter())[v.status] += 1
        if v.status != HOLDS:
            self.verdicts.append(v)
        if v.status != VACUOUS:
            self._track(v)

    def _track(self, v: Verdict) -> None:
        cur = self.extremes.get(v.check_id)
        if cur is None:
            self.extremes[v.check_id] = (v, v)
            return
        lo, hi = cur
        if (v.lhs, verdict_key(v)) < (lo.lhs, verdict_key(lo)):
            lo = v
        if (v.lhs, verdict_key(v)) > (hi.lhs, verdict_key(hi)):
            hi = v
        self.extremes[v.check_id] = (lo, hi)

    def merge(self, other: "SweepReport") -> None:
        for cid, c in other.summary.items():
            self.summary.setdefault(cid, Counter()).update(c)
        self.verdicts.extend(other.verdicts)
        for lo, hi in other.extremes.values():
            self._track(lo)
            self._track(hi)

    def fails(self, conjecture: bool | None = None) -> list[Verdict]:
        return [
            v for v in self.verdicts
            if v.status == FAILS and (conjecture is None or get_check(v.check_id).conjecture == conjecture)
        ]

    def histogram(self) -> dict[str, dict[str, int]]:
        return {cid: dict(sorted(c.items())) for cid, c in sorted(self.summary.items())}

    def extremes_json(self) -> dict[str, dict]:
        return {cid: {"min": lo.to_json(), "max": hi.to_json()} for cid, (lo, hi) in sorted(self.extremes.items())}


def iter_verdicts(P: Poset, ids: Iterable[str] | None = None, cfg: SweepConfig = SweepConfig(),
                  method: str = "dp") -> Iterator[Verdict]:
    for cid in sorted(ids) if ids is not None else check_ids():
        spec = get_check(cid)
        for params in spec.bindings(P, cfg):
            yield spec.fn(P, params, method)


def sweep(P: Poset, ids: Iterable[str] | None = None, cfg: SweepConfig = SweepConfig(),
          method: str = "dp") -> SweepReport:
    """Evaluate every admissible binding of the selected checks on ``P``."""
    report = SweepReport()
    for v in iter_verdicts(P, ids, cfg, method):
        report.add(v)
    report.verdicts.sort(key=verdict_key)
    return report


def verdict_key(v: Verdict) -> tuple:
    return (v.check_id, json.dumps(v.witness, sort_keys=True), v.status)


def to_jsonl(verdicts: Iterable[Verdict]) -> str:
    return "".join(json.dumps(v.to_json(), sort_keys=True) + "\n" for v in verdicts)


__all__ = [
    "CheckDef", "PreconditionViolated", "REGISTRY", "SweepConfig", "SweepReport", "UnknownCheck",
    "bruhat_bindings", "check", "check_ids", "corr_del_via_strong", "get_check", "iter_verdicts",
    "judge", "minimal_records", "register", "sweep", "to_jsonl", "unregister", "upper_sets",
]
