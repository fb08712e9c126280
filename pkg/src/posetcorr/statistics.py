"""Exact probabilities and moments over the uniform random linear extension."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from . import counting
from .counting import EventSpec
from .poset import Poset, mask_of


class EmptyPoset(ZeroDivisionError):
    pass


def _total(P: Poset, method: str) -> int:
    e = counting.count(P, method)
    if e == 0:
        raise EmptyPoset("poset has no linear extensions")
    return e


def rat_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s)


def prob_event(P: Poset, ev: EventSpec, method: str = "dp") -> Fraction:
    return Fraction(counting.count_event(P, ev, method), _total(P, method))


def value_distribution(P: Poset, x: int, method: str = "dp") -> list[Fraction]:
    """Entry ``k-1`` is Pr[f(x) = k]."""
    e = _total(P, method)
    return [Fraction(c, e) for c in counting.value_counts(P, x, method)[1:]]


def fmin_distribution(P: Poset, A: Iterable[int] | int, method: str = "dp") -> list[Fraction]:
    e = _total(P, method)
    return [Fraction(c, e) for c in counting.fmin_counts(P, A, method)[1:]]


def _joint(P: Poset, A: int, B: int, method: str) -> dict[tuple[int, int], int]:
    return counting.first_hit_counts(P, [A, B], method)


def mean(P: Poset, x: int, method: str = "dp") -> Fraction:
    return mean_fmin(P, 1 << x, method)


def mean_fmin(P: Poset, A: Iterable[int] | int, method: str = "dp") -> Fraction:
    cs = counting.fmin_counts(P, A, method)
    return Fraction(sum(k * c for k, c in enumerate(cs)), _total(P, method))


def mean_square(P: Poset, x: int, method: str = "dp") -> Fraction:
    cs = counting.value_counts(P, x, method)
    return Fraction(sum(k * k * c for k, c in enumerate(cs)), _total(P, method))


def mean_fmin_product(P: Poset, A: Iterable[int] | int, B: Iterable[int] | int, method: str = "dp") -> Fraction:
    joint = _joint(P, mask_of(A), mask_of(B), method)
    return Fraction(sum(i * j * c for (i, j), c in joint.items()), _total(P, method))


def mean_fmin_union(P: Poset, A: Iterable[int] | int, B: Iterable[int] | int, method: str = "dp") -> Fraction:
    return mean_fmin(P, mask_of(A) | mask_of(B), method)


def mean_product(P: Poset, x: int, y: int, method: str = "dp") -> Fraction:
    return mean_fmin_product(P, 1 << x, 1 << y, method)


def mean_min(P: Poset, x: int, y: int, method: str = "dp") -> Fraction:
    return mean_fmin(P, 1 << x | 1 << y, method)


_EXPRESSIONS = {
    "f": (1, lambda P, m, x: mean(P, x, m)),
    "f2": (1, lambda P, m, x: mean_square(P, x, m)),
    "ff": (2, lambda P, m, x, y: mean_product(P, x, y, m)),
    "min": (2, lambda P, m, x, y: mean_min(P, x, y, m)),
    "fmin": (1, lambda P, m, A: mean_fmin(P, A, m)),
    "fminfmin": (2, lambda P, m, A, B: mean_fmin_product(P, A, B, m)),
    "fmin_union": (2, lambda P, m, A, B: mean_fmin_union(P, A, B, m)),
}


def expectation(P: Poset, expr: tuple, method: str = "dp") -> Fraction:
    """Evaluate ``expr``, a tuple such as ``("ff", x, y)`` or ``("fmin", A)``.

    Known heads: f, f2, ff, min, fmin, fminfmin, fmin_union.
    """
    head, *args = expr
    if head not in _EXPRESSIONS:
        raise KeyError(f"unknown expression {head!r}")
    arity, fn = _EXPRESSIONS[head]
    if len(args) != arity:
        raise ValueError(f"{head} takes {arity} argument(s)")
    return fn(P, method, *args)


def covariance(P: Poset, x: int, y: int, method: str = "dp") -> Fraction:
    return mean_product(P, x, y, method) - mean(P, x, method) * mean(P, y, method)


def variance(P: Poset, x: int, method: str = "dp") -> Fraction:
    return covariance(P, x, x, method)


def second_moment_ratio(P: Poset, x: int, method: str = "dp") -> Fraction:
    return mean_square(P, x, method) / mean(P, x, method) ** 2


def prob_less(P: Poset, x: int, y: int, method: str = "dp") -> Fraction:
    """Pr[f(x) < f(y)]."""
    joint = _joint(P, 1 << x, 1 << y, method)
    return Fraction(sum(c for (i, j), c in joint.items() if i < j), _total(P, method))


def conditional_mean_above(P: Poset, x: int, y: int, method: str = "dp") -> Fraction | None:
    """E[f(x) | f(x) > f(y)], or None when the condition has probability 0."""
    joint = _joint(P, 1 << x, 1 << y, method)
    hits = sum(c for (i, j), c in joint.items() if i > j)
    if not hits:
        return None
    return Fraction(sum(i * c for (i, j), c in joint.items() if i > j), hits)


def balanced_pair(P: Poset, method: str = "dp") -> tuple[int, int] | None:
    """Some pair with 1/3 <= Pr[f(x) < f(y)] <= 2/3, if any."""
    lo, hi = Fraction(1, 3), Fraction(2, 3)
    for x in range(P.n):
        for y in range(x + 1, P.n):
            if not P.comparable(x, y) and lo <= prob_less(P, x, y, method) <= hi:
                return (x, y)
    return None
