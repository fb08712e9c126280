"""Euler and Entringer numbers, the zigzag F/G/H sums, and three
log-concavity lemmas on nonnegative sequences."""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial
from typing import Sequence


class NotLogConcave(ValueError):
    pass


@lru_cache(maxsize=None)
def _seidel(n: int) -> tuple[tuple[int, ...], ...]:
    """Rows 0..n of the boustrophedon triangle; E_k ends (or starts) row k."""
    rows = [(1,)]
    for k in range(1, n + 1):
        prev = rows[-1]
        row = [0]
        for v in reversed(prev):
            row.append(row[-1] + v)
        rows.append(tuple(row))
    return tuple(rows)


def euler_numbers(n: int) -> list[int]:
    """E_0, ..., E_n (alternating permutation counts)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [row[-1] for row in _seidel(n)]


def euler(n: int) -> int:
    return euler_numbers(n)[n]


@lru_cache(maxsize=None)
def _updown(n: int, k: int) -> int:
    """Up-down permutations of [n] (s1 < s2 > s3 < ...) with s1 = k."""
    if not 1 <= k <= n:
        return 0
    if n == 1:
        return 1
    # After s1 = k the rest is down-up on n-1 values starting above k;
    # complementing turns down-up starting at j into up-down starting at n-j.
    return sum(_updown(n - 1, n - j) for j in range(k, n))


def entringer(n: int, k: int) -> int:
    """Number of up-down permutations of [n] starting with k.

    Row sums give E_n, and on the zigzag fence this is the number of linear
    extensions with f(x_1) = k.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return _updown(n, k)


def entringer_row(n: int) -> list[int]:
    return [entringer(n, k) for k in range(1, n + 1)]


def entringer_alternating_sum(n: int, k: int) -> int:
    """sum_i (-1)^i C(k, 2i+1) E_{n-2i-1}.

    This agrees with ``entringer(n + 1, n + 1 - k)`` for 1 <= k <= n except
    at k = n with n even, where it is off by (-1)**(n//2 + 1).
    """
    E = euler_numbers(max(n, 1))
    return sum((-1) ** i * comb(k, 2 * i + 1) * E[n - 2 * i - 1] for i in range((k - 1) // 2 + 1) if n - 2 * i - 1 >= 0)


@lru_cache(maxsize=None)
def _multinomial(n: int, *parts: int) -> int:
    rest = n - sum(parts)
    if rest < 0 or min(parts, default=0) < 0:
        return 0
    out = factorial(n) // factorial(rest)
    for p in parts:
        out //= factorial(p)
    return out


def _pair_term(n: int, i: int, j: int, E: list[int]) -> int:
    return _multinomial(n - 2, 2 * i - 2, 2 * j - 2 * i - 1) * E[2 * i - 2] * E[2 * j - 2 * i - 1] * E[n - 2 * j + 1]


def fgh_polynomials(n: int, k: int) -> tuple[int, int, int]:
    """``(F_n(k), G_n(k), H_n(k))`` for odd n = 2m+1 and 0 <= k <= m+1."""
    if n < 1 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    m = (n - 1) // 2
    if not 0 <= k <= m + 1:
        raise ValueError(f"k must lie in 0..{m + 1}")
    E = euler_numbers(n)
    F = sum(comb(n - 1, 2 * i - 2) * E[2 * i - 2] * E[n - 2 * i + 1] for i in range(1, k + 1))
    G = sum(_pair_term(n, i, j, E) for i in range(1, k + 1) for j in range(k + 1, m + 2))
    H = 2 * sum(_pair_term(n, i, j, E) for i in range(1, k + 1) for j in range(i + 1, k + 1))
    return F, G, H


def euler_inequality_1(n: int, k: int) -> tuple[int, int]:
    """Sides ``(F_n(k) F_n(m-k+1), E_n G_n(k))``; the first should not exceed the second."""
    m = (n - 1) // 2
    F, G, _ = fgh_polynomials(n, k)
    return F * fgh_polynomials(n, m - k + 1)[0], euler(n) * G


def euler_inequality_2(n: int, k: int) -> tuple[int, int]:
    """Sides ``(G_n(k)^2, H_n(k) H_n(m-k+1))``; the first should dominate."""
    m = (n - 1) // 2
    _, G, H = fgh_polynomials(n, k)
    return G * G, H * fgh_polynomials(n, m - k + 1)[2]


# -- log-concavity lemmas ------------------------------------------------------


def is_logconcave(p: Sequence) -> bool:
    """Nonnegative, p_k^2 >= p_{k-1} p_{k+1}, and no zeros between nonzero terms."""
    if any(v < 0 for v in p):
        return False
    support = [i for i, v in enumerate(p) if v]
    if support and any(p[i] == 0 for i in range(support[0], support[-1] + 1)):
        return False
    return all(p[k] * p[k] >= p[k - 1] * p[k + 1] for k in range(1, len(p) - 1))


def _require_lc(p: Sequence) -> None:
    if not is_logconcave(p):
        raise NotLogConcave("input sequence is not log-concave")


def suffix_sums(p: Sequence) -> list:
    out, acc = [], 0
    for v in reversed(p):
        acc += v
        out.append(acc)
    return out[::-1]


def suffix_sums_logconcave(p: Sequence) -> bool:
    _require_lc(p)
    s = suffix_sums(p)
    return all(s[k] * s[k] >= s[k - 1] * s[k + 1] for k in range(1, len(s) - 1))


def first2_lemma(p: Sequence) -> bool:
    """p_1 (p_2 + ... + p_n) <= p_2 (p_1 + p_2 + ... + p_n).

    The right-hand sum keeps p_2: dropping it gives a false statement, e.g.
    for (1, 1/2, 1/4).
    """
    _require_lc(p)
    if len(p) < 2:
        return True
    total = sum(p)
    return p[0] * (total - p[0]) <= p[1] * total


def second_moment_lemma(p: Sequence) -> bool:
    """(sum p_i)(sum i^2 p_i) <= 2 (sum i p_i)^2 with 1-based i."""
    _require_lc(p)
    s0 = sum(p)
    s1 = sum(i * v for i, v in enumerate(p, 1))
    s2 = sum(i * i * v for i, v in enumerate(p, 1))
    return s0 * s2 <= 2 * s1 * s1
