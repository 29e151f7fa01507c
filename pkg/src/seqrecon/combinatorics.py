"""Exact counting functions for deletion balls and their intersections.

``D(n, t)`` is the largest size of a radius-``t`` deletion ball around a
length-``n`` binary word, and ``N_l(n, t)`` is the largest size of the
intersection of ``l`` such balls around distinct centers.  Every value is an
exact Python integer.

Boundary conventions for ``D`` live in one helper, shared by both evaluators:

* ``t < 0`` or ``n < t``  ->  0
* ``t == n``             ->  1 (only the empty word survives)
* ``t == 0``             ->  1 (the word itself)

With these, the terms of the ``N`` sum that fall off the edge vanish on their
own and the sum needs no special cases.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "CountMemo",
    "binom",
    "ball_size_D",
    "ball_size_D_recursive",
    "intersection_bound_N",
    "intersection_bound_N_recursive",
    "three_ball_lower_bound",
    "reconstruction_threshold",
]


@dataclass
class CountMemo:
    """Explicit cache for the recursive evaluators.

    Not thread-safe; share one between threads only under external locking.
    """

    d: dict[tuple[int, int], int] = field(default_factory=dict)
    n: dict[tuple[int, int, int], int] = field(default_factory=dict)

    def verify(self) -> bool:
        """Check every cached value against the closed forms."""
        for (n, t), value in self.d.items():
            if value != ball_size_D(n, t):
                return False
        for (n, ell, t), value in self.n.items():
            if value != intersection_bound_N(n, ell, t):
                return False
        return True


def binom(n: int, k: int) -> int:
    """C(n, k), or 0 when ``k < 0``, ``k > n`` or ``n < 0``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def _d_boundary(n: int, t: int) -> int | None:
    if t < 0 or n < t:
        return 0
    if t == n or t == 0:
        return 1
    return None


@lru_cache(maxsize=1 << 16)
def ball_size_D(n: int, t: int) -> int:
    """Maximum deletion-ball size ``sum_{i=0}^{t} C(n-t, i)``."""
    edge = _d_boundary(n, t)
    if edge is not None:
        return edge
    m = n - t
    # partial row sum of Pascal's triangle; sum the shorter side of the row
    if t >= m:
        return 1 << m
    short = min(t, m - t - 1)
    total = term = 1
    for i in range(1, short + 1):
        term = term * (m - i + 1) // i
        total += term
    return total if short == t else (1 << m) - total


def ball_size_D_recursive(n: int, t: int, memo: CountMemo | None = None) -> int:
    """``D(n, t)`` via ``D(n, t) = D(n-1, t) + D(n-2, t-1)``.

    Uses an explicit stack so large ``n`` does not hit the recursion limit.
    """
    memo = CountMemo() if memo is None else memo
    cache = memo.d
    hit = cache.get((n, t))
    if hit is not None:
        return hit
    edge = _d_boundary(n, t)
    if edge is not None:
        cache[(n, t)] = edge
        return edge

    def known(a: int, b: int) -> int | None:
        edge = _d_boundary(a, b)
        return edge if edge is not None else cache.get((a, b))

    stack = [(n, t)]
    while stack:
        a, b = stack[-1]
        if known(a, b) is not None:
            stack.pop()
            continue
        left, right = known(a - 1, b), known(a - 2, b - 1)
        if left is None or right is None:
            if left is None:
                stack.append((a - 1, b))
            if right is None:
                stack.append((a - 2, b - 1))
            continue
        cache[(a, b)] = left + right
        stack.pop()
    return known(n, t)


def _check_ell(ell: int) -> None:
    if ell < 2:
        raise DomainError(f"number of balls must be at least 2, got {ell}")


def intersection_bound_N(n: int, ell: int, t: int) -> int:
    """``N_l(n, t) = sum_{i=1}^{l-2} D(n-2i, t-i) + 2 D(n-2(l-1), t-(l-1))``.

    For ``l == 2`` the sum is empty and this is ``2 D(n-2, t-1)``.
    """
    if ell < 2:
        _check_ell(ell)
    d = ball_size_D
    total = 2 * d(n - 2 * (ell - 1), t - (ell - 1))
    for i in range(1, ell - 1):
        total += d(n - 2 * i, t - i)
    return total


def intersection_bound_N_recursive(
    n: int, ell: int, t: int, memo: CountMemo | None = None
) -> int:
    """``N_l(n, t) = D(n-2, t-1) + N_{l-1}(n-2, t-1)`` down to ``N_2``.

    The chain is walked iteratively and every link is cached.
    """
    memo = CountMemo() if memo is None else memo
    cache = memo.n
    key = (n, ell, t)
    value = cache.get(key)
    if value is not None:
        return value
    _check_ell(ell)
    # common case: the next link down is already known
    below = cache.get((n - 2, ell - 1, t - 1)) if ell > 2 else None
    if below is not None:
        head = memo.d.get((n - 2, t - 1))
        if head is None:
            head = ball_size_D_recursive(n - 2, t - 1, memo)
        value = below + head
        cache[key] = value
        return value
    chain = []
    while ell > 2 and key not in cache:
        chain.append(key)
        n, ell, t = n - 2, ell - 1, t - 1
        key = (n, ell, t)
    value = cache.get(key)
    if value is None:
        value = 2 * ball_size_D_recursive(n - 2, t - 1, memo)
        cache[key] = value
    for link in reversed(chain):
        a, _, b = link
        value += ball_size_D_recursive(a - 2, b - 1, memo)
        cache[link] = value
    return value


def three_ball_lower_bound(n: int, t: int) -> int:
    """The three-ball value in the form ``3 D(n-4, t-2) + D(n-3, t-1)``.

    Agrees with ``intersection_bound_N(n, 3, t)`` whenever ``t >= 1`` and
    ``n >= t + 2``.
    """
    return 3 * ball_size_D(n - 4, t - 2) + ball_size_D(n - 3, t - 1)


def reconstruction_threshold(n: int, ell: int, t: int) -> int:
    """Number of distinct reads that forces a candidate list of size ``< l``."""
    return intersection_bound_N(n, ell, t) + 1
