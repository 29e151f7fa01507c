"""Extremal families and exhaustive maximization of ball intersections.

The search enumerates ascending tuples of payloads (so each set of centers
is visited once) and keeps the running intersection as a dense bitset.  The
intersection can only shrink as centers are added, so a prefix whose
intersection is already too small is cut.  Optionally, tuples are also
reduced modulo the group generated by complement and reversal acting on all
centers at once: a tuple is kept only if it is lexicographically minimal in
its orbit.  The lexicographically least maximizing tuple is always minimal
in its orbit, so the reported witness does not depend on that option.

Work is split on the first element of the tuple.  Each subtree is searched
with the same starting bound (the achieved value of a known tuple), so the
per-subtree results and statistics are independent of how subtrees are
assigned to worker processes.
"""
from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .bitseq import (
    BitWord,
    SequenceSet,
    WordLike,
    alternating,
    as_word,
    ball_masks,
    concat,
    deletion_ball,
    intersect_all,
)
from .combinatorics import intersection_bound_N
from .errors import BudgetExceeded, DomainError

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_MAX_N",
    "ExtremalFamily",
    "SearchReport",
    "Verdict",
    "extremal_family",
    "intersection_size",
    "common_subsequences",
    "brute_force_max",
    "verify_theorem",
    "max_n_for",
    "is_orbit_minimal",
]

# largest n searched exhaustively per number of centers; ell >= 6 uses the last entry
DEFAULT_MAX_N = {2: 12, 3: 10, 4: 8, 5: 7, 6: 6}


def max_n_for(ell: int) -> int:
    return DEFAULT_MAX_N.get(ell, DEFAULT_MAX_N[6])


@dataclass(frozen=True)
class ExtremalFamily:
    n: int
    ell: int
    centers: tuple[BitWord, ...]

    def __post_init__(self):
        if len(set(self.centers)) != len(self.centers):
            raise DomainError("extremal family centers must be distinct")


def extremal_family(n: int, ell: int) -> ExtremalFamily:
    """Centers ``10 a_{n-2}`` and ``(01)^{j-1} a_{n-2(j-1)}`` for ``j = 2..ell``.

    ``a_m`` is the alternating word of length ``m``.  Defined only for
    ``n >= 2(ell - 1)``; other inputs are refused.
    """
    if ell < 2:
        raise DomainError(f"need at least 2 centers, got {ell}")
    if n < 2 * (ell - 1):
        raise DomainError(f"construction needs n >= 2(ell-1) = {2 * (ell - 1)}, got n={n}")
    centers = [concat(BitWord.from_str("10"), alternating(n - 2))]
    for j in range(2, ell + 1):
        centers.append(concat(BitWord.from_str("01" * (j - 1)), alternating(n - 2 * (j - 1))))
    return ExtremalFamily(n, ell, tuple(centers))


def common_subsequences(centers: Sequence[WordLike], t: int) -> SequenceSet:
    """Intersection of the radius-``t`` deletion balls of ``centers``."""
    words = [as_word(c) for c in centers]
    if not words:
        raise DomainError("need at least one center")
    n = words[0].length
    if any(w.length != n for w in words):
        raise DomainError("centers must all have the same length")
    if not 0 <= t <= n:
        raise DomainError(f"deletion radius must be in 0..{n}, got {t}")
    return intersect_all(deletion_ball(w, t) for w in words)


def intersection_size(centers: Sequence[WordLike], t: int) -> int:
    return len(common_subsequences(centers, t))


class Verdict(str, enum.Enum):
    MATCH = "match"
    BELOW = "brute_force_below_formula"
    ABOVE = "brute_force_above_formula"

    @classmethod
    def compare(cls, brute: int, formula: int) -> "Verdict":
        if brute == formula:
            return cls.MATCH
        return cls.BELOW if brute < formula else cls.ABOVE


@dataclass(frozen=True)
class SearchReport:
    """Outcome of one exhaustive maximization.

    ``extremal_value`` holds the intersection size of the extremal family
    at this point, or None where the family is undefined.
    """

    n: int
    ell: int
    t: int
    max_value: int
    witness: tuple[BitWord, ...]
    tuples_examined: int
    tuples_pruned: int
    formula_value: int
    verdict: Verdict
    extremal_value: int | None = None

    def __post_init__(self):
        if intersection_size(self.witness, self.t) != self.max_value:
            raise AssertionError("witness does not achieve the reported maximum")
        if Verdict.compare(self.max_value, self.formula_value) is not self.verdict:
            raise AssertionError("verdict inconsistent with values")

    @property
    def asserted(self) -> bool:
        """Whether this point lies where the formula is claimed to be exact."""
        return self.t >= self.ell - 1 and self.t >= 1 and self.n >= self.t + self.ell - 1

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "l": self.ell,
            "t": self.t,
            "formula": self.formula_value,
            "brute_force": self.max_value,
            "verdict": self.verdict.value,
            "witness": ";".join(str(w) for w in self.witness),
            "tuples_examined": self.tuples_examined,
            "tuples_pruned": self.tuples_pruned,
        }

    def certificate(self) -> str:
        common = common_subsequences(self.witness, self.t)
        lines = [
            f"# n={self.n} l={self.ell} t={self.t}",
            f"# maximum intersection size {self.max_value} (formula {self.formula_value}, {self.verdict.value})",
            f"# searched {self.tuples_examined} complete tuples, pruned {self.tuples_pruned} branches",
            "centers:",
            *(f"  {w}" for w in self.witness),
            f"common subsequences ({len(common)}):",
            *(f"  {w}" for w in common.words()),
        ]
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=32)
def _orbit_tables(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    codes = np.arange(1 << n, dtype=np.int64)
    rev = np.zeros_like(codes)
    for i in range(n):
        rev |= ((codes >> i) & 1) << (n - 1 - i)
    mask = (1 << n) - 1
    comp = codes ^ mask
    both = rev ^ mask
    orbit_min = np.minimum(np.minimum(codes, comp), np.minimum(rev, both))
    for arr in (rev, orbit_min):
        arr.setflags(write=False)
    return rev, orbit_min, np.int64(mask)


def is_orbit_minimal(codes: Sequence[int], n: int) -> bool:
    """True iff the sorted tuple is lexicographically least among its images
    under complement, reversal and both, applied to every element."""
    rev, _, mask = _orbit_tables(n)
    base = tuple(sorted(int(c) for c in codes))
    arr = np.asarray(base, dtype=np.int64)
    for image in (arr ^ mask, rev[arr], rev[arr] ^ mask):
        if tuple(sorted(image.tolist())) < base:
            return False
    return True


@dataclass
class _SubtreeResult:
    first: int
    value: int = -1
    witness: tuple[int, ...] = ()
    examined: int = 0
    pruned: int = 0


@dataclass
class _Search:
    n: int
    ell: int
    t: int
    use_symmetry: bool
    seed: int
    debug: bool = False
    balls: np.ndarray = field(init=False)

    def __post_init__(self):
        self.balls = ball_masks(self.n, self.t)
        self.sizes = np.bitwise_count(self.balls).sum(axis=1, dtype=np.int64)

    def run(self, first: int) -> _SubtreeResult:
        res = _SubtreeResult(first)
        size = 1 << self.n
        pool = np.arange(first + 1, size, dtype=np.int64)
        if self.use_symmetry:
            _, orbit_min, _ = _orbit_tables(self.n)
            if orbit_min[first] != first:
                return res
            # every element of an orbit-minimal tuple has its whole orbit at or above the first element
            pool = pool[orbit_min[pool] >= first]
        if pool.size < self.ell - 1:
            return res
        count = int(self.sizes[first])
        if count < self.seed:
            res.pruned += 1
            return res
        self._extend(res, self.balls[first], count, (first,), pool)
        return res

    def _bound(self, res: _SubtreeResult) -> int:
        return max(self.seed, res.value + 1)

    def _extend(self, res, mask, count, prefix, pool) -> None:
        remaining = self.ell - len(prefix)
        counts = np.bitwise_count(self.balls[pool] & mask).sum(axis=1, dtype=np.int64)
        if self.debug and counts.size:
            assert int(counts.max()) <= count, "intersection grew when adding a center"
        if remaining == 1:
            res.examined += int(pool.size)
            ok = np.flatnonzero(counts >= self._bound(res))
            if ok.size == 0:
                return
            # highest count first, then smallest payload
            order = ok[np.lexsort((ok, -counts[ok]))]
            for idx in order.tolist():
                tup = prefix + (int(pool[idx]),)
                if self.use_symmetry and not is_orbit_minimal(tup, self.n):
                    continue
                res.value = int(counts[idx])
                res.witness = tup
                return
            return
        # a child at index i needs remaining - 1 more elements after it
        limit = pool.size - (remaining - 1)
        for idx in range(limit):
            c = int(counts[idx])
            if c < self._bound(res):
                res.pruned += 1
                continue
            child = int(pool[idx])
            self._extend(res, mask & self.balls[child], c, prefix + (child,), pool[idx + 1:])


def _run_subtrees(args) -> list[_SubtreeResult]:
    n, ell, t, use_symmetry, seed, debug, firsts = args
    search = _Search(n, ell, t, use_symmetry, seed, debug)
    return [search.run(a) for a in firsts]


def _starting_bound(n: int, ell: int, t: int) -> int:
    # any achieved value is a sound starting bound; the extremal family is cheap to evaluate
    if n >= 2 * (ell - 1):
        return intersection_size(extremal_family(n, ell).centers, t)
    return 0


def brute_force_max(
    n: int,
    ell: int,
    t: int,
    use_symmetry: bool = True,
    thread_count: int = 1,
    max_n: int | None = None,
    debug: bool = False,
    starting_bound: int | None = None,
) -> SearchReport:
    """Maximize ``|intersection of D_t(x_i)|`` over all sets of ``ell`` distinct words.

    ``max_n`` overrides the per-``ell`` size budget in :data:`DEFAULT_MAX_N`.
    ``thread_count > 1`` distributes subtrees over worker processes; the
    report is identical for every worker count.  ``starting_bound`` must be
    a value some tuple is known to reach; by default it is the extremal
    family's value (or 0 where that family is undefined).  ``debug`` checks
    at every node that adding a center never enlarges the intersection.
    """
    if ell < 2:
        raise DomainError(f"need at least 2 centers, got {ell}")
    if t < 1:
        raise DomainError(f"deletion radius must be at least 1, got {t}")
    if n < t + 1:
        raise DomainError(f"need n >= t + 1, got n={n}, t={t}")
    if thread_count < 1:
        raise DomainError(f"thread count must be positive, got {thread_count}")
    budget = max_n_for(ell) if max_n is None else max_n
    if n > budget:
        raise BudgetExceeded(
            f"exhaustive search over C(2^{n}, {ell}) = {math.comb(1 << n, ell)} tuples "
            f"exceeds the budget n <= {budget} for l={ell}",
            budget,
        )
    if ell > (1 << n):
        raise DomainError(f"only {1 << n} words of length {n}, cannot pick {ell} distinct")

    seed = _starting_bound(n, ell, t) if starting_bound is None else starting_bound
    firsts = list(range((1 << n) - ell + 1))
    if thread_count == 1:
        results = _run_subtrees((n, ell, t, use_symmetry, seed, debug, firsts))
    else:
        chunks = [firsts[i::thread_count] for i in range(thread_count)]
        with ProcessPoolExecutor(max_workers=thread_count) as pool:
            parts = pool.map(
                _run_subtrees,
                [(n, ell, t, use_symmetry, seed, debug, chunk) for chunk in chunks if chunk],
            )
            results = sorted((r for part in parts for r in part), key=lambda r: r.first)

    best = max(results, key=lambda r: r.value)
    if best.value < 0:
        raise AssertionError("search found no tuple reaching its own starting bound")
    # max() keeps the first maximum, i.e. the one with the smallest first element
    witness = tuple(BitWord(n, c) for c in best.witness)
    formula = intersection_bound_N(n, ell, t)
    extremal = intersection_size(extremal_family(n, ell).centers, t) if n >= 2 * (ell - 1) else None
    return SearchReport(
        n=n,
        ell=ell,
        t=t,
        max_value=best.value,
        witness=witness,
        tuples_examined=sum(r.examined for r in results),
        tuples_pruned=sum(r.pruned for r in results),
        formula_value=formula,
        verdict=Verdict.compare(best.value, formula),
        extremal_value=extremal,
    )


def verify_theorem(
    grid: Iterable[tuple[int, int, int]],
    thread_count: int = 1,
    max_n: int | None = None,
) -> list[SearchReport]:
    """Run :func:`brute_force_max` on each ``(n, ell, t)`` point.

    Every point is budget-checked before any search starts.  Mismatches at
    points outside the asserted region (``t < ell - 1``) are logged as
    findings; the caller decides what to do with asserted mismatches.
    """
    grid = list(grid)
    for n, ell, t in grid:
        budget = max_n_for(ell) if max_n is None else max_n
        if n > budget:
            raise BudgetExceeded(f"point (n={n}, l={ell}, t={t}) exceeds the budget n <= {budget}", budget)
    reports = []
    for n, ell, t in grid:
        report = brute_force_max(n, ell, t, thread_count=thread_count, max_n=max_n)
        if report.verdict is not Verdict.MATCH and not report.asserted:
            log.info(
                "finding at n=%d l=%d t=%d: search %d vs formula %d",
                n, ell, t, report.max_value, report.formula_value,
            )
        reports.append(report)
    return reports
