"""List decoding from distinct deletion-channel reads.

A read is one length ``n - t`` subsequence of the transmitted length-``n``
word.  The candidate list for a set of reads is every length-``n`` word that
contains all of them.  With at least ``N_l(n, t) + 1`` distinct reads that
list has at most ``l - 1`` entries.

Read files are ASCII, one read per line over ``{0, 1}``; lines starting with
``#`` and blank lines are ignored.  The transmitted length is supplied
separately.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitseq import (
    BitWord,
    SequenceSet,
    WordLike,
    as_word,
    ball_masks,
    deletion_ball,
    insertion_ball,
)
from .combinatorics import intersection_bound_N
from .errors import DomainError, ReadFileError
from .extremal import common_subsequences, extremal_family

__all__ = [
    "ReadSet",
    "ReconstructionReport",
    "parse_reads",
    "sample_reads",
    "candidates",
    "check_guarantee",
    "worst_case_reads",
    "candidate_counts",
    "sample_read_batches",
]

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class ReadSet:
    """Distinct, equal-length reads of a word of length ``n``."""

    n: int
    reads: SequenceSet

    def __post_init__(self):
        if self.n - self.reads.length < 1:
            raise DomainError(
                f"reads of length {self.reads.length} imply {self.n - self.reads.length} deletions; need at least 1"
            )

    @property
    def t(self) -> int:
        return self.n - self.reads.length

    def __len__(self) -> int:
        return len(self.reads)

    @classmethod
    def from_words(cls, n: int, words) -> "ReadSet":
        """Validate and wrap reads; duplicates and mixed lengths are errors."""
        words = [as_word(w) for w in words]
        if not words:
            raise DomainError("read length is unknown for an empty read list; use ReadSet(n, SequenceSet(...))")
        length = words[0].length
        seen = set()
        for w in words:
            if w.length != length:
                raise DomainError(f"read {w} has length {w.length}, expected {length}")
            if w in seen:
                raise DomainError(f"duplicate read {w}")
            seen.add(w)
        return cls(n, SequenceSet(length, words))


@dataclass(frozen=True)
class ReconstructionReport:
    candidates: SequenceSet
    read_count: int
    threshold: int
    guarantee_met: bool
    list_within_bound: bool


def parse_reads(text: str, n: int) -> ReadSet:
    """Parse a read file; errors carry the offending line number."""
    words: list[BitWord] = []
    seen: dict[BitWord, int] = {}
    length = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        bad = next((ch for ch in line if ch not in "01"), None)
        if bad is not None:
            raise ReadFileError(f"unexpected character {bad!r}", lineno)
        if length is None:
            length = len(line)
        elif len(line) != length:
            raise ReadFileError(f"read has length {len(line)}, earlier reads have length {length}", lineno)
        if length > n - 1:
            raise ReadFileError(f"read length {length} needs at least one deletion from n={n}", lineno)
        w = BitWord.from_str(line)
        if w in seen:
            raise ReadFileError(f"duplicate read {line} (first seen on line {seen[w]})", lineno)
        seen[w] = lineno
        words.append(w)
    if not words:
        raise ReadFileError("no reads found", 0)
    return ReadSet.from_words(n, words)


def sample_reads(x: WordLike, t: int, m: int, seed: int) -> ReadSet:
    """Draw ``m`` distinct reads of ``x`` uniformly without replacement.

    Uses ``numpy.random.default_rng(seed)`` (PCG64); ``seed`` is taken
    modulo ``2**64``.
    """
    x = as_word(x)
    if not 1 <= t <= x.length:
        raise DomainError(f"deletion count must be in 1..{x.length}, got {t}")
    ball = deletion_ball(x, t)
    if not 1 <= m <= len(ball):
        raise DomainError(f"cannot draw {m} distinct reads: ball size is {len(ball)}")
    rng = np.random.default_rng(seed & _SEED_MASK)
    picked = rng.choice(ball.codes, size=m, replace=False)
    return ReadSet(x.length, SequenceSet.from_codes(ball.length, picked))


def _contains(codes: np.ndarray, n: int, y: BitWord) -> np.ndarray:
    # greedy leftmost matching of y inside every length-n payload at once
    target = np.array(list(y) + [2], dtype=np.int64)
    j = np.zeros(codes.shape, dtype=np.int64)
    for i in range(n):
        bit = (codes >> (n - 1 - i)) & 1
        j += bit == target[j]
    return j == y.length


def candidates(reads: ReadSet) -> SequenceSet:
    """Every length-``n`` word having all reads as subsequences.

    Equals the intersection of the reads' insertion balls; computed as the
    first read's insertion ball filtered by the remaining reads.
    """
    n, t = reads.n, reads.t
    members = list(reads.reads)
    if not members:
        raise DomainError("no reads to decode")
    pool = insertion_ball(members[0], t).codes
    for y in members[1:]:
        if pool.size == 0:
            break
        pool = pool[_contains(pool, n, y)]
    return SequenceSet.from_codes(n, pool, assume_sorted_unique=True)


def check_guarantee(n: int, ell: int, t: int, reads: ReadSet) -> ReconstructionReport:
    """Decode and compare the list size against ``l - 1``.

    Never raises on a violated guarantee; the report carries both flags.
    """
    if ell < 3:
        raise DomainError(f"list guarantee is stated for l >= 3, got {ell}")
    if reads.n != n or reads.t != t:
        raise DomainError(f"reads are for n={reads.n}, t={reads.t}; asked about n={n}, t={t}")
    found = candidates(reads)
    threshold = intersection_bound_N(n, ell, t) + 1
    return ReconstructionReport(
        candidates=found,
        read_count=len(reads),
        threshold=threshold,
        guarantee_met=len(reads) >= threshold,
        list_within_bound=len(found) <= ell - 1,
    )


def worst_case_reads(n: int, ell: int, t: int) -> ReadSet:
    """All common reads of the extremal family; decoding them leaves at least ``l`` candidates."""
    family = extremal_family(n, ell)
    if not 1 <= t <= n:
        raise DomainError(f"deletion count must be in 1..{n}, got {t}")
    return ReadSet(n, common_subsequences(family.centers, t))


def candidate_counts(n: int, t: int, read_batches: np.ndarray) -> np.ndarray:
    """Number of candidates for each row of a ``(trials, m)`` array of read payloads.

    Bulk counterpart of ``len(candidates(...))`` for experiments: compares
    every read set against the precomputed deletion balls of all ``2**n``
    words.  Rows must hold distinct payloads of length-``n - t`` reads.
    """
    batches = np.asarray(read_batches, dtype=np.int64)
    if batches.ndim != 2:
        raise DomainError("read batches must be a 2-D array")
    balls = ball_masks(n, t)
    words = balls.shape[1]
    trials = batches.shape[0]
    # dense mask of each read set
    masks = np.zeros((trials, words), dtype=np.uint64)
    rows = np.repeat(np.arange(trials), batches.shape[1])
    flat = batches.ravel()
    np.bitwise_or.at(masks, (rows, flat // 64), np.left_shift(np.uint64(1), (flat % 64).astype(np.uint64)))
    out = np.empty(trials, dtype=np.int64)
    step = max(1, 2**22 // (balls.shape[0] * words))
    for lo in range(0, trials, step):
        chunk = masks[lo:lo + step]
        covered = (balls[None, :, :] & chunk[:, None, :]) == chunk[:, None, :]
        out[lo:lo + step] = covered.all(axis=2).sum(axis=1)
    return out


def sample_read_batches(n: int, t: int, m: int, trials: int, seed: int) -> np.ndarray:
    """Seeded ``(trials, m)`` read payloads, each row drawn from one source word.

    The source is uniform over words whose ball holds at least ``m`` reads;
    the reads are uniform without replacement from that ball.
    """
    rng = np.random.default_rng(seed & _SEED_MASK)
    balls = [deletion_ball(BitWord(n, c), t).codes for c in range(1 << n)]
    eligible = [c for c, b in enumerate(balls) if b.size >= m]
    if not eligible:
        raise DomainError(f"no word of length {n} has {m} distinct reads at t={t}")
    sources = rng.choice(np.asarray(eligible), size=trials)
    out = np.empty((trials, m), dtype=np.int64)
    for c in np.unique(sources).tolist():
        idx = np.flatnonzero(sources == c)
        ball = balls[c]
        keys = rng.random((idx.size, ball.size))
        pick = np.argpartition(keys, m - 1, axis=1)[:, :m] if m < ball.size else np.tile(np.arange(m), (idx.size, 1))
        out[idx] = ball[pick]
    return out
