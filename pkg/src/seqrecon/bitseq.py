"""Binary words, sets of equal-length words, and subsequence machinery.

Bit order
---------
A :class:`BitWord` of length ``L`` stores the symbol at string position ``i``
(0-based, leftmost first) at payload bit ``L - 1 - i``.  The payload is then
the word read as a base-2 numeral, so ``int('0110', 2) == 6`` and integer
order on words of one length is lexicographic order.  Every conversion
between text and payload goes through :meth:`BitWord.from_str` and
:meth:`BitWord.__str__`.

Sets
----
:class:`SequenceSet` keeps its members as a sorted, duplicate-free
``int64`` array of payloads.  For member length ``<= DENSE_MAX_LENGTH`` it
also exposes a dense bitset over all ``2**length`` payloads (bit ``c`` of the
set lives in bit ``c % 64`` of 64-bit word ``c // 64``), which is what
intersections run on.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import DomainError

MAX_LENGTH = 63
DENSE_MAX_LENGTH = 24

__all__ = [
    "MAX_LENGTH",
    "DENSE_MAX_LENGTH",
    "BitWord",
    "SequenceSet",
    "as_word",
    "alternating",
    "complement",
    "reverse",
    "concat",
    "is_subsequence",
    "earliest_embedding_end",
    "deletion_ball",
    "insertion_ball",
    "deletion_distance",
    "lcs_length",
    "prefix_filter",
    "prepend",
    "intersect_all",
    "all_words",
    "ball_masks",
    "dense_popcount",
]


@dataclass(frozen=True, order=True)
class BitWord:
    """A binary word of length at most 63 packed into one integer."""

    length: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.length <= MAX_LENGTH:
            raise DomainError(f"word length must be in 0..{MAX_LENGTH}, got {self.length}")
        if not 0 <= self.bits < (1 << self.length):
            raise DomainError(f"payload {self.bits} does not fit in {self.length} bits")

    @classmethod
    def from_str(cls, text: str) -> "BitWord":
        if any(ch not in "01" for ch in text):
            raise DomainError(f"not a binary string: {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    def __str__(self) -> str:
        return format(self.bits, f"0{self.length}b") if self.length else ""

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> (self.length - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.bits >> (self.length - 1 - i)) & 1

    def slice(self, start: int, stop: int | None = None) -> "BitWord":
        """Symbols ``start:stop`` as a new word (Python slice semantics, step 1)."""
        start, stop, _ = slice(start, stop).indices(self.length)
        stop = max(start, stop)
        width = stop - start
        return BitWord(width, (self.bits >> (self.length - stop)) & ((1 << width) - 1))


WordLike = Union[BitWord, str]


def as_word(x: WordLike) -> BitWord:
    """Accept a :class:`BitWord` or its textual form."""
    if isinstance(x, BitWord):
        return x
    if isinstance(x, str):
        return BitWord.from_str(x)
    raise TypeError(f"expected BitWord or str, got {type(x).__name__}")


def alternating(n: int) -> BitWord:
    """The alternating word ``1010...`` of length ``n``."""
    if not 0 <= n <= MAX_LENGTH:
        raise DomainError(f"length must be in 0..{MAX_LENGTH}, got {n}")
    pattern = int("10" * 32, 2)  # 64 bits
    return BitWord(n, pattern >> (64 - n))


def complement(x: WordLike) -> BitWord:
    x = as_word(x)
    return BitWord(x.length, x.bits ^ ((1 << x.length) - 1))


def reverse(x: WordLike) -> BitWord:
    x = as_word(x)
    return BitWord(x.length, int(str(x)[::-1] or "0", 2))


def concat(v: WordLike, x: WordLike) -> BitWord:
    v, x = as_word(v), as_word(x)
    if v.length + x.length > MAX_LENGTH:
        raise DomainError(f"concatenation length {v.length + x.length} exceeds {MAX_LENGTH}")
    return BitWord(v.length + x.length, (v.bits << x.length) | x.bits)


def is_subsequence(y: WordLike, x: WordLike) -> bool:
    """True iff ``y`` is obtained from ``x`` by deleting symbols."""
    return earliest_embedding_end(y, x) is not None


def earliest_embedding_end(v: WordLike, x: WordLike) -> int | None:
    """Smallest ``k`` with ``v`` a subsequence of ``x[:k]``, or None.

    Greedy left-to-right matching; the empty word embeds at ``k == 0``.
    """
    v, x = as_word(v), as_word(x)
    j = 0
    if v.length == 0:
        return 0
    for k, symbol in enumerate(x, start=1):
        if symbol == v[j]:
            j += 1
            if j == v.length:
                return k
    return None


class SequenceSet:
    """An immutable, ascending, duplicate-free set of equal-length words."""

    __slots__ = ("length", "_codes", "_dense")

    def __init__(self, length: int, members: Iterable[WordLike] = ()):
        if not 0 <= length <= MAX_LENGTH:
            raise DomainError(f"member length must be in 0..{MAX_LENGTH}, got {length}")
        codes = []
        for item in members:
            w = as_word(item)
            if w.length != length:
                raise DomainError(f"member {w} has length {w.length}, expected {length}")
            codes.append(w.bits)
        self._init(length, np.unique(np.asarray(codes, dtype=np.int64)))

    def _init(self, length: int, codes: np.ndarray) -> None:
        self.length = length
        codes.setflags(write=False)
        self._codes = codes
        self._dense = None

    @classmethod
    def from_codes(cls, length: int, codes, assume_sorted_unique: bool = False) -> "SequenceSet":
        """Build from integer payloads; sorts and dedupes unless told not to."""
        arr = np.asarray(codes, dtype=np.int64)
        if not assume_sorted_unique:
            arr = np.unique(arr)
        if arr.size and (arr[0] < 0 or (length < MAX_LENGTH and arr[-1] >= (1 << length))):
            raise DomainError(f"payload out of range for length {length}")
        obj = cls.__new__(cls)
        obj._init(length, arr)
        return obj

    @classmethod
    def from_dense(cls, length: int, dense: np.ndarray) -> "SequenceSet":
        bits = np.unpackbits(np.ascontiguousarray(dense, dtype="<u8").view(np.uint8), bitorder="little")
        codes = np.flatnonzero(bits[: 1 << length]).astype(np.int64)
        return cls.from_codes(length, codes, assume_sorted_unique=True)

    @classmethod
    def from_text(cls, text: str) -> "SequenceSet":
        """Parse newline-separated words; blank input is rejected since length is unknown."""
        words = [line.strip() for line in text.splitlines() if line.strip()]
        if not words:
            raise DomainError("cannot infer member length from empty text")
        return cls(len(words[0]), words)

    @property
    def codes(self) -> np.ndarray:
        return self._codes

    @property
    def dense(self) -> np.ndarray | None:
        """Bitset over all payloads, or None above ``DENSE_MAX_LENGTH``."""
        if self.length > DENSE_MAX_LENGTH:
            return None
        if self._dense is None:
            self._dense = _codes_to_dense(self.length, self._codes)
            self._dense.setflags(write=False)
        return self._dense

    def __len__(self) -> int:
        return int(self._codes.size)

    def __iter__(self) -> Iterator[BitWord]:
        for c in self._codes.tolist():
            yield BitWord(self.length, c)

    def __contains__(self, item) -> bool:
        w = as_word(item)
        if w.length != self.length:
            return False
        i = np.searchsorted(self._codes, w.bits)
        return bool(i < self._codes.size and self._codes[i] == w.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SequenceSet):
            return NotImplemented
        return self.length == other.length and np.array_equal(self._codes, other._codes)

    def __hash__(self) -> int:
        return hash((self.length, self._codes.tobytes()))

    def __repr__(self) -> str:
        shown = ", ".join(self.words()[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"SequenceSet(length={self.length}, {{{shown}{more}}})"

    def words(self) -> list[str]:
        return [str(w) for w in self]

    def to_text(self) -> str:
        return "".join(f"{w}\n" for w in self.words())

    def issubset(self, other: "SequenceSet") -> bool:
        if self.length != other.length:
            return len(self) == 0
        return bool(np.isin(self._codes, other._codes, assume_unique=True).all())


def _codes_to_dense(length: int, codes: np.ndarray) -> np.ndarray:
    nbits = max(64, 1 << length)
    flags = np.zeros(nbits, dtype=bool)
    flags[codes] = True
    return np.packbits(flags, bitorder="little").view("<u8").astype(np.uint64)


def dense_popcount(dense: np.ndarray) -> int:
    return int(np.bitwise_count(dense).sum())


@lru_cache(maxsize=4096)
def _next_occurrence(length: int, bits: int) -> tuple[np.ndarray, np.ndarray]:
    # nxt[s][p] = smallest q >= p with x[q] == s, or length if none
    nxt = np.full((2, length + 1), length, dtype=np.int64)
    for p in range(length - 1, -1, -1):
        nxt[:, p] = nxt[:, p + 1]
        nxt[(bits >> (length - 1 - p)) & 1, p] = p
    nxt.setflags(write=False)
    return nxt[0], nxt[1]


def deletion_ball(x: WordLike, t: int) -> SequenceSet:
    """All distinct length ``|x| - t`` subsequences of ``x``.

    Builds subsequences symbol by symbol, always jumping to the next
    occurrence of the chosen symbol.  Each distinct subsequence has exactly
    one such leftmost embedding, so nothing is produced twice.
    """
    x = as_word(x)
    n = x.length
    if not 0 <= t <= n:
        raise DomainError(f"deletion radius must be in 0..{n}, got {t}")
    k = n - t
    nxt = _next_occurrence(n, x.bits)
    pos = np.zeros(1, dtype=np.int64)
    code = np.zeros(1, dtype=np.int64)
    for depth in range(k):
        last_ok = n - (k - depth)  # leaves room for the symbols still to come
        new_pos, new_code = [], []
        for s in (0, 1):
            q = nxt[s][pos]
            ok = q <= last_ok
            new_pos.append(q[ok] + 1)
            new_code.append((code[ok] << 1) | s)
        pos = np.concatenate(new_pos)
        code = np.concatenate(new_code)
    return SequenceSet.from_codes(k, np.sort(code), assume_sorted_unique=True)


def insertion_ball(y: WordLike, t: int) -> SequenceSet:
    """All words of length ``|y| + t`` that contain ``y`` as a subsequence.

    Each supersequence is generated once, via its leftmost embedding of
    ``y``: a symbol equal to the next unmatched symbol of ``y`` is always
    matched, any other symbol counts as one of the ``t`` insertions.
    """
    y = as_word(y)
    if t < 0:
        raise DomainError(f"insertion count must be nonnegative, got {t}")
    m = y.length
    total = m + t
    if total > MAX_LENGTH:
        raise DomainError(f"supersequence length {total} exceeds {MAX_LENGTH}")
    # sentinel 2 past the end never matches
    target = np.array(list(y) + [2], dtype=np.int64)
    matched = np.zeros(1, dtype=np.int64)
    inserted = np.zeros(1, dtype=np.int64)
    code = np.zeros(1, dtype=np.int64)
    for _ in range(total):
        parts = []
        for s in (0, 1):
            hit = target[matched] == s
            ins = inserted + (~hit)
            ok = ins <= t
            parts.append((matched[ok] + hit[ok], ins[ok], (code[ok] << 1) | s))
        matched = np.concatenate([p[0] for p in parts])
        inserted = np.concatenate([p[1] for p in parts])
        code = np.concatenate([p[2] for p in parts])
    return SequenceSet.from_codes(total, np.sort(code), assume_sorted_unique=True)


def lcs_length(x: WordLike, y: WordLike) -> int:
    """Length of a longest common subsequence (row-by-row dynamic program)."""
    xs, ys = list(as_word(x)), list(as_word(y))
    prev = [0] * (len(ys) + 1)
    for a in xs:
        cur = [0]
        for j, b in enumerate(ys, start=1):
            cur.append(prev[j - 1] + 1 if a == b else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def deletion_distance(x: WordLike, y: WordLike) -> int:
    """Smallest ``t`` at which the ``t``-deletion balls of ``x`` and ``y`` meet."""
    x, y = as_word(x), as_word(y)
    if x.length != y.length:
        raise DomainError(f"deletion distance needs equal lengths, got {x.length} and {y.length}")
    return x.length - lcs_length(x, y)


def prefix_filter(s: SequenceSet, v: WordLike) -> SequenceSet:
    """Members of ``s`` that start with ``v``."""
    v = as_word(v)
    if v.length > s.length:
        raise DomainError(f"prefix length {v.length} exceeds member length {s.length}")
    shift = s.length - v.length
    keep = s.codes[(s.codes >> shift) == v.bits]
    return SequenceSet.from_codes(s.length, keep, assume_sorted_unique=True)


def prepend(v: WordLike, s: SequenceSet) -> SequenceSet:
    """``{v + x : x in s}``."""
    v = as_word(v)
    if v.length + s.length > MAX_LENGTH:
        raise DomainError(f"prepended length {v.length + s.length} exceeds {MAX_LENGTH}")
    codes = s.codes | np.int64(v.bits << s.length) if v.length else s.codes
    return SequenceSet.from_codes(v.length + s.length, codes, assume_sorted_unique=True)


def intersect_all(sets: Iterable[SequenceSet]) -> SequenceSet:
    """Intersection of one or more sets of the same member length."""
    sets = list(sets)
    if not sets:
        raise DomainError("intersect_all needs at least one set")
    length = sets[0].length
    if any(s.length != length for s in sets):
        raise DomainError("intersect_all needs sets of one member length")
    if len(sets) == 1:
        return sets[0]
    if length <= DENSE_MAX_LENGTH:
        dense = reduce(np.bitwise_and, (s.dense for s in sets))
        return SequenceSet.from_dense(length, dense)
    codes = reduce(lambda a, b: np.intersect1d(a, b, assume_unique=True), (s.codes for s in sets))
    return SequenceSet.from_codes(length, codes, assume_sorted_unique=True)


def all_words(n: int) -> SequenceSet:
    """Every word of length ``n``."""
    if not 0 <= n <= DENSE_MAX_LENGTH:
        raise DomainError(f"refusing to enumerate 2**{n} words")
    return SequenceSet.from_codes(n, np.arange(1 << n, dtype=np.int64), assume_sorted_unique=True)


@lru_cache(maxsize=64)
def ball_masks(n: int, t: int) -> np.ndarray:
    """Dense deletion balls of every length-``n`` word, one row per payload.

    Shape ``(2**n, words)`` with ``uint64`` entries; read-only and cached.
    """
    if not 0 <= t <= n or n > 16:
        raise DomainError(f"ball table needs 0 <= t <= n <= 16, got n={n}, t={t}")
    rows = [deletion_ball(BitWord(n, c), t).dense for c in range(1 << n)]
    table = np.stack(rows)
    table.setflags(write=False)
    return table
