import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seqrecon.bitseq import (
    BitWord,
    SequenceSet,
    all_words,
    alternating,
    ball_masks,
    complement,
    concat,
    deletion_ball,
    deletion_distance,
    earliest_embedding_end,
    insertion_ball,
    intersect_all,
    is_subsequence,
    prefix_filter,
    prepend,
    reverse,
)
from seqrecon.combinatorics import ball_size_D
from seqrecon.errors import DomainError

from . import oracles

bitstrings = st.integers(0, 14).flatmap(lambda n: st.text("01", min_size=n, max_size=n))


def S(*ws):
    return SequenceSet(len(ws[0]) if ws else 0, ws)


class TestBitWord:
    def test_bit_order_is_numeral_order(self):
        w = BitWord.from_str("0110")
        assert w.bits == 6
        assert list(w) == [0, 1, 1, 0]
        assert w[1] == 1 and w[-1] == 0

    @given(bitstrings)
    def test_text_round_trip(self, s):
        assert str(BitWord.from_str(s)) == s

    def test_rejects_stray_payload_bits(self):
        with pytest.raises(DomainError):
            BitWord(3, 8)
        with pytest.raises(DomainError):
            BitWord(64, 0)

    def test_rejects_bad_text(self):
        with pytest.raises(DomainError):
            BitWord.from_str("012")

    def test_slice(self):
        w = BitWord.from_str("011010")
        assert str(w.slice(2)) == "1010"
        assert str(w.slice(1, 3)) == "11"
        assert str(w.slice(6)) == ""

    def test_max_length_word(self):
        w = BitWord.from_str("1" * 63)
        assert str(complement(w)) == "0" * 63
        assert len(deletion_ball(w, 62)) == 1


def test_alternating():
    assert str(alternating(4)) == "1010"
    assert str(alternating(5)) == "10101"
    assert str(alternating(0)) == ""
    assert str(alternating(63)) == ("10" * 32)[:63]
    with pytest.raises(DomainError):
        alternating(64)


def test_complement_reverse_concat():
    assert str(complement("10")) == "01"
    assert str(reverse("110")) == "011"
    assert str(concat("10", "1010")) == "101010"
    assert str(reverse("")) == ""
    with pytest.raises(DomainError):
        concat("1" * 40, "0" * 24)


def test_is_subsequence_examples():
    assert is_subsequence("10", "0110")
    assert is_subsequence("", "0110")
    # position-subset oracle for subsequences of 1010
    assert oracles.ball("1010", 2) == {"10", "11", "01", "00"}
    assert is_subsequence("11", "1010") == oracles.is_subseq("11", "1010")


@given(bitstrings, bitstrings)
def test_is_subsequence_matches_oracle(y, x):
    assert is_subsequence(y, x) == oracles.is_subseq(y, x)


def test_earliest_embedding_end_examples():
    assert earliest_embedding_end("1", "001") == 3
    assert earliest_embedding_end("1", "0110") == 2
    assert earliest_embedding_end("10", "01") is None
    assert earliest_embedding_end("", "01") == 0


def test_deletion_ball_examples():
    assert deletion_ball("101", 1).words() == ["01", "10", "11"]
    assert deletion_ball("1010", 2).words() == ["00", "01", "10", "11"]
    assert deletion_ball("10101", 2).words() == sorted(oracles.ball("10101", 2))
    assert deletion_ball("0110", 4).words() == [""]
    with pytest.raises(DomainError):
        deletion_ball("01", 3)


def test_deletion_ball_matches_position_subset_oracle_exhaustively():
    for n in range(0, 10):
        for x in oracles.words(n):
            for t in range(n + 1):
                assert deletion_ball(x, t).words() == sorted(oracles.ball(x, t))


def test_insertion_ball_examples():
    assert insertion_ball("0", 1).words() == ["00", "01", "10"]
    assert insertion_ball("0110", 0).words() == ["0110"]
    assert insertion_ball("", 2).words() == ["00", "01", "10", "11"]
    with pytest.raises(DomainError):
        insertion_ball("0" * 60, 4)


def test_insertion_ball_matches_filter_oracle():
    for m in range(0, 6):
        for y in oracles.words(m):
            for t in range(0, 4):
                assert insertion_ball(y, t).words() == sorted(oracles.supersequences(y, t))


def test_insertion_ball_size_independent_of_content():
    for m in range(0, 11):
        for t in range(0, 4):
            sizes = {len(insertion_ball(y, t)) for y in oracles.words(m)}
            assert len(sizes) == 1, (m, t, sizes)


def _pairs_down(n, t):
    m = n - t
    parts = [(c << m) | deletion_ball(BitWord(n, c), t).codes for c in range(1 << n)]
    return np.sort(np.concatenate(parts))


def _pairs_up(n, t):
    m = n - t
    parts = [(insertion_ball(BitWord(m, c), t).codes << m) | c for c in range(1 << m)]
    return np.sort(np.concatenate(parts))


def test_duality_between_balls_exhaustive():
    # {(x, y): y in D_t(x)} and {(x, y): x in I_t(y)} are the same relation
    for n in range(0, 13):
        for t in range(0, n + 1):
            assert np.array_equal(_pairs_down(n, t), _pairs_up(n, t)), (n, t)


def test_deletion_distance_examples():
    assert deletion_distance("10", "01") == 1
    assert deletion_distance("0110", "0110") == 0
    assert deletion_distance("1010", "0101") == 1
    with pytest.raises(DomainError):
        deletion_distance("10", "1")


def test_deletion_distance_equals_ball_definition():
    for n in range(0, 7):
        ws = oracles.words(n)
        for x in ws:
            for y in ws:
                assert deletion_distance(x, y) == oracles.distance_by_balls(x, y)


@settings(max_examples=200)
@given(st.integers(1, 9).flatmap(lambda n: st.tuples(*[st.text("01", min_size=n, max_size=n)] * 3)))
def test_deletion_distance_is_symmetric_invariant_metric(xyz):
    x, y, z = xyz
    d = deletion_distance
    assert d(x, y) == d(y, x)
    assert (d(x, y) == 0) == (x == y)
    assert d(x, z) <= d(x, y) + d(y, z)
    assert d(complement(x), complement(y)) == d(x, y)
    assert d(reverse(x), reverse(y)) == d(x, y)


def test_prefix_filter_and_prepend_examples():
    full = S("00", "01", "10", "11")
    assert prefix_filter(full, "1").words() == ["10", "11"]
    assert prefix_filter(full, "") == full
    assert prefix_filter(deletion_ball("0110", 2), "1").words() == ["10", "11"]
    assert prepend("1", S("0", "1")).words() == ["10", "11"]
    assert prepend("", full) == full
    assert prepend("01", S("1")).words() == ["011"]
    with pytest.raises(DomainError):
        prefix_filter(full, "101")


def test_intersect_all_examples():
    balls = [deletion_ball(x, 2) for x in ("1010", "0110", "0101")]
    assert intersect_all(balls).words() == ["00", "01", "10", "11"]
    s = S("01", "10")
    assert intersect_all([s]) == s
    assert len(intersect_all([s, SequenceSet(2)])) == 0
    with pytest.raises(DomainError):
        intersect_all([s, S("1")])
    with pytest.raises(DomainError):
        intersect_all([])


def test_intersect_all_sparse_path():
    # length above the dense threshold goes through sorted-array intersection
    a = SequenceSet(30, ["0" * 30, "1" * 30, "01" * 15])
    b = SequenceSet(30, ["1" * 30, "01" * 15, "10" * 15])
    assert a.dense is None
    assert intersect_all([a, b]).words() == sorted(["1" * 30, "01" * 15])


@given(st.lists(st.integers(0, 2**10 - 1), max_size=50))
def test_dense_and_sparse_forms_agree(codes):
    s = SequenceSet.from_codes(10, codes)
    assert SequenceSet.from_dense(10, s.dense) == s
    assert list(s.codes) == sorted(set(codes))


def test_sequence_set_invariants_and_text():
    s = SequenceSet(3, ["110", "001", "110"])
    assert s.words() == ["001", "110"]
    assert SequenceSet.from_text(s.to_text()) == s
    assert "110" in s and "111" not in s and "11" not in s
    with pytest.raises(DomainError):
        SequenceSet(3, ["11"])
    with pytest.raises(DomainError):
        SequenceSet.from_codes(2, [4])


def test_prefix_decomposition_worked_instance():
    x, v, t = "0110", "1", 2
    k = earliest_embedding_end(v, x)
    assert k == 2
    t_star = t - (k - len(v))
    assert t_star == 1
    left = prefix_filter(deletion_ball(x, t), v)
    right = prepend(v, deletion_ball(BitWord.from_str(x).slice(k), t_star))
    assert left == right
    assert left.words() == ["10", "11"]


def test_symmetry_equivariance_exhaustive():
    for n in range(0, 11):
        for x in oracles.words(n):
            for t in range(n + 1):
                ball = deletion_ball(x, t)
                assert deletion_ball(complement(x), t) == SequenceSet(n - t, [complement(y) for y in ball])
                assert deletion_ball(reverse(x), t) == SequenceSet(n - t, [reverse(y) for y in ball])


def test_size_bounds_exhaustive():
    for n in range(0, 13):
        for t in range(n + 1):
            top = ball_size_D(n, t)
            assert len(deletion_ball(alternating(n), t)) == top
            assert max(len(deletion_ball(BitWord(n, c), t)) for c in range(1 << n)) <= top


def test_ball_nesting_random():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(1, 14)
        x = "".join(rng.choice("01") for _ in range(n))
        t = rng.randint(1, n)
        ell = rng.randint(0, t - 1)
        outer = deletion_ball(x, t)
        for y in deletion_ball(x, ell):
            assert deletion_ball(y, t - ell).issubset(outer)


def test_ball_masks_rows_match_balls():
    table = ball_masks(6, 2)
    assert table.shape == (64, 1)
    assert not table.flags.writeable
    for c in range(64):
        assert SequenceSet.from_dense(4, table[c]) == deletion_ball(BitWord(6, c), 2)


def test_all_words():
    assert all_words(2).words() == ["00", "01", "10", "11"]
    assert np.array_equal(all_words(5).codes, np.arange(32))
