import pytest
from hypothesis import given, strategies as st

from seqrecon.combinatorics import (
    CountMemo,
    ball_size_D,
    ball_size_D_recursive,
    binom,
    intersection_bound_N,
    intersection_bound_N_recursive,
    reconstruction_threshold,
    three_ball_lower_bound,
)
from seqrecon.errors import DomainError

from .oracles import pascal_binom


@pytest.mark.parametrize("n,k,expected", [(3, 1, 3), (3, -1, 0), (2, 3, 0), (-1, 0, 0), (0, 0, 1)])
def test_binom_small(n, k, expected):
    assert binom(n, k) == expected


def test_binom_40_20_matches_pascal():
    assert pascal_binom(40, 20) == 137846528820
    assert binom(40, 20) == 137846528820


@given(st.integers(-5, 60), st.integers(-5, 60))
def test_binom_agrees_with_pascal(n, k):
    assert binom(n, k) == pascal_binom(n, k)


def test_ball_size_examples():
    assert ball_size_D(5, 2) == 7
    assert ball_size_D(2, 3) == 0
    assert ball_size_D(3, -1) == 0
    for n in range(30):
        assert ball_size_D(n, n) == 1
        assert ball_size_D(n, 0) == 1


def test_ball_size_recursive_examples():
    assert ball_size_D_recursive(5, 2) == 7
    assert ball_size_D_recursive(4, 1) == 4
    assert ball_size_D_recursive(0, 0) == 1


def test_recursive_handles_deep_arguments():
    # deeper than the default recursion limit
    assert ball_size_D_recursive(3000, 5) == ball_size_D(3000, 5)


def test_recursion_identity_on_grid():
    for n in range(1, 201):
        for t in range(1, n):
            assert ball_size_D(n, t) == ball_size_D(n - 1, t) + ball_size_D(n - 2, t - 1)


def test_two_ball_inequality_on_grid():
    for n in range(0, 201):
        for t in range(0, n + 1):
            assert ball_size_D(n, t) >= 2 * ball_size_D(n - 2, t - 1)


def test_intersection_bound_examples():
    assert intersection_bound_N(4, 3, 2) == 4
    assert intersection_bound_N(6, 3, 2) == 6
    assert intersection_bound_N(5, 3, 2) == 5
    for ell in range(3, 8):
        for n in range(ell, 30):
            assert intersection_bound_N(n, ell, 1) == 1


def test_two_ball_bound_value():
    for n in range(0, 40):
        for t in range(0, n + 1):
            assert intersection_bound_N(n, 2, t) == 2 * ball_size_D(n - 2, t - 1)
            assert intersection_bound_N_recursive(n, 2, t) == 2 * ball_size_D(n - 2, t - 1)


def test_base_case_power_of_two_when_t_at_least_ell_minus_one():
    for ell in range(2, 9):
        for t in range(ell - 1, 30):
            assert intersection_bound_N_recursive(t + ell - 1, ell, t) == 2 ** (ell - 1)


def test_base_case_below_power_of_two_when_t_small():
    # ell=4, t=2, n=5: the sum evaluates to 4, not 8; D(5, 2) = 7 < 8 anyway
    assert intersection_bound_N(5, 4, 2) == 4
    assert ball_size_D(5, 2) == 7


@pytest.mark.parametrize("fn", [intersection_bound_N, intersection_bound_N_recursive])
def test_ell_below_two_rejected(fn):
    with pytest.raises(DomainError):
        fn(5, 1, 2)


def test_three_ball_spellings_agree_in_range():
    for t in range(1, 60):
        for n in range(t + 2, 120):
            assert three_ball_lower_bound(n, t) == intersection_bound_N(n, 3, t)


def test_memo_is_consistent_and_reusable():
    memo = CountMemo()
    for n in range(0, 60):
        for t in range(0, n + 1):
            for ell in range(2, 6):
                intersection_bound_N_recursive(n, ell, t, memo)
    assert memo.d and memo.n
    assert memo.verify()
    memo.d[next(iter(memo.d))] += 1
    assert not memo.verify()


def test_threshold():
    assert reconstruction_threshold(6, 3, 2) == 7
    assert reconstruction_threshold(4, 3, 2) == 5


@given(st.integers(0, 80), st.integers(0, 80), st.integers(2, 8))
def test_bound_inequalities_in_regime(x, y, m):
    if y < 1 or x < y + m - 1:
        return
    assert ball_size_D(x - 1, y - 1) <= intersection_bound_N(x, m, y)
    for big in range(m, 9):
        if x >= y + big - 1:
            assert intersection_bound_N(x - 1, m, y - 1) <= intersection_bound_N(x, big, y)
