"""Tests for exact rational arithmetic and eventually periodic base-p expansions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threshold_lab.exact import (
    BasePExpansion,
    digit_at,
    expand_base_p,
    format_rat,
    is_prime,
    multiplicative_order,
    require_prime,
    truncation,
)

F = Fraction

PRIMES = st.sampled_from([2, 3, 5, 7, 11, 13])


@pytest.mark.parametrize("n, expected", [
    (2, True), (3, True), (4, False), (5, True), (6, False),
    (1, False), (0, False), (-3, False), (97, True), (91, False),
    (7919, True), (7917, False),
])
def test_is_prime(n, expected):
    assert is_prime(n) is expected


def test_require_prime():
    assert require_prime(5) == 5
    with pytest.raises(ValueError):
        require_prime(6)
    with pytest.raises(ValueError):
        require_prime(1)


@pytest.mark.parametrize("a, m, expected", [
    (2, 7, 3),
    (3, 7, 6),
    (2, 5, 4),
    (5, 6, 2),
    (10, 7, 6),
])
def test_multiplicative_order(a, m, expected):
    assert multiplicative_order(a, m) == expected


def test_multiplicative_order_requires_coprime():
    with pytest.raises(ValueError):
        multiplicative_order(2, 6)


@pytest.mark.parametrize("q, text", [
    (F(1, 2), "1/2"),
    (F(1), "1"),
    (F(3, 4), "3/4"),
    (F(0), "0"),
    (F(40, 81), "40/81"),
    (F(2, 4), "1/2"),
])
def test_format_rat(q, text):
    assert format_rat(q) == text


# -- expansions ------------------------------------------------------------


@pytest.mark.parametrize("x, p, preperiod, period", [
    (F(1, 2), 5, (), (2,)),
    (F(1), 3, (), (2,)),          # 1 = 0.222... in base 3 (non-terminating form)
    (F(1, 6), 3, (0,), (1,)),     # 1/6 = 0.0111... in base 3
    (F(1, 2), 2, (0,), (1,)),     # 1/2 = 0.0111... in base 2
    (F(1, 3), 2, (), (0, 1)),
    (F(1, 5), 2, (), (0, 0, 1, 1)),
    (F(1, 4), 2, (0, 0), (1,)),
])
def test_expand_base_p_examples(x, p, preperiod, period):
    exp = expand_base_p(x, p)
    assert exp.preperiod == tuple(preperiod)
    assert exp.period == tuple(period)


def test_expansion_digit_and_truncation():
    exp = expand_base_p(F(1, 2), 5)
    assert exp.digit_at(1) == 2
    assert exp.digit_at(7) == 2
    assert exp.truncation(2) == F(12, 25)
    assert digit_at(exp, 7) == 2
    assert truncation(exp, 2) == F(12, 25)

    exp = expand_base_p(F(1, 6), 3)
    assert exp.digit_at(1) == 0
    assert exp.digit_at(2) == 1
    assert exp.truncation(3) == F(4, 27)


def test_expansion_rejects_terminating_form():
    # The all-zero tail is not a valid canonical representation.
    with pytest.raises(ValueError):
        BasePExpansion(2, (1,), (0,))
    with pytest.raises(ValueError):
        BasePExpansion(3, (), (0,))


def test_expansion_rejects_bad_digits():
    with pytest.raises(ValueError):
        BasePExpansion(2, (2,), (1,))
    with pytest.raises(ValueError):
        BasePExpansion(3, (), (3,))
    with pytest.raises(ValueError):
        BasePExpansion(3, (-1,), (1,))


def test_expand_base_p_domain():
    with pytest.raises(ValueError):
        expand_base_p(F(0), 3)
    with pytest.raises(ValueError):
        expand_base_p(F(3, 2), 3)
    with pytest.raises(ValueError):
        expand_base_p(F(1, 2), 4)


@given(
    p=PRIMES,
    num=st.integers(min_value=1, max_value=499),
    den=st.integers(min_value=1, max_value=499),
)
def test_expansion_round_trip(p, num, den):
    """value() inverts expand_base_p on every rational in (0, 1]."""
    x = F(num, den)
    if x > 1:
        x = 1 / x
    exp = expand_base_p(x, p)
    assert exp.value() == x
    # canonical: the period is never the all-zero word
    assert any(d != 0 for d in exp.period)


@given(
    p=PRIMES,
    num=st.integers(min_value=1, max_value=200),
    den=st.integers(min_value=1, max_value=200),
    L=st.integers(min_value=1, max_value=8),
)
@settings(max_examples=60)
def test_truncation_error_bound(p, num, den, L):
    """0 < x - trunc_L(x) <= p^-L, and trunc has denominator dividing p^L."""
    x = F(num, den)
    if x > 1:
        x = 1 / x
    exp = expand_base_p(x, p)
    t = exp.truncation(L)
    err = x - t
    assert 0 < err <= F(1, p**L)
    assert (p**L) % t.denominator == 0 if t else True


@given(p=PRIMES, num=st.integers(1, 120), den=st.integers(1, 120))
@settings(max_examples=60)
def test_digit_prefix_matches_truncation(p, num, den):
    x = F(num, den)
    if x > 1:
        x = 1 / x
    exp = expand_base_p(x, p)
    total = F(0)
    for e in range(1, 7):
        total += F(exp.digit_at(e), p**e)
    assert total == exp.truncation(6)
