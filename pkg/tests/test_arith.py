import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padic_radius.arith import (
    INF,
    Radius,
    approx_power,
    check_prime,
    curly_brace,
    digit_sum,
    fmt_log,
    is_prime,
    parse_log,
    vp,
    vp_factorial,
    vp_int,
)

primes = st.sampled_from([2, 3, 5, 7, 11])


def naive_vp_factorial(n, p):
    return sum(vp_int(k, p) for k in range(1, n + 1))


def test_spec_values():
    assert vp_int(8, 2) == 3
    assert vp_int(-12, 3) == 1
    assert vp(Fraction(9, 4), 2) == -2
    assert vp(0, 5) == INF
    assert digit_sum(5, 2) == 2
    assert vp_factorial(5, 2) == 3
    assert vp_factorial(6, 3) == 2
    assert curly_brace(4, 1, 2) == 2
    assert curly_brace(4, 2, 2) == 3
    assert curly_brace(6, 2, 2) == 3
    assert curly_brace(9, 0, 3) == 0
    assert vp_int(6, 2) == 1 and vp_int(5, 2) == 0
    assert digit_sum(0, 2) == 0 and digit_sum(4, 2) == 1 and digit_sum(10, 3) == 2
    assert vp_factorial(0, 2) == 0 and vp_factorial(4, 2) == 3 and vp_factorial(10, 3) == 4


def test_vp_int_rejects_zero():
    with pytest.raises(ValueError):
        vp_int(0, 2)


def test_curly_brace_needs_n_le_s():
    with pytest.raises(ValueError):
        curly_brace(2, 3, 2)
    assert curly_brace(0, 0, 3) == 0


def test_primes():
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ValueError):
        check_prime(9)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_legendre_up_to_ten_thousand(p):
    running = 0
    for n in range(1, 10**4 + 1):
        running += vp_int(n, p)
        assert vp_factorial(n, p) == running == (n - digit_sum(n, p)) // (p - 1)


@given(st.integers(0, 400), primes)
def test_legendre_matches_naive_sum(n, p):
    assert vp_factorial(n, p) == naive_vp_factorial(n, p)


@given(st.integers(1, 10**6), st.integers(1, 10**6), primes)
def test_vp_is_additive(a, b, p):
    assert vp_int(a * b, p) == vp_int(a, p) + vp_int(b, p)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), primes)
def test_vp_is_ultrametric(a, b, p):
    assert vp(a + b, p) >= min(vp(a, p), vp(b, p))


@given(st.integers(0, 24), st.integers(0, 3), st.sampled_from([2, 3]))
def test_curly_brace_against_subsets(s, n, p):
    if n > s:
        return
    best = max(sum(vp_int(k, p) for k in c) for c in combinations(range(1, s + 1), n))
    assert curly_brace(s, n, p) == best


@given(st.integers(1, 200), st.integers(0, 4), primes)
def test_curly_brace_monotone(s, n, p):
    if n + 1 <= s:
        assert curly_brace(s, n + 1, p) >= curly_brace(s, n, p)
    if n <= s:
        assert curly_brace(s + 1, n, p) >= curly_brace(s, n, p)


def test_fmt_and_parse_round_trip():
    for x in (Fraction(-3, 4), Fraction(0), Fraction(7), INF, -INF):
        assert parse_log(fmt_log(x)) == x
    assert fmt_log(Fraction(6, 8)) == "3/4"


def test_radius_arithmetic():
    r = Radius(Fraction(-1, 2))
    assert (r * r).logp == -1
    assert (r / r).logp == 0
    assert Radius(-1).root(3).logp == Fraction(-1, 3)
    assert Radius(-INF).is_zero and Radius(INF).is_infinite
    assert Radius(-1) < Radius(0) < Radius(INF)
    assert str(Radius(Fraction(-1, 2))) == "p^(-1/2)"
    with pytest.raises(ValueError):
        Radius(INF) * Radius(-INF)


def test_exact_flag_does_not_affect_comparison():
    assert Radius(1, exact=False) == Radius(1)


def test_approx_power():
    assert approx_power(2, Fraction(-1), 6) == "0.5"
    assert approx_power(4, Fraction(1, 2), 6) == "2.00000"
    assert math.isclose(float(approx_power(3, Fraction(-1, 2), 12)), 3 ** -0.5, rel_tol=1e-11)
