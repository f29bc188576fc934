from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mockhurwitz.arith import divisors
from mockhurwitz.classnumbers import (
    ClassNumberQuery,
    gen_hurwitz,
    hurwitz,
    hurwitz_oracle,
    sigma_coprime,
    sigma_ell,
)


@pytest.mark.parametrize("r,N,expected", [(6, 1, 12), (6, 3, 3), (10, 5, 3)])
def test_sigma_coprime(r, N, expected):
    assert sigma_coprime(r, N) == expected


@pytest.mark.parametrize("r,ell,N,expected", [(1, 1, 5, 1), (3, 1, 5, 4), (5, 1, 5, 5), (5, 5, 5, 1)])
def test_sigma_ell(r, ell, N, expected):
    assert sigma_ell(r, ell, N) == expected


def test_sigma_rejects():
    with pytest.raises(ValueError):
        sigma_coprime(0, 1)
    with pytest.raises(ValueError):
        sigma_ell(3, 3, 5)


@pytest.mark.parametrize("n,expected", [(0, Fraction(-1, 12)), (3, Fraction(1, 3)), (4, Fraction(1, 2)),
                                        (12, Fraction(4, 3)), (16, Fraction(3, 2)), (23, Fraction(3)),
                                        (1, 0), (2, 0)])
def test_hurwitz_values(n, expected):
    assert hurwitz(n) == expected


@pytest.mark.parametrize("n,expected", [(4, Fraction(1, 2)), (23, Fraction(3)), (16, Fraction(3, 2))])
def test_hurwitz_oracle_values(n, expected):
    assert hurwitz_oracle(n) == expected


def test_hurwitz_rejects_negative():
    with pytest.raises(ValueError):
        hurwitz(-1)
    with pytest.raises(ValueError):
        hurwitz_oracle(-1)


@settings(max_examples=200)
@given(st.integers(0, 20000))
def test_hurwitz_matches_oracle_random(n):
    assert hurwitz(n) == hurwitz_oracle(n)


@given(st.integers(0, 5000))
def test_twelve_hurwitz_is_integral(n):
    assert (12 * hurwitz(n)).denominator == 1


def test_hurwitz_is_thread_safe():
    ns = list(range(3000, 3400))
    with ThreadPoolExecutor(4) as pool:
        vals = list(pool.map(hurwitz, ns))
    assert vals == [hurwitz_oracle(n) for n in ns]


@pytest.mark.parametrize("ell,N,n,expected", [(5, 5, 0, Fraction(1, 3)), (5, 5, 3, Fraction(2, 3)),
                                              (1, 5, 3, Fraction(5, 12)), (1, 5, 0, 0), (3, 15, 0, 0)])
def test_gen_hurwitz_values(ell, N, n, expected):
    assert gen_hurwitz(ell=ell, N=N, n=n) == expected


def test_gen_hurwitz_accepts_query_object():
    assert gen_hurwitz(ClassNumberQuery(5, 5, 3)) == Fraction(2, 3)


@pytest.mark.parametrize("ell,N,n", [(2, 5, 3), (1, 4, 3), (3, 9, 3), (1, 5, -1)])
def test_gen_hurwitz_rejects(ell, N, n):
    with pytest.raises(ValueError):
        gen_hurwitz(ell=ell, N=N, n=n)


@given(st.integers(0, 2000))
def test_level_one_is_classical(n):
    assert gen_hurwitz(ell=1, N=1, n=n) == hurwitz(n)


@given(st.sampled_from([3, 5, 7, 15, 21, 105]), st.integers(0, 300))
def test_gen_hurwitz_plus_space_support(N, n):
    if n % 4 in (1, 2):
        for ell in divisors(N):
            assert gen_hurwitz(ell=ell, N=N, n=n) == 0


@pytest.mark.parametrize("N", [3, 5, 7, 11, 13, 17])
def test_prime_level_identity(N):
    for n in range(0, 201):
        lhs = gen_hurwitz(ell=N, N=N, n=n) / (1 - N)
        rhs = hurwitz(n) - Fraction(N + 1, N) * gen_hurwitz(ell=1, N=N, n=n)
        assert lhs == rhs, n


def test_gen_hurwitz_constant_terms():
    # H_{N,N}(0) = zeta(-1) prod (1 - p)
    assert gen_hurwitz(ell=15, N=15, n=0) == Fraction(-1, 12) * (1 - 3) * (1 - 5)
