from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mockhurwitz.arith import Cyc8, decompose_discriminant, divisors, kronecker, moebius, prime_divisors
from mockhurwitz.classnumbers import gen_hurwitz
from mockhurwitz.kloosterman import (
    LocalFactorTable,
    a4,
    c_frak,
    gauss_local_exact,
    gauss_local_numeric,
    hurwitz_from_local_data,
    kloosterman_matrix,
    kloosterman_numeric,
    kohnen_max_error,
    kohnen_rhs,
    kz_factored,
    kz_tail_bound,
    kz_truncated_oracle,
    local_density_A,
    local_density_A_general,
    local_density_A_series,
    modified_kloosterman_numeric,
    pei_wang_A1,
    residue_r,
    t_sum,
    t_sum_numeric,
    verify_local_product,
)
from mockhurwitz.lfunctions import MonomialValue

HALF, THREE_HALVES = Fraction(1, 2), Fraction(3, 2)


# ---------------------------------------------------------------------------
# Kloosterman sums

def kloosterman_loop(k, m, n, c):
    """Scalar re-implementation used as an independent oracle."""
    total = 0j
    for r in range(c):
        if math.gcd(r, c) != 1:
            continue
        eps = 1 if r % 4 == 1 else 1j
        total += kronecker(c, r) * eps ** int(2 * k) * cmath.exp(2j * math.pi * (m * pow(r, -1, c) + n * r) / c)
    return total / c


def test_kloosterman_trivial_value():
    assert abs(kloosterman_numeric(HALF, 0, 0, 4) - (1 + 1j) / 4) < 1e-15


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([HALF, THREE_HALVES]), st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 30))
def test_kloosterman_matches_scalar_loop(k, m, n, c4):
    c = 4 * c4
    assert abs(kloosterman_numeric(k, m, n, c) - kloosterman_loop(k, m, n, c)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(1, 60))
def test_weight_three_halves_functional_equation(m, n, c4):
    c = 4 * c4
    lhs = kloosterman_numeric(THREE_HALVES, m, n, c)
    rhs = -1j * kloosterman_numeric(HALF, -m, -n, c)
    assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("k,c", [(HALF, 6), (Fraction(5, 2), 8), (HALF, 0)])
def test_kloosterman_rejects(k, c):
    with pytest.raises(ValueError):
        kloosterman_numeric(k, 1, 1, c)


def test_modified_sum_rejects_even_modulus():
    with pytest.raises(ValueError):
        modified_kloosterman_numeric(HALF, 0, 0, 10)


def test_modified_sum_is_order_independent():
    # the same sum with the residues visited in reverse order
    Nc = 5
    terms = []
    for r in reversed(range(1, Nc)):
        terms.append(kronecker(r, Nc) * cmath.exp(2j * math.pi * (0 * pow(4 * r, -1, Nc) + 0 * r) / Nc))
    eps = 1
    direct = 1j / 4 * kronecker(4, -Nc) * eps * sum(terms)
    assert abs(modified_kloosterman_numeric(HALF, 0, 0, Nc) - direct) < 1e-14


@pytest.mark.parametrize("N", [1, 5, 7, 15])
@pytest.mark.parametrize("k", [HALF, THREE_HALVES])
def test_kohnen_reduction_small_moduli(N, k):
    for c in (1, 3, 5, 7):
        assert kohnen_max_error(k, range(-8, 9), range(-8, 9), N, c) < 1e-9


def test_kohnen_rhs_example_modulus_eight():
    # c = 1, N = 1 gives K(0, 4; 4) and K(0, 1; 8) style values
    lhs = kloosterman_matrix(HALF, [0], [4], 4)
    assert abs(lhs[0, 0] - kohnen_rhs(HALF, [0], [4], 1, 1)[0, 0]) < 1e-12


def test_kohnen_rhs_nan_outside_plus_classes():
    rhs = kohnen_rhs(HALF, [1], [2, 3], 1, 3)
    assert np.isnan(rhs).all()


def test_kohnen_rhs_rejects_even_c():
    with pytest.raises(ValueError):
        kohnen_rhs(HALF, [1], [1], 1, 2)


# ---------------------------------------------------------------------------
# Gauss sums

@pytest.mark.parametrize("n,expected", [(1, Cyc8.gaussian(1, 1)), (0, Cyc8.gaussian(1, 1)),
                                        (2, Cyc8.gaussian(-1, -1)), (3, Cyc8.gaussian(-1, -1))])
def test_a4(n, expected):
    assert gauss_local_exact(2, 2, n).value == expected == a4(n)


@pytest.mark.parametrize("p,j,n", [(3, 1, 1), (2, 3, 1), (2, 1, 3), (2, 1, 4), (2, 5, 6), (7, 3, 49)])
def test_gauss_closed_form_matches_direct_sum(p, j, n):
    assert abs(complex(gauss_local_exact(p, j, n)) - gauss_local_numeric(p, j, n)) < 1e-10


@pytest.mark.parametrize("p,j,n,expected", [(5, 2, 25, 20), (5, 2, 5, -5)])
def test_gauss_numeric_values(p, j, n, expected):
    assert abs(gauss_local_numeric(p, j, n) - expected) < 1e-10


def test_gauss_numeric_guard():
    with pytest.raises(ValueError):
        gauss_local_numeric(2, 30, 1)


def test_gauss_rejects_bad_input():
    with pytest.raises(ValueError):
        gauss_local_exact(4, 1, 1)
    with pytest.raises(ValueError):
        gauss_local_exact(3, 0, 1)


@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 6), st.integers(-5000, 5000))
def test_odd_gauss_sums_have_finite_support(p, j, n):
    if n % p ** (j - 1):
        assert gauss_local_exact(p, j, n).is_zero()


def test_local_factor_table_caches():
    table = LocalFactorTable(3)
    assert table[(2, 9)] is table[(2, 9)]
    assert table.max_support(0) is None


# ---------------------------------------------------------------------------
# local densities

@pytest.mark.parametrize("p,n,expected", [(2, 1, Cyc8.gaussian(Fraction(1, 4), Fraction(1, 4))),
                                          (3, 1, Cyc8(Fraction(1, 3))), (3, 3, Cyc8(Fraction(-1, 9)))])
def test_local_density_values(p, n, expected):
    assert local_density_A(p, n) == expected


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_local_density_at_squares(p):
    target = Cyc8.gaussian(Fraction(1, 4), Fraction(1, 4)) if p == 2 else Cyc8(Fraction(1, p))
    for m in range(1, 101):
        assert local_density_A(p, m * m) == target


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_local_density_closed_form_vs_series(p):
    for n in range(-120, 121):
        if n:
            assert local_density_A(p, n) == local_density_A_series(p, n)


def test_local_density_general_specializes():
    assert abs(local_density_A_general(3, 3, 1.0) + 1 / 9) < 1e-12
    assert abs(local_density_A_general(2, 1, 1.0) - (1 + 1j) / 4) < 1e-12


def test_local_density_general_vs_numeric_series():
    s = 2.0
    series = sum(gauss_local_numeric(3, j, 1) / 3 ** (j * (s + 0.5)) for j in range(1, 12))
    assert abs(local_density_A_general(3, 1, s) - series) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 5])
def test_pei_wang_conjugate_relation(p):
    for n in range(-200, 201):
        if n:
            assert local_density_A(p, n) == pei_wang_A1(p, -n).conj()


def test_pei_wang_divisor_expansion():
    N = 15
    for n in range(1, 201):
        prod = Cyc8(1)
        for p in prime_divisors(N):
            prod = prod * pei_wang_A1(p, n)
        total = Cyc8(0)
        for ell in divisors(N):
            term = Cyc8(ell)
            for p in prime_divisors(ell):
                term = term * (pei_wang_A1(p, n) - Fraction(1, p))
            total = total + term
        assert prod == total / N


def test_pei_wang_rejects_zero():
    with pytest.raises(ValueError):
        pei_wang_A1(3, 0)


# ---------------------------------------------------------------------------
# divisor sums

def test_t_sum_examples():
    for m in (1, 3, 9, 10, 49):
        assert t_sum(20, 0, 1, m) == 1
    assert t_sum(20, 0, -4, 3) == Fraction(5, 3)


def double_sum(NN, s, t, n):
    """sum over a, b coprime to NN with (ab)^2 | n of mu(a) chi(a) a^-s b^(1-2s)."""
    total = Fraction(0)
    for a in range(1, math.isqrt(n) + 1):
        if math.gcd(a, NN) != 1 or n % (a * a):
            continue
        for b in range(1, math.isqrt(n // (a * a)) + 1):
            if math.gcd(b, NN) == 1 and (n // (a * a)) % (b * b) == 0:
                total += moebius(a) * kronecker(t, a) * Fraction(a) ** (-s) * Fraction(b) ** (1 - 2 * s)
    return total


@pytest.mark.parametrize("NN", [4, 20, 60])
@pytest.mark.parametrize("s", [0, 1, 2, -1])
def test_t_sum_matches_double_sum(NN, s):
    for n in range(1, 401):
        if n % 4 not in (0, 1):
            continue
        t, m = decompose_discriminant(n)
        assert double_sum(NN, s, t, n) == t_sum(NN, 1 - s, t, m), n


def test_t_sum_numeric_matches_exact():
    for m in (1, 6, 12, 35):
        assert abs(float(t_sum_numeric(20, 2.0, -3, m)) - float(t_sum(20, 2, -3, m))) < 1e-12


def test_t_sum_rejects_irrational_power():
    with pytest.raises(ValueError):
        t_sum(4, Fraction(1, 4), -3, 3)


# ---------------------------------------------------------------------------
# Kloosterman zeta function

# factored values at s = 2, confirmed by the truncated double sum with C = 10^4
FROZEN_S2 = {(-3, 1): 0.045117206473147785, (-4, 5): 0.0020343648755173686,
             (5, 1): 0.04078098975330126, (12, 7): -0.001142535403330376}


@pytest.mark.parametrize("key", FROZEN_S2)
def test_kz_factored_frozen_values(key):
    val = kz_factored(*key, 2.0)
    assert abs(val - FROZEN_S2[key] * (1 + 1j)) < 1e-14


def test_kz_factored_square_case_against_oracle():
    exact = kz_factored(4, 1, 2.5)
    approx = kz_truncated_oracle(4, 1, 2.5, 2000)
    assert abs(exact - approx) / abs(exact) < 1e-4


def test_kz_factored_zero_index_against_oracle():
    exact = kz_factored(0, 5, 2.5)
    approx = kz_truncated_oracle(0, 5, 2.5, 2000)
    assert abs(exact - approx) / abs(exact) < 1e-4


def test_kz_factored_rejects():
    with pytest.raises(ValueError):
        kz_factored(2, 1, 2.0)
    with pytest.raises(ValueError):
        kz_factored(-3, 9, 2.0)
    with pytest.raises(ValueError):
        kz_factored(-3, 1, 1.0)


def test_kz_oracle_cauchy():
    a = kz_truncated_oracle(-3, 1, 2.0, 500)
    b = kz_truncated_oracle(-3, 1, 2.0, 1000)
    assert abs(a - b) < kz_tail_bound(1, 2.0, 500)


def test_kz_oracle_weight_three_halves():
    for n, m in ((5, 1), (-3, 4), (0, 0)):
        a = kz_truncated_oracle(n, 1, 2.0, 200, k=THREE_HALVES, m=m)
        b = kz_truncated_oracle(-n, 1, 2.0, 200, k=HALF, m=-m)
        assert abs(a + 1j * b) < 1e-12


@pytest.mark.parametrize("n,N,coeff", [(1, 1, Fraction(3, 4)), (0, 5, Fraction(3, 8) / 6), (9, 15, Fraction(3, 4) / 24)])
def test_residue_values(n, N, coeff):
    assert residue_r(n, N) == MonomialValue((coeff, coeff), -2)


def test_residue_vanishes_off_squares():
    assert residue_r(5, 1).is_zero() and residue_r(-4, 5).is_zero()


def test_c_frak_negative_exact_example():
    val = c_frak(-3, 1)
    assert val.tag == "exact-monomial"
    assert val.exact == MonomialValue((Fraction(1, 2), Fraction(1, 2)), -1, 3)
    assert abs(complex(val.exact) - val.approx) < 1e-12


@pytest.mark.parametrize("N", [1, 5, 15])
def test_c_frak_exact_and_numeric_agree(N):
    for n in (-3, -4, -7, -8, -15, -20, -23, -100):
        val = c_frak(n, N)
        assert abs(complex(val.exact) - val.approx) < 1e-12


def test_c_frak_positive_nonsquare_is_numeric():
    val = c_frak(5, 1)
    assert val.tag == "numeric" and val.exact is None
    # Z(5, s) is regular at s = 1, so c(5) is its value there
    assert abs(val.approx - kz_factored(5, 1, 1 + 1e-9)) < 1e-7


def test_c_frak_square_step_halving():
    from mockhurwitz.kloosterman import _c_frak_square

    v1, v2, v3 = (_c_frak_square(4, 1, h) for h in (1e-2, 5e-3, 2.5e-3))
    ratio = abs(v1 - v2) / abs(v2 - v3)
    assert 3.5 < ratio < 4.5
    assert abs(c_frak(4, 1).approx - v3) < 1e-4


def test_c_frak_rejects_bad_index():
    with pytest.raises(ValueError):
        c_frak(2, 1)
    with pytest.raises(ValueError):
        c_frak(-5, 1)


# ---------------------------------------------------------------------------
# class numbers from local data

@pytest.mark.parametrize("ell,N,n", [(5, 5, 3), (1, 5, 3), (7, 7, 4), (15, 15, 11), (3, 15, 27), (1, 1, 12)])
def test_hurwitz_from_local_data_examples(ell, N, n):
    val = hurwitz_from_local_data(ell, N, n)
    assert val.is_rational() and val.to_rational() == gen_hurwitz(ell=ell, N=N, n=n)


def test_verify_local_product_small():
    rep = verify_local_product((5, 21), 80)
    assert rep.ok and rep.checked > 0
