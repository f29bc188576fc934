"""One test per acceptance criterion; the terminal summary lists each verdict."""

from __future__ import annotations

import time
from fractions import Fraction

import numpy as np
import pytest

from mockhurwitz.arith import prime_divisors
from mockhurwitz.classnumbers import gen_hurwitz, hurwitz, hurwitz_oracle
from mockhurwitz.kloosterman import (
    gauss_local_exact,
    gauss_local_numeric,
    kz_factored,
    local_density_A,
    pei_wang_A1,
    residue_r,
    verify_kohnen,
    verify_zeta_factorization,
)
from mockhurwitz.lfunctions import MonomialValue
from mockhurwitz.qseries import verify_example, verify_shadow, verify_theorem_1_1, verify_theta_cubed
from mockhurwitz.special import NumericPoint, alpha, alpha_via_gamma, incomplete_gamma, xi_numeric

acceptance = pytest.mark.acceptance


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@acceptance(1, "hurwitz(n) equals the brute-force oracle for n <= 2000 in under 30 s")
def test_criterion_01_hurwitz_oracle():
    with Timer() as t:
        bad = [n for n in range(2001) if hurwitz(n) != hurwitz_oracle(n)]
    assert bad == []
    assert t.elapsed < 30


@acceptance(2, "12(H(4n) - 2H(n)) equals r3(n) for n <= 500 in under 10 s")
def test_criterion_02_three_squares():
    with Timer() as t:
        rep = verify_theta_cubed(501)
    assert rep.ok, rep.summary()
    assert rep.checked == 500
    assert t.elapsed < 10


@acceptance(3, "3 H_{5,5} equals the Q5 theta series for n <= 100; printed slice reproduced")
def test_criterion_03_example_n5():
    rep = verify_example(5, 101)
    assert rep.ok, rep.summary()
    assert rep.checked == 100
    assert rep.details["coefficients"] == [[0, 1], [3, 2], [7, 6], [8, 6], [12, 8], [15, 6]]


@acceptance(4, "2 H_{7,7} equals the Q7 theta series for n <= 100; printed slice reproduced")
def test_criterion_04_example_n7():
    rep = verify_example(7, 101)
    assert rep.ok, rep.summary()
    assert rep.checked == 100
    assert rep.details["coefficients"] == [[0, 1], [4, 2], [7, 2], [8, 4], [11, 4], [15, 8], [16, 6]]


@acceptance(5, "prime level: H_{N,N}/(1-N) = H - ((N+1)/N) H_{1,N} for N in {5,7,11,13}, n <= 200")
@pytest.mark.parametrize("N", [5, 7, 11, 13])
def test_criterion_05_prime_levels(N):
    for n in range(201):
        lhs = gen_hurwitz(ell=N, N=N, n=n) / (1 - N)
        rhs = hurwitz(n) - Fraction(N + 1, N) * gen_hurwitz(ell=1, N=N, n=n)
        assert lhs == rhs, n
    rep = verify_theorem_1_1(N, 201)
    assert rep.ok, rep.summary()


@acceptance(6, "N = 15: both shadow coefficient formulas agree and the modularity check passes, n <= 200")
def test_criterion_06_composite_level():
    shadow = verify_shadow(15, 201)
    assert shadow.ok and shadow.checked == 200, shadow.summary()
    thm = verify_theorem_1_1(15, 201)
    assert thm.ok and thm.checked == 200, thm.summary()


@acceptance(7, "A(p, n) = conj(A_1(p, -n)) for p = 2 and odd p <= 50, 0 < |n| <= 500")
def test_criterion_07_conjugate_densities():
    primes = [2] + [p for p in range(3, 51) if prime_divisors(p) == [p]]
    for p in primes:
        for n in range(-500, 501):
            if n:
                assert local_density_A(p, n) == pei_wang_A1(p, -n).conj(), (p, n)


@acceptance(8, "Gauss sum closed forms match direct sums within 1e-9 for 2^j <= 4096, p^j <= 2401, |n| <= 50")
def test_criterion_08_gauss_sums():
    worst = 0.0
    for p, limit in ((2, 4096), (3, 2401), (5, 2401), (7, 2401)):
        j = 1
        while p**j <= limit:
            for n in range(-50, 51):
                err = abs(complex(gauss_local_exact(p, j, n)) - gauss_local_numeric(p, j, n))
                worst = max(worst, err)
            j += 1
    assert worst < 1e-9


@acceptance(9, "factored Kloosterman zeta vs truncated double sum at s = 2, C = 10^4: relative error < 1e-2 in under 60 s")
def test_criterion_09_factorization():
    with Timer() as t:
        rep = verify_zeta_factorization(((-3, 1), (-4, 5), (5, 1), (12, 7)), s_param=2.0, cutoff=10_000, tol=1e-2)
    assert rep.ok, rep.summary()
    assert t.elapsed < 60


@acceptance(10, "residue at the pole: exact values and numeric limit within 1e-6 for N in {1, 5, 15}")
@pytest.mark.parametrize("N", [1, 5, 15])
def test_criterion_10_residue(N):
    prod = Fraction(1)
    for p in prime_divisors(N):
        prod /= p + 1
    # r(N) = prod / (2 pi); (3/2pi)(1+i) r(N) and (3/4pi)(1+i) r(N)
    square = MonomialValue((3 * prod / 4, 3 * prod / 4), -2)
    zero = MonomialValue((3 * prod / 8, 3 * prod / 8), -2)
    h = 1e-8
    for n in (0, 1, 4, 9, 16, 25, 5, 8, 12, -3, -4, -7, -20):
        expected = zero if n == 0 else square if n > 0 and int(n**0.5) ** 2 == n else MonomialValue(0)
        assert residue_r(n, N) == expected, n
        # (s - 3/4) K(0, n; 2s) with 2s = s' + 1/2, i.e. (s' - 1)/2 Z(n, s')
        numeric = h / 2 * kz_factored(n, N, 1 + h)
        assert abs(numeric - complex(expected)) < 1e-6, n


@acceptance(11, "alpha by two quadratures within 1e-8 on 20 log points; xi spot check at tau = i within 1e-5")
def test_criterion_11_alpha():
    grid = np.logspace(-2, 2, 20)
    assert max(abs(alpha(y) - alpha_via_gamma(y)) for y in grid) < 1e-8
    f = lambda pt: alpha(4 * pt.v) * pt.q(1)
    got = xi_numeric(f, NumericPoint(0.0, 1.0), 0.5)
    # the result is proportional to q^(-1), which is e^(2 pi) at tau = i
    expected = -np.sqrt(np.pi) * incomplete_gamma(-0.5, 4 * np.pi) * np.exp(2 * np.pi)
    assert abs(got - expected) < 1e-5


@acceptance(12, "Kohnen reduction of Kloosterman sums within 1e-9 for odd c <= 25, N in {1,5,7,15}, |m|,|n| <= 12")
def test_criterion_12_kohnen():
    rep = verify_kohnen((1, 5, 7, 15), c_max=25, m_max=12, tol=1e-9, weights=(Fraction(1, 2), Fraction(3, 2)))
    assert rep.ok, rep.summary()
    assert rep.details["max_error"] < 1e-9
