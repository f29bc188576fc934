"""Hurwitz class numbers and their level-N generalizations H_{l,N}(n)."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import (
    decompose_discriminant,
    divisors,
    is_squarefree,
    kronecker,
    moebius,
    prime_divisors,
)
from .lfunctions import euler_factor, l_chi_zero, zeta_minus_one

__all__ = [
    "ClassNumberQuery",
    "gen_hurwitz",
    "hurwitz",
    "hurwitz_oracle",
    "sigma_coprime",
    "sigma_ell",
]


@dataclass(frozen=True)
class ClassNumberQuery:
    ell: int
    N: int
    n: int

    def __post_init__(self):
        _check_level(self.N)
        if self.ell < 1 or self.N % self.ell:
            raise ValueError(f"ell={self.ell} does not divide N={self.N}")
        if self.n < 0:
            raise ValueError(f"n must be non-negative, got {self.n}")


def _check_level(N: int) -> None:
    if N < 1 or N % 2 == 0 or not is_squarefree(N):
        raise ValueError(f"N must be odd, squarefree and positive, got {N}")


def sigma_coprime(r: int, N: int) -> int:
    """Sum of the divisors of r that are coprime to N."""
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    return sum(d for d in divisors(r) if math.gcd(d, N) == 1)


def sigma_ell(r: int, ell: int, N: int) -> int:
    """Sum of d | r with gcd(d, ell) = 1 and gcd(r/d, N/ell) = 1."""
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    if ell < 1 or N % ell:
        raise ValueError(f"ell={ell} does not divide N={N}")
    cof = N // ell
    return sum(d for d in divisors(r) if math.gcd(d, ell) == 1 and math.gcd(r // d, cof) == 1)


def _twisted_divisor_sum(t: int, m: int, N: int, inner) -> int:
    total = 0
    for a in divisors(m):
        if math.gcd(a, N) != 1:
            continue
        mu = moebius(a)
        if mu:
            total += mu * kronecker(t, a) * inner(m // a)
    return total


# H(n) is consumed many times by the series code; a lock keeps the shared
# cache consistent if several threads fill it at once.
_hurwitz_cache: dict[int, Fraction] = {}
_hurwitz_lock = threading.Lock()


def _hurwitz_uncached(n: int) -> Fraction:
    if n == 0:
        return zeta_minus_one()
    if n % 4 in (1, 2):
        return Fraction(0)
    t, m = decompose_discriminant(-n)
    return l_chi_zero(t) * _twisted_divisor_sum(t, m, 1, lambda r: sigma_coprime(r, 1))


def hurwitz(n: int) -> Fraction:
    """The Hurwitz class number H(n), with H(0) = -1/12."""
    n = int(n)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    val = _hurwitz_cache.get(n)
    if val is None:
        val = _hurwitz_uncached(n)
        with _hurwitz_lock:
            _hurwitz_cache.setdefault(n, val)
    return val


@lru_cache(maxsize=1 << 16)
def _gen_hurwitz(ell: int, N: int, n: int) -> Fraction:
    if ell == N:
        if n == 0:
            out = zeta_minus_one()
            for p in prime_divisors(N):
                out *= 1 - p
            return out
        if n % 4 in (1, 2):
            return Fraction(0)
        t, m = decompose_discriminant(-n)
        lval = l_chi_zero(t) * euler_factor(t, 0, N)
        return lval * _twisted_divisor_sum(t, m, N, lambda r: sigma_coprime(r, N))

    if n == 0 or n % 4 in (1, 2):
        return Fraction(0)
    t, m = decompose_discriminant(-n)
    lval = l_chi_zero(t) * euler_factor(t, 0, ell)
    for p in prime_divisors(N // ell):
        lval *= (1 - Fraction(kronecker(t, p), p)) / (1 - Fraction(1, p * p))
    return lval * _twisted_divisor_sum(t, m, N, lambda r: sigma_ell(r, ell, N))


def gen_hurwitz(q: ClassNumberQuery | None = None, *, ell: int | None = None,
                N: int | None = None, n: int | None = None) -> Fraction:
    """The generalized Hurwitz class number H_{ell,N}(n).

    Accepts either a :class:`ClassNumberQuery` or the keywords ``ell``, ``N``,
    ``n``.
    """
    if q is None:
        q = ClassNumberQuery(ell, N, n)
    return _gen_hurwitz(q.ell, q.N, q.n)


def hurwitz_oracle(n: int) -> Fraction:
    """H(n) by counting reduced binary quadratic forms of discriminant -n.

    Forms equivalent to a multiple of x^2 + y^2 count 1/2 and multiples of
    x^2 + xy + y^2 count 1/3.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if n == 0:
        return Fraction(-1, 12)
    if n % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    # reduced forms satisfy 3a^2 <= n
    a = 1
    while 3 * a * a <= n:
        for b in range(-a + 1, a + 1):
            if (b * b + n) % (4 * a):
                continue
            c = (b * b + n) // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if a == b == c:
                total += Fraction(1, 3)
            elif b == 0 and a == c:
                total += Fraction(1, 2)
            else:
                total += 1
        a += 1
    return total
