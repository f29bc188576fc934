"""Exact integer, rational and Q(zeta_8) arithmetic.

Rationals are :class:`fractions.Fraction`; everything else here is built on
plain Python integers, which are arbitrary precision already.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

__all__ = [
    "Cyc8",
    "DiscriminantSplit",
    "INFINITE_VALUATION",
    "ZETA8",
    "I",
    "SQRT2",
    "cyc8_embed",
    "decompose_discriminant",
    "divisors",
    "epsilon_unit",
    "factorize",
    "is_fundamental",
    "is_prime",
    "is_squarefree",
    "kronecker",
    "moebius",
    "prime_divisors",
    "valuation",
]

Rational = Union[int, Fraction]

# Stand-in for nu_p(0).  Only internal callers that expect it ever see it.
INFINITE_VALUATION = math.inf


# ---------------------------------------------------------------------------
# factorization and elementary functions

@lru_cache(maxsize=65536)
def _factor_tuple(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    f = 5
    step = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division, as ``{p: e}``."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    return dict(_factor_tuple(n))


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in _factor_tuple(abs(int(n)))] if n else []


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    return _factor_tuple(n) == ((n, 1),)


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in _factor_tuple(abs(n)))


@lru_cache(maxsize=16384)
def _divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in _factor_tuple(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return tuple(sorted(divs))


def divisors(n: int) -> tuple[int, ...]:
    """Positive divisors of ``|n|`` in increasing order."""
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    return _divisors(abs(int(n)))


def moebius(n: int) -> int:
    if n <= 0:
        raise ValueError(f"moebius needs a positive integer, got {n}")
    fac = _factor_tuple(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def _valuation(p: int, n: int):
    if n == 0:
        return INFINITE_VALUATION
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def valuation(p: int, n: int) -> int:
    """The exponent of the prime ``p`` in the nonzero integer ``n``.

    ``n = 0`` is refused here; internal code that needs nu_p(0) gets
    :data:`INFINITE_VALUATION` instead.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    return _valuation(p, n)


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol (a/b), defined for every pair of integers."""
    a, b = int(a), int(b)
    if b == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if b < 0:
        b = -b
        if a < 0:
            result = -result
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/b) for odd positive b
    a %= b
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def is_fundamental(t: int) -> bool:
    """True for fundamental discriminants (1 counts as one here)."""
    if t == 1:
        return True
    if t == 0:
        return False
    if t % 4 == 1:
        return is_squarefree(t)
    if t % 4 == 0:
        u = t // 4
        return u % 4 in (2, 3) and is_squarefree(u)
    return False


@dataclass(frozen=True)
class DiscriminantSplit:
    t: int
    m: int

    def __iter__(self) -> Iterator[int]:
        yield self.t
        yield self.m


def decompose_discriminant(D: int) -> DiscriminantSplit:
    """Write ``D = t*m**2`` with ``t`` fundamental (``t = 1`` for squares)."""
    D = int(D)
    if D == 0:
        raise ValueError("discriminant must be nonzero")
    if D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant (must be 0 or 1 mod 4)")
    sign = 1 if D > 0 else -1
    core, m = 1, 1
    for p, e in _factor_tuple(abs(D)):
        m *= p ** (e // 2)
        if e % 2:
            core *= p
    t = sign * core
    if t % 4 != 1:
        # t = 2 or 3 mod 4; borrow a factor 4 from the square part
        t *= 4
        m //= 2
    return DiscriminantSplit(t, m)


# ---------------------------------------------------------------------------
# Q(zeta_8)

def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Cyc8:
    """An element c0 + c1*z + c2*z^2 + c3*z^3 of Q(z), z = exp(pi*i/4)."""

    __slots__ = ("c",)

    def __init__(self, c0: Rational = 0, c1: Rational = 0, c2: Rational = 0, c3: Rational = 0):
        object.__setattr__(self, "c", (_q(c0), _q(c1), _q(c2), _q(c3)))

    def __setattr__(self, name, value):
        raise AttributeError("Cyc8 is immutable")

    @classmethod
    def coerce(cls, x) -> "Cyc8":
        if isinstance(x, Cyc8):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyc8")

    @classmethod
    def gaussian(cls, re: Rational, im: Rational = 0) -> "Cyc8":
        return cls(re, 0, im, 0)

    @classmethod
    def zeta_power(cls, k: int) -> "Cyc8":
        k %= 8
        c = [0, 0, 0, 0]
        c[k % 4] = 1 if k < 4 else -1
        return cls(*c)

    # ring operations
    def __add__(self, other):
        try:
            o = Cyc8.coerce(other)
        except TypeError:
            return NotImplemented
        return Cyc8(*(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc8(*(-a for a in self.c))

    def __sub__(self, other):
        try:
            o = Cyc8.coerce(other)
        except TypeError:
            return NotImplemented
        return Cyc8(*(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc8(*(a * other for a in self.c))
        if not isinstance(other, Cyc8):
            return NotImplemented
        out = [Fraction(0)] * 4
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(other.c):
                if not b:
                    continue
                k = i + j
                if k < 4:
                    out[k] += a * b
                else:
                    out[k - 4] -= a * b
        return Cyc8(*out)

    __rmul__ = __mul__

    def norm_to_q(self) -> Fraction:
        """Field norm down to Q (product of the four conjugates)."""
        prod = Cyc8(1)
        for k in (3, 5, 7):
            prod = prod * self.galois(k)
        n = self * prod
        assert n.c[1] == n.c[2] == n.c[3] == 0
        return n.c[0]

    def galois(self, k: int) -> "Cyc8":
        """Image under z -> z^k for odd k."""
        if k % 2 == 0:
            raise ValueError("Galois automorphisms send z to odd powers")
        out = Cyc8()
        for i, a in enumerate(self.c):
            if a:
                out = out + Cyc8.zeta_power(i * k) * a
        return out

    def inverse(self) -> "Cyc8":
        if not self:
            raise ZeroDivisionError("Cyc8 division by zero")
        others = Cyc8(1)
        for k in (3, 5, 7):
            others = others * self.galois(k)
        return others * (1 / (self * others).c[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Cyc8 division by zero")
            return Cyc8(*(a / other for a in self.c))
        if not isinstance(other, Cyc8):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyc8.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = Cyc8(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "Cyc8":
        c0, c1, c2, c3 = self.c
        return Cyc8(c0, -c3, -c2, -c1)

    # comparisons and conversions
    def __eq__(self, other):
        try:
            o = Cyc8.coerce(other)
        except TypeError:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def is_gaussian(self) -> bool:
        return self.c[1] == 0 and self.c[3] == 0

    def is_rational(self) -> bool:
        return self.c[1] == self.c[2] == self.c[3] == 0

    def to_gaussian(self) -> tuple[Fraction, Fraction]:
        if not self.is_gaussian():
            raise ValueError(f"{self!r} does not lie in Q(i)")
        return self.c[0], self.c[2]

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.c[0]

    def __complex__(self):
        return cyc8_embed(self)

    def __repr__(self):
        return "Cyc8({})".format(", ".join(str(a) for a in self.c))


_Z8 = cmath.exp(1j * math.pi / 4)
_POWERS = (1.0 + 0j, _Z8, 1j, 1j * _Z8)


def cyc8_embed(z: Cyc8) -> complex:
    """Complex value of ``z`` under z8 -> exp(pi*i/4)."""
    return sum(float(a) * w for a, w in zip(z.c, _POWERS))


ZETA8 = Cyc8(0, 1)
I = Cyc8(0, 0, 1)
SQRT2 = Cyc8(0, 1, 0, -1)


def epsilon_unit(d: int) -> Cyc8:
    """1 for d = 1 mod 4, i for d = 3 mod 4."""
    if d % 2 == 0:
        raise ValueError(f"epsilon_d needs odd d, got {d}")
    return Cyc8(1) if d % 4 == 1 else I
