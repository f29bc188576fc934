"""Special values of Dirichlet L-functions attached to Kronecker characters.

Exact values come back as :class:`Fraction` or :class:`MonomialValue`; the
numeric routines use numpy for finite sums and mpmath for Hurwitz zeta values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .arith import Cyc8, _factor_tuple, is_fundamental, kronecker, prime_divisors

__all__ = [
    "MonomialValue",
    "QuadChar",
    "euler_factor",
    "euler_factor_numeric",
    "l_chi_zero",
    "l_numeric",
    "l_one_exact",
    "l_one_numeric",
    "l_value",
    "l_value_incomplete",
    "zeta_minus_one",
]


# ---------------------------------------------------------------------------
# exact monomials c * pi^e * d^(-1/2)

def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (g, d) with n = g^2 * d and d squarefree."""
    g, d = 1, 1
    for p, e in _factor_tuple(n):
        g *= p ** (e // 2)
        if e % 2:
            d *= p
    return g, d


def _gaussian(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, tuple):
        return Fraction(x[0]), Fraction(x[1])
    if isinstance(x, Cyc8):
        return x.to_gaussian()
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0)
    raise TypeError(f"not a Gaussian rational: {x!r}")


class MonomialValue:
    """Exact value ``coeff * pi**pi_power * sqrt_arg**(-1/2)``.

    ``coeff`` is a Gaussian rational stored as a pair of Fractions.  The
    radical is kept squarefree; any square factor is pulled into ``coeff``.
    Zero is normalized to ``pi_power = 0, sqrt_arg = 1``.
    """

    __slots__ = ("re", "im", "pi_power", "sqrt_arg")

    def __init__(self, coeff=1, pi_power: int = 0, sqrt_arg: int = 1):
        re, im = _gaussian(coeff)
        if sqrt_arg <= 0:
            raise ValueError(f"sqrt_arg must be positive, got {sqrt_arg}")
        g, d = _squarefree_split(int(sqrt_arg))
        re, im = re / g, im / g
        if re == 0 and im == 0:
            pi_power, d = 0, 1
        self.re, self.im = re, im
        self.pi_power = int(pi_power)
        self.sqrt_arg = d

    @classmethod
    def sqrt(cls, n: int) -> "MonomialValue":
        """The exact square root of a positive integer."""
        # sqrt(n) = n * n^(-1/2)
        return cls(n, 0, n)

    @classmethod
    def pi(cls, e: int = 1) -> "MonomialValue":
        return cls(1, e, 1)

    @property
    def coeff(self) -> Cyc8:
        return Cyc8.gaussian(self.re, self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_rational(self) -> bool:
        return self.is_zero() or (self.im == 0 and self.pi_power == 0 and self.sqrt_arg == 1)

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a rational number")
        return self.re

    def conj(self) -> "MonomialValue":
        return MonomialValue((self.re, -self.im), self.pi_power, self.sqrt_arg)

    def _coerce(self, other) -> "MonomialValue":
        if isinstance(other, MonomialValue):
            return other
        return MonomialValue(other)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if (self.pi_power, self.sqrt_arg) != (o.pi_power, o.sqrt_arg):
            raise ValueError(
                "cannot add monomials with different shapes: "
                f"pi^{self.pi_power}/sqrt({self.sqrt_arg}) vs pi^{o.pi_power}/sqrt({o.sqrt_arg})"
            )
        return MonomialValue((self.re + o.re, self.im + o.im), self.pi_power, self.sqrt_arg)

    __radd__ = __add__

    def __neg__(self):
        return MonomialValue((-self.re, -self.im), self.pi_power, self.sqrt_arg)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        return MonomialValue((re, im), self.pi_power + o.pi_power, self.sqrt_arg * o.sqrt_arg)

    __rmul__ = __mul__

    def inverse(self) -> "MonomialValue":
        if self.is_zero():
            raise ZeroDivisionError("MonomialValue division by zero")
        n = self.re * self.re + self.im * self.im
        # 1/d^(-1/2) = d^(1/2) = d * d^(-1/2)
        return MonomialValue(
            (self.re / n * self.sqrt_arg, -self.im / n * self.sqrt_arg),
            -self.pi_power,
            self.sqrt_arg,
        )

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def _key(self):
        return (self.re, self.im, self.pi_power, self.sqrt_arg)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._key() == o._key()

    def __hash__(self):
        return hash(self._key())

    def __complex__(self):
        scale = math.pi ** self.pi_power / math.sqrt(self.sqrt_arg)
        return complex(float(self.re) * scale, float(self.im) * scale)

    def to_dict(self) -> dict:
        return {
            "coeff_re": str(self.re),
            "coeff_im": str(self.im),
            "pi_pow": self.pi_power,
            "sqrt_arg": self.sqrt_arg,
        }

    def __repr__(self):
        return (
            f"MonomialValue(({self.re}, {self.im}), pi_power={self.pi_power}, "
            f"sqrt_arg={self.sqrt_arg})"
        )


# ---------------------------------------------------------------------------
# characters

@dataclass(frozen=True)
class QuadChar:
    """The character n -> (t/n)."""

    t: int

    def __post_init__(self):
        if not is_fundamental(self.t):
            raise ValueError(f"{self.t} is not a fundamental discriminant")

    @property
    def modulus(self) -> int:
        return abs(self.t)

    def __call__(self, n: int) -> int:
        return kronecker(self.t, n)

    def table(self) -> np.ndarray:
        return _char_table(self.t)


@lru_cache(maxsize=512)
def _char_table(t: int) -> np.ndarray:
    """Values chi_t(0), ..., chi_t(|t|-1); the character has period |t|."""
    q = abs(t)
    tab = np.array([kronecker(t, a) for a in range(q)], dtype=np.int8)
    tab.setflags(write=False)
    return tab


def _require_fundamental(t: int, sign: int) -> None:
    if not is_fundamental(t) or t == 1:
        raise ValueError(f"{t} is not a fundamental discriminant different from 1")
    if (t > 0) != (sign > 0):
        raise ValueError(f"expected a {'positive' if sign > 0 else 'negative'} discriminant, got {t}")


# ---------------------------------------------------------------------------
# exact values

def l_chi_zero(t: int) -> Fraction:
    """L(0, chi_t) = -(1/|t|) sum_{a=1}^{|t|} chi_t(a) a for t < 0."""
    _require_fundamental(t, -1)
    q = -t
    tab = _char_table(t)
    s = int(np.dot(tab.astype(np.int64), np.arange(q, dtype=np.int64)))
    return Fraction(-s, q)


def zeta_minus_one() -> Fraction:
    return Fraction(-1, 12)


def euler_factor(t: int, s: int, N: int) -> Fraction:
    """prod_{p | N} (1 - chi_t(p) p^(-s)), exactly, for integer ``s``."""
    if N < 1:
        raise ValueError("N must be positive")
    out = Fraction(1)
    for p in prime_divisors(N):
        out *= 1 - kronecker(t, p) * Fraction(p) ** (-int(s))
    return out


def euler_factor_numeric(t: int, s, N: int):
    """Same product as :func:`euler_factor` for real or mpmath ``s``."""
    out = 1
    for p in prime_divisors(N):
        out *= 1 - kronecker(t, p) * mpmath.power(p, -s)
    return out


def l_one_exact(t: int) -> MonomialValue:
    """L(1, chi_t) = pi |t|^(-1/2) L(0, chi_t) for t < 0."""
    _require_fundamental(t, -1)
    return MonomialValue(l_chi_zero(t), 1, -t)


# ---------------------------------------------------------------------------
# numeric values

def l_one_numeric(t: int) -> float:
    """L(1, chi_t) for real t > 1 from the finite log-sine formula."""
    _require_fundamental(t, +1)
    a = np.arange(1, t)
    chi = _char_table(t)[1:].astype(float)
    # math.fsum keeps the cancellation error well below 1e-12
    terms = chi * np.log(2.0 * np.sin(np.pi * a / t))
    return -math.fsum(terms.tolist()) / math.sqrt(t)


def l_numeric(t: int, s: float, terms: int) -> float:
    """Partial Dirichlet sum sum_{n <= terms} chi_t(n) n^(-s).

    The tail is bounded by ``terms**(1 - s) / (s - 1)``.  Meant as an oracle.
    """
    if s <= 1:
        raise ValueError("the Dirichlet series only converges absolutely for s > 1")
    if terms < 1:
        raise ValueError("terms must be positive")
    q = abs(t) if t != 1 else 1
    tab = _char_table(t) if q > 1 else np.ones(1, dtype=np.int8)
    total = 0.0
    chunk = 1 << 20
    for start in range(1, terms + 1, chunk):
        n = np.arange(start, min(start + chunk, terms + 1), dtype=np.int64)
        chi = tab[n % q].astype(float)
        # sum small terms first
        total += float(np.sum((chi * n.astype(float) ** (-s))[::-1]))
    return total


def l_value(t: int, s):
    """L(s, chi_t) for any complex ``s != 1`` via Hurwitz zeta (mpmath).

    ``t = 1`` gives the Riemann zeta function.
    """
    if t == 1:
        return mpmath.zeta(s)
    q = abs(t)
    tab = _char_table(t)
    total = mpmath.mpf(0)
    if s == 1:
        # each zeta(s, a/q) has a pole; the digamma form is their finite sum
        for a in range(1, q):
            if tab[a]:
                total += int(tab[a]) * mpmath.digamma(mpmath.mpf(a) / q)
        return -total / q
    for a in range(1, q):
        if tab[a]:
            total += int(tab[a]) * mpmath.zeta(s, mpmath.mpf(a) / q)
    return total * mpmath.power(q, -s)


def l_value_incomplete(t: int, s, N: int):
    """L_N(s, chi_t): the L-function with the Euler factors at p | N removed."""
    return l_value(t, s) * euler_factor_numeric(t, s, N)
