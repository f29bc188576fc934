"""Half-integral weight Kloosterman sums, their local Gauss-sum factors and
the weight 1/2 Kloosterman zeta function Z(n, s) = K_{1/2}(0, n; s + 1/2).

Conventions
-----------
``s_param`` (written s below) is the variable in which the factored form is
stated; the Eisenstein spectral variable is ``s/2 + 1/4``, so the special
point 3/4 corresponds to ``s = 1``.

Direct exponential sums are evaluated in double precision and serve as
oracles.  Closed forms are exact, in :class:`~mockhurwitz.arith.Cyc8` or
:class:`~mockhurwitz.lfunctions.MonomialValue`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from .arith import (
    Cyc8,
    I,
    SQRT2,
    ZETA8,
    _factor_tuple,
    _valuation,
    decompose_discriminant,
    divisors,
    epsilon_unit,
    is_prime,
    is_squarefree,
    kronecker,
    moebius,
    prime_divisors,
)
from .lfunctions import (
    MonomialValue,
    euler_factor,
    euler_factor_numeric,
    l_one_exact,
    l_one_numeric,
    l_value,
)
from .report import VerificationReport, mismatch

__all__ = [
    "EULER_GAMMA",
    "GaussValue",
    "LocalFactorTable",
    "SpecialZetaValue",
    "a4",
    "c_frak",
    "gauss_local_exact",
    "gauss_local_numeric",
    "hurwitz_from_local_data",
    "kloosterman_matrix",
    "kloosterman_numeric",
    "kohnen_max_error",
    "kohnen_rhs",
    "kz_factored",
    "kz_tail_bound",
    "kz_truncated_oracle",
    "local_density_A",
    "local_density_A_general",
    "local_density_A_series",
    "modified_kloosterman_matrix",
    "modified_kloosterman_numeric",
    "pei_wang_A",
    "pei_wang_A1",
    "residue_r",
    "t_sum",
    "t_sum_numeric",
    "verify_kohnen",
    "verify_local_product",
    "verify_zeta_factorization",
]

# Euler-Mascheroni constant, 30 digits
EULER_GAMMA = mpmath.mpf("0.577215664901532860606512090082")

_TWO_PI_I = 2j * math.pi
_GAUSS_GUARD = 1 << 20


def _check_level(N: int) -> None:
    if N < 1 or N % 2 == 0 or not is_squarefree(N):
        raise ValueError(f"N must be odd, squarefree and positive, got {N}")


def _check_weight(k) -> int:
    """Return 2k for k in {1/2, 3/2}."""
    k = Fraction(k)
    if k not in (Fraction(1, 2), Fraction(3, 2)):
        raise ValueError(f"weight must be 1/2 or 3/2, got {k}")
    return int(2 * k)


def _eps_power(r: np.ndarray, k2: int) -> np.ndarray:
    """epsilon_r^(2k) for odd r: 1 if r = 1 mod 4, i^(2k) otherwise."""
    return np.where(r % 4 == 1, 1.0 + 0j, 1j**k2)


# ---------------------------------------------------------------------------
# direct Kloosterman sums

def _units(c: int) -> np.ndarray:
    r = np.arange(c, dtype=np.int64)
    return r[np.gcd(r, c) == 1]


@lru_cache(maxsize=256)
def _unit_data(c: int) -> tuple[np.ndarray, np.ndarray]:
    r = _units(c)
    inv = np.array([pow(int(x), -1, c) for x in r], dtype=np.int64)
    return r, inv


@lru_cache(maxsize=256)
def _kronecker_column(top: int, c: int) -> np.ndarray:
    """(top / r) for the units r mod c."""
    r, _ = _unit_data(c)
    return np.array([kronecker(top, int(x)) for x in r], dtype=float)


@lru_cache(maxsize=256)
def _jacobi_row(c: int) -> np.ndarray:
    """(r / c) for the units r mod c (c odd)."""
    r, _ = _unit_data(c)
    return np.array([kronecker(int(x), c) for x in r], dtype=float)


def kloosterman_numeric(k, m: int, n: int, c: int) -> complex:
    """K_k(m, n; c) = (1/c) sum_r (c/r) eps_r^(2k) e((m r* + n r)/c), 4 | c."""
    return complex(kloosterman_matrix(k, [m], [n], c)[0, 0])


def kloosterman_matrix(k, ms, ns, c: int) -> np.ndarray:
    """K_k(m, n; c) for every m in ``ms`` and n in ``ns`` at once."""
    k2 = _check_weight(k)
    if c <= 0 or c % 4:
        raise ValueError(f"c must be a positive multiple of 4, got {c}")
    r, inv = _unit_data(c)
    w = _kronecker_column(c, c) * _eps_power(r, k2)
    ms = np.asarray(ms, dtype=np.int64)[:, None]
    ns = np.asarray(ns, dtype=np.int64)[:, None]
    A = np.exp(_TWO_PI_I * ((ms * inv[None, :]) % c) / c)
    B = np.exp(_TWO_PI_I * ((ns * r[None, :]) % c) / c)
    return (A * w[None, :]) @ B.T / c


def modified_kloosterman_numeric(k, m: int, n: int, Nc: int, rho: int = 1) -> complex:
    """The odd-modulus sum attached to the cusp 1/2 (see module docs).

    ``rho`` is the sign (-4/N) labelling the sum; it does not enter the value.
    """
    return complex(modified_kloosterman_matrix(k, [m], [n], Nc, rho)[0, 0])


def modified_kloosterman_matrix(k, ms, ns, Nc: int, rho: int = 1) -> np.ndarray:
    k2 = _check_weight(k)
    if Nc <= 0 or Nc % 2 == 0:
        raise ValueError(f"the modulus must be odd and positive, got {Nc}")
    if rho not in (1, -1):
        raise ValueError(f"rho must be +1 or -1, got {rho}")
    sign = (-1) ** ((k2 - 1) // 2)
    eps = complex(epsilon_unit(Nc)) ** (-k2)
    pref = sign * 1j / 4 * kronecker(4, -Nc) * eps
    r, _ = _unit_data(Nc)
    inv4r = np.array([pow(4 * int(x), -1, Nc) for x in r], dtype=np.int64) if Nc > 1 else r
    w = _jacobi_row(Nc)
    ms = np.asarray(ms, dtype=np.int64)[:, None]
    ns = np.asarray(ns, dtype=np.int64)[:, None]
    A = np.exp(_TWO_PI_I * ((ms * inv4r[None, :]) % Nc) / Nc)
    B = np.exp(_TWO_PI_I * ((ns * r[None, :]) % Nc) / Nc)
    return pref * (A * w[None, :]) @ B.T


# ---------------------------------------------------------------------------
# local Gauss sums a(p^j, n)

@dataclass(frozen=True)
class GaussValue:
    """``value * sqrt(sqrt_factor)``; ``sqrt_factor`` is 1 or an odd prime."""

    value: Cyc8
    sqrt_factor: int = 1

    def __complex__(self):
        return complex(self.value) * math.sqrt(self.sqrt_factor)

    def is_zero(self) -> bool:
        return not self.value


def gauss_local_exact(p: int, j: int, n: int) -> GaussValue:
    """Closed form of the local sum a(p^j, n).

    For p = 2 everything lies in Q(zeta_8) (sqrt 2 included).  For odd p the
    odd-j values carry a factor sqrt(p), returned through ``sqrt_factor``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if j <= 0:
        raise ValueError(f"j must be positive, got {j}")
    n = int(n)
    if p == 2:
        return GaussValue(_gauss2(j, n))
    return _gauss_odd(p, j, n)


def _gauss2(j: int, n: int) -> Cyc8:
    if j == 1:
        # single term r = 1
        return Cyc8(-1 if n % 2 else 1)
    if j % 2 == 0:
        step = 1 << (j - 2)
        if n % step:
            return Cyc8()
        mm = n // step
        phase = I ** ((mm if mm % 2 == 0 else mm - 1) % 4)
        return ZETA8 * SQRT2 * phase * step
    step = 1 << (j - 3)
    if n % step:
        return Cyc8()
    u = n // step
    if u % 2 == 0 or (u - 1) % 4:
        return Cyc8()
    return Cyc8.zeta_power(u) * (1 << (j - 1))


def _gauss_odd(p: int, j: int, n: int) -> GaussValue:
    lower = p ** (j - 1)
    if n % lower:
        return GaussValue(Cyc8())
    r = n // lower
    if r % p:
        if j % 2:
            return GaussValue(Cyc8(lower * kronecker(r, p)), p)
        return GaussValue(Cyc8(-lower))
    if j % 2:
        return GaussValue(Cyc8())
    return GaussValue(Cyc8(p**j - lower))


def gauss_local_numeric(p: int, j: int, n: int) -> complex:
    """a(p^j, n) by direct summation over r mod p^j."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if j <= 0:
        raise ValueError(f"j must be positive, got {j}")
    q = p**j
    if q > _GAUSS_GUARD:
        raise ValueError(f"p^j = {q} exceeds the direct-summation guard {_GAUSS_GUARD}")
    r = np.arange(1, q + 1, dtype=np.int64)
    phase = np.exp(_TWO_PI_I * ((n * r) % q) / q)
    if p == 2:
        odd = r % 2 == 1
        r, phase = r[odd], phase[odd]
        two = np.where((r % 8 == 1) | (r % 8 == 7), 1.0, -1.0)
        w = two**j * _eps_power(r, 1)
        return complex(np.sum(w * phase))
    residues = np.zeros(p, dtype=float)
    residues[(np.arange(1, p) ** 2) % p] = 1.0
    leg = np.where(r % p == 0, 0.0, 2.0 * residues[r % p] - 1.0)
    s = np.sum(leg**j * phase)
    return complex(s / complex(epsilon_unit(q)))


def a4(n: int) -> Cyc8:
    """a(4, n): 1 + i for n = 0, 1 mod 4 and -1 - i otherwise."""
    return Cyc8.gaussian(1, 1) if n % 4 in (0, 1) else Cyc8.gaussian(-1, -1)


class LocalFactorTable:
    """Memo of exact a(p^j, n) values for one prime, safe for shared reads."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self._values: dict[tuple[int, int], GaussValue] = {}

    def __getitem__(self, key: tuple[int, int]) -> GaussValue:
        val = self._values.get(key)
        if val is None:
            val = gauss_local_exact(self.p, *key)
            self._values.setdefault(key, val)
        return val

    def max_support(self, n: int) -> Optional[int]:
        """Largest j with a(p^j, n) possibly nonzero (None for n = 0)."""
        if n == 0:
            return None
        v = _valuation(self.p, n)
        return v + 3 if self.p == 2 else v + 1


# ---------------------------------------------------------------------------
# local densities

def _sqrt_cancel(value: Cyc8, sqrt_factor: int, p: int, half_exp: int) -> Cyc8:
    """value * sqrt(sqrt_factor) / p^(half_exp / 2), checking the radical cancels."""
    if sqrt_factor not in (1, p):
        raise ValueError("unexpected radical in a Gauss factor")
    total_half = half_exp - (1 if sqrt_factor == p else 0)
    if p == 2:
        out = value / Fraction(2) ** (total_half // 2)
        return out / SQRT2 if total_half % 2 else out
    if total_half % 2:
        raise ArithmeticError(f"sqrt({p}) does not cancel")
    return value / Fraction(p) ** (total_half // 2)


def local_density_A_series(p: int, n: int) -> Cyc8:
    """A(p, n) summed term by term from the exact Gauss sums (n != 0).

    A(2, n) starts at j = 2 and A(p, n) at j = 1.
    """
    if n == 0:
        raise ValueError("the series is infinite for n = 0")
    table = LocalFactorTable(p)
    j0 = 2 if p == 2 else 1
    total = Cyc8()
    for j in range(j0, table.max_support(n) + 1):
        g = table[(j, n)]
        if g.is_zero():
            continue
        total = total + _sqrt_cancel(g.value, g.sqrt_factor, p, 3 * j)
    return total


def local_density_A(p: int, n: int) -> Cyc8:
    """Closed form of A(p, n) at s = 1 (A(2, n) is the j >= 2 series)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        base = Cyc8.gaussian(Fraction(1, 4), Fraction(1, 4))
        if n == 0:
            return base
        nu = _valuation(2, n)
        u = n >> nu
        half = Fraction(1, 2)
        if nu % 2:
            return base * (1 - 3 * half ** ((nu + 1) // 2))
        if u % 4 == 3:
            return base * (1 - 3 * half ** (nu // 2 + 1))
        if u % 8 == 1:
            return base
        return base * (1 - half ** (nu // 2))
    if n == 0:
        return Cyc8(Fraction(1, p))
    nu = _valuation(p, n)
    u = n // p**nu
    inv = Fraction(1, p)
    if nu % 2:
        return Cyc8(inv - (p + 1) * inv ** ((nu + 3) // 2))
    if kronecker(u, p) == 1:
        return Cyc8(inv)
    return Cyc8(inv - 2 * inv ** (nu // 2 + 1))


def local_density_A_general(p: int, n: int, s_param):
    """Local factor at p of Z(n, s) for real s > 1/2, as a complex number.

    p = 2 gives sum_{j>=2} a(2^j, n) 2^(-j(s+1/2)); odd p gives
    sum_{j>=1} a(p^j, n) p^(-j(s+1/2)).  Both come from rational expressions
    in p^s; n = 0 is their limit as the p-adic valuation grows.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    s = mpmath.mpf(s_param) if not isinstance(s_param, mpmath.mpc) else s_param
    if mpmath.re(s) <= 0.5:
        raise ValueError("the closed forms need s > 1/2")
    P = mpmath.mpf(p)
    ps = P**s
    if p == 2:
        den = ps**2 - 2
        pre = (1 + 1j) / 2 ** (s + 1)
        if n == 0:
            return complex(pre * ps / den)
        nu = _valuation(2, n)
        u = n >> nu
        if nu % 2:
            num = 2 ** (-nu * s) * (2 ** ((nu + 1) * s) - 2 ** mpmath.mpf((nu + 1) / 2) * (ps**2 - 1))
        elif u % 4 == 3:
            num = 2 ** (-(nu + 1) * s) * (2 ** ((nu + 2) * s) - 2 ** (nu / 2 + 2 * s + 1) + 2 ** (nu / 2 + 1))
        elif u % 8 == 1:
            num = 2 ** (-(nu + 2) * s) * (2 ** (nu / 2 + 1) * (ps - 2) * (ps + 1) + 2 ** ((nu + 3) * s))
        else:
            num = 2 ** (-(nu + 2) * s) * (-(2 ** (nu / 2 + 1)) * (ps + ps**2 - 2) + 2 ** ((nu + 3) * s))
        return complex(pre * num / den)
    if n == 0:
        x = P ** (1 - 2 * s)
        return complex((1 - 1 / P) * x / (1 - x))
    nu = _valuation(p, n)
    u = n // p**nu
    if nu % 2:
        full = (1 - P ** (-2 * s)) * (P ** (s * (1 - nu) + mpmath.mpf(nu + 1) / 2) - ps**2) / (P - ps**2)
    else:
        chi = kronecker(u, p)
        head = P ** (mpmath.mpf(nu) / 2 - nu * s)
        inner = ps**2 - chi * P ** (1 - s) + chi * ps - P + 1
        full = (-head * ps**2 + head * inner + ps**2 - 1) / (ps**2 - P)
    return complex(full - 1)


def _local_series_numeric(p: int, n: int, s):
    """Term-by-term sum of the local factor (finite for n != 0)."""
    if n == 0:
        return local_density_A_general(p, 0, s)
    table = LocalFactorTable(p)
    j0 = 2 if p == 2 else 1
    total = mpmath.mpc(0)
    for j in range(j0, table.max_support(n) + 1):
        g = table[(j, n)]
        if not g.is_zero():
            total += mpmath.mpc(complex(g)) * mpmath.power(p, -j * (s + mpmath.mpf(1) / 2))
    return total


# ---------------------------------------------------------------------------
# Pei-Wang local numbers

def pei_wang_A(r: int, p: int, n: int) -> Cyc8:
    """The numbers A_r(p, n) (with the sign fix in the even-valuation case)."""
    if n == 0:
        raise ValueError("n must be nonzero")
    if r < 1:
        raise ValueError("r must be positive")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    nu = _valuation(p, n)
    sn = (-1) ** r * n // p**nu
    e = 1 - 2 * r

    def pw(base, half_units):
        # base ** (half_units / 2), exact only when the exponent is integral
        if half_units % 2:
            raise ArithmeticError("non-integral exponent")
        return Fraction(base) ** (half_units // 2)

    if p == 2:
        pre = Cyc8.gaussian(1, (-1) ** r) / 2 ** (2 * r + 1)
        x = Fraction(2) ** e
        if nu % 2:
            h = (nu - 1) // 2
            val = (1 - x**h) / (1 - x) - x**h
        else:
            h = nu // 2
            if sn % 4 == 3:
                val = (1 - x**h) / (1 - x) - x**h
            else:
                val = (1 - x**h) / (1 - x) + x**h * (1 + Fraction(2) ** (1 - r) * kronecker(sn, 2))
        return pre * val
    P = Fraction(p)
    if nu % 2:
        val = (p - 1) * (1 - P ** (e * (nu - 1) // 2)) / (P * (P ** (2 * r - 1) - 1)) - P ** (e * (nu + 1) // 2 - 1)
    else:
        val = (p - 1) * (1 - P ** (e * nu // 2)) / (P * (P ** (2 * r - 1) - 1)) + kronecker(sn, p) * pw(p, e * (nu + 1) - 1)
    return Cyc8(val)


def pei_wang_A1(p: int, n: int) -> Cyc8:
    return pei_wang_A(1, p, n)


# ---------------------------------------------------------------------------
# divisor sums T

def _exact_power(b: int, e: Fraction) -> Fraction:
    if e.denominator == 1:
        return Fraction(b) ** int(e)
    root = round(b ** (1 / e.denominator))
    for cand in (root - 1, root, root + 1):
        if cand > 0 and cand**e.denominator == b:
            return Fraction(cand) ** e.numerator
    raise ValueError(f"{b}^{e} is not rational")


def _sigma_power(r: int, N4: int, e: Fraction) -> Fraction:
    return sum((_exact_power(d, e) for d in divisors(r) if math.gcd(d, N4) == 1), Fraction(0))


def t_sum(N4: int, s_param, t: int, m: int) -> Fraction:
    """T^{chi_t}_{N4, s}(m) = sum_{d | m, (d, N4) = 1} mu(d) chi_t(d) d^(s-1) sigma_{N4, 2s-1}(m/d)."""
    if m <= 0:
        raise ValueError("m must be positive")
    s = Fraction(s_param)
    total = Fraction(0)
    for d in divisors(m):
        if math.gcd(d, N4) != 1:
            continue
        mu = moebius(d)
        if mu == 0:
            continue
        chi = kronecker(t, d)
        if chi == 0:
            continue
        total += mu * chi * _exact_power(d, s - 1) * _sigma_power(m // d, N4, 2 * s - 1)
    return total


def t_sum_numeric(N4: int, s, t: int, m: int):
    """Same sum for real or complex ``s`` (mpmath)."""
    total = mpmath.mpf(0)
    for d in divisors(m):
        if math.gcd(d, N4) != 1:
            continue
        mu = moebius(d)
        chi = kronecker(t, d)
        if mu == 0 or chi == 0:
            continue
        sig = mpmath.fsum(mpmath.power(e, 2 * s - 1) for e in divisors(m // d) if math.gcd(e, N4) == 1)
        total += mu * chi * mpmath.power(d, s - 1) * sig
    return total


# ---------------------------------------------------------------------------
# the Kloosterman zeta function

def _check_index(n: int) -> None:
    if n % 4 not in (0, 1):
        raise ValueError(f"n must be 0 or 1 mod 4, got {n}")


def _two_part(n: int, s):
    return _local_series_numeric(2, n, s) + mpmath.mpc(complex(a4(n))) * mpmath.power(2, -2 * (s + mpmath.mpf(1) / 2))


def _odd_parts(n: int, N: int, s):
    out = mpmath.mpc(1)
    for p in prime_divisors(N):
        out *= _local_series_numeric(p, n, s)
    return out


def _l_incomplete(t: int, s, N4: int):
    return l_value(t, s) * euler_factor_numeric(t, s, N4)


def _kz_factored(n: int, N: int, s):
    """Factored Z(n, s) for any s where the pieces make sense (mpmath)."""
    N4 = 4 * N
    if n == 0:
        ratio = _l_incomplete(1, 2 * s - 1, N4) / _l_incomplete(1, 2 * s, N4)
        return ratio * _two_part(0, s) * _odd_parts(0, N, s)
    t, m = decompose_discriminant(n)
    ratio = _l_incomplete(t, s, N4) / _l_incomplete(1, 2 * s, N4)
    return ratio * t_sum_numeric(N4, 1 - s, t, m) * _two_part(n, s) * _odd_parts(n, N, s)


def kz_factored(n: int, N: int, s_param: float) -> complex:
    """Z(n, s) = K_{1/2}(0, n; s + 1/2) from its L-function factorization, s > 1."""
    _check_index(n)
    _check_level(N)
    if s_param <= 1:
        raise ValueError("the factorization is evaluated for s > 1 only")
    return complex(_kz_factored(n, N, mpmath.mpf(s_param)))


# truncated double sum ------------------------------------------------------

def _local_sum(q: int, p: int, weight_kind: tuple, mu_: int, nu_: int) -> complex:
    """sum over units r mod q of w(r) e((mu_ r^-1 + nu_ r)/q)."""
    r = _units(q)
    if p == 2:
        parity, flip, k2 = weight_kind
        two = np.where((r % 8 == 1) | (r % 8 == 7), 1.0, -1.0) if parity else 1.0
        sign = np.where(r % 4 == 3, -1.0, 1.0) if flip else 1.0
        w = two * sign * _eps_power(r, k2)
    else:
        (parity,) = weight_kind
        if parity:
            residues = np.zeros(p, dtype=float)
            residues[(np.arange(1, p) ** 2) % p] = 1.0
            w = 2.0 * residues[r % p] - 1.0
        else:
            w = np.ones(len(r))
    x = (nu_ * r) % q
    if mu_ % q:
        inv = np.array([pow(int(v), -1, q) for v in r], dtype=np.int64)
        x = (x + mu_ * inv) % q
    return complex(np.sum(w * np.exp(_TWO_PI_I * x / q)))


_local_sum_cached = lru_cache(maxsize=1 << 15)(_local_sum)


def _kloosterman_sum_crt(M: int, k2: int, m: int, n: int) -> complex:
    """S(M) = sum_{r mod M, (r,M)=1} (M/r) eps_r^(2k) e((m r* + n r)/M), 4 | M.

    Split over the prime powers q || M via the Chinese remainder theorem:
    (M/r) = (2/r)^a (-1)^((Q-1)/2 (r-1)/2) prod_p (r/p)^e_p with M = 2^a Q,
    and 1/M = sum_q u_q / q with u_q = (M/q)^(-1) mod q.
    """
    fac = _factor_tuple(M)
    Q = M >> fac[0][1]
    out = 1.0 + 0j
    for p, e in fac:
        q = p**e
        u = pow(M // q, -1, q)
        if p == 2:
            kind = (e % 2, (Q - 1) // 2 % 2, k2)
        else:
            kind = (e % 2,)
        out *= _local_sum_cached(q, p, kind, (u * m) % q, (u * n) % q)
        if out == 0:
            break
    return out


def _kloosterman_sum_direct(M: int, k2: int, m: int, n: int) -> complex:
    r, inv = _unit_data(M)
    w = _kronecker_column(M, M) * _eps_power(r, k2)
    return complex(np.sum(w * np.exp(_TWO_PI_I * ((m * inv + n * r) % M) / M)))


def kz_truncated_oracle(n: int, N: int, s_param: float, C: int, *, k=Fraction(1, 2), m: int = 0) -> complex:
    """Partial sum over c <= C of the Kloosterman zeta double sum.

    sum_c (1 + (4/c)) (4Nc)^-(s+1/2) S(4Nc); odd c are counted twice.  The
    neglected tail is bounded by :func:`kz_tail_bound`.
    """
    _check_level(N)
    k2 = _check_weight(k)
    if C < 1:
        raise ValueError("cutoff must be positive")
    expo = s_param + 0.5
    terms = np.empty(C, dtype=complex)
    for c in range(1, C + 1):
        M = 4 * N * c
        weight = 2.0 if c % 2 else 1.0
        terms[c - 1] = weight * _kloosterman_sum_crt(M, k2, m, n) / M**expo
    # add the small terms first
    return complex(np.sum(terms[::-1]))


def kz_tail_bound(N: int, s_param: float, C: int) -> float:
    """Heuristic size of the neglected tail, O(C^(1-s)).

    Uses |S(M)| <= d(M) sqrt(M) scaled by 2 for the doubled odd terms.
    """
    if s_param <= 1:
        return math.inf
    M = 4 * N * C
    return 2 * 8 * math.log(M) ** 2 * (4 * N) ** (-s_param) * C ** (1 - s_param) / (s_param - 1)


# residue and constant term ---------------------------------------------------

def _r_frak_products(N: int) -> Fraction:
    out = Fraction(1)
    for p in prime_divisors(N):
        out /= p + 1
    return out


def residue_r(n: int, N: int) -> MonomialValue:
    """Residue of Z(n, s) in the spectral variable at 3/4, exactly.

    (3/2pi)(1+i) r(N) for positive squares, (3/4pi)(1+i) r(N) for n = 0 and
    0 otherwise, where r(N) = (1/2pi) prod_{p|N} 1/(p+1).
    """
    _check_level(N)
    prod = _r_frak_products(N)
    if n == 0:
        return MonomialValue((3 * prod / 8, 3 * prod / 8), -2)
    if n > 0 and math.isqrt(n) ** 2 == n:
        return MonomialValue((3 * prod / 4, 3 * prod / 4), -2)
    return MonomialValue(0)


@dataclass(frozen=True)
class SpecialZetaValue:
    tag: str
    approx: complex
    exact: Optional[MonomialValue] = field(default=None)

    def __complex__(self):
        return self.approx


def _c_frak_negative_exact(n: int, N: int) -> MonomialValue:
    t, m = decompose_discriminant(n)
    N4 = 4 * N
    L1 = l_one_exact(t) * euler_factor(t, 1, N4)
    L2 = MonomialValue(Fraction(1, 6) * euler_factor(1, 2, N4), 2)
    T = t_sum(N4, 0, t, m)
    local = local_density_A(2, n) + a4(n) / 8
    for p in prime_divisors(N):
        local = local * local_density_A(p, n)
    return L1 / L2 * T * MonomialValue(local.to_gaussian())


def _central_difference(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


def _smooth_part(n: int, N: int):
    """E(s) with (s-1) Z(n, s) = Zeta1(s) E(s), Zeta1(s) = (s-1) zeta(s) (or
    its analogue at 2s-1 for n = 0)."""
    N4 = 4 * N

    def E(s):
        if n == 0:
            head = euler_factor_numeric(1, 2 * s - 1, N4)
            return head / _l_incomplete(1, 2 * s, N4) * _two_part(0, s) * _odd_parts(0, N, s)
        m = math.isqrt(n)
        head = euler_factor_numeric(1, s, N4)
        return head / _l_incomplete(1, 2 * s, N4) * t_sum_numeric(N4, 1 - s, 1, m) * _two_part(n, s) * _odd_parts(n, N, s)

    return E


def _c_frak_square(n: int, N: int, h: float = 1e-5) -> complex:
    """d/ds [(s-1) Z(n, s)] at s = 1 for n a square (including 0).

    (s-1) zeta(s) = 1 + gamma (s-1) + ..., so the derivative is
    gamma E(1) + E'(1) for n = m^2 > 0 and gamma E(1) + E'(1)/2 for n = 0.
    """
    E = _smooth_part(n, N)
    with mpmath.workdps(30):
        one = mpmath.mpf(1)
        e1 = E(one)
        d1 = _central_difference(E, one, mpmath.mpf(h))
        val = EULER_GAMMA * e1 + (d1 / 2 if n == 0 else d1)
    return complex(val)


def c_frak(n: int, N: int) -> SpecialZetaValue:
    """Constant term of the Laurent expansion of Z(n, s) at s = 1.

    Equivalently the s-derivative of (s - 3/4) K_{1/2}(0, n; 2s) at 3/4 in
    the spectral variable.  Negative n give an exact monomial; positive
    non-squares and squares are numeric.
    """
    _check_index(n)
    _check_level(N)
    if n < 0:
        exact = _c_frak_negative_exact(n, N)
        approx = complex(_kz_factored(n, N, mpmath.mpf(1)))
        return SpecialZetaValue("exact-monomial", approx, exact)
    if n == 0 or math.isqrt(n) ** 2 == n:
        return SpecialZetaValue("numeric", _c_frak_square(n, N))
    t, m = decompose_discriminant(n)
    N4 = 4 * N
    L1 = l_one_numeric(t) * float(euler_factor(t, 1, N4))
    L2 = math.pi**2 / 6 * float(euler_factor(1, 2, N4))
    T = float(t_sum(N4, 0, t, m))
    local = complex(local_density_A(2, n) + a4(n) / 8)
    for p in prime_divisors(N):
        local *= complex(local_density_A(p, n))
    return SpecialZetaValue("numeric", L1 / L2 * T * local)


# ---------------------------------------------------------------------------
# Kohnen's reduction of 4Nc sums to odd moduli

def _plus_sign(k2: int, m) -> np.ndarray:
    """+1 where (-1)^(k-1/2) m = 0, 1 mod 4 and -1 elsewhere."""
    sgn = (-1) ** ((k2 - 1) // 2)
    return np.where((sgn * np.asarray(m)) % 4 <= 1, 1.0, -1.0)


def kohnen_rhs(k, ms, ns, N: int, c: int) -> np.ndarray:
    """Right-hand side of Kohnen's identity for K_k(m, n; 4Nc), c odd.

    For n = 0 mod 4 it is lam(m) (1 - (-1)^(k-1/2) i)/(Nc) * M(m, n/4; Nc),
    M the modified sum; for (-1)^(k-1/2) n = 1 mod 4 it is
    lam(m) 2^(-1/2) ((-1)^(k-1/2) n / 2) K_k(4m, n; 8Nc).  Here lam(m) = 1
    on the plus-space classes of m and -1 off them.  Entries for n outside
    both classes are NaN.
    """
    k2 = _check_weight(k)
    if c <= 0 or c % 2 == 0:
        raise ValueError(f"c must be odd and positive, got {c}")
    _check_level(N)
    sgn = (-1) ** ((k2 - 1) // 2)
    ms = np.asarray(ms, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    Nc = N * c
    lam = _plus_sign(k2, ms)[:, None]
    out = np.full((len(ms), len(ns)), np.nan, dtype=complex)
    first = ns % 4 == 0
    if first.any():
        Km = modified_kloosterman_matrix(k, ms, ns[first] // 4, Nc, kronecker(-4, N))
        out[:, first] = lam * (1 - sgn * 1j) / Nc * Km
    second = (sgn * ns) % 4 == 1
    if second.any():
        K8 = kloosterman_matrix(k, 4 * ms, ns[second], 8 * Nc)
        chi = np.array([kronecker(int(sgn * x), 2) for x in ns[second]], dtype=float)
        out[:, second] = lam * K8 * chi[None, :] / math.sqrt(2)
    return out


def kohnen_max_error(k, ms, ns, N: int, c: int) -> float:
    """Largest |K_k(m, n; 4Nc) - kohnen_rhs| over the n in either class."""
    lhs = kloosterman_matrix(k, ms, ns, 4 * N * c)
    rhs = kohnen_rhs(k, ms, ns, N, c)
    mask = ~np.isnan(rhs)
    return float(np.abs(lhs - rhs)[mask].max()) if mask.any() else 0.0


# ---------------------------------------------------------------------------
# generalized class numbers from local data, and report wrappers

def hurwitz_from_local_data(ell: int, N: int, n: int) -> MonomialValue:
    """H_{ell,N}(n) rebuilt from L-values, T and the Pei-Wang local numbers.

    (4 pi (1+i) / 12) prod_{p|ell} (1-p) L_{4N}(1, chi_t) / L_{4N}(2, id)
    * T_{4N,0}(m) * prod_{p|ell} (A_1(p,n) - 1/p) * (A_1(2,n) + (1-i)/8) * sqrt(n)
    with -n = t m^2.  The result should be rational; it is returned unreduced
    so callers can see if it is not.
    """
    _check_level(N)
    if ell < 1 or N % ell:
        raise ValueError(f"ell={ell} does not divide N={N}")
    if n <= 0 or n % 4 in (1, 2):
        raise ValueError(f"n must be positive with n = 0, 3 mod 4, got {n}")
    t, m = decompose_discriminant(-n)
    N4 = 4 * N
    L1 = l_one_exact(t) * euler_factor(t, 1, N4)
    L2 = MonomialValue(Fraction(1, 6) * euler_factor(1, 2, N4), 2)
    local = pei_wang_A1(2, n) + Cyc8.gaussian(Fraction(1, 8), Fraction(-1, 8))
    c = Fraction(1, 3)
    for p in prime_divisors(ell):
        c *= 1 - p
        local = local * (pei_wang_A1(p, n) - Fraction(1, p))
    head = MonomialValue((c, c), 1)
    return head * L1 / L2 * t_sum(N4, 0, t, m) * MonomialValue(local.to_gaussian()) * MonomialValue.sqrt(n)


def verify_local_product(Ns=(1, 5, 7, 15), precision: int = 201) -> VerificationReport:
    """hurwitz_from_local_data(l, N, n) == H_{l,N}(n) for all l | N, 0 < n < precision."""
    from .classnumbers import gen_hurwitz

    params = {"N": list(Ns), "precision": precision}
    checked = 0
    for N in Ns:
        for ell in divisors(N):
            for n in range(1, precision):
                if n % 4 in (1, 2):
                    continue
                val = hurwitz_from_local_data(ell, N, n)
                ref = gen_hurwitz(ell=ell, N=N, n=n)
                if not val.is_rational() or val.to_rational() != ref:
                    return VerificationReport("lemma52", params, False, checked,
                                              mismatch(n, val, ref, ell=ell, N=N))
                checked += 1
    return VerificationReport("lemma52", params, True, checked)


def verify_kohnen(Ns=(1, 5, 7, 15), c_max: int = 25, m_max: int = 12,
                  tol: float = 1e-9, weights=(Fraction(1, 2), Fraction(3, 2))) -> VerificationReport:
    """Kohnen's reduction for all odd c <= c_max and |m|, |n| <= m_max."""
    params = {"N": list(Ns), "c_max": c_max, "m_max": m_max,
              "weights": [str(k) for k in weights]}
    ms = np.arange(-m_max, m_max + 1)
    worst = 0.0
    checked = 0
    for k in weights:
        for N in Ns:
            for c in range(1, c_max + 1, 2):
                lhs = kloosterman_matrix(k, ms, ms, 4 * N * c)
                rhs = kohnen_rhs(k, ms, ms, N, c)
                err = np.abs(lhs - rhs)
                err[np.isnan(rhs)] = 0.0
                i, j = np.unravel_index(int(np.argmax(err)), err.shape)
                worst = max(worst, float(err[i, j]))
                if err[i, j] >= tol:
                    return VerificationReport(
                        "kohnen", params, False, checked,
                        mismatch(int(ms[j]), complex(lhs[i, j]), complex(rhs[i, j]),
                                 m=int(ms[i]), N=N, c=c, k=str(k)),
                        {"max_error": worst}, tol)
                checked += 1
    return VerificationReport("kohnen", params, True, checked, None, {"max_error": worst}, tol)


FACTORIZATION_CASES = ((-3, 1), (-4, 5), (5, 1), (12, 7))


def verify_zeta_factorization(cases=FACTORIZATION_CASES, s_param: float = 2.0, cutoff: int = 10_000,
                  tol: float = 1e-2) -> VerificationReport:
    """Factored Z(n, s) against the truncated double sum, by relative error."""
    params = {"cases": [list(c) for c in cases], "s": s_param, "cutoff": cutoff}
    rows = []
    for idx, (n, N) in enumerate(cases):
        exact = kz_factored(n, N, s_param)
        approx = kz_truncated_oracle(n, N, s_param, cutoff)
        rel = abs(exact - approx) / abs(exact)
        rows.append({"n": n, "N": N, "factored": exact, "truncated": approx, "rel_error": rel})
        if rel >= tol:
            return VerificationReport("prop33", params, False, idx,
                                      mismatch(n, exact, approx, N=N, rel_error=rel),
                                      {"rows": rows}, tol)
    return VerificationReport("prop33", params, True, len(cases), None, {"rows": rows}, tol)
