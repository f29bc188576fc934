"""Floating-point special functions and truncated evaluations of the
non-holomorphic q-expansions.

Everything here is double precision.  Quadrature is scipy's adaptive QUADPACK
(Gauss-Kronrod); Gamma(1/2, y) goes through the scaled complementary error
function so that it keeps full relative accuracy for large y.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate, special as sps

from .classnumbers import hurwitz
from .kloosterman import EULER_GAMMA, c_frak
from .arith import prime_divisors

__all__ = [
    "NumericPoint",
    "TailBoundError",
    "alpha",
    "alpha_derivative",
    "alpha_via_gamma",
    "eval_G_expansion",
    "G_smooth_part",
    "eval_G_shadow",
    "eval_theta",
    "eval_zagier_H",
    "incomplete_gamma",
    "incomplete_gamma_scaled",
    "xi_numeric",
]

SQRT_PI = math.sqrt(math.pi)
GAMMA_E = float(EULER_GAMMA)


class TailBoundError(ValueError):
    """The neglected tail of a truncated expansion may exceed the tolerance."""


@dataclass(frozen=True)
class NumericPoint:
    """tau = u + i v in the upper half-plane."""

    u: float
    v: float

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError(f"v must be positive, got {self.v}")

    @property
    def tau(self) -> complex:
        return complex(self.u, self.v)

    def q(self, n: float = 1) -> complex:
        """q^n = exp(2 pi i n tau)."""
        return cmath.exp(2j * math.pi * n * self.tau)

    def shifted(self, du: float = 0.0, dv: float = 0.0) -> "NumericPoint":
        return NumericPoint(self.u + du, self.v + dv)


# ---------------------------------------------------------------------------
# incomplete gamma at s = +-1/2

def _check_s(s) -> float:
    s = float(s)
    if s not in (0.5, -0.5):
        raise ValueError(f"only s = 1/2 and s = -1/2 are supported, got {s}")
    return s


def _gamma_cf_scaled(a: float, x: float, tol: float = 1e-16, max_iter: int = 500) -> float:
    """e^x Gamma(a, x) by the modified Lentz continued fraction (x > a + 1)."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            return x**a * h
    raise ArithmeticError(f"continued fraction did not converge at x = {x}")


def incomplete_gamma_scaled(s, y: float) -> float:
    """e^y Gamma(s, y) for s in {1/2, -1/2}; finite for all y > 0."""
    s = _check_s(s)
    if not y > 0:
        raise ValueError(f"y must be positive, got {y}")
    if s == 0.5:
        return SQRT_PI * float(sps.erfcx(math.sqrt(y)))
    if y >= 2.0:
        return _gamma_cf_scaled(-0.5, y)
    # Gamma(1/2, y) = -Gamma(-1/2, y)/2 + y^(-1/2) e^(-y)
    return 2.0 * (1.0 / math.sqrt(y) - SQRT_PI * float(sps.erfcx(math.sqrt(y))))


def incomplete_gamma(s, y: float) -> float:
    """Gamma(s, y) = int_y^oo t^(s-1) e^(-t) dt for s in {1/2, -1/2}, y > 0."""
    return incomplete_gamma_scaled(s, y) * math.exp(-y)


# ---------------------------------------------------------------------------
# alpha(y)

_QUAD = dict(epsabs=1e-13, epsrel=1e-12, limit=400)


def _check_y(y: float) -> float:
    y = float(y)
    if not y > 0:
        raise ValueError(f"y must be positive, got {y}")
    return y


def _alpha_pieces(y: float, weight: Callable[[float], float]) -> float:
    """int_0^oo weight(t) log(1+t) t^(-1/2) e^(-pi y t) dt, split at t = 1.

    On [0, 1] the substitution t = w^2 removes the endpoint singularity; on
    [1, oo) the substitution t = 1 + x/(pi y) rescales the exponential.
    """
    a = math.pi * y
    head, _ = integrate.quad(lambda w: 2.0 * weight(w * w) * math.log1p(w * w) * math.exp(-a * w * w),
                             0.0, 1.0, **_QUAD)

    def tail_integrand(x):
        t = 1.0 + x / a
        return weight(t) * math.log1p(t) / math.sqrt(t) * math.exp(-x)

    tail, _ = integrate.quad(tail_integrand, 0.0, math.inf, **_QUAD)
    return head + tail * math.exp(-a) / a


def alpha(y: float) -> float:
    """alpha(y) = sqrt(y) int_0^oo log(1+t) t^(-1/2) e^(-pi y t) dt."""
    y = _check_y(y)
    return math.sqrt(y) * _alpha_pieces(y, lambda t: 1.0)


def alpha_derivative(y: float) -> float:
    """alpha'(y) by differentiating under the integral sign."""
    y = _check_y(y)
    base = _alpha_pieces(y, lambda t: 1.0)
    moment = _alpha_pieces(y, lambda t: t)
    return base / (2.0 * math.sqrt(y)) - math.pi * math.sqrt(y) * moment


def alpha_via_gamma(y: float) -> float:
    """alpha(y) = (1/2) int_{pi y}^oo t^(-1/2) e^t Gamma(-1/2, t) dt."""
    y = _check_y(y)
    a = math.pi * y

    def integrand(t):
        return incomplete_gamma_scaled(-0.5, t) / math.sqrt(t)

    # the integrand decays like t^-2; map [a, oo) onto (0, 1] with t = a / x
    val, _ = integrate.quad(lambda x: integrand(a / x) * a / (x * x), 0.0, 1.0, **_QUAD)
    return val / 2.0


# ---------------------------------------------------------------------------
# numeric xi operator

def xi_numeric(f: Callable[[NumericPoint], complex], pt: NumericPoint, k: float,
               h: float = 1e-4) -> complex:
    """xi_k f = 2 i v^k conj(df/d tau-bar), df/d tau-bar = (f_u + i f_v)/2.

    Central differences at steps h and h/2 combined by Richardson
    extrapolation.
    """
    if h >= pt.v:
        raise ValueError("step must be smaller than v")

    def dbar(step):
        fu = (f(pt.shifted(du=step)) - f(pt.shifted(du=-step))) / (2 * step)
        fv = (f(pt.shifted(dv=step)) - f(pt.shifted(dv=-step))) / (2 * step)
        return (fu + 1j * fv) / 2

    d = (4 * dbar(h / 2) - dbar(h)) / 3
    return 2j * pt.v**k * complex(d).conjugate()


# ---------------------------------------------------------------------------
# truncated expansions

def _geometric_tail(n0: int, x: float, power: int = 1) -> float:
    """Upper bound for sum_{n >= n0} n^power x^n, 0 < x < 1."""
    if x >= 1:
        return math.inf
    if n0 <= 0:
        n0 = 1
    # n^p x^n shrinks by at least x (1 + 1/n0)^p per step
    ratio = x * (1 + 1 / n0) ** power
    if ratio >= 1:
        return math.inf
    return n0**power * x**n0 / (1 - ratio)


def eval_theta(pt: NumericPoint, precision: int) -> complex:
    """Theta(tau) = sum_{m in Z} q^(m^2), terms with m^2 < precision."""
    total = 1 + 0j
    m = 1
    while m * m < precision:
        total += 2 * pt.q(m * m)
        m += 1
    return total


def _zagier_tail(pt: NumericPoint, precision: int) -> float:
    x = math.exp(-2 * math.pi * pt.v)
    # H(n) <= n for n >= 1
    holo = _geometric_tail(precision, x, 1)
    m0 = math.isqrt(max(precision - 1, 0)) + 1
    # |m Gamma(-1/2, 4 pi m^2 v) q^(-m^2)| <= m (4 pi m^2 v)^(-3/2) e^(-2 pi m^2 v)
    nonholo = (4 * math.pi * pt.v) ** -1.5 * _geometric_tail(m0 * m0, x, 0) / (4 * SQRT_PI)
    return holo + nonholo


def eval_zagier_H(pt: NumericPoint, precision: int, tol: float = 1e-8) -> complex:
    """Zagier's weight 3/2 Eisenstein series, truncated at q^precision.

    -1/12 + sum H(n) q^n + 1/(8 pi sqrt v)
      + 1/(4 sqrt pi) sum_{m >= 1} m Gamma(-1/2, 4 pi m^2 v) q^(-m^2),
    the second sum over m^2 < precision.  Raises :class:`TailBoundError` if
    the bound on the omitted terms exceeds ``tol``.
    """
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    tail = _zagier_tail(pt, precision)
    if tail > tol:
        raise TailBoundError(f"tail bound {tail:.3g} exceeds {tol:g}; raise precision or v")
    n = np.arange(1, precision)
    coeffs = np.array([float(hurwitz(int(k))) for k in n])
    q = np.exp(2j * np.pi * n * pt.tau)
    total = -1 / 12 + complex(np.sum(coeffs * q)) + 1 / (8 * math.pi * math.sqrt(pt.v))
    m = 1
    while m * m < precision:
        y = 4 * math.pi * m * m * pt.v
        # Gamma(-1/2, y) q^(-m^2) = e^y Gamma(-1/2, y) * e^(-2 pi i m^2 u) e^(-2 pi m^2 v)
        total += (m * incomplete_gamma_scaled(-0.5, y)
                  * cmath.exp(-2j * math.pi * m * m * pt.u - 2 * math.pi * m * m * pt.v)) / (4 * SQRT_PI)
        m += 1
    return total


def _inv_p_plus_1(N: int) -> float:
    out = 1.0
    for p in prime_divisors(N):
        out /= p + 1
    return out


@lru_cache(maxsize=1 << 14)
def _c_frak_approx(n: int, N: int) -> complex:
    return complex(c_frak(n, N).approx)


def _cfrak_bound(n: int) -> float:
    # generous envelope for |c(n)|; the observed values stay far below it
    return 10.0 * (1 + abs(n))


def _G_tail(pt: NumericPoint, precision: int) -> float:
    x = math.exp(-2 * math.pi * pt.v)
    bound = 10.0 * _geometric_tail(precision, x, 1) * 2 * math.pi
    m0 = math.isqrt(max(precision - 1, 0)) + 1
    # |gamma + log(pi m^2) + alpha(4 m^2 v)| <= 2 + 2 log m + alpha(4v)
    bound += (3 + alpha(4 * pt.v) + 2 * math.log(m0)) * _geometric_tail(m0 * m0, x, 1)
    return bound


def eval_G_expansion(pt: NumericPoint, N: int, precision: int, tol: float = 1e-8) -> complex:
    """The sesquiharmonic form G(tau) from its Fourier expansion.

    (2/3) v^(1/2) - log(16 v)/(2 pi) P
      + (P/pi) sum_{m >= 1} (gamma + log(pi m^2) + alpha(4 m^2 v)) q^(m^2)
      + (2/3)(1-i) pi sum_{n >= 0} c(n) q^n
      + (2/3)(1-i) sqrt(pi) sum_{n < 0} c(n) Gamma(1/2, 4 pi |n| v) q^n,
    with P = prod_{p | N} 1/(p+1), n = 0, 1 mod 4 and |n|, m^2 < precision.
    """
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    tail = _G_tail(pt, precision)
    if tail > tol:
        raise TailBoundError(f"tail bound {tail:.3g} exceeds {tol:g}; raise precision or v")
    P = _inv_p_plus_1(N)
    v = pt.v
    total = G_smooth_part(v, N)
    m = 1
    while m * m < precision:
        k = m * m
        total += P / math.pi * (GAMMA_E + math.log(math.pi * k) + alpha(4 * k * v)) * pt.q(k)
        m += 1
    hol = 0j
    for n in range(precision):
        if n % 4 in (0, 1):
            hol += _c_frak_approx(n, N) * pt.q(n)
    total += 2 / 3 * (1 - 1j) * math.pi * hol
    nonhol = 0j
    for a in range(1, precision):
        n = -a
        if n % 4 in (0, 1):
            y = 4 * math.pi * a * v
            # Gamma(1/2, y) q^n = e^y Gamma(1/2, y) e^(2 pi i n u) e^(-2 pi a v)
            nonhol += (_c_frak_approx(n, N) * incomplete_gamma_scaled(0.5, y)
                       * cmath.exp(2j * math.pi * n * pt.u - 2 * math.pi * a * v))
    total += 2 / 3 * (1 - 1j) * SQRT_PI * nonhol
    return total


def G_smooth_part(v: float, N: int) -> float:
    """(2/3) v^(1/2) - log(16 v)/(2 pi) prod 1/(p+1): the terms without q."""
    return 2 / 3 * math.sqrt(v) - math.log(16 * v) / (2 * math.pi) * _inv_p_plus_1(N)


def eval_G_shadow(pt: NumericPoint, N: int, precision: int) -> complex:
    """The expected xi_{1/2} G:

    1/3 - r v^(-1/2) - 2 sqrt(pi) r sum m Gamma(-1/2, 4 pi m^2 v) q^(-m^2)
      - (4 pi (1+i)/3) sum_{n >= 1, n = 0,3 mod 4} conj(c(-n)) sqrt(n) q^n,
    with r = P/(2 pi).
    """
    r = _inv_p_plus_1(N) / (2 * math.pi)
    v = pt.v
    total = 1 / 3 - r / math.sqrt(v) + 0j
    m = 1
    while m * m < precision:
        k = m * m
        total -= (2 * SQRT_PI * r * m * incomplete_gamma_scaled(-0.5, 4 * math.pi * k * v)
                  * cmath.exp(-2j * math.pi * k * pt.u - 2 * math.pi * k * v))
        m += 1
    for n in range(1, precision):
        if n % 4 in (0, 3):
            total -= 4 * math.pi * (1 + 1j) / 3 * _c_frak_approx(-n, N).conjugate() * math.sqrt(n) * pt.q(n)
    return total
