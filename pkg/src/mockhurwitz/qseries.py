"""Exact truncated q-series, ternary theta series and the coefficient-level
identity checks built from them.

Every check returns a :class:`~mockhurwitz.report.VerificationReport`.  Modular
identities are checked coefficientwise up to the requested precision, which
must exceed the Sturm bound of the relevant space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

from .arith import divisors, is_squarefree, prime_divisors
from .classnumbers import gen_hurwitz, hurwitz
from .kloosterman import c_frak
from .lfunctions import MonomialValue
from .report import VerificationReport, mismatch

__all__ = [
    "Q5",
    "Q7",
    "SUM_OF_SQUARES",
    "QSeries",
    "TernaryForm",
    "hurwitz_series",
    "shadow_coefficient",
    "shadow_coefficient_rewritten",
    "sturm_bound",
    "ternary_theta",
    "theta_series",
    "verify_example",
    "verify_shadow",
    "verify_theorem_1_1",
    "verify_theta_cubed",
]


# ---------------------------------------------------------------------------
# truncated series

class QSeries:
    """sum_{0 <= n < precision} c_n q^n with Fraction coefficients.

    Zero coefficients are not stored.  Arithmetic keeps the smaller of the
    operand precisions.
    """

    __slots__ = ("coeffs", "precision", "plus_space")

    def __init__(self, coeffs: Mapping[int, object], precision: int, plus_space: bool = False):
        if precision < 0:
            raise ValueError(f"precision must be non-negative, got {precision}")
        clean: dict[int, Fraction] = {}
        for n, c in coeffs.items():
            n = int(n)
            if n < 0:
                raise ValueError(f"negative exponent {n}")
            if n >= precision:
                raise ValueError(f"exponent {n} is not below the precision {precision}")
            c = Fraction(c)
            if c:
                clean[n] = c
        if plus_space:
            bad = [n for n in clean if n % 4 in (1, 2)]
            if bad:
                raise ValueError(f"plus-space series has coefficients at n = {sorted(bad)[:5]}")
        self.coeffs = clean
        self.precision = int(precision)
        self.plus_space = plus_space

    @classmethod
    def from_function(cls, f: Callable[[int], object], precision: int,
                      plus_space: bool = False) -> "QSeries":
        return cls({n: f(n) for n in range(precision)}, precision, plus_space)

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n < self.precision:
            raise IndexError(f"coefficient {n} is outside [0, {self.precision})")
        return self.coeffs.get(n, Fraction(0))

    def __iter__(self):
        return (self[n] for n in range(self.precision))

    def __len__(self):
        return self.precision

    def truncate(self, precision: int) -> "QSeries":
        precision = min(precision, self.precision)
        return QSeries({n: c for n, c in self.coeffs.items() if n < precision}, precision, self.plus_space)

    def __add__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.precision, other.precision)
        out = {n: c for n, c in self.coeffs.items() if n < prec}
        for n, c in other.coeffs.items():
            if n < prec:
                out[n] = out.get(n, 0) + c
        return QSeries(out, prec, self.plus_space and other.plus_space)

    def __neg__(self) -> "QSeries":
        return QSeries({n: -c for n, c in self.coeffs.items()}, self.precision, self.plus_space)

    def __sub__(self, other: "QSeries") -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, a) -> "QSeries":
        a = Fraction(a)
        return QSeries({n: a * c for n, c in self.coeffs.items()}, self.precision, self.plus_space)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            prec = min(self.precision, other.precision)
            out: dict[int, Fraction] = {}
            for i, a in self.coeffs.items():
                for j, b in other.coeffs.items():
                    if i + j < prec:
                        out[i + j] = out.get(i + j, 0) + a * b
            return QSeries(out, prec)
        try:
            return self.scale(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.precision == other.precision and self.coeffs == other.coeffs

    def first_difference(self, other: "QSeries") -> int | None:
        """Smallest n below the common precision where the two differ."""
        prec = min(self.precision, other.precision)
        for n in range(prec):
            if self[n] != other[n]:
                return n
        return None

    def supported_in_plus_space(self) -> bool:
        return all(n % 4 in (0, 3) for n in self.coeffs)

    def to_json_dict(self) -> dict:
        return {
            "precision": self.precision,
            "coeffs": {str(n): str(self.coeffs[n]) for n in sorted(self.coeffs)},
        }

    def to_csv_rows(self) -> list[tuple[int, int, int]]:
        return [(n, c.numerator, c.denominator) for n, c in sorted(self.coeffs.items())]

    def __repr__(self):
        terms = " + ".join(f"({c})q^{n}" for n, c in sorted(self.coeffs.items())[:8])
        more = " + ..." if len(self.coeffs) > 8 else ""
        return f"QSeries({terms or '0'}{more} + O(q^{self.precision}))"


# ---------------------------------------------------------------------------
# theta series

def theta_series(precision: int) -> QSeries:
    """Theta(tau) = 1 + 2 sum_{m >= 1} q^(m^2)."""
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    coeffs = {0: 1}
    m = 1
    while m * m < precision:
        coeffs[m * m] = 2
        m += 1
    return QSeries(coeffs, precision)


def _det3(a) -> int:
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


@dataclass(frozen=True)
class TernaryForm:
    """Q(x) = x^T G x / 2 for a symmetric integer Gram matrix with even diagonal."""

    gram: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        if len(g) != 3 or any(len(row) != 3 for row in g):
            raise ValueError("the Gram matrix must be 3x3")
        if any(g[i][j] != g[j][i] for i in range(3) for j in range(3)):
            raise ValueError("the Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(3)):
            raise ValueError("the Gram matrix must have an even diagonal")
        minors = (g[0][0], g[0][0] * g[1][1] - g[0][1] ** 2, _det3(g))
        if min(minors) <= 0:
            raise ValueError(f"form is not positive definite (leading minors {minors})")
        object.__setattr__(self, "gram", g)

    @classmethod
    def from_coefficients(cls, a, b, c, ab=0, ac=0, bc=0) -> "TernaryForm":
        """a x^2 + b y^2 + c z^2 + ab xy + ac xz + bc yz."""
        return cls(((2 * a, ab, ac), (ab, 2 * b, bc), (ac, bc, 2 * c)))

    def __call__(self, x) -> int:
        x = np.asarray(x, dtype=np.int64)
        return int(x @ np.array(self.gram, dtype=np.int64) @ x) // 2

    def transform(self, U) -> "TernaryForm":
        """The form x -> Q(U x)."""
        U = np.asarray(U, dtype=np.int64)
        G = U.T @ np.array(self.gram, dtype=np.int64) @ U
        return TernaryForm(tuple(tuple(int(v) for v in row) for row in G))

    def _negative_count(self, lam: float) -> int:
        # Jacobi: sign changes in 1, D1, D2, D3 of A - lam I count the
        # eigenvalues of A below lam.
        a = [[self.gram[i][j] / 2 - (lam if i == j else 0.0) for j in range(3)] for i in range(3)]
        seq = [1.0, a[0][0], a[0][0] * a[1][1] - a[0][1] * a[1][0], float(_det3(a))]
        return sum(1 for x, y in zip(seq, seq[1:]) if (x > 0) != (y > 0))

    def min_eigenvalue(self, iterations: int = 80) -> float:
        """Smallest eigenvalue of G/2 by bisection on the characteristic minors."""
        lo, hi = 0.0, min(self.gram[i][i] for i in range(3)) / 2
        for _ in range(iterations):
            mid = (lo + hi) / 2
            if self._negative_count(mid) >= 1:
                hi = mid
            else:
                lo = mid
        return lo

    def box_radius(self, precision: int) -> int:
        lam = self.min_eigenvalue() * (1 - 1e-9)
        return math.ceil(math.sqrt(precision / lam)) + 1


Q5 = TernaryForm.from_coefficients(7, 3, 7, ab=2, ac=-6, bc=2)
Q7 = TernaryForm.from_coefficients(4, 7, 8, ac=-4)
SUM_OF_SQUARES = TernaryForm(((2, 0, 0), (0, 2, 0), (0, 0, 2)))


def ternary_theta(form: TernaryForm, precision: int) -> QSeries:
    """sum_{x in Z^3} q^(Q(x)) up to q^precision by exhaustive enumeration."""
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    B = form.box_radius(precision)
    r = np.arange(-B, B + 1, dtype=np.int64)
    G = form.gram
    counts = np.zeros(precision, dtype=np.int64)
    # one x-slab at a time keeps memory at (2B+1)^2
    y, z = np.meshgrid(r, r, indexing="ij")
    yz = (G[1][1] * y * y + G[2][2] * z * z) // 2 + G[1][2] * y * z
    for x in r.tolist():
        val = (G[0][0] * x * x) // 2 + G[0][1] * x * y + G[0][2] * x * z + yz
        val = val[val < precision]
        counts += np.bincount(val, minlength=precision)
    return QSeries({n: int(c) for n, c in enumerate(counts) if c}, precision)


def hurwitz_series(ell: int, N: int, precision: int) -> QSeries:
    """sum_{n >= 0} H_{ell,N}(n) q^n."""
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    return QSeries.from_function(lambda n: gen_hurwitz(ell=ell, N=N, n=n), precision, plus_space=True)


def sturm_bound(weight_times_2: int, level: int) -> int:
    """floor(k/12 * [SL2(Z) : Gamma0(level)]) for weight k = weight_times_2 / 2."""
    if level < 1:
        raise ValueError(f"level must be positive, got {level}")
    index = Fraction(level)
    for p in prime_divisors(level):
        index *= 1 + Fraction(1, p)
    return math.floor(Fraction(weight_times_2, 24) * index)


# ---------------------------------------------------------------------------
# shadow coefficients g_n

def _check_level(N: int) -> None:
    if N < 1 or N % 2 == 0 or not is_squarefree(N):
        raise ValueError(f"N must be odd, squarefree and positive, got {N}")


def _inv_p_plus_1(N: int) -> Fraction:
    out = Fraction(1)
    for p in prime_divisors(N):
        out /= p + 1
    return out


def _inv_1_minus_p(ell: int) -> Fraction:
    out = Fraction(1)
    for p in prime_divisors(ell):
        out /= 1 - p
    return out


def shadow_coefficient(N: int, n: int) -> Fraction:
    """g_n from the Kloosterman-zeta side, in exact arithmetic.

    For n >= 1 this is (12 prod 1/(p+1) H(n) - 4 pi (1+i) conj(c(-n)) sqrt(n)) / 3,
    where c(-n) is the exact constant term of the Kloosterman zeta function.
    Raises ``ValueError`` if the pi and radical factors fail to cancel.
    """
    _check_level(N)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    prod = _inv_p_plus_1(N)
    if n == 0:
        return Fraction(1, 3) - prod / 3
    if n % 4 in (1, 2):
        return Fraction(0)
    shadow = MonomialValue.pi(1) * MonomialValue((4, 4)) * c_frak(-n, N).exact.conj() * MonomialValue.sqrt(n)
    return (MonomialValue(12 * prod * hurwitz(n)) - shadow).to_rational() / 3


def shadow_coefficient_rewritten(N: int, n: int) -> Fraction:
    """g_n as a combination of generalized Hurwitz class numbers.

    g = -(4/N) sum_{1 < l | N} l prod_{p | l} 1/(1-p) H_{l,N}
        + 4 prod 1/(p+1) sum H(n) q^n - (4/N) sum_{n >= 1} H_{1,N}(n) q^n.
    For N = 1 the rewritten form degenerates and the unshifted version
    4 sum H(n) q^n - 4 sum_{n >= 1} H(n) q^n + 1/3 is used.
    """
    _check_level(N)
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    prod = _inv_p_plus_1(N)
    if N == 1:
        return 4 * hurwitz(0) + Fraction(1, 3) if n == 0 else Fraction(0)
    total = 4 * prod * hurwitz(n)
    for ell in divisors(N):
        if ell > 1:
            total -= Fraction(4, N) * ell * _inv_1_minus_p(ell) * gen_hurwitz(ell=ell, N=N, n=n)
    if n >= 1:
        total -= Fraction(4, N) * gen_hurwitz(ell=1, N=N, n=n)
    return total


# ---------------------------------------------------------------------------
# verifications

def _compare(name: str, params: dict, left: Iterable, right: Iterable, start: int = 0,
             details: dict | None = None) -> VerificationReport:
    checked = start - 1
    for n, (a, b) in enumerate(zip(left, right), start):
        if a != b:
            return VerificationReport(name, params, False, checked, mismatch(n, a, b), details or {})
        checked = n
    return VerificationReport(name, params, True, checked, None, details or {})


def verify_theta_cubed(precision: int = 501) -> VerificationReport:
    """Theta^3 = 12 sum (H(4n) - 2H(n)) q^n, with Theta^3 enumerated as r_3(n)."""
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    r3 = ternary_theta(SUM_OF_SQUARES, precision)
    rhs = (12 * (hurwitz(4 * n) - 2 * hurwitz(n)) for n in range(precision))
    return _compare("theta3", {"precision": precision}, r3, rhs)


_PRINTED_SLICES = {
    5: {0: 1, 3: 2, 7: 6, 8: 6, 12: 8, 15: 6},
    7: {0: 1, 4: 2, 7: 2, 8: 4, 11: 4, 15: 8, 16: 6},
}
_EXAMPLE_FORMS = {5: (Q5, 3), 7: (Q7, 2)}


def verify_example(N: int, precision: int = 101) -> VerificationReport:
    """3 H_{5,5} = Theta_{Q5} and 2 H_{7,7} = Theta_{Q7} coefficientwise.

    Also compares the first 20 coefficients against the tabulated values.
    """
    if N not in _EXAMPLE_FORMS:
        raise ValueError(f"no reference ternary form for N = {N} (use 5 or 7)")
    if precision < 20:
        raise ValueError("precision must be at least 20")
    form, mult = _EXAMPLE_FORMS[N]
    theta = ternary_theta(form, precision)
    lhs = hurwitz_series(N, N, precision).scale(mult)
    printed = _PRINTED_SLICES[N]
    slice_ = {n: int(theta[n]) for n in range(20) if theta[n]}
    details = {
        "coefficients": [[n, c] for n, c in sorted(slice_.items())],
        "printed_slice_ok": slice_ == printed,
        "sturm_bound": sturm_bound(3, 4 * N),
    }
    params = {"N": N, "precision": precision}
    if slice_ != printed:
        n = min(k for k in set(slice_) | set(printed) if slice_.get(k, 0) != printed.get(k, 0))
        return VerificationReport("example", params, False, n - 1,
                                  mismatch(n, slice_.get(n, 0), printed.get(n, 0)), details)
    return _compare("example", params, lhs, theta, details=details)


def verify_shadow(N: int, precision: int = 201) -> VerificationReport:
    """Compare the two exact expressions for the shadow coefficients g_n."""
    _check_level(N)
    if precision < 1:
        raise ValueError(f"precision must be positive, got {precision}")
    left = (shadow_coefficient(N, n) for n in range(precision))
    right = (shadow_coefficient_rewritten(N, n) for n in range(precision))
    details = {"constant_term": shadow_coefficient(N, 0)}
    return _compare("shadow", {"N": N, "precision": precision}, left, right, details=details)


def verify_theorem_1_1(N: int, precision: int = 201) -> VerificationReport:
    """Coefficient check that prod 1/(p+1) sum H q^n - (1/N) sum H_{1,N} q^n is modular.

    For prime N, (N+1) times it must equal H_{N,N}/(1-N).  For every N it must equal
    g/4 + (1/N) sum_{1 < l | N} l prod_{p | l} 1/(1-p) H_{l,N}, with g taken
    from :func:`shadow_coefficient`.
    """
    _check_level(N)
    if N == 1:
        raise ValueError("N must be greater than 1")
    bound = sturm_bound(3, 4 * N)
    if precision <= bound:
        raise ValueError(f"precision {precision} does not exceed the Sturm bound {bound}")
    prod = _inv_p_plus_1(N)
    combo = [prod * hurwitz(n) - (Fraction(gen_hurwitz(ell=1, N=N, n=n), N) if n else 0)
             for n in range(precision)]
    params = {"N": N, "precision": precision}
    details = {"sturm_bound": bound, "prime": len(prime_divisors(N)) == 1}
    if details["prime"]:
        # (N+1) * combo = H(n) - ((N+1)/N) H_{1,N}(n)
        lhs = [(N + 1) * c for c in combo]
        rhs = [gen_hurwitz(ell=N, N=N, n=n) / (1 - N) for n in range(precision)]
        rep = _compare("thm11", params, lhs, rhs, details=details)
        if not rep:
            rep.details["route"] = "prime"
            return rep
    basis = [(ell, ell * _inv_1_minus_p(ell)) for ell in divisors(N) if ell > 1]
    rhs = [shadow_coefficient(N, n) / 4
           + sum(w * gen_hurwitz(ell=ell, N=N, n=n) for ell, w in basis) / N
           for n in range(precision)]
    rep = _compare("thm11", params, combo, rhs, details=details)
    rep.details["route"] = "prime+shadow" if details["prime"] else "shadow"
    return rep
