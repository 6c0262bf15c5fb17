"""Sniady polynomials in exact rational arithmetic.

For k >= 1 the family P_{k,n} is fixed by

    P_{k,0} = 1,
    P_{k,n}^{(k)}(x) = P_{k,n-1}(x + 1),
    P_{k,n}^{(j)}(0) = 0 for j = 0, ..., k-1  (n >= 1),

i.e. P_{k,n} is the k-fold zero-constant antiderivative of P_{k,n-1}(x+1).
Their integrals over [0, 1] are n^{nk} / (nk+1)!.  The generating function
sum_n (kz)^{nk} P_{k,n}(x) is a finite sum of exponentials whose frequencies
are values of rho on the k-th roots of z^k; the numeric side of that identity
comes from :mod:`dtlab.jointlaw`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, DomainError
from .wbranch import INV_E, rho

DEGREE_CAP = 60
Z_MARGIN = 0.05


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class ExactPolynomial:
    """Polynomial with Fraction coefficients, index = degree."""

    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable = ()):
        object.__setattr__(self, "coefficients", _trim(coefficients))

    @classmethod
    def one(cls) -> "ExactPolynomial":
        return cls((1,))

    @classmethod
    def x(cls) -> "ExactPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other):
        other = _coerce(other)
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return ExactPolynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactPolynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return ExactPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return ExactPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ExactPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, ExactPolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Horner evaluation; exact for Fraction/int x, floating for float/complex/arrays."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coefficients):
                acc = acc * x + c
            return acc
        x = np.asarray(x)
        acc = np.zeros_like(x, dtype=np.result_type(x, float))
        for c in reversed(self.coefficients):
            acc = acc * x + float(c)
        return acc[()] if acc.ndim == 0 else acc

    def derivative(self, order: int = 1) -> "ExactPolynomial":
        c = list(self.coefficients)
        for _ in range(order):
            c = [i * c[i] for i in range(1, len(c))]
        return ExactPolynomial(c)

    def antiderivative(self) -> "ExactPolynomial":
        """Antiderivative vanishing at 0."""
        return ExactPolynomial([0, *(c / (i + 1) for i, c in enumerate(self.coefficients))])

    def shift(self, h: int | Fraction = 1) -> "ExactPolynomial":
        """x -> p(x + h), expanded with binomial coefficients."""
        h = Fraction(h)
        n = len(self.coefficients)
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            hp = Fraction(1)
            for j in range(i, -1, -1):
                # term c * C(i, j) x^j h^(i-j)
                out[j] += c * math.comb(i, j) * hp
                hp *= h
        return ExactPolynomial(out)

    def integral(self, a=0, b=1) -> Fraction:
        anti = self.antiderivative()
        return anti.eval(Fraction(b)) - anti.eval(Fraction(a))

    def to_strings(self) -> list[str]:
        return [fraction_str(c) for c in self.coefficients]

    def __repr__(self):
        return f"ExactPolynomial({self.to_strings()})"


def _coerce(p) -> ExactPolynomial:
    if isinstance(p, ExactPolynomial):
        return p
    if isinstance(p, (int, Fraction)):
        return ExactPolynomial((p,))
    raise TypeError(f"cannot combine ExactPolynomial with {type(p).__name__}")


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _check_kn(k: int, n: int, cap: int) -> None:
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    if int(n) != n or n < 0:
        raise DomainError("n must be a non-negative integer")
    if n * k > cap:
        raise CapExceeded(f"degree n*k = {n * k} exceeds the cap {cap}")


@lru_cache(maxsize=None)
def _sniady_chain(k: int, n: int) -> ExactPolynomial:
    if n == 0:
        return ExactPolynomial.one()
    p = _sniady_chain(k, n - 1).shift(1)
    for _ in range(k):
        p = p.antiderivative()
    return p


def sniady_poly(k: int, n: int, cap: int = DEGREE_CAP) -> ExactPolynomial:
    """P_{k,n}, a polynomial of degree nk."""
    _check_kn(k, n, cap)
    return _sniady_chain(int(k), int(n))


def closed_form_k1(n: int) -> ExactPolynomial:
    """x (x + n)^{n-1} / n!, which equals P_{1,n}."""
    if int(n) != n or n < 0:
        raise DomainError("n must be a non-negative integer")
    if n == 0:
        return ExactPolynomial.one()
    base = ExactPolynomial((n, 1)) ** (n - 1)
    return ExactPolynomial.x() * base * Fraction(1, math.factorial(n))


def moment(k: int, n: int, cap: int = DEGREE_CAP) -> Fraction:
    """Integral of P_{k,n} over [0, 1]."""
    return sniady_poly(k, n, cap).integral(0, 1)


def moment_formula(k: int, n: int) -> Fraction:
    """n^{nk} / (nk+1)!  with 0^0 = 1."""
    return Fraction(n ** (n * k), math.factorial(n * k + 1))


@dataclass(frozen=True)
class RationalSeries:
    """Truncated power series with exact coefficients.

    kind "rho": coefficients[n] multiplies z^n.
    kind "rho_reciprocal": the Laurent series 1/z + sum_n coefficients[n] z^n;
    ``coefficients`` holds the regular part only.
    """

    coefficients: tuple[Fraction, ...]
    kind: str

    def __post_init__(self):
        if self.kind not in ("rho", "rho_reciprocal"):
            raise ValueError(f"unknown series kind {self.kind!r}")

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in reversed(self.coefficients):
            acc = acc * z + float(c)
        if self.kind == "rho_reciprocal":
            acc = acc + 1.0 / z
        return acc[()] if acc.ndim == 0 else acc


def rho_series(n_max: int) -> RationalSeries:
    """rho(z) = sum_{n>=1} n^{n-2}/(n-1)! z^n, truncated at degree n_max."""
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    coeffs = [Fraction(0)] + [
        Fraction(n) ** (n - 2) / math.factorial(n - 1) for n in range(1, n_max + 1)
    ]
    return RationalSeries(tuple(coeffs), "rho")


def rho_recip_series(n_max: int) -> RationalSeries:
    """1/rho(z) = 1/z - sum_{n>=0} n^n/(n+1)! z^n, regular part truncated at n_max."""
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    coeffs = [-Fraction(n**n, math.factorial(n + 1)) for n in range(n_max + 1)]
    return RationalSeries(tuple(coeffs), "rho_reciprocal")


def reciprocal_product(n_max: int) -> list[Fraction]:
    """Coefficients of (1/rho) * rho through degree n_max; exactly [1, 0, 0, ...]."""
    r = rho_series(n_max + 1).coefficients
    q = rho_recip_series(n_max).coefficients
    out = []
    for d in range(n_max + 1):
        # the 1/z term pairs with r[d+1]
        acc = r[d + 1]
        for i in range(d + 1):
            acc += q[i] * r[d - i]
        out.append(acc)
    return out


def _check_z(z, margin: float) -> complex:
    z = complex(z)
    if abs(z) >= INV_E:
        raise DomainError("|z| must be below 1/e")
    if abs(z) >= INV_E - margin:
        raise DomainError(f"|z| must be below 1/e - {margin} for a controlled truncation")
    return z


def genfun_lhs(k: int, x: float, z, n_max: int) -> complex:
    """Partial sum sum_{n<=n_max} (kz)^{nk} P_{k,n}(x)."""
    kzk = (k * complex(z)) ** k
    xq = Fraction(float(x))
    total = 0j
    for n in range(n_max + 1):
        total += kzk**n * complex(float(sniady_poly(k, n).eval(xq)))
    return total


def genfun_rhs(k: int, x: float, z) -> complex:
    """sum_j gamma_j(z) exp(k alpha_j(z) x)."""
    from .jointlaw import alpha_gamma

    g = alpha_gamma(k, z)
    return complex(np.sum(g.gamma * np.exp(k * g.alpha * x)))


def genfun_check(k: int, x: float, z, n_max: int, margin: float = Z_MARGIN) -> float:
    """|truncated generating function - exponential sum|."""
    z = _check_z(z, margin)
    if not np.isfinite(x):
        raise DomainError("x must be finite")
    return abs(genfun_lhs(k, x, z, n_max) - genfun_rhs(k, x, z))


def moment_genfun_lhs(k: int, z, n_max: int) -> complex:
    kzk = (k * complex(z)) ** k
    return sum(kzk**n * float(moment(k, n)) for n in range(n_max + 1))


def moment_genfun_rhs(k: int, z) -> complex:
    """(1/k) sum_j [1/(z w_j) - 1/rho(z w_j)] over the k-th roots of unity w_j.

    For k >= 2 the pole terms cancel and this is -(1/k) sum_j 1/rho(z w_j).
    """
    z = complex(z)
    w = z * np.exp(2j * np.pi * np.arange(1, k + 1) / k)
    return complex(np.sum(1.0 / w - 1.0 / rho(w)) / k)


def moment_genfun_check(k: int, z, n_max: int, margin: float = Z_MARGIN) -> float:
    z = _check_z(z, margin)
    if z == 0:
        raise DomainError("z must be nonzero")
    return abs(moment_genfun_lhs(k, z, n_max) - moment_genfun_rhs(k, z))


def series_coefficients_numeric(values: Sequence[complex], radius: float) -> np.ndarray:
    """Taylor coefficients from samples on a circle (discrete Cauchy integral)."""
    vals = np.asarray(values, dtype=complex)
    m = len(vals)
    return np.fft.fft(vals) / m / radius ** np.arange(m)
