"""Spectral law of T*T for the quasinilpotent DT-operator T.

The law mu lives on [0, e] and is known only through the parametrisation

    sigma(v) = (sin v / v) exp(v cot v),          v in (0, pi),

a decreasing bijection onto (0, e).  In terms of v,

    phi(sigma(v)) = (1/pi) sin v exp(-v cot v)
    F(sigma(v))   = 1 - v/pi + sin^2 v / (pi v).

Every integral over y is pulled back to v; :func:`density_v` is the density of
mu in the v variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .errors import DomainError

E = math.e
PI = math.pi
BISECT_ITERS = 60
_SMALL_V = 1e-4


@dataclass(frozen=True)
class SpectralPoint:
    v: float
    y: float
    phi: float
    F: float


@dataclass(frozen=True)
class RecursionTrace:
    t: float
    terms: np.ndarray

    @property
    def final_gap(self) -> float:
        return float(self.terms[-1] - self.t)


def _out(x, scalar):
    return float(x[0]) if scalar else x


def _as_1d(x):
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _vcotv(v):
    """v cot v, with the v -> 0 limit and full accuracy near pi."""
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        eps = PI - v
        out = np.where(v < 0.5, v * np.cos(v) / np.sin(v), -v * np.cos(eps) / np.sin(eps))
        out = np.where(v < _SMALL_V, 1.0 - v * v / 3.0, out)
    return out


def _sinc(v):
    """sin(v)/v, accurate on [0, pi]."""
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(v < 0.5, np.sin(v), np.sin(PI - v)) / v
    return np.where(v < _SMALL_V, 1.0 - v * v / 6.0, out)


def log_inv_sigma(v):
    """log(1/sigma(v)) = log(v / sin v) - v cot v, finite for all v in [0, pi)."""
    v = np.asarray(v, dtype=float)
    return -np.log(_sinc(v)) - _vcotv(v)


def sigma(v):
    """sigma(v) = (sin v / v) exp(v cot v); sigma(0) = e, sigma(pi) = 0."""
    varr, scalar = _as_1d(v)
    if np.any(~np.isfinite(varr)) or np.any(varr < 0) or np.any(varr > PI):
        raise DomainError("sigma is defined for v in [0, pi]")
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        out = np.where(varr >= PI, 0.0, np.exp(-log_inv_sigma(np.minimum(varr, PI - 1e-300))))
    return _out(out, scalar)


def sigma_prime(v):
    """Derivative of sigma; negative on (0, pi)."""
    v = np.asarray(v, dtype=float)
    # (log sigma)' = cot v - 1/v + cot v - v / sin^2 v
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.sin(v)
        dlog = 2.0 * np.cos(v) / s - 1.0 / v - v / (s * s)
    small = v < 1e-3
    dlog = np.where(small, -v, dlog)  # leading term of the expansion at 0
    return np.asarray(sigma(v)) * dlog


def phi_v(v):
    """phi(sigma(v)) = (1/pi) sin v exp(-v cot v)."""
    v = np.asarray(v, dtype=float)
    with np.errstate(over="ignore"):
        return _sinc(v) * v / PI * np.exp(-_vcotv(v))


def F_v(v):
    """F(sigma(v)) = 1 - v/pi + sin^2 v / (pi v); F_v(0) = 1, F_v(pi) = 0."""
    v = np.asarray(v, dtype=float)
    s = _sinc(v)
    return 1.0 - v / PI + v * s * s / PI


def density_v(v):
    """Density of mu in the v variable: phi(sigma(v)) |sigma'(v)|.

    Equals (v + sin^2 v / v - sin 2v) / (pi v), which behaves like v^2 / pi at 0.
    """
    v = np.asarray(v, dtype=float)
    s = _sinc(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (v + v * s * s - np.sin(2.0 * v)) / (PI * v)
    series = v * v / PI * (1.0 - 4.0 * v * v / 15.0)
    return np.where(v < 2e-3, series, val)


def _sigma_inv_scalar(y: float) -> float:
    """Root of log sigma(v) = log y; solved in pi - v on the lower half for precision near pi.

    Both brackets reach a little past pi/2 so that a root on the seam stays inside.
    """
    if y == E:
        return 0.0
    ly = math.log(y)
    if y >= 2.0 / PI:  # sigma(pi/2) = 2/pi
        def g(v):
            return 1.0 - ly if v == 0.0 else math.log(math.sin(v) / v) + v * math.cos(v) / math.sin(v) - ly
        return brentq(g, 0.0, 0.5 * PI + 0.1, xtol=1e-17, rtol=4 * np.finfo(float).eps)

    def h(eps):
        return math.log(math.sin(eps) / (PI - eps)) - (PI - eps) * math.cos(eps) / math.sin(eps) - ly
    lo = 1e-300
    if h(lo) >= 0.0:
        return PI - lo
    return PI - brentq(h, lo, 0.5 * PI + 0.1, xtol=1e-300, rtol=4 * np.finfo(float).eps)


def sigma_inv(y):
    """The v in [0, pi) with sigma(v) = y: Brent's method for scalars, bisection for arrays."""
    yarr, scalar = _as_1d(y)
    if np.any(~np.isfinite(yarr)) or np.any(yarr <= 0) or np.any(yarr > E):
        raise DomainError("sigma_inv is defined for y in (0, e]")
    if scalar:
        return _sigma_inv_scalar(float(yarr[0]))
    lo = np.zeros_like(yarr)
    hi = np.full_like(yarr, PI)
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        # sigma decreases in v
        big = np.asarray(sigma(mid)) > yarr
        lo = np.where(big, mid, lo)
        hi = np.where(big, hi, mid)
    v = 0.5 * (lo + hi)
    v = np.where(yarr == E, 0.0, v)
    return _out(v, scalar)


def phi(y):
    """Density of mu at y in (0, e)."""
    yarr, scalar = _as_1d(y)
    if np.any(~np.isfinite(yarr)) or np.any(yarr <= 0) or np.any(yarr >= E):
        raise DomainError("phi is defined for y in (0, e)")
    return _out(phi_v(np.atleast_1d(sigma_inv(yarr))), scalar)


def cdf_F(y):
    """Distribution function of mu on [0, e]."""
    yarr, scalar = _as_1d(y)
    if np.any(~np.isfinite(yarr)) or np.any(yarr < 0) or np.any(yarr > E):
        raise DomainError("F is defined for y in [0, e]")
    if scalar and 0.0 < yarr[0] < E:
        return float(F_v(_sigma_inv_scalar(float(yarr[0]))))
    out = np.empty_like(yarr)
    inner = (yarr > 0) & (yarr < E)
    out[yarr <= 0] = 0.0
    out[yarr >= E] = 1.0
    if np.any(inner):
        out[inner] = F_v(np.atleast_1d(sigma_inv(yarr[inner])))
    return _out(out, scalar)


def cdf_F_inv(p):
    """Quantile function of mu, by bisection of F in the v variable."""
    parr, scalar = _as_1d(p)
    if np.any(~np.isfinite(parr)) or np.any(parr < 0) or np.any(parr > 1):
        raise DomainError("cdf_F_inv is defined for p in [0, 1]")
    lo = np.zeros_like(parr)
    hi = np.full_like(parr, PI)
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        # F_v decreases in v
        big = F_v(mid) > parr
        lo = np.where(big, mid, lo)
        hi = np.where(big, hi, mid)
    v = 0.5 * (lo + hi)
    y = np.asarray(sigma(v), dtype=float)
    y = np.where(parr == 0, 0.0, np.where(parr == 1, E, y))
    return _out(y, scalar)


def spectral_point(v: float) -> SpectralPoint:
    if not 0 < v < PI:
        raise DomainError("spectral points need v in (0, pi)")
    return SpectralPoint(v=v, y=float(sigma(v)), phi=float(phi_v(v)), F=float(F_v(v)))


def expect(g, tol: float = 1e-12) -> float:
    """Integral of g(y) against mu, with g vectorised over y."""
    return float(quadrature.integrate(lambda v: g(np.asarray(sigma(v))) * density_v(v), 0.0, PI, tol))


def normalization(tol: float = 1e-12) -> float:
    return float(quadrature.integrate(density_v, 0.0, PI, tol))


def an_recursion(t: float, n_max: int) -> RecursionTrace:
    """Iterate a_1 = F(et), a_{n+1} = a_n F(et / a_n)."""
    if not np.isfinite(t) or t < 0 or t > 1:
        raise DomainError("the recursion is defined for t in [0, 1]")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    terms = np.empty(n_max)
    if t == 0 or t == 1:
        terms[:] = t
        return RecursionTrace(t=float(t), terms=terms)
    a = float(cdf_F(E * t))
    terms[0] = a
    for n in range(1, n_max):
        a = a * float(cdf_F(min(E * t / a, E)))
        terms[n] = a
    return RecursionTrace(t=float(t), terms=terms)
