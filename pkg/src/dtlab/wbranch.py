"""Principal Lambert W branch and the boundary-value functions built from it.

``rho(z) = -W0(-z)`` maps the plane cut along ``[1/e, inf)`` bijectively onto

    Omega = {x + iy : -pi < y < pi, x < y cot y}        (0 cot 0 := 1)

and inverts ``w -> w exp(-w)`` there.  Its one-sided limits on the cut are

    rho_pm(t) = theta cot theta +- i theta,   t = (theta / sin theta) exp(-theta cot theta),

which :func:`rho_boundary` computes by bisection in ``theta`` so that no
evaluation ever takes place on the cut itself.

All functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

INV_E = math.exp(-1.0)
CUT_BAND = 1e-9
MAX_ITER = 50
RESIDUAL_TOL = 1e-13
BOUNDARY_TOL = 1e-12

_SERIES_RADIUS = 0.2
_SERIES_TERMS = 64
_BRANCH_RADIUS = 0.5
_LOG_FORM_ABOVE = 1e250


@dataclass(frozen=True)
class BoundaryPoint:
    theta: float
    t: float
    value: complex


def _scalar_or_array(out, was_scalar):
    return out[0] if was_scalar else out


@lru_cache(maxsize=1)
def _w0_taylor() -> np.ndarray:
    # W0(z) = sum_{n>=1} (-n)^(n-1) / n! z^n
    n = np.arange(1, _SERIES_TERMS + 1)
    logmag = (n - 1) * np.log(n) - np.array([math.lgamma(k + 1) for k in n])
    return np.where(n % 2 == 1, 1.0, -1.0) * np.exp(logmag)


def _series_guess(z):
    c = _w0_taylor()
    acc = np.zeros_like(z)
    for coef in c[::-1]:
        acc = (acc + coef) * z
    return acc


def _branch_point_guess(z):
    # expansion in p = sqrt(2(ez + 1)) about the branch point z = -1/e
    p = np.sqrt(2.0 * (math.e * z + 1.0))
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))))


def _asymptotic_guess(z):
    l1 = np.log(z)
    return l1 - np.log(l1)


def _pade_guess(z):
    # [2/2] Pade approximant of W0(z)/z at 0, good on a disc of radius ~ 1.5
    num = 1.0 + z * (5.0 / 3.0 + z * 10.0 / 24.0)
    den = 1.0 + z * (8.0 / 3.0 + z * 59.0 / 36.0)
    return z * num / den


@np.errstate(all="ignore")
def _halley(z, w):
    for _ in range(MAX_ITER):
        ew = np.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        safe = wp1 != 0
        denom = np.where(safe, ew * wp1 - (w + 2.0) * f / np.where(safe, 2.0 * wp1, 1.0), 1.0)
        dw = np.where(safe & (denom != 0), f / denom, 0.0)
        dw = np.where(np.isfinite(dw), dw, 0.0)
        w = w - dw
        if np.all(np.abs(dw) <= 4e-16 * (1.0 + np.abs(w))):
            break
    return w


def _in_principal_region(w):
    """Closure of the image of W0, i.e. -closure(Omega), up to rounding."""
    x, y = w.real, w.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        ycoty = np.where(y == 0, 1.0, y / np.tan(y))
    slack = 1e-9 * (1.0 + np.abs(w))
    return (np.abs(y) <= np.pi) & (-x <= ycoty + slack)


def _on_negative_cut(z):
    return (z.real < -INV_E) & (np.abs(z.imag) <= CUT_BAND)


def _w0_log_form(L):
    """Solve w + log(w) = L, which is W0(exp(L)) for Re L large."""
    w = L - np.log(L)
    for _ in range(MAX_ITER):
        g = w + np.log(w) - L
        dw = g / (1.0 + 1.0 / w)
        w = w - dw
        if np.all(np.abs(dw) <= 4e-16 * (1.0 + np.abs(w))):
            break
    res = np.abs(w + np.log(w) - L)
    if np.any(res > RESIDUAL_TOL * np.maximum(1.0, np.abs(L))):
        raise ConvergenceError("log-form Lambert W iteration did not converge")
    return w


def w0(z):
    """Principal branch W0 of the Lambert W function.

    Returns w with ``w exp(w) = z`` and ``-pi < Im w < pi``.  The branch point
    ``-1/e`` is accepted (value -1); points on the ray ``(-inf, -1/e)`` or
    within ``1e-9`` of it are rejected with :class:`DomainError`.
    """
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    if not np.all(np.isfinite(z_arr)):
        raise DomainError("w0 requires finite arguments")
    if np.any(_on_negative_cut(z_arr)):
        raise DomainError("w0 is undefined on the branch cut (-inf, -1/e)")

    out = np.empty_like(z_arr)
    absz = np.abs(z_arr)

    huge = absz > _LOG_FORM_ABOVE
    if np.any(huge):
        out[huge] = _w0_log_form(np.log(z_arr[huge]))

    rest = ~huge
    zr = z_arr[rest]
    near_bp = np.abs(zr + INV_E) < _BRANCH_RADIUS
    small = np.abs(zr) < _SERIES_RADIUS
    mid = ~small & ~near_bp & (np.abs(zr) <= math.e)
    with np.errstate(all="ignore"):
        guess = np.where(small, _series_guess(zr), 0j)
        guess = np.where(~small & near_bp, _branch_point_guess(zr), guess)
        guess = np.where(mid, _pade_guess(zr), guess)
        far = ~small & ~near_bp & ~mid
        guess = np.where(far, _asymptotic_guess(np.where(far, zr, 1.0)), guess)
    w = _halley(zr, guess)

    bad = ~_principal_ok(zr, w)
    if np.any(bad):
        # retry the stragglers from the other starting points
        for start in (_asymptotic_guess, _branch_point_guess, _pade_guess):
            with np.errstate(all="ignore"):
                trial = _halley(zr[bad], start(zr[bad]))
            fixed_now = _principal_ok(zr[bad], trial)
            idx = np.flatnonzero(bad)
            w[idx[fixed_now]] = trial[fixed_now]
            bad[idx[fixed_now]] = False
            if not np.any(bad):
                break
    if np.any(bad):
        raise ConvergenceError(
            f"Lambert W iteration failed at {zr[bad][:3]} (and {max(0, bad.sum() - 3)} more)"
        )
    out[rest] = w
    return _scalar_or_array(out, scalar)


def _principal_ok(z, w):
    with np.errstate(all="ignore"):
        res = np.abs(w * np.exp(w) - z)
    good = np.isfinite(w) & (res <= RESIDUAL_TOL * np.maximum(1.0, np.abs(z)))
    return good & _in_principal_region(w)


def on_cut(z):
    """True where z lies on, or within 1e-9 of, the cut [1/e, inf) of rho."""
    z = np.asarray(z, dtype=complex)
    return (z.real >= INV_E) & (np.abs(z.imag) <= CUT_BAND)


def rho(z):
    """``rho(z) = -W0(-z)``, the inverse of ``w exp(-w)`` on Omega."""
    z_arr = np.asarray(z, dtype=complex)
    if np.any(on_cut(z_arr)):
        raise DomainError("rho is undefined on the cut [1/e, inf); use rho_boundary")
    return -w0(-z_arr)


def rho_of_log(log_z):
    """``rho(exp(log_z))`` without forming ``exp(log_z)``.

    ``log_z`` must have imaginary part in ``(0, 2 pi)`` modulo ``2 pi`` so that
    the point is off the cut; this form is used for moduli far beyond the
    floating point range.
    """
    L = np.asarray(log_z, dtype=complex)
    scalar = L.ndim == 0
    L = np.atleast_1d(L)
    # angle of -z in (-pi, pi]
    ang = np.mod(L.imag, 2.0 * np.pi) - np.pi
    out = np.empty_like(L)
    big = L.real > 30.0
    if np.any(~big):
        out[~big] = rho(np.exp(L[~big]))
    if np.any(big):
        if np.any(np.abs(ang[big]) >= np.pi - 1e-15):
            raise DomainError("rho is undefined on the cut [1/e, inf)")
        out[big] = -_w0_log_form(L.real[big] + 1j * ang[big])
    return _scalar_or_array(out, scalar)


def log_boundary_t(theta):
    """``log t`` for ``t = (theta / sin theta) exp(-theta cot theta)``, theta in [0, pi)."""
    theta = np.asarray(theta, dtype=float)
    eps = np.pi - theta
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(theta == 0, 1.0, theta / np.sin(theta))
        tcot = np.where(theta == 0, 1.0, theta * np.cos(theta) / np.sin(theta))
        # near pi use sin(theta) = sin(pi - theta) with pi - theta exact
        near_pi = eps < 0.5
        ratio = np.where(near_pi, theta / np.sin(eps), ratio)
        tcot = np.where(near_pi, -theta * np.cos(eps) / np.sin(eps), tcot)
    return np.log(ratio) - tcot


def _log_t_of_eps(eps):
    theta = np.pi - eps
    with np.errstate(divide="ignore", invalid="ignore"):
        small_theta = theta < 1e-8
        ratio = np.where(small_theta, 1.0, theta / np.sin(eps))
        tcot = np.where(small_theta, 1.0 - theta**2 / 3.0, -theta * np.cos(eps) / np.sin(eps))
    return np.log(ratio) - tcot


def boundary_angle(t):
    """The angle theta in [0, pi) with ``(theta/sin theta) exp(-theta cot theta) = t``.

    The map is strictly increasing from ``1/e`` (theta = 0) to infinity, so
    monotone bisection is used.  The unknown is ``pi - theta``, which keeps full
    relative precision for the large ``t`` where theta crowds against pi.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    if np.any(~np.isfinite(t_arr)) or np.any(t_arr < INV_E):
        raise DomainError("boundary values exist only for t >= 1/e")
    target = np.log(t_arr)
    lo = np.full_like(t_arr, 1e-12)  # eps = pi - theta
    hi = np.full_like(t_arr, np.pi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        # log t decreases as eps grows
        above = _log_t_of_eps(mid) > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    eps = 0.5 * (lo + hi)
    eps = np.where(t_arr == INV_E, np.pi, eps)
    theta = np.pi - eps
    res = np.abs(_log_t_of_eps(eps) - target)
    if np.any(res > BOUNDARY_TOL):
        raise ConvergenceError("boundary angle bisection missed its tolerance")
    return _scalar_or_array(theta, scalar)


def _boundary_value(theta):
    with np.errstate(divide="ignore", invalid="ignore"):
        eps = np.pi - theta
        tcot = np.where(theta == 0, 1.0, theta * np.cos(theta) / np.sin(theta))
        tcot = np.where(eps < 0.5, -theta * np.cos(eps) / np.sin(eps), tcot)
    return tcot + 1j * theta


def rho_boundary(t, sign="+"):
    """One-sided limit of rho on the cut: ``rho(t +- i0)`` for ``t >= 1/e``."""
    s = _parse_sign(sign)
    theta = boundary_angle(t)
    value = _boundary_value(np.asarray(theta))
    if s < 0:
        value = np.conj(value)
    return value[()] if np.ndim(value) == 0 else value


def boundary_point(t: float, sign="+") -> BoundaryPoint:
    theta = float(boundary_angle(t))
    return BoundaryPoint(theta=theta, t=float(t), value=complex(rho_boundary(t, sign)))


def _parse_sign(sign) -> int:
    if sign in ("+", 1, +1.0, "plus"):
        return 1
    if sign in ("-", "−", -1, -1.0, "minus"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def in_omega(w):
    """Membership in the open region Omega = {x+iy : |y| < pi, x < y cot y}."""
    w = np.asarray(w, dtype=complex)
    x, y = w.real, w.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        ycoty = np.where(y == 0, 1.0, y * np.cos(y) / np.sin(y))
    # points within rounding of the boundary curve count as outside the open set
    margin = 1e-13 * (1.0 + np.abs(ycoty))
    res = (np.abs(y) < np.pi) & (x < ycoty - margin)
    return bool(res) if res.ndim == 0 else res
