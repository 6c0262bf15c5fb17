"""Joint law of (D0, S_k): roots, weights, the kernel H and its limits.

For t > 1/e and k >= 1 the k+1 roots are

    a_0 = rho_+(t),  a_j = rho(t e^{2 pi i j/k}) (0 < j < k),  a_k = rho_-(t),

with Lagrange-type weights b_j = prod_{l != j} a_l / (a_l - a_j) and
c_j = -k a_j b_j.  The kernel H(x, t) = sum_j c_j e^{k a_j x} is a probability
density in x on [0, 1], and mu_{D0,S_k} has density phi(y) H(x, 1/y).

Since a_{k-j} = conj(a_j), every exponential sum here is real and is
evaluated as a sum of conjugate pairs.  All integrals over y use the
parametrisation y = sigma(v) of :mod:`dtlab.speclaw`; conveniently the
boundary angle of t = 1/sigma(v) is v itself, so a_0 = v cot v + i v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature, speclaw
from .errors import DegenerateNodes, DomainError
from .report import VerificationReport
from .wbranch import INV_E, boundary_angle, on_cut, rho, rho_of_log

GUARD = 1e-6
ALPHA_GAP = 1e-10
IDENTITY_GAP = 1e-3
IDENTITY_TOL = 1e-10
PI = math.pi


@dataclass(frozen=True)
class GammaNodes:
    k: int
    z: complex
    alpha: np.ndarray
    gamma: np.ndarray


@dataclass(frozen=True)
class NodeData:
    k: int
    t: float
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def conditioning(self) -> float:
        """Smallest pairwise gap of the roots relative to their largest modulus."""
        return _relative_gap(self.a)


@dataclass(frozen=True)
class JointDensityGrid:
    """Cell averages of the joint density on a uniform grid of (0,1) x (0,e)."""

    k: int
    x_edges: np.ndarray
    y_edges: np.ndarray
    values: np.ndarray  # values[i, j]: x cell i, y cell j

    @property
    def x(self) -> np.ndarray:
        return 0.5 * (self.x_edges[1:] + self.x_edges[:-1])

    @property
    def y(self) -> np.ndarray:
        return 0.5 * (self.y_edges[1:] + self.y_edges[:-1])

    @property
    def cell_area(self) -> float:
        return float((self.x_edges[1] - self.x_edges[0]) * (self.y_edges[1] - self.y_edges[0]))

    @property
    def total_mass(self) -> float:
        return float(self.values.sum() * self.cell_area)


def _check_k(k, minimum: int = 1) -> int:
    if int(k) != k or k < minimum:
        raise DomainError(f"k must be an integer >= {minimum}")
    return int(k)


def _relative_gap(a: np.ndarray) -> float:
    a = np.asarray(a)
    d = np.abs(a[:, None] - a[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min() / np.abs(a).max())


def _lagrange_weights(a: np.ndarray) -> np.ndarray:
    """w_j = prod_{l != j} a_l / (a_l - a_j) along the last axis."""
    a = np.asarray(a, dtype=complex)
    diff = a[..., None, :] - a[..., :, None]  # [.., j, l] = a_l - a_j
    num = np.broadcast_to(a[..., None, :], diff.shape).copy()
    n = a.shape[-1]
    idx = np.arange(n)
    diff[..., idx, idx] = 1.0
    num[..., idx, idx] = 1.0
    return np.prod(num / diff, axis=-1)


# -- weights on the k-th roots --------------------------------------


def alpha_gamma(k: int, z) -> GammaNodes:
    """alpha_j = rho(z e^{2 pi i j/k}) and gamma_j = prod_{l != j} alpha_l/(alpha_l - alpha_j)."""
    k = _check_k(k)
    z = complex(z)
    if z == 0:
        return GammaNodes(k, z, np.zeros(k, complex), np.full(k, 1.0 / k, complex))
    pts = z * np.exp(2j * PI * np.arange(1, k + 1) / k)
    if np.any(on_cut(pts)):
        raise DomainError("a rotated point lies on the cut [1/e, inf)")
    alpha = np.atleast_1d(rho(pts))
    if k > 1 and _relative_gap(alpha) < ALPHA_GAP:
        raise DegenerateNodes("two alpha_j coincide to within 1e-10 (relative)")
    gamma = _lagrange_weights(alpha) if k > 1 else np.ones(1, complex)
    return GammaNodes(k, z, alpha, gamma)


def gamma_identities(g: GammaNodes) -> VerificationReport:
    """sum gamma_j = 1 and sum gamma_j alpha_j^p = 0 for p = 1..k-1."""
    rep = VerificationReport()
    rep.add("gamma_sum", abs(np.sum(g.gamma) - 1.0), IDENTITY_TOL)
    for p in range(1, g.k):
        terms = g.gamma * g.alpha**p
        scale = max(1.0, float(np.sum(np.abs(terms))))
        rep.add(f"gamma_power_p{p}", abs(np.sum(terms)) / scale, IDENTITY_TOL)
    return rep


# -- roots and weights ------------------------------------------------------------


def _roots_from_angle(k: int, v) -> np.ndarray:
    """Roots a_0..a_k for t = 1/sigma(v), shape v.shape + (k+1,)."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    a = np.empty(v.shape + (k + 1,), dtype=complex)
    a0 = speclaw._vcotv(v) + 1j * v
    a[..., 0] = a0
    a[..., k] = np.conj(a0)
    if k > 1:
        log_t = speclaw.log_inv_sigma(v)
        j = np.arange(1, k)
        L = log_t[..., None] + 2j * PI * j / k
        a[..., 1:k] = np.asarray(rho_of_log(L.ravel())).reshape(L.shape)
        # enforce the exact conjugate pairing
        half = (k - 1) // 2
        for jj in range(1, half + 1):
            a[..., k - jj] = np.conj(a[..., jj])
        if k % 2 == 0:
            a[..., k // 2] = a[..., k // 2].real
    return a


def _weights(k: int, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    b = _lagrange_weights(a)
    c = -k * a * b
    return b, c


def nodes(k: int, t: float, guard: float = GUARD) -> NodeData:
    """Roots a_j and weights b_j, c_j at t > 1/e."""
    k = _check_k(k)
    if not np.isfinite(t) or t <= INV_E + guard:
        raise DomainError(f"nodes need t > 1/e + {guard}")
    v = float(boundary_angle(t))
    a = _roots_from_angle(k, v)[0]
    b, c = _weights(k, a)
    if not (np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise DegenerateNodes("weights overflowed")
    return NodeData(k=k, t=float(t), a=a, b=b, c=c)


def identity_suite(a) -> VerificationReport:
    """Residuals of the four weight identities for distinct nonzero a_0..a_k."""
    a = np.asarray(a, dtype=complex).ravel()
    if a.size < 2:
        raise DomainError("need at least two values")
    if np.any(a == 0):
        raise DomainError("values must be nonzero")
    if _relative_gap(a) < IDENTITY_GAP:
        raise DegenerateNodes("values too close together for a reliable check")
    k = a.size - 1
    b = _lagrange_weights(a)
    rep = VerificationReport()

    def rel(lhs_terms, rhs):
        scale = max(1.0, float(np.sum(np.abs(lhs_terms))), abs(rhs))
        return abs(np.sum(lhs_terms) - rhs) / scale

    for p in range(1, k + 1):
        rep.add(f"weights_power_p{p}", rel(b * a**p, 0.0), IDENTITY_TOL)
    rep.add("weights_sum", rel(b, 1.0), IDENTITY_TOL)
    rep.add("weights_inverse", rel(b / a, np.sum(1.0 / a)), IDENTITY_TOL)
    inv = 1.0 / a
    pair_sum = np.sum(np.triu(np.outer(inv, inv)))
    rep.add("weights_inverse_square", rel(b / a**2, pair_sum), IDENTITY_TOL)
    return rep


# -- the kernel H ------------------------------------------------------------------


def _pair_weights(k: int) -> np.ndarray:
    """Multiplicities that turn a conjugate-symmetric sum into a real half-sum."""
    w = np.zeros(k + 1)
    for j in range(k + 1):
        if j < k - j:
            w[j] = 2.0
        elif j == k - j:
            w[j] = 1.0
    return w


def _real_pair_sum(k: int, terms: np.ndarray) -> np.ndarray:
    return np.real(terms) @ _pair_weights(k)


def _kernel(k: int, a: np.ndarray, c: np.ndarray, x) -> np.ndarray:
    """H for root/weight rows a, c (shape (..., k+1)) at x broadcast against the leading axes."""
    x = np.asarray(x, dtype=float)
    terms = c * np.exp(k * a * x[..., None])
    return _real_pair_sum(k, terms)


def _kernel_mass(k: int, a: np.ndarray, b: np.ndarray, x_lo, x_hi) -> np.ndarray:
    """Integral of H over [x_lo, x_hi]; c_j/(k a_j) = -b_j gives it in closed form."""
    lo = np.asarray(x_lo, dtype=float)[..., None]
    hi = np.asarray(x_hi, dtype=float)[..., None]
    terms = -b * (np.exp(k * a * hi) - np.exp(k * a * lo))
    return _real_pair_sum(k, terms)


def _check_x(x, lo_open=False):
    x = np.asarray(x, dtype=float)
    bad = (x < 0) | (x > 1) | ~np.isfinite(x)
    if lo_open:
        bad |= x <= 0
    if np.any(bad):
        raise DomainError("x must lie in [0, 1]" if not lo_open else "x must lie in (0, 1]")
    return x


def kernel_H(k: int, x, t: float):
    """H(x, t) = sum_j c_j(t) exp(k a_j(t) x), real by conjugate pairing."""
    nd = nodes(k, t)
    x = _check_x(x)
    out = _kernel(nd.k, nd.a, nd.c, x)
    return float(out) if np.ndim(out) == 0 else out


def kernel_imag_residue(k: int, x, t: float) -> float:
    """Largest |Im sum_j c_j e^{k a_j x}| over x, which should vanish."""
    nd = nodes(k, t)
    x = np.atleast_1d(_check_x(x))
    terms = nd.c * np.exp(k * nd.a * x[:, None])
    return float(np.max(np.abs(np.sum(terms, axis=-1).imag)))


def kernel_moments(k: int, t: float, tol: float = 1e-12) -> tuple[float, float, float]:
    """Integrals of H, x H and x^2 H over [0, 1] by adaptive quadrature."""
    nd = nodes(k, t)

    def f(x):
        h = _kernel(nd.k, nd.a, nd.c, x)
        return np.stack([h, x * h, x * x * h])

    vals = quadrature.integrate(f, 0.0, 1.0, tol)
    return float(vals[0]), float(vals[1]), float(vals[2])


def _mk_vk_from_a(k: int, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    inv = 1.0 / a
    m = -np.real(np.sum(inv, axis=-1)) / k
    v = np.real(np.sum(inv * inv, axis=-1)) / (k * k)
    return m, v


def mk_vk(k: int, t: float) -> tuple[float, float]:
    """m_k(t) = -(1/k) sum 1/a_j and v_k(t) = (1/k^2) sum 1/a_j^2."""
    k = _check_k(k)
    if not np.isfinite(t) or t <= INV_E + GUARD:
        raise DomainError(f"mk_vk needs t > 1/e + {GUARD}")
    a = _roots_from_angle(k, float(boundary_angle(t)))[0]
    m, v = _mk_vk_from_a(k, a)
    return float(m), float(v)


# -- densities ---------------------------------------------------------------------


def _check_y(y):
    y = np.asarray(y, dtype=float)
    if np.any(~np.isfinite(y)) or np.any(y <= 0) or np.any(y >= math.e):
        raise DomainError("y must lie in (0, e)")
    return y


def joint_density(k: int, x, y):
    """Density of mu_{D0,S_k} at (x, y): phi(y) H(x, 1/y); x and y broadcast."""
    k = _check_k(k)
    x = _check_x(x)
    y = _check_y(y)
    x, y = np.broadcast_arrays(x, y)
    v = np.atleast_1d(speclaw.sigma_inv(y.ravel()))
    if np.any(1.0 / y.ravel() <= INV_E + GUARD):
        raise DomainError(f"1/y must exceed 1/e + {GUARD}")
    a = _roots_from_angle(k, v)
    _, c = _weights(k, a)
    h = _kernel(k, a, c, x.ravel())
    out = (speclaw.phi_v(v) * h).reshape(x.shape)
    return float(out) if out.ndim == 0 else out


def k1_reference_density(x, y):
    """(1/(pi y)) Im exp(rho_+(1/y) x), the k = 1 joint density in closed form."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    from .wbranch import rho_boundary

    r = rho_boundary(1.0 / y, "+")
    return np.imag(np.exp(r * x)) / (PI * y)


def nu_density(k: int, x, u):
    """Density of nu_x on (0, e^k): u^{1/k-1} phi(u^{1/k}) H(x, u^{-1/k}) / k."""
    k = _check_k(k)
    x = _check_x(x, lo_open=True)
    u = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(u)) or np.any(u <= 0) or np.any(u >= math.e**k):
        raise DomainError("u must lie in (0, e^k)")
    y = u ** (1.0 / k)
    return u ** (1.0 / k - 1.0) / k * joint_density(k, x, y)


def nu_expect(k: int, x: float, g, tol: float = 1e-11):
    """Integral of g(u) d nu_x(u), pulled back to the v variable; g may be complex."""
    k = _check_k(k)
    x = float(_check_x(x))

    def f(v):
        a = _roots_from_angle(k, v)
        _, c = _weights(k, a)
        h = _kernel(k, a, c, np.full(v.shape, x))
        u = np.asarray(speclaw.sigma(v)) ** k
        return g(u) * speclaw.density_v(v) * h

    val = np.asarray(quadrature.integrate(f, 0.0, PI, tol))
    return complex(val) if np.iscomplexobj(val) else float(val)


def nu_moment(k: int, x: float, n: int, tol: float = 1e-11) -> float:
    return nu_expect(k, x, lambda u: u**n, tol)


def cauchy_transform(k: int, x: float, lam) -> complex:
    """G_x(lambda) = (1/lambda) sum_j gamma_j(z) exp(k alpha_j(z) x), z = lambda^{-1/k}."""
    k = _check_k(k)
    x = float(_check_x(x))
    lam = complex(lam)
    if abs(lam.imag) <= 1e-12 * max(1.0, abs(lam)) and -1e-12 <= lam.real <= math.e**k:
        raise DomainError("lambda must avoid [0, e^k]")
    if x == 0:
        return 1.0 / lam
    z = lam ** (-1.0 / k)
    g = alpha_gamma(k, z)
    return complex(np.sum(g.gamma * np.exp(k * g.alpha * x)) / lam)


def cauchy_series(k: int, x: float, lam, n_max: int = 12) -> complex:
    """Moment expansion sum_n lambda^{-n-1} k^{nk} P_{k,n}(x) of G_x for |lambda| > e^k."""
    from fractions import Fraction

    from .snpoly import sniady_poly

    lam = complex(lam)
    xq = Fraction(float(x))
    return sum(
        lam ** (-n - 1) * float(k ** (n * k) * sniady_poly(k, n).eval(xq)) for n in range(n_max + 1)
    )


# -- limits --------------------------------------------------------------------------


def _hs_integrand(k: int):
    def f(v):
        a = _roots_from_angle(k, v)
        m, var = _mk_vk_from_a(k, a)
        return ((m - speclaw.F_v(v)) ** 2 + var) * speclaw.density_v(v)

    return f


def hs_distance(k: int, tol: float = 1e-11) -> float:
    """Squared Hilbert-Schmidt distance between F(S_k) and D0, valid for k >= 3.

    Integral over mu of (m_k(1/y) - F(y))^2 + v_k(1/y).
    """
    k = _check_k(k)
    if k < 3:
        raise DomainError("the distance formula needs k >= 3")
    return float(quadrature.integrate(_hs_integrand(k), 0.0, PI, tol))


def variance_part(k: int, tol: float = 1e-11) -> float:
    """Integral over mu of v_k(1/y) alone (a lower bound for hs_distance)."""
    k = _check_k(k)

    def f(v):
        a = _roots_from_angle(k, v)
        return _mk_vk_from_a(k, a)[1] * speclaw.density_v(v)

    return float(quadrature.integrate(f, 0.0, PI, tol))


def contour_mean(t: float, n_theta: int = 4096) -> float:
    """Trapezoid value of -(1/2 pi i) of the contour integral of dz/(z rho(z)) over |z| = t.

    Nodes sit at half-integer angles so none falls on the cut.
    """
    if not np.isfinite(t) or t <= INV_E:
        raise DomainError("contour_mean needs t > 1/e")
    if n_theta < 2:
        raise DomainError("n_theta must be at least 2")
    theta = 2.0 * PI * (np.arange(n_theta) + 0.5) / n_theta
    vals = 1.0 / np.asarray(rho(t * np.exp(1j * theta)))
    return float(-np.mean(vals).real)


# -- grids ---------------------------------------------------------------------------


def density_grid(k: int, n: int, order: int = 20) -> JointDensityGrid:
    """Exact cell averages of the joint density on an n x n grid of (0,1) x (0,e).

    Each cell mass integrates H in x in closed form and the y direction by
    Gauss-Legendre in v, so the masses sum to one up to quadrature error.
    """
    k = _check_k(k)
    if n < 1:
        raise DomainError("grid size must be positive")
    x_edges = np.linspace(0.0, 1.0, n + 1)
    y_edges = np.linspace(0.0, math.e, n + 1)
    v_edges = np.empty(n + 1)
    v_edges[0] = PI
    v_edges[-1] = 0.0
    v_edges[1:-1] = speclaw.sigma_inv(y_edges[1:-1])
    xg, wg = np.polynomial.legendre.leggauss(order)
    masses = np.zeros((n, n))
    for j in range(n):
        lo, hi = v_edges[j + 1], v_edges[j]
        half = 0.5 * (hi - lo)
        v = 0.5 * (hi + lo) + half * xg
        a = _roots_from_angle(k, v)
        b, _ = _weights(k, a)
        cell = _kernel_mass(k, a[:, None, :], b[:, None, :], x_edges[None, :-1], x_edges[None, 1:])
        masses[:, j] = half * ((wg * speclaw.density_v(v)) @ cell)
    area = (x_edges[1] - x_edges[0]) * (y_edges[1] - y_edges[0])
    return JointDensityGrid(k=k, x_edges=x_edges, y_edges=y_edges, values=masses / area)
