import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sci_integrate

from dtlab import jointlaw, speclaw
from dtlab.errors import DegenerateNodes, DomainError
from dtlab.snpoly import sniady_poly
from dtlab.wbranch import rho, rho_boundary

E, PI = math.e, math.pi
GRID_K = (1, 2, 3, 4)
GRID_T = (0.6, 1.0, 2.0, 5.0)


def test_alpha_gamma_examples():
    g = jointlaw.alpha_gamma(4, 0)
    assert np.all(g.gamma == 0.25)
    g = jointlaw.alpha_gamma(2, 0.1)
    assert abs(np.sum(g.gamma * g.alpha)) < 1e-15
    g = jointlaw.alpha_gamma(3, 0.05)
    assert abs(np.sum(g.gamma) - 1) < 1e-12
    assert np.all(np.abs((g.alpha * np.exp(-g.alpha)) ** 3 - 0.05**3) < 1e-12)


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("r", [0.05, 0.1, 0.2])
def test_gamma_identities_grid(k, r):
    rep = jointlaw.gamma_identities(jointlaw.alpha_gamma(k, r * np.exp(0.3j)))
    assert rep.overall, rep.to_json()


def test_alpha_gamma_domain():
    with pytest.raises(DomainError):
        jointlaw.alpha_gamma(1, 0.5)
    with pytest.raises(DomainError):
        jointlaw.alpha_gamma(0, 0.1)


def test_nodes_k1_example():
    nd = jointlaw.nodes(1, PI / 2)
    assert abs(nd.a[0] - 0.5j * PI) < 1e-14
    assert abs(nd.c[0] + 0.25j * PI) < 1e-14
    a0 = rho_boundary(PI / 2, "+")
    assert abs(nd.c[0] - abs(a0) ** 2 / (2j * a0.imag)) < 1e-14


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
@pytest.mark.parametrize("t", GRID_T)
def test_nodes_structure(k, t):
    nd = jointlaw.nodes(k, t)
    assert nd.a[0] == pytest.approx(rho_boundary(t, "+"), abs=1e-14)
    assert nd.a[k] == np.conj(nd.a[0])
    for j in range(1, k):
        assert abs(nd.a[j] - rho(t * np.exp(2j * PI * j / k))) < 1e-12 * max(1, abs(nd.a[j]))
        assert nd.a[k - j] == np.conj(nd.a[j])
    assert np.allclose(nd.c, -k * nd.a * nd.b)
    assert abs(np.sum(nd.b) - 1) < 1e-12


def test_nodes_guard():
    with pytest.raises(DomainError):
        jointlaw.nodes(2, math.exp(-1) + 1e-7)
    assert jointlaw.nodes(2, math.exp(-1) + 1e-5).conditioning > 0


def test_identity_suite_examples():
    rep = jointlaw.identity_suite([1, -1])
    assert rep.overall
    rep = jointlaw.identity_suite(jointlaw.nodes(2, 1.0).a)
    assert rep.overall and len(rep.entries) == 2 + 3
    rep = jointlaw.identity_suite([1, 2, 4])
    assert rep["weights_inverse_square"].residual < 1e-12
    b = jointlaw._lagrange_weights(np.array([1.0, -1.0]))
    assert np.allclose(b, [0.5, 0.5])


def test_identity_suite_rejects_degenerate():
    with pytest.raises(DegenerateNodes):
        jointlaw.identity_suite([1.0, 1.0 + 1e-6, 3.0])
    with pytest.raises(DomainError):
        jointlaw.identity_suite([0.0, 1.0])
    with pytest.raises(DomainError):
        jointlaw.identity_suite([1.0])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.complex_numbers(min_magnitude=0.5, max_magnitude=3.0), min_size=2, max_size=6))
def test_identity_suite_property(a):
    a = np.array(a)
    try:
        rep = jointlaw.identity_suite(a)
    except DegenerateNodes:
        return
    # residuals are relative; the bound loosens with the conditioning of the nodes
    gap = jointlaw._relative_gap(a)
    assert all(e.residual < 1e-13 / gap ** (len(a)) for e in rep.entries)


@pytest.mark.parametrize("k", GRID_K)
@pytest.mark.parametrize("t", GRID_T)
def test_kernel_moments(k, t):
    i0, i1, i2 = jointlaw.kernel_moments(k, t)
    m, v = jointlaw.mk_vk(k, t)
    assert abs(i0 - 1) < 1e-9
    if k >= 2:
        assert abs(i1 - m) < 1e-9
    if k >= 3:
        assert abs(i2 - (m * m + v)) < 1e-9
        # mean and variance of the kernel, hence in [0, 1]
        assert 0 <= m <= 1 and 0 <= v <= 1


def test_kernel_moments_by_scipy_quad():
    for k, t in ((3, 1.0), (4, 2.0)):
        h = lambda x: jointlaw.kernel_H(k, x, t)
        i0 = sci_integrate.quad(h, 0, 1, epsabs=1e-13)[0]
        i1 = sci_integrate.quad(lambda x: x * h(x), 0, 1, epsabs=1e-13)[0]
        m, _ = jointlaw.mk_vk(k, t)
        assert abs(i0 - 1) < 1e-10 and abs(i1 - m) < 1e-10


@pytest.mark.parametrize("k", GRID_K + (6,))
@pytest.mark.parametrize("t", GRID_T)
def test_kernel_real_and_nonnegative(k, t):
    x = np.linspace(0, 1, 200)
    h = jointlaw.kernel_H(k, x, t)
    assert h.min() >= -1e-9
    assert abs(h[0]) < 1e-9
    assert jointlaw.kernel_imag_residue(k, x, t) < 1e-10


def test_kernel_domain():
    with pytest.raises(DomainError):
        jointlaw.kernel_H(2, 1.5, 1.0)


def test_limit_of_m_and_kv():
    for t in (1.0, 2.0):
        gaps = [abs(jointlaw.mk_vk(k, t)[0] - speclaw.cdf_F(1 / t)) for k in (8, 16, 32, 64)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
    kv32 = 32 * jointlaw.mk_vk(32, 2.0)[1]
    kv64 = 64 * jointlaw.mk_vk(64, 2.0)[1]
    assert abs(kv64 - kv32) < 0.05 * abs(kv32)


def test_joint_density_k1_reduction():
    x, y = np.meshgrid(np.linspace(0.01, 0.99, 50), np.linspace(0.01, E - 0.01, 50))
    d = jointlaw.joint_density(1, x, y)
    assert np.abs(d - jointlaw.k1_reference_density(x, y)).max() < 1e-10
    # closed form at y = 2/pi
    xs = np.linspace(0.1, 0.9, 9)
    h = jointlaw.joint_density(1, xs, 2 / PI) / speclaw.phi(2 / PI)
    assert np.allclose(h * (1 / PI) * PI / 2, 0.5 * np.sin(PI * xs / 2) * PI / 2, atol=1e-12)


def test_joint_density_x_marginal_is_phi():
    from dtlab import quadrature

    for k in (1, 2, 3):
        for y in (0.3, 1.2, 2.5):
            val = quadrature.integrate(lambda x: jointlaw.joint_density(k, x, np.full_like(x, y)), 0, 1, 1e-12)
            assert abs(val - speclaw.phi(y)) < 1e-9


def test_joint_density_grid_mass():
    for k in (1, 3):
        grid = jointlaw.density_grid(k, 64)
        assert abs(grid.total_mass - 1) < 1e-8
        assert grid.values.min() >= -1e-9


def test_nu_density_examples():
    xs = np.array([0.2, 0.5, 0.9])
    assert np.allclose(jointlaw.nu_density(1, xs, 2 / PI), 0.5 * np.sin(PI * xs / 2), atol=1e-12)
    for x in (0.25, 1.0):
        assert abs(jointlaw.nu_expect(1, x, np.ones_like) - 1) < 1e-8
        assert abs(jointlaw.nu_moment(1, x, 1) - x) < 1e-8
        assert abs(jointlaw.nu_moment(2, x, 1) - 2 * x * x) < 1e-7
    with pytest.raises(DomainError):
        jointlaw.nu_density(2, 0.0, 1.0)
    with pytest.raises(DomainError):
        jointlaw.nu_density(2, 0.5, E**2)


def test_nu_density_integrates_by_scipy():
    k, x = 2, 0.6
    top = E**k * (1 - 1e-4)  # stay clear of the guard band at t = 1/e
    val = sci_integrate.quad(lambda u: jointlaw.nu_density(k, x, u), 0, top, limit=400, points=[1e-6, 0.1])[0]
    assert abs(val - 1) < 1e-5


@pytest.mark.parametrize("k", [1, 2, 4, 8])
@pytest.mark.parametrize("x", [0.25, 0.5, 1.0])
def test_nu_moments_are_sniady_values(k, x):
    for n in range(1, 8 // k + 1):
        exact = float(k ** (n * k) * sniady_poly(k, n).eval(Fr(x)))
        assert abs(jointlaw.nu_moment(k, x, n) - exact) < 1e-7


def test_cauchy_transform():
    assert jointlaw.cauchy_transform(3, 0.0, 2 + 1j) == 1 / (2 + 1j)
    assert abs(jointlaw.cauchy_transform(1, 1.0, -1) + np.exp(rho(-1))) < 1e-14
    for k in (1, 2, 3):
        lam = 3 * E**k * np.exp(0.5j)
        assert abs(jointlaw.cauchy_transform(k, 0.7, lam) - jointlaw.cauchy_series(k, 0.7, lam, 12)) < 1e-8
        # points where lambda^(-1/k) stays outside the 1e-9 cut band at height 1e-7
        for u in (0.3 * E**k, 0.6 * E**k):
            g = jointlaw.cauchy_transform(k, 0.7, u + 1e-7j)
            assert abs(-g.imag / PI - jointlaw.nu_density(k, 0.7, u)) < 1e-4
    with pytest.raises(DomainError):
        jointlaw.cauchy_transform(2, 0.5, 3.0)


def test_cauchy_transform_is_the_stieltjes_transform():
    k, x, lam = 2, 0.5, -1.5 + 2j
    direct = jointlaw.nu_expect(k, x, lambda u: 1 / (lam - u))
    assert abs(direct - jointlaw.cauchy_transform(k, x, lam)) < 1e-10


def test_hs_distance_trend():
    ks = (3, 6, 12, 24, 48)
    d = [jointlaw.hs_distance(k) for k in ks]
    assert all(a > b for a, b in zip(d, d[1:]))
    assert d[0] / d[-1] >= 4
    assert all(x >= 0 for x in d)
    assert jointlaw.hs_distance(3) >= jointlaw.variance_part(3)
    with pytest.raises(DomainError):
        jointlaw.hs_distance(2)


def test_hs_distance_by_independent_quadrature():
    # scipy quad in v with pointwise nodes from t = 1/sigma(v); beyond pi - 0.005
    # t overflows, and the neglected piece is below 1e-6
    k = 4

    def integrand(v):
        m, var = jointlaw.mk_vk(k, 1 / speclaw.sigma(v))
        return ((m - speclaw.F_v(v)) ** 2 + var) * speclaw.phi_v(v) * abs(speclaw.sigma_prime(v))

    val = sci_integrate.quad(integrand, 1e-4, PI - 0.005, limit=200, epsabs=1e-12)[0]
    assert abs(val - jointlaw.hs_distance(k)) < 1e-6


def test_contour_mean():
    for t in (1.0, 2.0):
        assert abs(jointlaw.contour_mean(t) - speclaw.cdf_F(1 / t)) < 1e-6
    m64 = jointlaw.mk_vk(64, 2.0)[0]
    m8 = jointlaw.mk_vk(8, 2.0)[0]
    c = jointlaw.contour_mean(2.0)
    assert abs(m64 - c) < abs(m8 - c)
    with pytest.raises(DomainError):
        jointlaw.contour_mean(0.2)
