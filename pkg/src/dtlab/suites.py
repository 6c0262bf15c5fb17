"""Named verification suites, aggregated by ``dtlab verify``."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from . import jointlaw, quadrature, snpoly, speclaw, wbranch
from .report import VerificationReport

E = math.e
PI = math.pi


def lambert_points(n: int = 1000, seed: int = 12345) -> np.ndarray:
    """Log-uniform moduli in [1e-3, 1e3] with uniform angles, off the cut of rho."""
    rng = np.random.default_rng(seed)
    r = 10.0 ** rng.uniform(-3.0, 3.0, n)
    z = r * np.exp(1j * rng.uniform(-PI, PI, n))
    bad = wbranch.on_cut(z)
    z[bad] = z[bad] * np.exp(0.1j)
    return z


def functional_residual(z: np.ndarray) -> float:
    w = np.asarray(wbranch.rho(z))
    return float(np.max(np.abs(w * np.exp(-w) - z) / np.maximum(1.0, np.abs(z))))


def lambert() -> VerificationReport:
    rep = VerificationReport()
    rep.add("functional_equation_1000_points", functional_residual(lambert_points()), 1e-12)
    for s in ("+", "-"):
        rep.add(f"rho_{'plus' if s == '+' else 'minus'}_at_inverse_e", abs(wbranch.rho_boundary(wbranch.INV_E, s) - 1.0), 1e-10)
    rep.add("w0_at_e", abs(wbranch.w0(E) - 1.0), 1e-14)
    rep.add("rho_at_minus_e", abs(wbranch.rho(-E) + 1.0), 1e-14)
    series = snpoly.rho_series(60).evaluate(0.1)
    rep.add("rho_series_at_0.1", abs(wbranch.rho(0.1) - series), 1e-10)
    rep.add("rho_boundary_at_half_pi", abs(wbranch.rho_boundary(PI / 2, "+") - 0.5j * PI), 1e-12)
    # one-sided limits against Richardson-extrapolated off-cut values
    t = np.linspace(0.4, 5.0, 24)
    e1, e2 = 1e-6, 1e-8
    worst = 0.0
    for s in (1, -1):
        r1 = np.asarray(wbranch.rho(t + s * 1j * e1))
        r2 = np.asarray(wbranch.rho(t + s * 1j * e2))
        extrap = r2 + (r2 - r1) * e2 / (e1 - e2)
        worst = max(worst, float(np.max(np.abs(extrap - wbranch.rho_boundary(t, "+" if s > 0 else "-")))))
    rep.add("boundary_limits_agree", worst, 1e-6)
    rep.add_flag("omega_contains_0", wbranch.in_omega(0))
    rep.add_flag("omega_excludes_boundary_i_half_pi", not wbranch.in_omega(0.5j * PI))
    rep.add_flag("omega_excludes_3", not wbranch.in_omega(3.0))
    return rep


def spectral() -> VerificationReport:
    rep = VerificationReport()
    rep.add("normalization", abs(speclaw.normalization() - 1.0), 1e-10)
    rep.add("mean_one_half", abs(speclaw.expect(lambda y: y) - 0.5), 1e-10)
    rep.add("second_moment_two_thirds", abs(speclaw.expect(lambda y: y * y) - 2.0 / 3.0), 1e-10)
    for v in (0.5, 1.5, 2.5):
        q = quadrature.integrate(speclaw.density_v, v, PI, 1e-12)
        rep.add(f"cdf_vs_quadrature_v{v}", abs(q - float(speclaw.F_v(v))), 1e-9)
    y = np.linspace(0.0, E, 1002)[1:-1]
    rep.add_flag("phi_strictly_decreasing", bool(np.all(np.diff(speclaw.phi(y)) < 0)))
    x = np.linspace(0.0, 1.0, 1002)[1:-1]
    rep.add_flag("F_of_ex_exceeds_x", bool(np.all(speclaw.cdf_F(E * x) > x)))
    rep.add("phi_sigma_identity_v1", abs(speclaw.phi_v(1.0) * speclaw.sigma(1.0) - math.sin(1.0) ** 2 / PI), 1e-12)
    rep.add("phi_at_two_over_pi", abs(speclaw.phi(2 / PI) - 1 / PI), 1e-12)
    rep.add("F_at_two_over_pi", abs(speclaw.cdf_F(2 / PI) - (0.5 + 2 / PI**2)), 1e-12)
    for t in (0.25, 0.5, 0.75):
        tr = speclaw.an_recursion(t, 200)
        ok = bool(np.all(np.diff(tr.terms) < 0) and np.all((tr.terms > t) & (tr.terms < 1)))
        rep.add_flag(f"recursion_monotone_t{t}", ok)
        rep.add(f"recursion_gap_t{t}", tr.final_gap, 1e-3)
    return rep


def poly() -> VerificationReport:
    rep = VerificationReport()
    bad = [
        (k, n)
        for k in range(1, 41)
        for n in range(0, 40 // k + 1)
        if snpoly.moment(k, n) != snpoly.moment_formula(k, n)
    ]
    rep.add_flag("moment_theorem_nk_le_40", not bad)
    rep.add_flag("closed_form_k1_n_le_12", all(snpoly.sniady_poly(1, n) == snpoly.closed_form_k1(n) for n in range(13)))
    fidelity = all(
        snpoly.sniady_poly(k, n).derivative(k) == snpoly.sniady_poly(k, n - 1).shift(1)
        for k in range(1, 41)
        for n in range(1, 40 // k + 1)
    )
    rep.add_flag("recursion_fidelity_nk_le_40", fidelity)
    vanish = all(
        snpoly.sniady_poly(k, n).derivative(j).eval(Fraction(0)) == 0
        for k in range(1, 9)
        for n in range(1, 40 // k + 1)
        for j in range(k)
    )
    rep.add_flag("vanishing_derivatives_at_0", vanish)
    prod = snpoly.reciprocal_product(30)
    rep.add_flag("reciprocal_series_product", prod[0] == 1 and all(c == 0 for c in prod[1:]))
    for k, n_max in ((1, 30), (2, 12), (3, 12)):
        worst = max(
            snpoly.genfun_check(k, x, 0.2 * np.exp(1j * th), n_max)
            for x in (0.0, 0.5, 1.0)
            for th in (0.0, 0.9, 2.0, PI)
        )
        rep.add(f"genfun_k{k}_abs_z_0.2_nmax{n_max}", worst, 1e-8)
    rep.add("moment_genfun_k1_z0.1", snpoly.moment_genfun_check(1, 0.1, 15), 1e-10)
    rep.add("moment_genfun_k2_z0.12", snpoly.moment_genfun_check(2, 0.12, 12), 1e-8)
    return rep


def joint() -> VerificationReport:
    rep = VerificationReport()
    worst = {"norm": 0.0, "first": 0.0, "second": 0.0, "ident": 0.0, "neg": 0.0}
    x = np.linspace(0.0, 1.0, 200)
    for k in (1, 2, 3, 4):
        for t in (0.6, 1.0, 2.0, 5.0):
            i0, i1, i2 = jointlaw.kernel_moments(k, t)
            m, v = jointlaw.mk_vk(k, t)
            worst["norm"] = max(worst["norm"], abs(i0 - 1.0))
            if k >= 2:
                worst["first"] = max(worst["first"], abs(i1 - m))
            if k >= 3:
                worst["second"] = max(worst["second"], abs(i2 - m * m - v))
            worst["neg"] = max(worst["neg"], float(-np.min(jointlaw.kernel_H(k, x, t))))
            r = jointlaw.identity_suite(jointlaw.nodes(k, t).a)
            worst["ident"] = max(worst["ident"], max(e.residual for e in r.entries))
    rep.add("eq5.8_normalization", worst["norm"], 1e-9)
    rep.add("kernel_first_moment", worst["first"], 1e-9)
    rep.add("kernel_second_moment", worst["second"], 1e-9)
    rep.add("kernel_nonnegative", max(worst["neg"], 0.0), 1e-9)
    rep.add("weight_identities", worst["ident"], 1e-10)
    gworst = 0.0
    for k in (2, 3, 4):
        for r in (0.05, 0.1, 0.2):
            g = jointlaw.alpha_gamma(k, r * np.exp(0.4j))
            gworst = max(gworst, max(e.residual for e in jointlaw.gamma_identities(g).entries))
    rep.add("gamma_identities", gworst, 1e-10)
    xs, ys = np.meshgrid(np.linspace(0.02, 0.98, 50), np.linspace(0.02, E - 0.02, 50))
    red = np.max(np.abs(jointlaw.joint_density(1, xs, ys) - jointlaw.k1_reference_density(xs, ys)))
    rep.add("k1_density_reduction", float(red), 1e-10)
    nworst = 0.0
    for k in (1, 2, 4, 8):
        for n in range(1, 8 // k + 1):
            for xv in (0.25, 0.5, 1.0):
                exact = float(k ** (n * k) * snpoly.sniady_poly(k, n).eval(Fraction(xv)))
                nworst = max(nworst, abs(jointlaw.nu_moment(k, xv, n) - exact))
    rep.add("nu_moments_match_polynomials", nworst, 1e-7)
    for t in (1.0, 2.0):
        rep.add(f"contour_mean_t{t:g}", abs(jointlaw.contour_mean(t) - speclaw.cdf_F(1.0 / t)), 1e-6)
    return rep


SUITES: dict[str, Callable[[], VerificationReport]] = {
    "lambert": lambert,
    "spectral": spectral,
    "poly": poly,
    "joint": joint,
}


def run(name: str) -> VerificationReport:
    if name == "all":
        rep = VerificationReport()
        for key, fn in SUITES.items():
            rep.extend(fn(), prefix=f"{key}.")
        return rep
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
