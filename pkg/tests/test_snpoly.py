import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtlab import snpoly
from dtlab.errors import CapExceeded, DomainError
from dtlab.snpoly import ExactPolynomial as P
from dtlab.wbranch import rho

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=50)
polys = st.lists(fracs, max_size=6).map(P)


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_polynomial_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == P()


@settings(max_examples=100, deadline=None)
@given(polys, fracs)
def test_calculus_operations(p, x):
    assert p.antiderivative().derivative() == p
    assert p.antiderivative().eval(Fr(0)) == 0
    assert p.shift(1).eval(x) == p.eval(x + 1)
    assert p.integral(0, 1) == p.antiderivative().eval(Fr(1))


def test_trailing_zeros_trimmed_and_float_eval():
    p = P([1, 2, 0, 0])
    assert p.degree == 1 and p == P([1, 2])
    assert P().degree == -1 and P().is_zero()
    assert p.eval(0.5) == 2.0
    assert np.allclose(p.eval(np.array([0.0, 1.0])), [1.0, 3.0])


def test_sniady_examples():
    assert snpoly.sniady_poly(1, 1) == P([0, 1])
    assert snpoly.sniady_poly(2, 1) == P([0, 0, Fr(1, 2)])
    ref = P([1, 4, 6, 4, 1]) * Fr(1, 24) - P([0, Fr(1, 6)]) - Fr(1, 24)
    assert snpoly.sniady_poly(2, 2) == ref


def test_closed_form_examples():
    assert snpoly.closed_form_k1(1) == P([0, 1])
    assert snpoly.closed_form_k1(2) == P([0, 1, Fr(1, 2)])
    assert snpoly.closed_form_k1(3).eval(Fr(1)) == Fr(8, 3)


def test_moment_examples():
    assert snpoly.moment(1, 1) == Fr(1, 2)
    assert snpoly.moment(2, 2) == Fr(2, 15)
    assert snpoly.moment(3, 1) == Fr(1, 24)
    assert snpoly.moment(1, 3) == Fr(9, 8)


def test_recursion_fidelity_and_vanishing():
    for k in range(1, 41):
        for n in range(1, 40 // k + 1):
            p = snpoly.sniady_poly(k, n)
            assert p.degree == n * k
            assert p.derivative(k) == snpoly.sniady_poly(k, n - 1).shift(1)
            for j in range(k):
                assert p.derivative(j).eval(Fr(0)) == 0


def test_degree_cap_and_domain():
    with pytest.raises(CapExceeded):
        snpoly.sniady_poly(7, 9)
    assert snpoly.sniady_poly(7, 9, cap=70).degree == 63
    with pytest.raises(DomainError):
        snpoly.sniady_poly(0, 1)
    with pytest.raises(DomainError):
        snpoly.sniady_poly(1, -1)


def test_rho_series_coefficients():
    s = snpoly.rho_series(6)
    assert s.coefficients[1] == 1
    assert s.coefficients[3] == Fr(3, 2)
    assert s.coefficients[4] == Fr(8, 3)
    r = snpoly.rho_recip_series(4)
    assert r.coefficients[0] == -1
    assert r.coefficients[1] == Fr(-1, 2)
    prod = snpoly.reciprocal_product(25)
    assert prod[0] == 1 and all(c == 0 for c in prod[1:])


def test_series_agree_with_rho_numerically():
    for z in (0.05, 0.1 + 0.1j, -0.2):
        assert abs(snpoly.rho_series(80).evaluate(z) - rho(z)) < 1e-12
        assert abs(snpoly.rho_recip_series(80).evaluate(z) - 1 / rho(z)) < 1e-10


def test_taylor_coefficients_of_rho_by_cauchy_integral():
    radius, m = 0.1, 64
    z = radius * np.exp(2j * np.pi * np.arange(m) / m)
    coeffs = snpoly.series_coefficients_numeric(rho(z), radius)
    exact = [float(c) for c in snpoly.rho_series(10).coefficients]
    assert np.allclose(coeffs[:11].real, exact, atol=1e-10, rtol=1e-10)


def test_genfun_examples():
    assert snpoly.genfun_check(1, 0.0, 0.17j, 12) < 1e-15
    assert snpoly.genfun_check(2, 1.0, 0.1, 12) < 1e-8
    lhs = snpoly.genfun_lhs(1, 1.0, 0.15, 25)
    assert abs(lhs - np.exp(rho(0.15))) < 1e-8


def test_genfun_converges_with_truncation():
    res = [snpoly.genfun_check(1, 1.0, 0.2, n) for n in (12, 20, 30)]
    assert res[0] > res[1] > res[2]
    assert res[2] < 1e-8


def test_genfun_domain():
    with pytest.raises(DomainError):
        snpoly.genfun_check(2, 0.5, 0.4, 12)
    with pytest.raises(DomainError):
        snpoly.genfun_check(2, 0.5, 0.33, 12)


def test_moment_genfun_examples():
    assert snpoly.moment_genfun_check(1, 0.1, 15) < 1e-10
    assert snpoly.moment_genfun_check(2, 0.12, 12) < 1e-8
    z = 1e-6
    for k in (1, 2, 3):
        assert abs(snpoly.moment_genfun_lhs(k, z, 5) - 1) < 1e-5
        assert abs(snpoly.moment_genfun_rhs(k, z) - 1) < 1e-5
    with pytest.raises(DomainError):
        snpoly.moment_genfun_check(2, 0.0, 12)


def test_fraction_str():
    assert snpoly.fraction_str(Fr(27, 24)) == "9/8"
    assert snpoly.fraction_str(Fr(4, 2)) == "2"
    assert P([Fr(1, 3), -2]).to_strings() == ["1/3", "-2"]
