import math

import numpy as np
import pytest

from dtlab import quadrature


def test_polynomial_exact_with_single_panel():
    # a 20-point rule integrates degree 39 exactly
    val = quadrature.fixed(lambda x: x**39, 0.0, 1.0)
    assert abs(val - 1 / 40) < 1e-15


def test_adaptive_matches_closed_forms():
    assert abs(quadrature.integrate(np.sin, 0.0, math.pi) - 2.0) < 1e-13
    assert abs(quadrature.integrate(np.sqrt, 0.0, 1.0) - 2 / 3) < 1e-11
    assert abs(quadrature.integrate(lambda x: np.exp(-x * x), -8.0, 8.0) - math.sqrt(math.pi)) < 1e-12


def test_vector_valued_integrand_on_last_axis():
    val = quadrature.integrate(lambda x: np.stack([np.ones_like(x), x, x * x]), 0.0, 2.0)
    assert np.allclose(val, [2.0, 2.0, 8 / 3], atol=1e-13)


def test_reversed_limits_and_empty_interval():
    assert abs(quadrature.integrate(np.cos, 1.0, 0.0) + math.sin(1.0)) < 1e-14
    assert quadrature.integrate(np.cos, 0.3, 0.3) == 0.0


def test_breakpoints_help_kinks():
    res = quadrature.integrate_full(np.abs, -1.0, 2.0, breakpoints=(0.0,))
    assert abs(res.value - 2.5) < 1e-14
    assert res.panels == 2


def test_depth_cap_is_reported():
    res = quadrature.integrate_full(lambda x: 1 / np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, tol=1e-15, max_depth=6)
    assert res.depth_capped


def test_infinite_limits_rejected():
    with pytest.raises(ValueError):
        quadrature.integrate(np.exp, 0.0, math.inf)
