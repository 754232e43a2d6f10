import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from disentangle.quadrature import (filon_coefficients, filon_cos, filon_sin,
                                    one_minus_cos_integral, simpson)


def test_simpson_exact_for_cubics():
    x = np.linspace(0, 2, 11)
    assert simpson(x**3 - x + 1, x[1]) == pytest.approx(4 - 2 + 2, abs=1e-13)


def test_even_grid_rejected():
    with pytest.raises(ValueError):
        simpson(np.ones(4), 0.1)
    with pytest.raises(ValueError):
        filon_cos(np.ones(2), 0.1, 1.0)


def test_series_and_closed_form_coefficients_meet():
    below = np.array(filon_coefficients(np.nextafter(0.5, 0)))
    above = np.array(filon_coefficients(0.5))
    np.testing.assert_allclose(below, above, rtol=1e-13)
    np.testing.assert_allclose(filon_coefficients(0.0), (0.0, 2 / 3, 4 / 3), atol=1e-15)


def test_zero_frequency_is_simpson():
    f = np.exp(-np.linspace(0, 3, 31))
    assert filon_cos(f, 0.1, 0.0)[0] == pytest.approx(simpson(f, 0.1), rel=1e-14)
    assert filon_sin(f, 0.1, 0.0)[0] == 0.0


@pytest.mark.parametrize("t", [0.3, 5.0, 40.0, 400.0])
def test_gaussian_against_closed_form(t):
    # int_0^L exp(-x^2) cos(tx) dx -> sqrt(pi)/2 exp(-t^2/4) for L large
    x = np.linspace(0, 10, 2001)
    f = np.exp(-x**2)
    exact = np.sqrt(np.pi) / 2 * np.exp(-t * t / 4)
    assert filon_cos(f, x[1], t)[0] == pytest.approx(exact, abs=1e-9)


@pytest.mark.parametrize("t", [0.7, 3.0, 25.0, 300.0])
def test_quadratic_integrated_exactly(t):
    # Filon is exact when f is a quadratic on each double panel
    x = np.linspace(0, 2, 9)
    f = 1 + x - 0.5 * x**2
    L = x[-1]
    def antiderivative_cos(x):
        return ((1 + x - 0.5 * x**2) * np.sin(t * x) / t + (1 - x) * np.cos(t * x) / t**2
                + np.sin(t * x) / t**3)
    def antiderivative_sin(x):
        return (-(1 + x - 0.5 * x**2) * np.cos(t * x) / t + (1 - x) * np.sin(t * x) / t**2
                - np.cos(t * x) / t**3)
    assert filon_cos(f, x[1], t)[0] == pytest.approx(antiderivative_cos(L) - antiderivative_cos(0), abs=1e-12)
    assert filon_sin(f, x[1], t)[0] == pytest.approx(antiderivative_sin(L) - antiderivative_sin(0), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(t=st.floats(0.0, 200.0), scale=st.floats(0.1, 5.0))
def test_one_minus_cos_nonnegative_for_positive_f(t, scale):
    x = np.linspace(0, 8, 801)
    f = x * np.exp(-scale * x)
    val = one_minus_cos_integral(f, x[1], t)[0]
    assert val >= -1e-12
    assert val <= 2 * simpson(f, x[1]) + 1e-12


def test_one_minus_cos_exact_zero_at_origin():
    f = np.linspace(1, 2, 5)
    assert one_minus_cos_integral(f, 0.25, [0.0, 1.0])[0] == 0.0
