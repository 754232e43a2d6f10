"""Filon quadrature for int f(x) cos(t x) dx and int f(x) sin(t x) dx.

``f`` is sampled on a uniform grid with an odd number of points; on each
double panel it is replaced by its quadratic interpolant, and the product
with the trigonometric factor is integrated exactly.  Accuracy therefore
does not degrade as t grows.  At t = 0 the cosine rule is Simpson's rule.
"""

from __future__ import annotations

import numpy as np

# theta below this uses the Taylor series of the Filon coefficients
_SERIES_THETA = 0.5


def filon_coefficients(theta):
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < _SERIES_THETA
    th = np.where(small, 1.0, theta)
    s, c = np.sin(th), np.cos(th)
    alpha = (th**2 + th * s * c - 2 * s**2) / th**3
    beta = 2 * (th * (1 + c**2) - 2 * s * c) / th**3
    gamma = 4 * (s - th * c) / th**3

    t2 = theta**2
    a_ser = theta**3 * (2 / 45 + t2 * (-2 / 315 + t2 * (2 / 4725 + t2 * (-8 / 467775 + t2 * (
        4 / 8513505 + t2 * (-2 / 212837625 + t2 * (2 / 13956067125 - t2 * 16 / 9280784638125)))))))
    b_ser = 2 / 3 + t2 * (2 / 15 + t2 * (-4 / 105 + t2 * (2 / 567 + t2 * (-4 / 22275 + t2 * (
        4 / 675675 + t2 * (-8 / 58046625 + t2 * (2 / 834978375 - t2 * 4 / 123743795175)))))))
    g_ser = 4 / 3 + t2 * (-2 / 15 + t2 * (1 / 210 + t2 * (-1 / 11340 + t2 * (1 / 997920 + t2 * (
        -1 / 129729600 + t2 * (1 / 23351328000 - t2 / 5557616064000))))))
    return (np.where(small, a_ser, alpha),
            np.where(small, b_ser, beta),
            np.where(small, g_ser, gamma))


def _check_grid(f):
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.size < 3 or f.size % 2 == 0:
        raise ValueError("Filon rule needs a 1-D sample with an odd number (>= 3) of points")
    return f


def filon_cos(f, dx, t, x0=0.0):
    """int_{x0}^{x0 + (n-1) dx} f(x) cos(t x) dx for each value in ``t``."""
    f = _check_grid(f)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = x0 + dx * np.arange(f.size)
    alpha, beta, gamma = filon_coefficients(t * dx)
    arg = np.outer(t, x)
    cf = np.cos(arg) * f
    even = cf[:, ::2].sum(axis=1) - 0.5 * (cf[:, 0] + cf[:, -1])
    odd = cf[:, 1::2].sum(axis=1)
    edge = f[-1] * np.sin(t * x[-1]) - f[0] * np.sin(t * x[0])
    return dx * (alpha * edge + beta * even + gamma * odd)


def filon_sin(f, dx, t, x0=0.0):
    """int_{x0}^{x0 + (n-1) dx} f(x) sin(t x) dx for each value in ``t``."""
    f = _check_grid(f)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = x0 + dx * np.arange(f.size)
    alpha, beta, gamma = filon_coefficients(t * dx)
    arg = np.outer(t, x)
    sf = np.sin(arg) * f
    even = sf[:, ::2].sum(axis=1) - 0.5 * (sf[:, 0] + sf[:, -1])
    odd = sf[:, 1::2].sum(axis=1)
    edge = f[0] * np.cos(t * x[0]) - f[-1] * np.cos(t * x[-1])
    return dx * (alpha * edge + beta * even + gamma * odd)


def simpson(f, dx):
    f = _check_grid(f)
    return dx / 3 * (f[0] + f[-1] + 4 * f[1:-1:2].sum() + 2 * f[2:-1:2].sum())


def one_minus_cos_integral(f, dx, t):
    """int f(x) (1 - cos(t x)) dx on [0, (n-1) dx], exactly 0 at t = 0."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = simpson(f, dx) - filon_cos(f, dx, t)
    out[t == 0] = 0.0
    return out
