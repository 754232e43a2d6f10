"""Phonon spectral densities of the two-dot coupling.

The k-space sums appearing in the dephasing exponents are reduced to
one-dimensional densities in the phonon frequency w = c|k| (single linear
LA branch).  The azimuthal integral is trivial; the polar-angle integral
over u = cos(theta) is done with composite Gauss-Legendre panels.

Two densities are tabulated, split by the inter-dot phase factor:

    S_plus(w)  = sum_k |g_k|^2 cos^2(k_z d / 2) delta(w - w_k)
    S_minus(w) = sum_k |g_k|^2 sin^2(k_z d / 2) delta(w - w_k)

with g_k = (f_e - f_h) / (hbar w_k).  Both are in ps, so int S dw is
dimensionless.  S_plus ~ w and S_minus ~ w^3 at small w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, InvalidParameterError
from .params import CONSTANTS, DotGeometry, MaterialParams, PhysicalConstants
from .quadrature import one_minus_cos_integral, simpson

GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)
# geometric grading toward u = 0 and u = 1 resolves Gaussian peaks of any width
_GRADING_LEVELS = 40
# squared form-factor envelope at the top of the grid, relative to its peak
_ENVELOPE_CUTOFF = 1e-20
_MAX_PANELS = 1 << 14


def form_factor_squared(k, u, material: MaterialParams, geometry: DotGeometry):
    """[sigma_e G_e - sigma_h G_h]^2 * exp(-l_z^2 k_z^2 / 2), in meV^2."""
    k = np.asarray(k, dtype=float)
    u = np.asarray(u, dtype=float)
    kperp2 = k**2 * (1.0 - u**2)
    amp = (material.sigma_e * np.exp(-geometry.l_e**2 * kperp2 / 4)
           - material.sigma_h * np.exp(-geometry.l_h**2 * kperp2 / 4))
    return amp**2 * np.exp(-(geometry.l_z * k * u) ** 2 / 2)


def reduced_coupling(k, u, material: MaterialParams, geometry: DotGeometry,
                     constants: PhysicalConstants = CONSTANTS):
    """V |g(k, u)|^2 in nm^3 for a mode of wavevector k and polar cosine u.

    Equals form_factor_squared / (2 hbar rho c^3 k); the normalization
    volume V is factored out.  The inter-dot phase is not included.
    """
    k = np.asarray(k, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(k <= 0):
        raise InvalidParameterError("k must be positive")
    if np.any(np.abs(u) > 1):
        raise InvalidParameterError("u must lie in [-1, 1]")
    denom = 2 * constants.hbar * material.mass_density * material.sound_speed**3 * k
    return form_factor_squared(k, u, material, geometry) / denom


def _spectral_prefactor(material, constants):
    # S(w) / w = prefactor * int_{-1}^{1} du form_factor_squared * trig^2
    return 1.0 / (8 * math.pi**2 * constants.hbar * material.mass_density
                  * material.sound_speed**5)


def _breakpoints(n_uniform):
    """Panel edges on [0, 1]: uniform panels plus geometric grading at both ends."""
    graded = 2.0 ** -np.arange(1, _GRADING_LEVELS + 1)
    pts = np.concatenate([np.linspace(0.0, 1.0, n_uniform + 1), graded, 1.0 - graded])
    return np.unique(pts)


def _nodes(edges):
    lo, hi = edges[:-1, None], edges[1:, None]
    half = (hi - lo) / 2
    u = (lo + hi) / 2 + half * _GL_X
    w = half * _GL_W
    return u.ravel(), w.ravel()


def _angular_integral(k, branch, material, geometry, n_uniform):
    """2 * int_0^1 du F(k, u) trig^2(k u d / 2) for a batch of k values."""
    u, w = _nodes(_breakpoints(n_uniform))
    out = np.empty(len(k))
    for start in range(0, len(k), 256):
        kk = k[start:start + 256, None]
        val = form_factor_squared(kk, u, material, geometry)
        if branch == "plus":
            val = val * np.cos(kk * u * geometry.d / 2) ** 2
        elif branch == "minus":
            val = val * np.sin(kk * u * geometry.d / 2) ** 2
        out[start:start + 256] = 2 * val @ w
    return out


def _converged_angular(k, branch, material, geometry, tol):
    """Angular integral per k, with panel count doubled until converged.

    The uniform panel count starts at max(1, k d / pi), rounded up to a
    power of two, so each panel spans at most half a period of trig^2.
    """
    k = np.asarray(k, dtype=float)
    d = geometry.d if branch != "full" else 0.0
    base = np.maximum(1.0, k * d / math.pi)
    levels = np.ceil(np.log2(base)).astype(int)
    out = np.empty(len(k))
    for level in np.unique(levels):
        sel = levels == level
        kk = k[sel]
        n = 1 << int(level)
        coarse = _angular_integral(kk, branch, material, geometry, n)
        while True:
            fine = _angular_integral(kk, branch, material, geometry, 2 * n)
            scale = np.maximum(np.abs(fine), np.finfo(float).tiny)
            err = np.max(np.abs(fine - coarse) / scale)
            if err <= tol:
                break
            n *= 2
            if n > _MAX_PANELS:
                raise ConvergenceError(f"angular quadrature ({branch}) did not converge", err)
            coarse = fine
        out[sel] = fine
    return out


def spectral_density(omega, branch, material: MaterialParams, geometry: DotGeometry,
                     tol: float = 1e-12, constants: PhysicalConstants = CONSTANTS):
    """S_plus, S_minus or the d-independent S_full at the given frequencies (ps)."""
    return np.asarray(omega, dtype=float) * _reduced_density(
        omega, branch, material, geometry, tol, constants)


def _reduced_density(omega, branch, material, geometry, tol, constants):
    # S(w) / w, finite at w = 0
    if branch not in ("plus", "minus", "full"):
        raise InvalidParameterError(f"unknown branch {branch!r}")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(omega < 0):
        raise InvalidParameterError("omega must be non-negative")
    if branch == "minus" and geometry.d == 0:
        return np.zeros_like(omega)
    k = omega / material.sound_speed
    return _spectral_prefactor(material, constants) * _converged_angular(
        k, branch, material, geometry, tol)


@dataclass(frozen=True, eq=False)
class SpectralTable:
    """Spectral densities on a uniform grid 0 = w_0 < ... < w_max (odd length).

    ``r_plus``/``r_minus`` hold S/w, which stays finite at w = 0 and is what
    the thermal weighting consumes.
    """

    omega: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    r_plus: np.ndarray
    r_minus: np.ndarray
    material: MaterialParams
    geometry: DotGeometry
    constants: PhysicalConstants = CONSTANTS

    @property
    def d_omega(self) -> float:
        return float(self.omega[1] - self.omega[0])

    def branch(self, name):
        if name == "plus":
            return self.s_plus, self.r_plus
        if name == "minus":
            return self.s_minus, self.r_minus
        raise InvalidParameterError(f"unknown branch {name!r}")


def omega_cutoff(material: MaterialParams, geometry: DotGeometry) -> float:
    """Frequency above which the squared form factor is below _ENVELOPE_CUTOFF."""
    l_min = min(geometry.l_e, geometry.l_h, geometry.l_z)
    k_max = math.sqrt(-2 * math.log(_ENVELOPE_CUTOFF)) / l_min
    return material.sound_speed * k_max


def _grid_check_exponents(r, omega, constants, t_ref):
    # thermally weighted exponents at a hot reference point; most sensitive to grid spacing
    temperature = 300.0
    x = constants.hbar * omega / (2 * constants.k_boltzmann * temperature)
    weight = np.empty_like(omega)
    weight[0] = 2 * constants.k_boltzmann * temperature / constants.hbar
    weight[1:] = omega[1:] / np.tanh(x[1:])
    h = r * weight
    dx = omega[1] - omega[0]
    return np.array([simpson(h, dx), *one_minus_cos_integral(h, dx, [t_ref / 4, t_ref])])


def build_spectral_table(material: MaterialParams, geometry: DotGeometry,
                         tol: float = 1e-12, grid_tol: float = 1e-8,
                         t_ref: float = 50.0,
                         constants: PhysicalConstants = CONSTANTS) -> SpectralTable:
    """Tabulate S_plus and S_minus on a uniform frequency grid.

    The grid spacing starts at the largest value with d_omega * t_ref <= pi/4
    and is halved until the downstream exponents change by less than
    ``grid_tol`` (relative).
    """
    if not 0 < tol <= 1e-4:
        raise InvalidParameterError("tol must lie in (0, 1e-4]")
    w_max = omega_cutoff(material, geometry)
    n_panels = 2 * math.ceil(w_max * t_ref / (math.pi / 4) / 2)
    omega = np.linspace(0.0, w_max, n_panels + 1)
    r_plus = _reduced_density(omega, "plus", material, geometry, tol, constants)
    r_minus = _reduced_density(omega, "minus", material, geometry, tol, constants)
    prev = None
    while True:
        cur = np.concatenate([_grid_check_exponents(r_plus, omega, constants, t_ref),
                              _grid_check_exponents(r_minus, omega, constants, t_ref)])
        if prev is not None:
            err = np.max(np.abs(cur - prev) / np.maximum(np.abs(cur), 1e-300))
            if err < grid_tol:
                break
            if len(omega) > 1 << 18:
                raise ConvergenceError("frequency grid refinement did not converge", err)
        prev = cur
        mids = (omega[:-1] + omega[1:]) / 2
        new_p = _reduced_density(mids, "plus", material, geometry, tol, constants)
        new_m = _reduced_density(mids, "minus", material, geometry, tol, constants)
        omega = _interleave(omega, mids)
        r_plus = _interleave(r_plus, new_p)
        r_minus = _interleave(r_minus, new_m)
    return SpectralTable(omega=omega, s_plus=omega * r_plus, s_minus=omega * r_minus,
                         r_plus=r_plus, r_minus=r_minus, material=material,
                         geometry=geometry, constants=constants)


def _interleave(a, b):
    out = np.empty(len(a) + len(b))
    out[::2] = a
    out[1::2] = b
    return out
