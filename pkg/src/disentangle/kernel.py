"""Dephasing amplitudes a(t), b(t), unitary phases and their asymptotes.

With h(w) = S(w) coth(hbar w / 2 k_B T) the decoherence exponents are

    Gamma_pm(t) = int_0^inf h_pm(w) (1 - cos w t) dw,

and a = exp(-Gamma_plus), b = exp(-Gamma_minus).  The oscillatory parts are
integrated with the Filon rule on the table grid, so accuracy does not
decay at long times.  The long-time limits drop the cosine term exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .params import CONSTANTS, PhysicalConstants
from .quadrature import filon_sin, one_minus_cos_integral, simpson
from .spectral import SpectralTable


def thermal_factor(omega, temperature, constants: PhysicalConstants = CONSTANTS):
    """2 n(w) + 1 = coth(hbar w / 2 k_B T); exactly 1 at T = 0."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise InvalidParameterError("omega must be positive")
    if temperature < 0:
        raise InvalidParameterError("temperature must be non-negative")
    if temperature == 0:
        return np.ones_like(omega)[()]
    # coth x = 1 + 2 / (e^{2x} - 1); expm1 keeps precision, overflow gives exactly 1
    with np.errstate(over="ignore", divide="ignore"):
        x = constants.hbar * omega / (2 * constants.k_boltzmann * temperature)
        return (1.0 + 2.0 / np.expm1(2 * x))[()]


def thermal_weight(omega, temperature, constants: PhysicalConstants = CONSTANTS):
    """w * coth(hbar w / 2 k_B T), continued to 2 k_B T / hbar at w = 0."""
    omega = np.asarray(omega, dtype=float)
    if temperature < 0:
        raise InvalidParameterError("temperature must be non-negative")
    if temperature == 0:
        return omega.copy()
    out = np.full_like(omega, 2 * constants.k_boltzmann * temperature / constants.hbar)
    pos = omega > 0
    out[pos] = omega[pos] * thermal_factor(omega[pos], temperature, constants)
    return out


def _check_times(t):
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise InvalidParameterError("times must be finite and non-negative")
    return t


def _weighted(table: SpectralTable, branch, temperature):
    _, r = table.branch(branch)
    return r * thermal_weight(table.omega, temperature, table.constants)


def decoherence_exponent(table: SpectralTable, branch, t, temperature):
    """Gamma_plus or Gamma_minus at time(s) t; returns a scalar for scalar t."""
    scalar = np.ndim(t) == 0
    t = _check_times(t)
    if branch == "minus" and table.geometry.d == 0:
        out = np.zeros_like(t)
    else:
        out = one_minus_cos_integral(_weighted(table, branch, temperature), table.d_omega, t)
        np.maximum(out, 0.0, out=out)
    return float(out[0]) if scalar else out


def asymptotic_exponent(table: SpectralTable, branch, temperature) -> float:
    if branch == "minus" and table.geometry.d == 0:
        return 0.0
    return float(simpson(_weighted(table, branch, temperature), table.d_omega))


def amplitudes(table: SpectralTable, t, temperature):
    """(a, b) = (exp(-Gamma_plus), exp(-Gamma_minus))."""
    a = np.exp(-np.asarray(decoherence_exponent(table, "plus", t, temperature)))
    b = np.exp(-np.asarray(decoherence_exponent(table, "minus", t, temperature)))
    return a[()], b[()]


def phases(table: SpectralTable, t, delta_e: float = 0.0):
    """(phi_loc, phi_bi_total) in radians.

    The unitary is diag(1, e^{i phi_loc}, e^{i phi_loc}, e^{i phi_bi_total})
    with phi_loc = -int (S_plus + S_minus) sin(w t) dw and
    phi_bi_total = -4 int S_plus sin(w t) dw - delta_e t.  The sign of the
    sine terms is fixed by exact evolution of the Hamiltonian (see
    oracles.few_mode_evolve) in the frame rotating with the renormalized
    single-qubit energies.
    """
    scalar = np.ndim(t) == 0
    t = _check_times(t)
    dw = table.d_omega
    phi_loc = -filon_sin(table.s_plus + table.s_minus, dw, t)
    phi_bi = -4 * filon_sin(table.s_plus, dw, t) - delta_e * t
    if scalar:
        return float(phi_loc[0]), float(phi_bi[0])
    return phi_loc, phi_bi


def asymptotic_amplitudes(table: SpectralTable, temperature):
    return (float(np.exp(-asymptotic_exponent(table, "plus", temperature))),
            float(np.exp(-asymptotic_exponent(table, "minus", temperature))))


@dataclass(frozen=True)
class KernelEval:
    t: float
    temperature: float
    a: float
    b: float
    phi_loc: float
    phi_bi: float  # excludes the -delta_e * t term
    a_inf: float
    b_inf: float


def evaluate_kernel(table: SpectralTable, times, temperature) -> list[KernelEval]:
    """Kernel values on a time grid (vectorized over times)."""
    times = _check_times(times)
    a, b = amplitudes(table, times, temperature)
    phi_loc, phi_bi = phases(table, times, 0.0)
    a_inf, b_inf = asymptotic_amplitudes(table, temperature)
    return [KernelEval(float(t), float(temperature), float(ai), float(bi), float(pl), float(pb),
                       a_inf, b_inf)
            for t, ai, bi, pl, pb in zip(times, np.atleast_1d(a), np.atleast_1d(b),
                                         phi_loc, phi_bi)]
