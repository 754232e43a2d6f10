"""Independent checks of the production path.

* :func:`mc_exponent` estimates the decoherence exponents by importance-
  sampled Monte-Carlo over the full 3D wavevector space, bypassing the
  angular reduction and the 1D frequency grid.
* :func:`few_mode_evolve` evolves a discrete-mode instance of the two-qubit
  Hamiltonian exactly in a truncated Fock space.  The Hamiltonian is
  block-diagonal in the qubit basis (one displaced-oscillator bath per
  basis state), so each block is evolved by Hermitian eigendecomposition.
  It never uses the closed-form dephasing formulas.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import TwoQubitState, apply_channel, build_channel
from .errors import DisentangleError, InvalidParameterError
from .kernel import thermal_factor
from .params import CONSTANTS, DotGeometry, MaterialParams, PhysicalConstants
from .spectral import form_factor_squared

MAX_DENSE_DIM = 40_000
TRUNCATION_TOL = 1e-6


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    n_samples: int
    seed: int


def mc_exponent(t: float, temperature: float, material: MaterialParams, geometry: DotGeometry,
                n_samples: int = 1_000_000, seed: int = 0,
                constants: PhysicalConstants = CONSTANTS, chunk: int = 250_000):
    """Monte-Carlo estimates of (Gamma_plus, Gamma_minus) at (t, T).

    Gamma = int d^3k / (2 pi)^3 V|g_k|^2 trig^2(k_z d / 2) (1 - cos c k t) coth(...).

    Directions are uniform on the sphere and |k| is drawn from an equal
    mixture of half-normals with widths 1 / max(l_e, l_h) and 1 / l_z (the
    form-factor envelope scales).  Sampling in |k| cancels the k^2
    Jacobian, which keeps the importance weights bounded; a Cartesian
    Gaussian would leave a 1/k^2 singularity and heavy-tailed weights.
    Both branches share the same samples.
    """
    if n_samples < 10_000:
        raise InvalidParameterError("n_samples must be >= 10000")
    if t < 0 or temperature < 0:
        raise InvalidParameterError("t and temperature must be non-negative")
    widths = np.array([1.0 / max(geometry.l_e, geometry.l_h), 1.0 / geometry.l_z])
    if not np.all(np.isfinite(widths) & (widths > 0)):
        raise DisentangleError("degenerate Monte-Carlo proposal")
    if t == 0:
        zero = McEstimate(0.0, 0.0, n_samples, seed)
        return zero, zero

    rng = np.random.default_rng(seed)
    c = material.sound_speed
    pref = 1.0 / ((2 * math.pi) ** 3 * 2 * constants.hbar * material.mass_density * c**3)
    sums = np.zeros(2)
    sq = np.zeros(2)
    done = 0
    while done < n_samples:
        n = min(chunk, n_samples - done)
        pick = rng.integers(0, 2, n)
        k = np.abs(rng.normal(0.0, 1.0, n)) * widths[pick]
        u = rng.uniform(-1.0, 1.0, n)
        # proposal density per d^3k: radial mixture / (4 pi k^2)
        radial = sum(0.5 * math.sqrt(2 / math.pi) / s * np.exp(-k**2 / (2 * s * s)) for s in widths)
        inv_p = 4 * math.pi * k**2 / radial
        omega = c * k
        base = (pref * form_factor_squared(k, u, material, geometry) / k
                * (1 - np.cos(omega * t)) * thermal_factor(omega, temperature, constants)
                * inv_p)
        phase = k * u * geometry.d / 2
        for i, trig in enumerate((np.cos(phase) ** 2, np.sin(phase) ** 2)):
            x = base * trig
            sums[i] += x.sum()
            sq[i] += (x * x).sum()
        done += n
    mean = sums / n_samples
    var = np.maximum(sq / n_samples - mean**2, 0.0)
    err = np.sqrt(var / (n_samples - 1))
    return (McEstimate(float(mean[0]), float(err[0]), n_samples, seed),
            McEstimate(float(mean[1]), float(err[1]), n_samples, seed))


@dataclass(frozen=True)
class FewModeSpec:
    """Discrete bosonic modes coupled to both qubits.

    Each mode is (omega [1/ps], g1, g2) with g = f / (hbar omega) the
    dimensionless displacement for qubit 1 and qubit 2.  ``eps1``, ``eps2``,
    ``delta_eps`` are bare energies in 1/ps (hbar = 1 inside the oracle).
    """

    modes: tuple
    fock_cutoff: int
    temperature: float = 0.0
    eps1: float = 0.0
    eps2: float = 0.0
    delta_eps: float = 0.0
    constants: PhysicalConstants = field(default=CONSTANTS, repr=False)

    def __post_init__(self):
        modes = tuple((float(w), complex(g1), complex(g2)) for w, g1, g2 in self.modes)
        if not modes:
            raise InvalidParameterError("at least one mode is required")
        if any(w <= 0 for w, _, _ in modes):
            raise InvalidParameterError("mode frequencies must be positive")
        if self.fock_cutoff < 2:
            raise InvalidParameterError("fock_cutoff must be >= 2")
        if self.temperature < 0:
            raise InvalidParameterError("temperature must be non-negative")
        object.__setattr__(self, "modes", modes)

    def boltzmann_exponents(self):
        """hbar omega / k_B T per mode (inf at T = 0)."""
        w = np.array([m[0] for m in self.modes])
        if self.temperature == 0:
            return np.full_like(w, np.inf)
        return self.constants.hbar * w / (self.constants.k_boltzmann * self.temperature)

    def truncation_error(self) -> float:
        """Gibbs weight lost above the cutoff, summed over modes."""
        x = self.boltzmann_exponents()
        return float(np.sum(np.exp(-x * self.fock_cutoff)))

    @classmethod
    def symmetric_pairs(cls, omegas, couplings, phases, fock_cutoff, **kwargs):
        """Modes in +-k_z pairs: g1 = g e^{+-i theta}, g2 = g e^{-+i theta}.

        Mirrors the continuum, where every mode has an inversion partner.
        """
        modes = []
        for w, g, th in zip(omegas, couplings, phases):
            modes.append((w, g * np.exp(1j * th), g * np.exp(-1j * th)))
            if th != 0:
                modes.append((w, g * np.exp(-1j * th), g * np.exp(1j * th)))
        return cls(tuple(modes), fock_cutoff, **kwargs)


# basis |00>, |01>, |10>, |11>: bath displacement and bare energy of each block
def _block_displacements(spec):
    g1 = np.array([m[1] for m in spec.modes])
    g2 = np.array([m[2] for m in spec.modes])
    return [np.zeros_like(g1), g2, g1, g1 + g2]


def _block_energies(spec):
    return np.array([0.0, spec.eps2, spec.eps1, spec.eps1 + spec.eps2 + spec.delta_eps])


def _thermal_populations(x, n):
    if np.isinf(x):
        p = np.zeros(n)
        p[0] = 1.0
        return p
    p = np.exp(-x * np.arange(n))
    return p / p.sum()


def _mode_hamiltonian(omega, g, n):
    # omega a^dag a + omega (g a^dag + g* a)
    lower = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    return omega * (lower.conj().T @ lower + g * lower.conj().T + np.conj(g) * lower)


def _propagator(h, t):
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def _check_truncation(spec):
    err = spec.truncation_error()
    if err > TRUNCATION_TOL:
        raise DisentangleError(
            f"Fock cutoff {spec.fock_cutoff} too small: thermal truncation error {err:.2e}")


def few_mode_evolve(spec: FewModeSpec, psi, t: float, method: str = "factorized") -> np.ndarray:
    """Exact reduced 4x4 state at time t for a product initial state psi (x) rho_T.

    ``method="dense"`` evolves each qubit-basis block on the full tensor-
    product Fock space.  ``method="factorized"`` uses the fact that the
    modes of a block do not interact, so its propagator and the thermal
    state are tensor products and the bath trace factorizes per mode.
    """
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1) > 1e-12:
        raise InvalidParameterError("initial state must be normalized")
    overlap = bath_overlaps(spec, float(t), method)
    free = np.exp(-1j * _block_energies(spec) * t)
    return np.outer(psi, psi.conj()) * overlap * np.outer(free, free.conj())


@functools.lru_cache(maxsize=64)
def bath_overlaps(spec: FewModeSpec, t: float, method: str = "factorized") -> np.ndarray:
    """Tr_B[U_i(t) rho_T U_j(t)^dag] for the four qubit-basis blocks i, j."""
    _check_truncation(spec)
    n = spec.fock_cutoff
    xs = spec.boltzmann_exponents()
    disp = _block_displacements(spec)

    if method == "factorized":
        overlap = np.ones((4, 4), dtype=complex)
        for m, (omega, _, _) in enumerate(spec.modes):
            p = _thermal_populations(xs[m], n)
            props = [_propagator(_mode_hamiltonian(omega, disp[j][m], n), t) for j in range(4)]
            for i in range(4):
                for j in range(4):
                    # Tr[U_i rho_T U_j^dag]
                    overlap[i, j] *= np.einsum("ab,b,ab->", props[i], p, props[j].conj())
    elif method == "dense":
        dim = n ** len(spec.modes)
        if 4 * dim > MAX_DENSE_DIM:
            raise InvalidParameterError(f"dense Hilbert dimension {4 * dim} exceeds {MAX_DENSE_DIM}")
        p = np.ones(1)
        for x in xs:
            p = np.kron(p, _thermal_populations(x, n))
        props = []
        for j in range(4):
            h = np.zeros((dim, dim), dtype=complex)
            for m, (omega, _, _) in enumerate(spec.modes):
                term = _mode_hamiltonian(omega, disp[j][m], n)
                left = np.eye(n ** m)
                right = np.eye(n ** (len(spec.modes) - m - 1))
                h += np.kron(np.kron(left, term), right)
            props.append(_propagator(h, t))
        overlap = np.empty((4, 4), dtype=complex)
        for i in range(4):
            for j in range(4):
                overlap[i, j] = np.einsum("ab,b,ab->", props[i], p, props[j].conj())
    else:
        raise InvalidParameterError(f"unknown method {method!r}")
    overlap.setflags(write=False)
    return overlap


def discrete_kernel(spec: FewModeSpec, t: float):
    """Finite-sum a, b, phi_loc, phi_bi for a mode set (same formulas as the continuum)."""
    w = np.array([m[0] for m in spec.modes])
    g1 = np.array([m[1] for m in spec.modes])
    g2 = np.array([m[2] for m in spec.modes])
    if spec.temperature == 0:
        coth = np.ones_like(w)
    else:
        coth = thermal_factor(w, spec.temperature, spec.constants)
    plus = np.abs(g1 + g2) ** 2 / 4  # |g|^2 cos^2
    minus = np.abs(g1 - g2) ** 2 / 4  # |g|^2 sin^2
    damp = (1 - np.cos(w * t)) * coth
    a = math.exp(-float(np.sum(plus * damp)))
    b = math.exp(-float(np.sum(minus * damp)))
    sin = np.sin(w * t)
    phi_loc = -float(np.sum((plus + minus) * sin))
    phi_bi = -4 * float(np.sum(plus * sin))
    return a, b, phi_loc, phi_bi


def channel_prediction(spec: FewModeSpec, psi, t: float) -> np.ndarray:
    """Reduced state from the Kraus channel with discrete-sum kernels.

    The channel gives the state in the frame rotating with the renormalized
    single-qubit energies; the rotation is undone here so the result is
    comparable with :func:`few_mode_evolve`.  The mode set must be
    inversion symmetric (see :meth:`FewModeSpec.symmetric_pairs`).
    """
    w = np.array([m[0] for m in spec.modes])
    g1 = np.array([m[1] for m in spec.modes])
    g2 = np.array([m[2] for m in spec.modes])
    for omega in np.unique(w):
        sel = w == omega
        if abs(np.sum(np.imag(g1[sel] * np.conj(g2[sel])))) > 1e-12:
            raise InvalidParameterError("mode set is not inversion symmetric")
    e1 = spec.eps1 - float(np.sum(w * np.abs(g1) ** 2))
    e2 = spec.eps2 - float(np.sum(w * np.abs(g2) ** 2))
    delta_e = spec.delta_eps - 2 * float(np.sum(w * np.real(g1 * np.conj(g2))))
    a, b, phi_loc, phi_bi = discrete_kernel(spec, t)
    ops = build_channel(a, b, phi_loc, phi_bi - delta_e * t)
    rotated = apply_channel(TwoQubitState.from_vector(psi), ops).rho
    local = np.exp(-1j * np.array([0.0, e2, e1, e1 + e2]) * t)
    return rotated * np.outer(local, local.conj())
