"""Two-qubit phase-damping channel in Kraus form.

Basis order is |00>, |01>, |10>, |11>.  All operators are diagonal, so the
Kraus operators and the phase unitary commute; the unitary is applied after
the Kraus sum, rho -> U (sum_mu K rho K^dag) U^dag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """A validated 4x4 density matrix."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise InvalidParameterError(f"expected a 4x4 matrix, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise InvalidParameterError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > TRACE_TOL:
            raise InvalidParameterError("density matrix does not have unit trace")
        if np.linalg.eigvalsh(rho).min() < PSD_TOL:
            raise InvalidParameterError("density matrix is not positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_vector(cls, psi) -> "TwoQubitState":
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (4,):
            raise InvalidParameterError("state vector must have 4 components")
        norm = np.linalg.norm(psi)
        if abs(norm - 1) > 1e-12:
            raise InvalidParameterError(f"state vector is not normalized (norm {norm})")
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class ChannelOps:
    kraus: np.ndarray  # (5, 4): diagonals of K_0..K_4
    unitary_diag: np.ndarray  # (4,)

    def kraus_matrices(self):
        return [np.diag(k) for k in self.kraus]

    def unitary(self):
        return np.diag(self.unitary_diag)


def _check_amplitude(name, value):
    if not (0 < value <= 1):
        raise InvalidParameterError(f"{name} must lie in (0, 1], got {value!r}")


def build_channel(a: float, b: float, phi_loc: float = 0.0, phi_bi_total: float = 0.0) -> ChannelOps:
    _check_amplitude("a", a)
    _check_amplitude("b", b)
    a2, b2 = a * a, b * b
    kraus = np.array([
        [a, b, b, a],
        [(a2 - 1) * np.sqrt(a2 + 1), 0, 0, 0],
        np.sqrt(1 - a2) * np.array([-a2, 0, 0, 1]),
        [0, 0, (b2 - 1) * np.sqrt(b2 + 1), 0],
        np.sqrt(1 - b2) * np.array([0, 1, -b2, 0]),
    ], dtype=complex)
    phase = np.exp(1j * np.array([0.0, phi_loc, phi_loc, phi_bi_total]))
    return ChannelOps(kraus=kraus, unitary_diag=phase)


def completeness_residue(ops: ChannelOps) -> float:
    total = sum(k.conj().T @ k for k in ops.kraus_matrices())
    return float(np.max(np.abs(total - np.eye(4))))


def apply_channel(state: TwoQubitState, ops: ChannelOps) -> TwoQubitState:
    rho = state.rho
    out = sum(np.outer(k, k.conj()) * rho for k in ops.kraus)
    u = ops.unitary_diag
    out = np.outer(u, u.conj()) * out
    # restore exact Hermiticity lost to roundoff
    return TwoQubitState((out + out.conj().T) / 2)


def analytic_multipliers(a: float, b: float):
    """Magnitude factors (m_single, m_03, m_12) = (a b, a^4, b^4) on the off-diagonals."""
    _check_amplitude("a", a)
    _check_amplitude("b", b)
    return a * b, a**4, b**4


def multiplier_matrix(a, b):
    """4x4 matrix of off-diagonal magnitude factors; ones on the diagonal."""
    s, m03, m12 = analytic_multipliers(a, b)
    return np.array([[1, s, s, m03],
                     [s, 1, m12, s],
                     [s, m12, 1, s],
                     [m03, s, s, 1]], dtype=float)


def choi_matrix(ops: ChannelOps) -> np.ndarray:
    """sum_ij |i><j| (x) Phi(|i><j|); 16x16, input factor first."""
    choi = np.zeros((16, 16), dtype=complex)
    kraus = [ops.unitary() @ k for k in ops.kraus_matrices()]
    for i in range(4):
        for j in range(4):
            e = np.zeros((4, 4), dtype=complex)
            e[i, j] = 1
            block = sum(k @ e @ k.conj().T for k in kraus)
            choi[4 * i:4 * i + 4, 4 * j:4 * j + 4] = block
    return choi
