"""Concurrence and entanglement of formation for two-qubit states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import TwoQubitState
from .errors import InvalidParameterError

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y).real  # real: entries are +-1
# eigenvalues of rho below this (relative to its largest) are roundoff
_RANK_CUTOFF = 64 * np.finfo(float).eps


def hermitian_eig4(m):
    """Eigenvalues (descending) and eigenvectors of a 4x4 Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise InvalidParameterError("expected a 4x4 matrix")
    scale = max(np.max(np.abs(m)), 1.0)
    if np.max(np.abs(m - m.conj().T)) > 1e-10 * scale:
        raise InvalidParameterError("matrix is not Hermitian")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w[::-1], v[:, ::-1]


def _as_matrix(state):
    return state.rho if isinstance(state, TwoQubitState) else np.asarray(state, dtype=complex)


def _sqrt_psd(rho):
    w, v = hermitian_eig4(rho)
    w = np.where(w > _RANK_CUTOFF * max(w[0], 0.0), w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def wootters_lambdas(state) -> np.ndarray:
    """Decreasing square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).

    They are the singular values of sqrt(rho) (Y x Y) sqrt(rho)^*, whose
    product with its adjoint is the Hermitian form
    sqrt(rho) (Y x Y) rho* (Y x Y) sqrt(rho).
    """
    root = _sqrt_psd(_as_matrix(state))
    return np.linalg.svd(root @ SPIN_FLIP @ root.conj(), compute_uv=False)


def concurrence(state) -> float:
    lam = wootters_lambdas(state)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def eof_from_concurrence(c: float) -> float:
    if not (-1e-12 <= c <= 1 + 1e-12):
        raise InvalidParameterError(f"concurrence must lie in [0, 1], got {c!r}")
    c = min(max(c, 0.0), 1.0)
    if c == 0:
        return 0.0
    root = np.sqrt((1 - c) * (1 + c))
    x_minus = c * c / (2 * (1 + root))  # (1 - root) / 2 without cancellation
    x_plus = 1 - x_minus
    return float(-x_plus * np.log2(x_plus) - x_minus * np.log2(x_minus))


@dataclass(frozen=True)
class EntanglementResult:
    concurrence: float
    eof: float


def entanglement(state) -> EntanglementResult:
    c = concurrence(state)
    return EntanglementResult(c, eof_from_concurrence(c))


def pure_state_eof_oracle(psi) -> float:
    """Entropy of entanglement of a pure state from its Schmidt coefficients."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise InvalidParameterError("state vector must have 4 components")
    if abs(np.linalg.norm(psi) - 1) > 1e-12:
        raise InvalidParameterError("state vector is not normalized")
    p = np.linalg.svd(psi.reshape(2, 2), compute_uv=False) ** 2
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())
