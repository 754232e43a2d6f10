import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import unitary_group

from disentangle.channel import TwoQubitState
from disentangle.entanglement import (concurrence, entanglement, eof_from_concurrence,
                                      hermitian_eig4, pure_state_eof_oracle, wootters_lambdas)
from disentangle.errors import InvalidParameterError

SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)
PSI1 = np.array([1, 1, 1, -1]) / 2


def haar_states(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def werner(p):
    return p * np.outer(SINGLET, SINGLET) + (1 - p) * np.eye(4) / 4


def test_hermitian_eig4_reconstructs(rng):
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = g + g.conj().T
    w, v = hermitian_eig4(m)
    assert np.all(np.diff(w) <= 0)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
    with pytest.raises(InvalidParameterError):
        hermitian_eig4(g)


def test_hermitian_eig4_trivial_cases(rng):
    np.testing.assert_array_equal(hermitian_eig4(np.eye(4))[0], np.ones(4))
    np.testing.assert_allclose(hermitian_eig4(np.diag([2.0, 4, 1, 3]))[0], [4, 3, 2, 1])
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = 1e3 * (g + g.conj().T)
    w, v = hermitian_eig4(m)
    assert w.sum() == pytest.approx(np.trace(m).real, abs=1e-12 * np.abs(m).max())
    assert np.linalg.norm(m - v @ np.diag(w) @ v.conj().T) < 1e-11 * np.linalg.norm(m)


def test_diagonal_states_combination(rng):
    for _ in range(20):
        p = rng.random(4)
        p /= p.sum()
        lam = wootters_lambdas(np.diag(p))
        expected = -2 * min(np.sqrt(p[0] * p[3]), np.sqrt(p[1] * p[2]))
        assert lam[0] - lam[1] - lam[2] - lam[3] == pytest.approx(expected, abs=1e-12)
        assert concurrence(np.diag(p)) == 0.0


def test_eof_vanishes_with_concurrence():
    assert eof_from_concurrence(0.0) == 0.0
    assert eof_from_concurrence(1e-12) > 0


@pytest.mark.parametrize("psi", [SINGLET, PSI1])
def test_maximally_entangled(psi):
    r = entanglement(TwoQubitState.from_vector(psi))
    assert r.concurrence == pytest.approx(1.0, abs=1e-12)
    assert r.eof == pytest.approx(1.0, abs=1e-12)


def test_product_state():
    psi = np.kron([np.cos(0.3), np.sin(0.3)], [1j, 1]) / np.sqrt(2)
    assert concurrence(TwoQubitState.from_vector(psi)) == pytest.approx(0.0, abs=1e-12)


def test_x_state_closed_form():
    # C = 2 max(0, |r12| - sqrt(r00 r33), |r03| - sqrt(r11 r22)) for X states
    rho = np.diag([0.3, 0.2, 0.25, 0.25]).astype(complex)
    rho[0, 3] = rho[3, 0] = 0.2
    rho[1, 2] = 0.05j
    rho[2, 1] = -0.05j
    expected = 2 * max(0, 0.05 - np.sqrt(0.3 * 0.25), 0.2 - np.sqrt(0.2 * 0.25))
    assert concurrence(rho) == pytest.approx(expected, abs=1e-12)
    lam = wootters_lambdas(rho)
    assert np.all(np.diff(lam) <= 1e-15)


def test_werner_family():
    for p in np.linspace(0, 1, 41):
        assert concurrence(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-10)


@pytest.mark.parametrize("c,expected", [(0.5, 0.354578902665269884), (0.25, 0.117618873770917912),
                                        (0.9, 0.858235875301515808), (0.0, 0.0), (1.0, 1.0)])
def test_eof_values(c, expected):
    assert eof_from_concurrence(c) == pytest.approx(expected, abs=1e-15)


def test_eof_domain():
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(InvalidParameterError):
            eof_from_concurrence(bad)


def test_eof_monotone_and_smooth_near_zero():
    c = np.linspace(0, 1, 1001)
    e = np.array([eof_from_concurrence(x) for x in c])
    assert np.all(np.diff(e) > 0)
    # leading term: EOF ~ (c^2 / 4) log2(4 e / c^2)
    small = 1e-6
    approx = small**2 / 4 * np.log2(4 * np.e / small**2)
    assert eof_from_concurrence(small) == pytest.approx(approx, rel=1e-6)


def test_schmidt_oracle_examples():
    assert pure_state_eof_oracle([1, 0, 0, 0]) == 0.0
    assert pure_state_eof_oracle(SINGLET) == pytest.approx(1.0, abs=1e-14)
    assert pure_state_eof_oracle(PSI1) == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(InvalidParameterError):
        pure_state_eof_oracle([1, 1, 0, 0])


def test_pure_states_agree_with_schmidt_entropy():
    worst = 0.0
    for psi in haar_states(1000, seed=99):
        wootters = entanglement(TwoQubitState.from_vector(psi)).eof
        worst = max(worst, abs(wootters - pure_state_eof_oracle(psi)))
    assert worst < 1e-9


def test_local_unitary_invariance():
    rng = np.random.default_rng(5)
    for psi in haar_states(50, seed=6):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = 0.7 * np.outer(psi, psi.conj()) + 0.3 * g @ g.conj().T / np.trace(g @ g.conj().T)
        u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        assert concurrence(u @ rho @ u.conj().T) == pytest.approx(concurrence(rho), abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(weights=st.lists(st.floats(0.01, 1.0), min_size=1, max_size=5),
       seed=st.integers(0, 2**32 - 1))
def test_mixtures_of_products_are_separable(weights, seed):
    rng = np.random.default_rng(seed)
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        a = rng.normal(size=2) + 1j * rng.normal(size=2)
        b = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        rho += w * np.outer(v, v.conj())
    rho /= np.trace(rho)
    assert concurrence(rho) <= 1e-9
