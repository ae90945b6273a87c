"""Coherent-state algebra against brute-force Fock oracles.

The oracle expands each SU(2) coherent state over number states with
explicit integer binomials (math.comb), fully independent of the library's
log-gamma and repeated-squaring paths.
"""

import math

import numpy as np
import pytest

from bjjsim.core import SystemParams
from bjjsim.fockexact import hamiltonian_matrix
from bjjsim.gcs import (
    MultiConfigState,
    acs_fock_batch,
    hamiltonian_bracket,
    ipow,
    multiconfig_fock_batch,
    reduced_overlap,
    state_norm,
    to_fock,
)
from bjjsim.meanfield import mf_energy
from bjjsim.core import PhaseSpacePoint, acs_from_phase_space


def oracle_fock(xi, S):
    """Independent binomial-theorem expansion of one coherent state."""
    x1, x2 = complex(xi[0]), complex(xi[1])
    return np.array(
        [math.sqrt(math.comb(S, j)) * x1 ** (S - j) * x2**j for j in range(S + 1)]
    )


def random_row(rng):
    row = rng.normal(size=2) + 1j * rng.normal(size=2)
    return row / np.linalg.norm(row)


def test_ipow_matches_builtin():
    assert ipow(0.3 + 0.4j, 7) == pytest.approx((0.3 + 0.4j) ** 7, rel=1e-14)
    assert ipow(0.0j, 0) == 1.0
    assert ipow(0.0j, 5) == 0.0


def test_reduced_overlap_examples():
    row = np.array([0.6, 0.8j])
    assert reduced_overlap(row, row, 12, 0) == pytest.approx(1.0, abs=1e-14)
    assert reduced_overlap([1, 0], [0, 1], 3, 0) == 0.0
    r = 1.0 / math.sqrt(2.0)
    val = reduced_overlap([1, 0], [r, r], 2, 0)
    brute = np.vdot(oracle_fock([1, 0], 2), oracle_fock([r, r], 2))
    assert val == pytest.approx(0.5, abs=1e-14)
    assert val == pytest.approx(brute, abs=1e-14)


def test_reduced_overlap_oracle_equivalence():
    rng = np.random.default_rng(42)
    for _ in range(100):
        S = int(rng.integers(1, 31))
        a, b = random_row(rng), random_row(rng)
        expected = np.vdot(oracle_fock(a, S), oracle_fock(b, S))
        assert abs(reduced_overlap(a, b, S, 0) - expected) < 1e-12


def test_reduced_overlap_is_lower_particle_number_overlap():
    rng = np.random.default_rng(3)
    a, b = random_row(rng), random_row(rng)
    for S, r in ((5, 1), (9, 2), (12, 3)):
        expected = np.vdot(oracle_fock(a, S - r), oracle_fock(b, S - r))
        assert abs(reduced_overlap(a, b, S, r) - expected) < 1e-12


def test_reduced_overlap_domain_error():
    with pytest.raises(Exception):
        reduced_overlap([1, 0], [1, 0], 2, 3)


def test_reduced_overlap_scaling_covariance():
    rng = np.random.default_rng(5)
    a, b = random_row(rng), random_row(rng)
    c = 1.3 * np.exp(0.7j)
    for S, r in ((8, 0), (8, 1), (8, 2)):
        scaled = reduced_overlap(c * a, b, S, r)
        assert scaled == pytest.approx(np.conj(c) ** (S - r) * reduced_overlap(a, b, S, r), rel=1e-12)


def test_hamiltonian_bracket_examples():
    params = SystemParams(1.0, 1.0, 2)
    assert hamiltonian_bracket([1, 0], [1, 0], params) == pytest.approx(1.0, abs=1e-14)

    r = 1.0 / math.sqrt(2.0)
    params = SystemParams(1.0, 0.0, 20)
    assert hamiltonian_bracket([r, r], [r, r], params) == pytest.approx(-20.0, abs=1e-12)


def test_hamiltonian_bracket_hermiticity():
    rng = np.random.default_rng(11)
    params = SystemParams(1.0, 0.37, 14)
    a, b = random_row(rng), random_row(rng)
    assert hamiltonian_bracket(a, b, params) == pytest.approx(
        np.conj(hamiltonian_bracket(b, a, params)), rel=1e-12
    )


def test_hamiltonian_bracket_diagonal_identity():
    # diagonal coherent-state expectation = pendulum energy + U S (S-1) / 4
    rng = np.random.default_rng(7)
    for _ in range(20):
        z, phi = rng.uniform(-0.95, 0.95), rng.uniform(-math.pi, math.pi)
        params = SystemParams(1.0, rng.uniform(-1.0, 1.0), int(rng.integers(2, 40)))
        acs = acs_from_phase_space(PhaseSpacePoint(z, phi))
        row = [acs.xi1, acs.xi2]
        expected = mf_energy(PhaseSpacePoint(z, phi), params) + params.U * params.S * (params.S - 1) / 4.0
        assert hamiltonian_bracket(row, row, params).real == pytest.approx(expected, abs=1e-10)


def test_hamiltonian_bracket_fock_oracle():
    rng = np.random.default_rng(23)
    for _ in range(100):
        S = int(rng.integers(1, 31))
        params = SystemParams(1.0, rng.uniform(-1.5, 1.5), S)
        a, b = random_row(rng), random_row(rng)
        H = hamiltonian_matrix(params)
        expected = np.vdot(oracle_fock(a, S), H @ oracle_fock(b, S))
        assert abs(hamiltonian_bracket(a, b, params) - expected) < 1e-10


def test_to_fock_examples():
    state = MultiConfigState(4, np.array([1.0 + 0j]), np.array([[1.0, 0.0]], dtype=complex))
    b = to_fock(state)
    assert np.allclose(b, np.eye(5)[0])

    r = 1.0 / math.sqrt(2.0)
    state = MultiConfigState(2, np.array([1.0 + 0j]), np.array([[r, r]], dtype=complex))
    assert to_fock(state) == pytest.approx(np.array([0.5, 0.7071067811865476, 0.5]), abs=1e-12)


def test_to_fock_norm_matches_overlap_norm():
    rng = np.random.default_rng(17)
    A = rng.normal(size=3) + 1j * rng.normal(size=3)
    Xi = np.array([random_row(rng) for _ in range(3)])
    state = MultiConfigState(10, A, Xi)
    assert np.linalg.norm(to_fock(state)) == pytest.approx(state_norm(state), abs=1e-12)


def test_state_norm_examples():
    row = random_row(np.random.default_rng(0))
    one = MultiConfigState(7, np.array([1.0 + 0j]), np.array([row]))
    assert state_norm(one) == pytest.approx(1.0, abs=1e-13)

    pair = MultiConfigState(7, np.array([1.0, -1.0], dtype=complex), np.array([row, row]))
    assert state_norm(pair) == pytest.approx(0.0, abs=1e-7)

    rng = np.random.default_rng(29)
    A = rng.normal(size=4) + 1j * rng.normal(size=4)
    Xi = np.array([random_row(rng) for _ in range(4)])
    state = MultiConfigState(20, A, Xi)
    assert state_norm(state) == pytest.approx(np.linalg.norm(to_fock(state)), abs=1e-12)


def test_batched_expansions_match_scalar_paths():
    rng = np.random.default_rng(31)
    z = rng.uniform(-0.9, 0.9, size=5)
    phi = rng.uniform(-3, 3, size=5)
    B = acs_fock_batch(z, phi, 12)
    for i in range(5):
        acs = acs_from_phase_space(PhaseSpacePoint(z[i], phi[i]))
        assert np.allclose(B[i], oracle_fock([acs.xi1, acs.xi2], 12), atol=1e-12)

    A_s = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
    Xi_s = np.array([[random_row(rng) for _ in range(3)] for _ in range(4)])
    batch = multiconfig_fock_batch(A_s, Xi_s, 9, chunk=2)
    for i in range(4):
        state = MultiConfigState(9, A_s[i], Xi_s[i])
        assert np.allclose(batch[i], to_fock(state), atol=1e-12)
