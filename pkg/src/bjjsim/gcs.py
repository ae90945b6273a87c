"""SU(2) coherent-state algebra: overlaps, Hamiltonian brackets, Fock expansion.

An ACS with S particles and amplitudes xi = (xi1, xi2) has Fock expansion

    b_j = sqrt(C(S, j)) * xi1^(S-j) * xi2^j,      j = 0..S,

over the number states |S-j, j>.  All pairwise quantities reduce to integer
powers of the single-particle inner product w = xi_k* . xi_j; the power with
r factors removed, w^(S-r), is what couples states after r ladder operators
have acted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .core import DomainError, SystemParams


@dataclass(frozen=True)
class MultiConfigState:
    """Superposition of N SU(2) coherent states sharing the particle number S.

    A holds the configuration coefficients, Xi the per-configuration
    amplitude rows (xi_k1, xi_k2).  Rows are unit-norm after every
    propagation step; intermediate states may carry non-unit rows (the
    algebra below is homogeneous, so the physical state is unaffected
    when A absorbs the compensating factor norm^S).
    """

    S: int
    A: np.ndarray
    Xi: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        Xi = np.asarray(self.Xi, dtype=complex)
        if A.ndim != 1 or Xi.shape != (A.shape[0], 2):
            raise DomainError(f"inconsistent multi-configuration shapes {A.shape} / {Xi.shape}")
        if self.S < 1:
            raise DomainError("particle number must be >= 1")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "Xi", Xi)

    @property
    def multiplicity(self) -> int:
        return self.A.shape[0]


def ipow(w: complex, n: int) -> complex:
    """Integer power by repeated squaring (branch-cut-free for complex bases)."""
    if n < 0:
        raise DomainError("negative power")
    out = 1.0 + 0.0j
    base = complex(w)
    while n:
        if n & 1:
            out *= base
        base *= base
        n >>= 1
    return out


def sqrt_binomials(S: int) -> np.ndarray:
    """sqrt(C(S, j)) for j = 0..S, via log-gamma so S ~ 50 does not overflow."""
    j = np.arange(S + 1)
    return np.exp(0.5 * (gammaln(S + 1) - gammaln(S - j + 1) - gammaln(j + 1)))


def reduced_overlap(xi_k, xi_j, S: int, r: int) -> complex:
    """(xi_k* . xi_j)^(S-r): the overlap with r powers of the inner product removed."""
    if not 0 <= r <= S:
        raise DomainError(f"need 0 <= r <= S, got r={r}, S={S}")
    xi_k = np.asarray(xi_k, dtype=complex)
    xi_j = np.asarray(xi_j, dtype=complex)
    w = complex(np.conj(xi_k[0]) * xi_j[0] + np.conj(xi_k[1]) * xi_j[1])
    return ipow(w, S - r)


def hamiltonian_bracket(xi_k, xi_j, params: SystemParams) -> complex:
    """Matrix element <S, xi_k| H |S, xi_j> of the two-site junction Hamiltonian.

    Tunneling couples through one removed power of the overlap, the on-site
    interaction through two.
    """
    xi_k = np.asarray(xi_k, dtype=complex)
    xi_j = np.asarray(xi_j, dtype=complex)
    J, U, S = params.J, params.U, params.S
    w = complex(np.conj(xi_k[0]) * xi_j[0] + np.conj(xi_k[1]) * xi_j[1])
    hop = -J * S * (np.conj(xi_k[0]) * xi_j[1] + np.conj(xi_k[1]) * xi_j[0]) * ipow(w, S - 1)
    if S >= 2:
        quad = np.conj(xi_k[0]) ** 2 * xi_j[0] ** 2 + np.conj(xi_k[1]) ** 2 * xi_j[1] ** 2
        hop += 0.5 * U * S * (S - 1) * quad * ipow(w, S - 2)
    return complex(hop)


def to_fock(state: MultiConfigState) -> np.ndarray:
    """Expand the multi-configuration state over the Fock basis |S-j, j>, j = 0..S."""
    S = state.S
    weights = sqrt_binomials(S)
    b = np.zeros(S + 1, dtype=complex)
    for A_k, (x1, x2) in zip(state.A, state.Xi):
        # cumulative products give all integer powers in one sweep
        p1 = np.concatenate(([1.0 + 0j], np.cumprod(np.full(S, x1))))  # x1^0 .. x1^S
        p2 = np.concatenate(([1.0 + 0j], np.cumprod(np.full(S, x2))))
        b += A_k * weights * p1[::-1] * p2
    return b


def acs_fock_vector(xi, S: int) -> np.ndarray:
    """Fock expansion of a single ACS (unit-norm output for unit-norm xi)."""
    state = MultiConfigState(S, np.array([1.0 + 0j]), np.asarray([xi], dtype=complex))
    return to_fock(state)


def acs_fock_batch(z, phi, S: int) -> np.ndarray:
    """Fock expansions of coherent states at phase-space points, shape (n, S+1)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    j = np.arange(S + 1, dtype=float)
    half = 0.5 * (1.0 + z)[:, None]
    other = 0.5 * (1.0 - z)[:, None]
    mag = sqrt_binomials(S) * half ** (0.5 * (S - j)) * other ** (0.5 * j)
    return mag * np.exp(-1j * np.outer(phi, j))


def multiconfig_fock_batch(A_s: np.ndarray, Xi_s: np.ndarray, S: int, chunk: int = 2048) -> np.ndarray:
    """Fock expansions for a propagation sample batch.

    A_s has shape (n, N), Xi_s has shape (n, N, 2); the powers are built by
    cumulative products chunk by chunk to bound the intermediate memory.
    """
    n, N = A_s.shape
    weights = sqrt_binomials(S)
    out = np.empty((n, S + 1), dtype=complex)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        x1 = Xi_s[lo:hi, :, 0]
        x2 = Xi_s[lo:hi, :, 1]
        ones = np.ones((hi - lo, N, 1), dtype=complex)
        p1 = np.concatenate([ones, np.cumprod(np.repeat(x1[:, :, None], S, axis=2), axis=2)], axis=2)
        p2 = np.concatenate([ones, np.cumprod(np.repeat(x2[:, :, None], S, axis=2), axis=2)], axis=2)
        coeff = p1[:, :, ::-1] * p2  # x1^(S-j) x2^j over j = 0..S
        out[lo:hi] = np.einsum("tk,tkj->tj", A_s[lo:hi], coeff) * weights
    return out


def overlap_matrix(state: MultiConfigState, r: int = 0) -> np.ndarray:
    """N x N matrix of reduced overlaps between the configuration rows."""
    W = state.Xi.conj() @ state.Xi.T
    out = np.ones_like(W)
    n = state.S - r
    if n < 0:
        raise DomainError(f"need r <= S, got r={r}, S={state.S}")
    base = W.copy()
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


def state_norm(state: MultiConfigState) -> float:
    """Norm of the multi-configuration state from pairwise overlaps."""
    q = complex(np.conj(state.A) @ overlap_matrix(state) @ state.A)
    if abs(q.imag) > 1e-12 * max(1.0, abs(q.real)):
        raise ArithmeticError(f"norm^2 should be real, got {q!r}")
    if q.real < -1e-12:
        raise ArithmeticError(f"norm^2 should be nonnegative, got {q.real!r}")
    return math.sqrt(max(q.real, 0.0))


def energy_expectation_mc(state: MultiConfigState, params: SystemParams) -> float:
    """<H>/<Psi|Psi> evaluated from pairwise coherent-state brackets."""
    N = state.multiplicity
    acc = 0.0 + 0.0j
    for k in range(N):
        for j in range(N):
            acc += (
                np.conj(state.A[k])
                * state.A[j]
                * hamiltonian_bracket(state.Xi[k], state.Xi[j], params)
            )
    nrm2 = state_norm(state) ** 2
    return float(acc.real / nrm2)
