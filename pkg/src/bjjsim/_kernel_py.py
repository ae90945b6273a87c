"""Pure-Python backend for the propagation hot loops.

Mirrors the compiled extension in `_kernel.pyx`: the same equations, the
same sample layout, numpy/scipy instead of C loops.  Selected automatically
when the extension is unavailable, or explicitly via BJJSIM_PURE_PYTHON=1.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .core import DegenerateBasisError, PoleError

COMPILED = False

_POLE_MARGIN = 1e-12


def _mat_ipow(W: np.ndarray, n: int) -> np.ndarray:
    """Elementwise integer power by repeated squaring."""
    out = np.ones_like(W)
    base = W.copy()
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


def assemble_eom_arrays(A, Xi, S, J, U, shift=0.0):
    """Linear system M ydot = rhs for the stacked velocities (Adot, Xidot).

    Rows follow the variational equations: N coefficient rows, then the 2N
    amplitude-parameter rows.  M equals i times the Gram matrix of tangent
    vectors; rhs holds the Hamiltonian gradients, with `shift` subtracting a
    constant reference energy (a pure gauge that slows the coefficient
    phases and nothing else).
    """
    A = np.asarray(A, dtype=complex)
    Xi = np.asarray(Xi, dtype=complex)
    N = A.shape[0]
    dim = 3 * N
    Sf = float(S)

    W = Xi.conj() @ Xi.T
    wS1 = _mat_ipow(W, S - 1)
    wS = wS1 * W
    wS2 = _mat_ipow(W, S - 2) if S >= 2 else np.zeros_like(W)
    wS3 = _mat_ipow(W, S - 3) if S >= 3 else np.zeros_like(W)

    x1c, x2c = Xi[:, 0].conj(), Xi[:, 1].conj()
    hop = x1c[:, None] * Xi[None, :, 1] + x2c[:, None] * Xi[None, :, 0]
    quad = (x1c**2)[:, None] * (Xi[:, 0] ** 2)[None, :] + (x2c**2)[:, None] * (Xi[:, 1] ** 2)[None, :]

    G = np.zeros((dim, dim), dtype=complex)
    G[:N, :N] = wS
    # coefficient rows against parameter velocities: S A_j conj(xi_ki) w^(S-1)
    G_Axi = Sf * A[None, :, None] * Xi.conj()[:, None, :] * wS1[:, :, None]
    G[:N, N:] = G_Axi.reshape(N, 2 * N)
    # parameter rows against coefficient velocities: S conj(A_k) xi_jm w^(S-1)
    G_xiA = Sf * A.conj()[:, None, None] * Xi[None, :, :] * wS1[:, :, None]
    G[N:, :N] = G_xiA.transpose(0, 2, 1).reshape(2 * N, N)
    # parameter-parameter block: row (k, m), column (j, i)
    delta = np.eye(2)
    G_xixi = Sf * A.conj()[:, None, None, None] * A[None, None, :, None] * (
        delta[None, :, None, :] * wS1[:, None, :, None]
        + (Sf - 1.0) * Xi.conj()[:, None, None, :] * Xi.T[None, :, :, None] * wS2[:, None, :, None]
    )
    G[N:, N:] = G_xixi.reshape(2 * N, 2 * N)

    rhs = np.zeros(dim, dtype=complex)
    ham_A = -J * Sf * hop * wS1 + shift * wS
    if S >= 2:
        ham_A = ham_A + 0.5 * U * Sf * (Sf - 1.0) * quad * wS2
    rhs[:N] = ham_A @ A

    xi_swap = Xi[:, ::-1]  # the other site's amplitude for each row
    for m in range(2):
        term = -J * Sf * xi_swap[None, :, m] * wS1 + shift * Sf * Xi[None, :, m] * wS1
        if S >= 2:
            term = term + (
                -J * Sf * (Sf - 1.0) * hop * Xi[None, :, m] * wS2
                + U * Sf * (Sf - 1.0) * Xi[:, m].conj()[:, None] * (Xi[:, m] ** 2)[None, :] * wS2
            )
        if S >= 3:
            term = term + 0.5 * U * Sf * (Sf - 1.0) * (Sf - 2.0) * quad * Xi[None, :, m] * wS3
        rhs[N + m :: 2] = A.conj() * (term @ A)

    return 1j * G, rhs


def _solve(M, rhs, svd_cutoff):
    sol, _, rank, _ = np.linalg.lstsq(M, rhs, rcond=svd_cutoff)
    if rank == 0:
        raise DegenerateBasisError("all singular values of the variational system fell below the cutoff")
    return sol


def _flatten(A, Xi):
    return np.concatenate([A, Xi.reshape(-1)])


def _unflatten(y, N):
    return y[:N], y[N:].reshape(N, 2)


def _velocity(y, N, S, J, U, svd_cutoff, shift):
    A, Xi = _unflatten(y, N)
    M, rhs = assemble_eom_arrays(A, Xi, S, J, U, shift)
    return _solve(M, rhs, svd_cutoff)


def _renormalize(A, Xi, S):
    nrm = np.sqrt(np.sum(np.abs(Xi) ** 2, axis=1))
    A = A * nrm**S
    Xi = Xi / nrm[:, None]
    return A, Xi


def rk4_step(A, Xi, S, J, U, dt, svd_cutoff, shift=0.0):
    """One classical RK4 step plus the gauge-neutral row renormalization."""
    N = A.shape[0]
    y = _flatten(np.asarray(A, dtype=complex), np.asarray(Xi, dtype=complex))
    k1 = _velocity(y, N, S, J, U, svd_cutoff, shift)
    k2 = _velocity(y + 0.5 * dt * k1, N, S, J, U, svd_cutoff, shift)
    k3 = _velocity(y + 0.5 * dt * k2, N, S, J, U, svd_cutoff, shift)
    k4 = _velocity(y + dt * k3, N, S, J, U, svd_cutoff, shift)
    ynew = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    A_new, Xi_new = _unflatten(ynew, N)
    return _renormalize(A_new, Xi_new, S)


def propagate_mc(A, Xi, S, J, U, dt, n_steps, record_every, svd_cutoff, shift=0.0):
    """Fixed-step RK4 propagation recording every `record_every`-th step.

    Returns (A_samples, Xi_samples) with the initial state in row 0 and
    n_steps // record_every further rows.
    """
    A = np.asarray(A, dtype=complex).copy()
    Xi = np.asarray(Xi, dtype=complex).copy()
    n_rec = n_steps // record_every + 1
    A_s = np.empty((n_rec, A.shape[0]), dtype=complex)
    Xi_s = np.empty((n_rec, A.shape[0], 2), dtype=complex)
    A_s[0], Xi_s[0] = A, Xi
    idx = 1
    for step_i in range(1, n_steps + 1):
        A, Xi = rk4_step(A, Xi, S, J, U, dt, svd_cutoff, shift)
        if not np.all(np.isfinite(A.view(float))) or not np.all(np.isfinite(Xi.view(float))):
            raise ArithmeticError(f"variational propagation diverged at step {step_i}")
        if step_i % record_every == 0:
            A_s[idx], Xi_s[idx] = A, Xi
            idx += 1
    return A_s[:idx], Xi_s[:idx]


def mf_propagate(z0, phi0, J, ueff, t_samples, rtol, atol):
    """Mean-field flow sampled at t_samples (adaptive Dormand-Prince 5(4)).

    ueff = U (S - 1).  Raises PoleError if the trajectory reaches
    |z| >= 1 - 1e-12, where the phase equation blows up.
    """
    if abs(z0) >= 1.0 - _POLE_MARGIN:
        raise PoleError(f"initial imbalance too close to the pole: z={z0}")

    def rhs(_t, y):
        z, phi = y
        root = np.sqrt(1.0 - z * z)
        return [2.0 * J * root * np.sin(phi), -2.0 * J * z * np.cos(phi) / root - ueff * z]

    def pole(_t, y):
        return 1.0 - _POLE_MARGIN - abs(y[0])

    pole.terminal = True
    t_samples = np.asarray(t_samples, dtype=float)
    sol = solve_ivp(
        rhs,
        (t_samples[0], t_samples[-1]),
        [z0, phi0],
        method="RK45",
        t_eval=t_samples,
        rtol=rtol,
        atol=atol,
        events=pole,
        dense_output=False,
    )
    if sol.status == 1:
        raise PoleError(f"trajectory reached |z| = 1 - 1e-12 at t = {sol.t_events[0][0]:.6g}")
    if not sol.success:
        raise RuntimeError(f"mean-field integration failed: {sol.message}")
    return sol.y[0], sol.y[1]
