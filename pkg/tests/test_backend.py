"""Numerical parity between the compiled kernel and its pure-Python twin."""

import numpy as np
import pytest

from bjjsim import _kernel_py as pyk
from bjjsim.core import DegenerateBasisError, PoleError

compiled = pytest.importorskip("bjjsim._kernel")


def random_system(rng, N, S):
    A = rng.normal(size=N) + 1j * rng.normal(size=N)
    A /= np.linalg.norm(A)
    Xi = rng.normal(size=(N, 2)) + 1j * rng.normal(size=(N, 2))
    Xi /= np.linalg.norm(Xi, axis=1, keepdims=True)
    return A, Xi


@pytest.mark.parametrize("N,S,shift", [(1, 5, 0.0), (3, 17, -2.5), (6, 30, 11.0)])
def test_assembly_parity(N, S, shift):
    rng = np.random.default_rng(N * 100 + S)
    A, Xi = random_system(rng, N, S)
    M1, r1 = pyk.assemble_eom_arrays(A, Xi, S, 1.0, 0.23, shift)
    M2, r2 = compiled.assemble_eom_arrays(A, Xi, S, 1.0, 0.23, shift)
    scale = np.max(np.abs(M1))
    assert np.max(np.abs(M1 - M2)) < 1e-12 * scale
    assert np.max(np.abs(r1 - r2)) < 1e-12 * max(1.0, np.max(np.abs(r1)))


def test_step_parity():
    rng = np.random.default_rng(8)
    A, Xi = random_system(rng, 4, 14)
    out_py = pyk.rk4_step(A, Xi, 14, 1.0, -0.4, 0.01, 1e-10, 1.5)
    out_c = compiled.rk4_step(A, Xi, 14, 1.0, -0.4, 0.01, 1e-10, 1.5)
    assert np.max(np.abs(out_py[0] - out_c[0])) < 1e-10
    assert np.max(np.abs(out_py[1] - out_c[1])) < 1e-10


def test_propagate_parity():
    rng = np.random.default_rng(13)
    A, Xi = random_system(rng, 2, 20)
    args = (20, 1.0, 0.1, 0.01, 200, 20, 1e-10, 0.0)
    A1, X1 = pyk.propagate_mc(A, Xi, *args)
    A2, X2 = compiled.propagate_mc(A, Xi, *args)
    assert A1.shape == A2.shape == (11, 2)
    assert np.max(np.abs(A1 - A2)) < 1e-8
    assert np.max(np.abs(X1 - X2)) < 1e-8


def test_mf_parity_and_pole():
    t = np.arange(0.0, 30.0, 0.01)
    z1, p1 = pyk.mf_propagate(0.3, 0.1, 1.0, 1.9, t, 1e-12, 1e-14)
    z2, p2 = compiled.mf_propagate(0.3, 0.1, 1.0, 1.9, t, 1e-12, 1e-14)
    assert np.max(np.abs(z1 - z2)) < 1e-9
    assert np.max(np.abs(p1 - p2)) < 1e-9
    for kernel in (pyk, compiled):
        with pytest.raises(PoleError):
            kernel.mf_propagate(1.0 - 1e-13, 0.0, 1.0, 0.0, t, 1e-10, 1e-12)


def test_degenerate_system_raises():
    # a state of weight zero leaves no resolvable direction at all
    A = np.zeros(2, dtype=complex)
    Xi = np.array([[1.0, 0.0], [1.0, 0.0]], dtype=complex)
    M = np.zeros((6, 6), dtype=complex)
    rhs = np.zeros(6, dtype=complex)
    with pytest.raises(DegenerateBasisError):
        pyk._solve(M, rhs, 1e-10)
