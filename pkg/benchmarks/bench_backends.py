#!/usr/bin/env python3
"""Timing comparison between the compiled kernel and the pure-Python backend.

Times the two hot loops -- the variational RK4 stepper (assembly + regularized
solve per stage) and the adaptive classical integrator -- across the system
sizes the scenario drivers actually use.

Run:  python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from bjjsim import _kernel_py as pyk

try:
    from bjjsim import _kernel as ck
except ImportError:
    ck = None


def variational_case(N, S):
    rng = np.random.default_rng(N * 7 + S)
    A = np.full(N, 1e-8, dtype=complex)
    A[0] = 1.0
    zs = rng.uniform(-0.8, 0.8, size=N)
    ph = rng.uniform(0, 2 * np.pi, size=N)
    Xi = np.stack([np.sqrt((1 + zs) / 2), np.sqrt((1 - zs) / 2) * np.exp(-1j * ph)], axis=1)
    return A, Xi


def time_variational(kernel, A, Xi, S, n_steps):
    t0 = time.perf_counter()
    kernel.propagate_mc(A, Xi, S, 1.0, 0.1, 0.005, n_steps, n_steps, 1e-10, 0.0)
    return (time.perf_counter() - t0) / n_steps


def time_meanfield(kernel, n_rep=5):
    t = np.arange(0.0, 1000.0001, 0.05)
    t0 = time.perf_counter()
    for _ in range(n_rep):
        kernel.mf_propagate(0.43, 0.0, 1.0, -0.15 * 19, t, 1e-11, 1e-13)
    return (time.perf_counter() - t0) / n_rep


def main():
    if ck is None:
        print("compiled kernel not built; run 'pip install -e . --no-build-isolation' first")
        return

    print(f"{'case':>22} {'pure-python':>14} {'compiled':>12} {'speedup':>8}")
    for N, S, n_py, n_c in [(2, 20, 400, 4000), (8, 20, 100, 1000), (12, 20, 60, 600),
                            (20, 50, 30, 300), (25, 50, 20, 200)]:
        A, Xi = variational_case(N, S)
        t_py = time_variational(pyk, A, Xi, S, n_py)
        t_c = time_variational(ck, A, Xi, S, n_c)
        print(f"{f'step N={N:2d} S={S}':>22} {t_py * 1e6:>11.1f} us {t_c * 1e6:>9.1f} us {t_py / t_c:>7.1f}x")

    t_py = time_meanfield(pyk, n_rep=2)
    t_c = time_meanfield(ck, n_rep=10)
    print(f"{'classical Jt=1000':>22} {t_py * 1e3:>11.1f} ms {t_c * 1e3:>9.1f} ms {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
