# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled backend for the propagation hot loops.

Same contracts as `_kernel_py`: the variational RK4 stepper with an
SVD-regularized least-squares solve per stage (LAPACK zgelss), and an
adaptive Dormand-Prince 5(4) integrator for the classical flow.
"""

import numpy as np

from libc.math cimport cos, fabs, pow, sin, sqrt

from scipy.linalg.cython_blas cimport zgemv
from scipy.linalg.cython_lapack cimport zheevd

from .core import DegenerateBasisError, PoleError

COMPILED = True

ctypedef double complex zc

cdef double POLE_MARGIN = 1e-12


cdef inline zc zipow(zc w, long n) noexcept:
    cdef zc out = 1.0
    cdef zc base = w
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


cdef void _assemble(zc* A, zc* Xi, long N, long S, double J, double U, double shift,
                    zc* M, zc* rhs) noexcept:
    """Fill the Gram matrix G (Fortran layout, dim = 3N) and the gradient rhs.

    The equations of motion read i G ydot = rhs; the solver applies the
    truncated pseudoinverse of G (Hermitian positive semidefinite) to
    -i rhs.  Xi is row-major with stride 2; the column index of
    Xidot_{j,i} is N + 2j + i.
    """
    cdef long dim = 3 * N
    cdef long k, j, m, i, col, row
    cdef double Sf = <double>S
    cdef zc w, wS, wS1, wS2, wS3, hop, quad, hA, base, term
    cdef zc Ak_c, xk0c, xk1c, xkic, xkmc

    for k in range(dim):
        rhs[k] = 0
        for j in range(dim):
            M[k + j * dim] = 0

    for k in range(N):
        Ak_c = A[k].conjugate()
        xk0c = Xi[2 * k].conjugate()
        xk1c = Xi[2 * k + 1].conjugate()
        for j in range(N):
            w = xk0c * Xi[2 * j] + xk1c * Xi[2 * j + 1]
            if S >= 3:
                wS3 = zipow(w, S - 3)
                wS2 = wS3 * w
            elif S == 2:
                wS3 = 0
                wS2 = 1
            else:
                wS3 = 0
                wS2 = 0
            wS1 = wS2 * w if S >= 2 else 1
            wS = wS1 * w
            hop = xk0c * Xi[2 * j + 1] + xk1c * Xi[2 * j]
            quad = xk0c * xk0c * Xi[2 * j] * Xi[2 * j] + xk1c * xk1c * Xi[2 * j + 1] * Xi[2 * j + 1]

            # coefficient row k
            M[k + j * dim] = wS
            for i in range(2):
                xkic = Xi[2 * k + i].conjugate()
                col = N + 2 * j + i
                M[k + col * dim] = Sf * A[j] * xkic * wS1
            hA = -J * Sf * hop * wS1 + shift * wS
            if S >= 2:
                hA = hA + 0.5 * U * Sf * (Sf - 1.0) * quad * wS2
            rhs[k] = rhs[k] + A[j] * hA

            # parameter rows (k, m)
            for m in range(2):
                row = N + 2 * k + m
                xkmc = Xi[2 * k + m].conjugate()
                M[row + j * dim] = Sf * Ak_c * Xi[2 * j + m] * wS1
                for i in range(2):
                    xkic = Xi[2 * k + i].conjugate()
                    col = N + 2 * j + i
                    term = 0
                    if i == m:
                        term = wS1
                    if S >= 2:
                        term = term + (Sf - 1.0) * xkic * Xi[2 * j + m] * wS2
                    M[row + col * dim] = Sf * Ak_c * A[j] * term
                term = -J * Sf * Xi[2 * j + (1 - m)] * wS1 + shift * Sf * Xi[2 * j + m] * wS1
                if S >= 2:
                    term = term + (
                        -J * Sf * (Sf - 1.0) * hop * Xi[2 * j + m] * wS2
                        + U * Sf * (Sf - 1.0) * xkmc * Xi[2 * j + m] * Xi[2 * j + m] * wS2
                    )
                if S >= 3:
                    term = term + 0.5 * U * Sf * (Sf - 1.0) * (Sf - 2.0) * quad * Xi[2 * j + m] * wS3
                rhs[row] = rhs[row] + Ak_c * A[j] * term


cdef class _Solver:
    """Reusable zheevd workspace: truncated pseudoinverse of the Hermitian
    positive-semidefinite Gram matrix, applied to -i rhs."""

    cdef int dim
    cdef double rcond
    cdef zc[::1] M          # Gram matrix in, eigenvectors out (Fortran layout)
    cdef zc[::1] b          # rhs in, velocity out
    cdef zc[::1] c          # eigenbasis coefficients
    cdef double[::1] ev
    cdef zc[::1] work
    cdef double[::1] rwork
    cdef int[::1] iwork
    cdef int lwork, lrwork, liwork

    def __init__(self, int dim, double rcond):
        self.dim = dim
        self.rcond = rcond
        self.M = np.empty(dim * dim, dtype=complex)
        self.b = np.empty(dim, dtype=complex)
        self.c = np.empty(dim, dtype=complex)
        self.ev = np.empty(dim, dtype=float)
        cdef int n = dim, lda = dim, info = 0
        cdef int lq = -1
        cdef zc wopt
        cdef double rwopt
        cdef int iwopt
        zheevd(b"V", b"L", &n, &self.M[0], &lda, &self.ev[0],
               &wopt, &lq, &rwopt, &lq, &iwopt, &lq, &info)
        self.lwork = <int>wopt.real
        self.lrwork = <int>rwopt
        self.liwork = iwopt
        self.work = np.empty(self.lwork, dtype=complex)
        self.rwork = np.empty(self.lrwork, dtype=float)
        self.iwork = np.empty(self.liwork, dtype=np.intc)

    cdef int solve(self) except -1:
        """ydot = -i G^+ rhs on the buffers in place; the result lands in b."""
        cdef int n = self.dim, lda = self.dim, info = 0, inc = 1
        cdef long i, kept = 0
        cdef double vmax = 0.0
        cdef zc one = 1.0, zero = 0.0, minus_i = -1j
        zheevd(b"V", b"L", &n, &self.M[0], &lda, &self.ev[0],
               &self.work[0], &self.lwork, &self.rwork[0], &self.lrwork,
               &self.iwork[0], &self.liwork, &info)
        if info != 0:
            raise RuntimeError(f"zheevd failed with info={info}")
        for i in range(n):
            if fabs(self.ev[i]) > vmax:
                vmax = fabs(self.ev[i])
        # c = V^H b, truncate, b = -i V c
        zgemv(b"C", &n, &n, &one, &self.M[0], &lda, &self.b[0], &inc, &zero, &self.c[0], &inc)
        for i in range(n):
            if fabs(self.ev[i]) > self.rcond * vmax:
                self.c[i] = minus_i * self.c[i] / self.ev[i]
                kept += 1
            else:
                self.c[i] = 0.0
        if kept == 0:
            raise DegenerateBasisError(
                "all singular values of the variational system fell below the cutoff"
            )
        zgemv(b"N", &n, &n, &one, &self.M[0], &lda, &self.c[0], &inc, &zero, &self.b[0], &inc)
        return 0


cdef int _velocity(_Solver solver, zc* y, long N, long S, double J, double U,
                   double shift, zc* out) except -1:
    _assemble(y, y + N, N, S, J, U, shift, &solver.M[0], &solver.b[0])
    solver.solve()
    cdef long i
    for i in range(3 * N):
        out[i] = solver.b[i]
    return 0


def assemble_eom_arrays(A, Xi, S, J, U, shift=0.0):
    """Dense (M, rhs) matching the pure-Python backend (M in C order)."""
    cdef zc[::1] Av = np.ascontiguousarray(A, dtype=complex)
    cdef zc[:, ::1] Xv = np.ascontiguousarray(Xi, dtype=complex)
    cdef long N = Av.shape[0]
    cdef long dim = 3 * N
    Mf = np.empty((dim, dim), dtype=complex, order="F")
    rhs = np.empty(dim, dtype=complex)
    cdef zc[::1, :] Mv = Mf
    cdef zc[::1] rv = rhs
    _assemble(&Av[0], &Xv[0, 0], N, S, J, U, shift, &Mv[0, 0], &rv[0])
    return 1j * np.ascontiguousarray(Mf), rhs


cdef void _rk4_combine(zc* y, zc* k1, zc* k2, zc* k3, zc* k4, double dt, long n) noexcept:
    cdef long i
    for i in range(n):
        y[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


cdef int _step_inplace(_Solver solver, zc* y, zc* ytmp, zc* k1, zc* k2, zc* k3, zc* k4,
                       long N, long S, double J, double U, double dt, double shift) except -1:
    cdef long dim = 3 * N
    cdef long i, k
    cdef double nr
    _velocity(solver, y, N, S, J, U, shift, k1)
    for i in range(dim):
        ytmp[i] = y[i] + 0.5 * dt * k1[i]
    _velocity(solver, ytmp, N, S, J, U, shift, k2)
    for i in range(dim):
        ytmp[i] = y[i] + 0.5 * dt * k2[i]
    _velocity(solver, ytmp, N, S, J, U, shift, k3)
    for i in range(dim):
        ytmp[i] = y[i] + dt * k3[i]
    _velocity(solver, ytmp, N, S, J, U, shift, k4)
    _rk4_combine(y, k1, k2, k3, k4, dt, dim)
    # renormalize rows, absorbing norm^S into the coefficients
    for k in range(N):
        nr = sqrt(
            y[N + 2 * k].real ** 2 + y[N + 2 * k].imag ** 2
            + y[N + 2 * k + 1].real ** 2 + y[N + 2 * k + 1].imag ** 2
        )
        if not nr > 0:
            raise ArithmeticError("configuration row collapsed to zero")
        y[k] = y[k] * pow(nr, <double>S)
        y[N + 2 * k] = y[N + 2 * k] / nr
        y[N + 2 * k + 1] = y[N + 2 * k + 1] / nr
    for i in range(dim):
        if not (y[i] == y[i]):  # NaN check
            raise ArithmeticError("variational propagation diverged")
    return 0


def rk4_step(A, Xi, S, J, U, dt, svd_cutoff, shift=0.0):
    """One RK4 step plus row renormalization; returns (A', Xi')."""
    yarr = np.concatenate(
        [np.asarray(A, dtype=complex).ravel(), np.asarray(Xi, dtype=complex).reshape(-1)]
    )
    cdef zc[::1] yv = yarr
    cdef long N = len(A)
    cdef long dim = 3 * N
    cdef _Solver solver = _Solver(<int>dim, svd_cutoff)
    work = np.empty((5, dim), dtype=complex)
    cdef zc[:, ::1] wv = work
    _step_inplace(solver, &yv[0], &wv[0, 0], &wv[1, 0], &wv[2, 0], &wv[3, 0], &wv[4, 0],
                  N, S, J, U, dt, shift)
    return yarr[:N].copy(), yarr[N:].reshape(N, 2).copy()


def propagate_mc(A, Xi, S, J, U, dt, n_steps, record_every, svd_cutoff, shift=0.0):
    """Fixed-step RK4 propagation recording every record_every-th step."""
    yarr = np.concatenate(
        [np.asarray(A, dtype=complex).ravel(), np.asarray(Xi, dtype=complex).reshape(-1)]
    )
    cdef zc[::1] yv = yarr
    cdef long N = len(A)
    cdef long dim = 3 * N
    cdef long n_rec = n_steps // record_every + 1
    A_s = np.empty((n_rec, N), dtype=complex)
    Xi_s = np.empty((n_rec, N, 2), dtype=complex)
    cdef zc[:, ::1] Av = A_s
    cdef zc[:, :, ::1] Xv = Xi_s
    cdef _Solver solver = _Solver(<int>dim, svd_cutoff)
    work = np.empty((5, dim), dtype=complex)
    cdef zc[:, ::1] wv = work
    cdef zc* yp = &yv[0]
    cdef long i, k, idx = 1, step_i
    cdef long nst = n_steps, rec = record_every

    for k in range(N):
        Av[0, k] = yp[k]
        Xv[0, k, 0] = yp[N + 2 * k]
        Xv[0, k, 1] = yp[N + 2 * k + 1]
    for step_i in range(1, nst + 1):
        _step_inplace(solver, yp, &wv[0, 0], &wv[1, 0], &wv[2, 0], &wv[3, 0], &wv[4, 0],
                      N, S, J, U, dt, shift)
        if step_i % rec == 0:
            for k in range(N):
                Av[idx, k] = yp[k]
                Xv[idx, k, 0] = yp[N + 2 * k]
                Xv[idx, k, 1] = yp[N + 2 * k + 1]
            idx += 1
    return A_s[:idx], Xi_s[:idx]


# ---------------------------------------------------------------------------
# classical flow: adaptive Dormand-Prince 5(4)
# ---------------------------------------------------------------------------

cdef inline int _mf_rhs(double z, double phi, double J, double ueff,
                        double* dz, double* dphi) noexcept:
    if fabs(z) >= 1.0 - POLE_MARGIN:
        return 1
    cdef double root = sqrt(1.0 - z * z)
    dz[0] = 2.0 * J * root * sin(phi)
    dphi[0] = -2.0 * J * z * cos(phi) / root - ueff * z
    return 0


def mf_propagate(double z0, double phi0, double J, double ueff, t_samples,
                 double rtol, double atol):
    """Classical flow sampled at t_samples; PoleError near |z| = 1."""
    cdef double[::1] ts = np.ascontiguousarray(t_samples, dtype=float)
    cdef long n = ts.shape[0]
    z_out = np.empty(n, dtype=float)
    phi_out = np.empty(n, dtype=float)
    cdef double[::1] zv = z_out
    cdef double[::1] pv = phi_out

    if fabs(z0) >= 1.0 - POLE_MARGIN:
        raise PoleError(f"initial imbalance too close to the pole: z={z0}")

    # Dormand-Prince coefficients
    cdef double a21 = 1.0 / 5.0
    cdef double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0
    cdef double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0
    cdef double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0
    cdef double a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0
    cdef double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0
    cdef double a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0
    cdef double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0
    cdef double b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0
    cdef double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0
    cdef double e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0

    cdef double t = ts[0], z = z0, phi = phi0
    cdef double h = 1e-3, target, tnew, znew, pnew
    cdef double k1z, k1p, k2z, k2p, k3z, k3p, k4z, k4p, k5z, k5p, k6z, k6p, k7z, k7p
    cdef double errz, errp, err, scale_z, scale_p
    cdef long i
    cdef bint fsal_valid = False
    cdef long guard

    zv[0] = z
    pv[0] = phi
    for i in range(1, n):
        target = ts[i]
        guard = 0
        while t < target:
            guard += 1
            if guard > 10_000_000:
                raise RuntimeError("step-size control stalled")
            if h > target - t:
                h = target - t
            if not fsal_valid:
                if _mf_rhs(z, phi, J, ueff, &k1z, &k1p):
                    raise PoleError(f"trajectory reached |z| = 1 - 1e-12 near t = {t:.6g}")
            if (_mf_rhs(z + h * a21 * k1z, phi + h * a21 * k1p, J, ueff, &k2z, &k2p)
                    or _mf_rhs(z + h * (a31 * k1z + a32 * k2z),
                               phi + h * (a31 * k1p + a32 * k2p), J, ueff, &k3z, &k3p)
                    or _mf_rhs(z + h * (a41 * k1z + a42 * k2z + a43 * k3z),
                               phi + h * (a41 * k1p + a42 * k2p + a43 * k3p), J, ueff, &k4z, &k4p)
                    or _mf_rhs(z + h * (a51 * k1z + a52 * k2z + a53 * k3z + a54 * k4z),
                               phi + h * (a51 * k1p + a52 * k2p + a53 * k3p + a54 * k4p),
                               J, ueff, &k5z, &k5p)
                    or _mf_rhs(z + h * (a61 * k1z + a62 * k2z + a63 * k3z + a64 * k4z + a65 * k5z),
                               phi + h * (a61 * k1p + a62 * k2p + a63 * k3p + a64 * k4p + a65 * k5p),
                               J, ueff, &k6z, &k6p)):
                h *= 0.5
                fsal_valid = False
                if h < 1e-14:
                    raise PoleError(f"trajectory reached |z| = 1 - 1e-12 near t = {t:.6g}")
                continue
            znew = z + h * (b1 * k1z + b3 * k3z + b4 * k4z + b5 * k5z + b6 * k6z)
            pnew = phi + h * (b1 * k1p + b3 * k3p + b4 * k4p + b5 * k5p + b6 * k6p)
            if fabs(znew) >= 1.0 - POLE_MARGIN or _mf_rhs(znew, pnew, J, ueff, &k7z, &k7p):
                h *= 0.5
                fsal_valid = False
                if h < 1e-14:
                    raise PoleError(f"trajectory reached |z| = 1 - 1e-12 near t = {t:.6g}")
                continue
            errz = h * (e1 * k1z + e3 * k3z + e4 * k4z + e5 * k5z + e6 * k6z + e7 * k7z)
            errp = h * (e1 * k1p + e3 * k3p + e4 * k4p + e5 * k5p + e6 * k6p + e7 * k7p)
            scale_z = atol + rtol * (fabs(z) if fabs(z) > fabs(znew) else fabs(znew))
            scale_p = atol + rtol * (fabs(phi) if fabs(phi) > fabs(pnew) else fabs(pnew))
            err = sqrt(0.5 * ((errz / scale_z) ** 2 + (errp / scale_p) ** 2))
            if err <= 1.0:
                t += h
                z = znew
                phi = pnew
                k1z = k7z
                k1p = k7p
                fsal_valid = True
                err = err if err > 1e-10 else 1e-10
                h *= min(5.0, max(0.2, 0.9 * pow(err, -0.2)))
            else:
                h *= max(0.2, 0.9 * pow(err, -0.2))
                fsal_valid = False
        zv[i] = z
        pv[i] = phi
        t = target
    return z_out, phi_out
