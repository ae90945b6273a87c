"""Expectation values on Fock coefficient vectors.

Every engine converts its state to the Fock basis before measuring, so
there is exactly one evaluation path (and one test surface) for the
population imbalance, the phase-operator moments, the energy, and the
Husimi distribution.  Batched variants operate on arrays of shape
(n_times, S+1) since trajectories are measured at every sample time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import SystemParams
from .fockexact import tridiagonal_bands
from .gcs import sqrt_binomials


@dataclass(frozen=True)
class ObservableSample:
    """One measured trajectory sample."""

    t: float
    z: float
    sin_phi: float
    cos_phi: float
    var_sin: float
    energy: float
    norm: float


@dataclass
class TrajectoryRecord:
    """Time series of measured samples, one array per observable.

    phi carries the engine's own phase variable when it has one (mean
    field, or a single-configuration variational run); quantum engines
    leave it None and expose phase information only through the
    operator moments.
    """

    t: np.ndarray
    z: np.ndarray
    sin_phi: np.ndarray
    cos_phi: np.ndarray
    var_sin: np.ndarray
    energy: np.ndarray
    norm: np.ndarray
    phi: np.ndarray | None = field(default=None)

    def __len__(self) -> int:
        return self.t.shape[0]

    def sample(self, i: int) -> ObservableSample:
        return ObservableSample(
            t=float(self.t[i]),
            z=float(self.z[i]),
            sin_phi=float(self.sin_phi[i]),
            cos_phi=float(self.cos_phi[i]),
            var_sin=float(self.var_sin[i]),
            energy=float(self.energy[i]),
            norm=float(self.norm[i]),
        )


def imbalance(b: np.ndarray) -> float:
    """Mean population imbalance <n1 - n2>/S = sum_j |b_j|^2 (S - 2j)/S."""
    b = np.asarray(b)
    S = b.shape[-1] - 1
    j = np.arange(S + 1)
    return float(np.sum(np.abs(b) ** 2 * (S - 2 * j)) / S)


def phase_moments(b: np.ndarray) -> tuple[float, float, float]:
    """(<sin phi>, <cos phi>, variance of sin phi) via the phase-operator construction.

    The numerators are the one- and two-step hopping coherences; the shared
    denominator is sqrt(2 <2 n1 n2 + n1 + n2>), which is strictly positive
    for S >= 1.
    """
    table = observable_table(np.asarray(b, dtype=complex)[None, :], params=None)
    return float(table["sin_phi"][0]), float(table["cos_phi"][0]), float(table["var_sin"][0])


def energy_expectation(b: np.ndarray, params: SystemParams) -> float:
    """<H> for a normalized Fock vector, via the tridiagonal bands."""
    b = np.asarray(b, dtype=complex)
    diag, off = tridiagonal_bands(params)
    val = np.sum(diag * np.abs(b) ** 2) + 2.0 * np.real(np.sum(off * np.conj(b[:-1]) * b[1:]))
    return float(val)


def observable_table(B: np.ndarray, params: SystemParams | None) -> dict[str, np.ndarray]:
    """All scalar observables for a batch of Fock vectors, shape (n, S+1).

    Energies are filled only when params is given.  Un-normalized inputs are
    measured as-is for z and the phase moments (the ratios are homogeneous),
    and the norm column reports the actual state norm.
    """
    B = np.asarray(B, dtype=complex)
    S = B.shape[-1] - 1
    j = np.arange(S + 1, dtype=float)
    prob = np.abs(B) ** 2
    nrm2 = prob.sum(axis=1)
    z = prob @ (S - 2 * j) / (S * nrm2)

    # <a1^dag a2>: couples j to j-1 with weight sqrt(j (S-j+1))
    w1 = np.sqrt(j[1:] * (S - j[1:] + 1))
    x = np.sum(np.conj(B[:, :-1]) * B[:, 1:] * w1, axis=1)
    # <(a2^dag a1)^2>: couples j to j+2
    jj = j[: S - 1] if S >= 2 else j[:0]
    w2 = np.sqrt((S - jj) * (jj + 1) * (S - jj - 1) * (jj + 2))
    y = (
        np.sum(np.conj(B[:, 2:]) * B[:, : S - 1] * w2, axis=1)
        if S >= 2
        else np.zeros(B.shape[0], dtype=complex)
    )

    n1n2 = prob @ ((S - j) * j)
    denom = 2.0 * n1n2 + S * nrm2  # <2 n1 n2 + n1 + n2>
    sin_phi = -2.0 * np.imag(x) / np.sqrt(2.0 * denom * nrm2)
    cos_phi = 2.0 * np.real(x) / np.sqrt(2.0 * denom * nrm2)
    sin2 = 0.5 - np.real(y) / denom
    var_sin = sin2 - sin_phi**2

    out = {
        "z": z,
        "sin_phi": sin_phi,
        "cos_phi": cos_phi,
        "var_sin": var_sin,
        "norm": np.sqrt(nrm2),
    }
    if params is not None:
        diag, off = tridiagonal_bands(params)
        energy = prob @ diag + 2.0 * np.real(np.sum(off * np.conj(B[:, :-1]) * B[:, 1:], axis=1))
        out["energy"] = energy / nrm2
    return out


def record_from_fock_batch(
    t: np.ndarray, B: np.ndarray, params: SystemParams, phi: np.ndarray | None = None
) -> TrajectoryRecord:
    """Assemble a TrajectoryRecord by measuring a batch of Fock vectors."""
    table = observable_table(B, params)
    return TrajectoryRecord(
        t=np.asarray(t, dtype=float),
        z=table["z"],
        sin_phi=table["sin_phi"],
        cos_phi=table["cos_phi"],
        var_sin=table["var_sin"],
        energy=table["energy"],
        norm=table["norm"],
        phi=phi,
    )


@dataclass(frozen=True)
class HusimiGrid:
    """Husimi distribution sampled on a rectangular (z, phi) grid.

    z_axis spans [-1, 1] inclusive; phi_axis covers (-pi, pi] with periodic
    spacing (the -pi endpoint is excluded so the cells tile the circle once).
    """

    S: int
    z_axis: np.ndarray
    phi_axis: np.ndarray
    Q: np.ndarray

    def normalization(self) -> float:
        """(S+1)/(4 pi) times the grid quadrature of Q; 1 for a normalized state.

        Trapezoid weights in z (the integrand is smooth up to the poles),
        plain periodic rectangle weights in phi.
        """
        dphi = 2.0 * math.pi / self.phi_axis.shape[0]
        col = np.trapezoid(self.Q, self.z_axis, axis=0)
        return float((self.S + 1) / (4.0 * math.pi) * np.sum(col) * dphi)


def husimi_axes(nz: int = 201, nphi: int = 201) -> tuple[np.ndarray, np.ndarray]:
    """Uniform axes: z over [-1, 1] inclusive, phi periodic within (-pi, pi].

    The phase grid is anchored at phi = 0 (always a grid point, so a
    coherent state prepared at phi = 0 scores a clean unit self-overlap)
    and steps by 2 pi / nphi around the circle.
    """
    z_axis = np.linspace(-1.0, 1.0, nz)
    dphi = 2.0 * math.pi / nphi
    phi_axis = dphi * (np.arange(nphi) - (nphi - 1) // 2)
    return z_axis, phi_axis


def husimi(b: np.ndarray, nz: int = 201, nphi: int = 201) -> HusimiGrid:
    """Q(z, phi) = |<ACS(z, phi) | Psi>|^2 over the default phase-space grid.

    The coherent-state bra separates into a z-profile times e^{+i j phi},
    so the grid evaluation is one matrix product.
    """
    b = np.asarray(b, dtype=complex)
    S = b.shape[0] - 1
    z_axis, phi_axis = husimi_axes(nz, nphi)
    j = np.arange(S + 1, dtype=float)
    half = 0.5 * (1.0 + z_axis[:, None])
    other = 0.5 * (1.0 - z_axis[:, None])
    profile = sqrt_binomials(S) * half ** (0.5 * (S - j)) * other ** (0.5 * j)
    phases = np.exp(1j * np.outer(j, phi_axis))
    amp = (profile * b) @ phases
    return HusimiGrid(S=S, z_axis=z_axis, phi_axis=phi_axis, Q=np.abs(amp) ** 2)
