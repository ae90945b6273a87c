"""Classical (single coherent state) junction dynamics.

The flow is the non-rigid pendulum

    dz/dt   =  2 J sqrt(1 - z^2) sin(phi)
    dphi/dt = -2 J z cos(phi)/sqrt(1 - z^2) - U (S - 1) z

with conserved energy E = (U S / 4)(S - 1) z^2 - J S sqrt(1 - z^2) cos(phi).
Fixed points, their linear stability, the self-trapping threshold, and the
small-amplitude solutions are all closed-form; the integrator is audited
against energy conservation rather than trusted blindly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .core import DomainError, PhaseSpacePoint, PoleError, SystemParams, lambda_strength
from .gcs import acs_fock_batch
from .observables import TrajectoryRecord, record_from_fock_batch

_POLE_MARGIN = 1e-12


def mf_rhs(point: PhaseSpacePoint, params: SystemParams) -> tuple[float, float]:
    """Right-hand side (dz/dt, dphi/dt) of the pendulum flow."""
    z, phi = point.z, point.phi
    if abs(z) >= 1.0 - _POLE_MARGIN:
        raise PoleError(f"phase velocity singular at |z| -> 1 (z = {z})")
    J, U, S = params.J, params.U, params.S
    root = math.sqrt(1.0 - z * z)
    dz = 2.0 * J * root * math.sin(phi)
    dphi = -2.0 * J * z * math.cos(phi) / root - U * (S - 1) * z
    return dz, dphi


def mf_energy(point: PhaseSpacePoint, params: SystemParams) -> float:
    """Conserved mean-field energy (U S / 4)(S-1) z^2 - J S sqrt(1-z^2) cos(phi)."""
    z, phi = point.z, point.phi
    J, U, S = params.J, params.U, params.S
    return 0.25 * U * S * (S - 1) * z * z - J * S * math.sqrt(1.0 - z * z) * math.cos(phi)


@dataclass(frozen=True)
class StabilityReport:
    """Linearization at a fixed point: Jacobian, its eigenvalues, center/saddle verdict."""

    fixed_point: PhaseSpacePoint
    jacobian: np.ndarray
    eigenvalues: tuple[complex, complex]
    classification: str


@dataclass(frozen=True)
class SsbFixedPoints:
    """The pair of broken-symmetry equilibria (+-z, 0) and their shared linearization."""

    points: tuple[PhaseSpacePoint, PhaseSpacePoint]
    report: StabilityReport


def stability_at_origin(params: SystemParams) -> StabilityReport:
    """Linear stability of the symmetric equilibrium (z, phi) = (0, 0).

    Center for strength parameter > -1 (purely imaginary eigenvalue pair),
    saddle otherwise.
    """
    J, U, S = params.J, params.U, params.S
    jac = np.array([[0.0, 2.0 * J], [-2.0 * J - (S - 1) * U, 0.0]])
    lam = lambda_strength(params)
    mu = complex(-4.0 * J * J * (1.0 + lam)) ** 0.5  # lambda^2 = -4 J^2 (1 + Lambda)
    eigenvalues = (mu, -mu)
    classification = "center" if lam > -1.0 else "saddle"
    return StabilityReport(PhaseSpacePoint(0.0, 0.0), jac, eigenvalues, classification)


def ssb_fixed_points(params: SystemParams) -> SsbFixedPoints | None:
    """Broken-symmetry equilibria z = +-sqrt(1 - 1/Lambda^2), present for Lambda < -1."""
    lam = lambda_strength(params)
    if lam >= -1.0:
        return None
    J = params.J
    z_ssb = math.sqrt(1.0 - 1.0 / (lam * lam))
    points = (PhaseSpacePoint(z_ssb, 0.0), PhaseSpacePoint(-z_ssb, 0.0))
    abs_lam = math.sqrt(lam * lam)
    jac = np.array([[0.0, 2.0 * J / abs_lam], [-2.0 * J * lam * (1.0 + lam * abs_lam), 0.0]])
    mu = 2.0 * J * complex(-(lam**4) - lam * abs_lam) ** 0.5 / abs_lam
    report = StabilityReport(points[0], jac, (mu, -mu), "center")
    return SsbFixedPoints(points, report)


def mqst_threshold(point0: PhaseSpacePoint) -> float:
    """Self-trapping onset: strength parameter above which the orbit through
    (z0, phi0) can no longer reach z = 0."""
    z0, phi0 = point0.z, point0.phi
    if z0 == 0.0:
        raise ZeroDivisionError("self-trapping threshold is undefined for z0 = 0")
    return (1.0 + math.sqrt(1.0 - z0 * z0) * math.cos(phi0)) / (0.5 * z0 * z0)


def linearized_solution(z0: float, params: SystemParams, t: float) -> PhaseSpacePoint:
    """Small-amplitude solution about the origin for initial (z0, 0).

    Oscillatory with plasma frequency 2J sqrt(1 + Lambda) above the
    symmetry-breaking threshold, hyperbolic below it, frozen exactly at it.
    """
    J = params.J
    lam = lambda_strength(params)
    if lam > -1.0:
        omega = 2.0 * J * math.sqrt(1.0 + lam)
        return PhaseSpacePoint(z0 * math.cos(omega * t), -z0 * math.sqrt(1.0 + lam) * math.sin(omega * t))
    if lam < -1.0:
        kappa = 2.0 * J * math.sqrt(-(1.0 + lam))
        g = math.sqrt(-(1.0 + lam))
        return PhaseSpacePoint(z0 * math.cosh(kappa * t), z0 * g * math.sinh(kappa * t))
    return PhaseSpacePoint(z0, 0.0)


def plasma_frequency(params: SystemParams) -> float:
    lam = lambda_strength(params)
    if lam <= -1.0:
        raise DomainError(f"no oscillatory small-amplitude regime at strength parameter {lam}")
    return 2.0 * params.J * math.sqrt(1.0 + lam)


def mf_trajectory_arrays(
    point0: PhaseSpacePoint,
    params: SystemParams,
    t_final: float,
    rel_tol: float = 1e-10,
    sample_dt: float = 0.01,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(t, z, phi) on a uniform sample grid, with the energy-drift audit.

    The ODE solver runs well below rel_tol internally; the contract is that
    the sampled energy stays within 10 * rel_tol * (|E0| + 1) of its initial
    value, and the integration is retried tighter if the audit fails.
    """
    if not t_final > 0 or not sample_dt > 0:
        raise DomainError("t_final and sample_dt must be positive")
    if not 0 < rel_tol < 1:
        raise DomainError("rel_tol must lie in (0, 1)")
    n = int(round(t_final / sample_dt))
    t = sample_dt * np.arange(n + 1)
    e0 = mf_energy(point0, params)
    bound = 10.0 * rel_tol * (abs(e0) + 1.0)
    ueff = params.U * (params.S - 1)

    rtol = max(rel_tol * 1e-2, 1e-13)
    for _ in range(3):
        z, phi = backend.mf_propagate(point0.z, point0.phi, params.J, ueff, t, rtol, rtol * 1e-2)
        energies = 0.25 * params.U * params.S * (params.S - 1) * z**2 - params.J * params.S * np.sqrt(
            1.0 - z**2
        ) * np.cos(phi)
        drift = float(np.max(np.abs(energies - e0)))
        if drift < bound:
            return t, z, phi
        if rtol <= 1e-13:
            break
        rtol = max(rtol * 1e-2, 1e-13)
    raise ArithmeticError(
        f"energy drift {drift:.3e} exceeds the audit bound {bound:.3e} at the tightest tolerance"
    )


def mf_integrate(
    point0: PhaseSpacePoint,
    params: SystemParams,
    t_final: float,
    rel_tol: float = 1e-10,
    sample_dt: float = 0.01,
) -> TrajectoryRecord:
    """Integrate the pendulum flow and measure every sample through the shared
    Fock-space observable path (so the phase-operator columns of all engines
    are directly comparable)."""
    t, z, phi = mf_trajectory_arrays(point0, params, t_final, rel_tol, sample_dt)
    B = acs_fock_batch(z, phi, params.S)
    return record_from_fock_batch(t, B, params, phi=phi)
