"""Domain types and the SU(2) coherent-state <-> phase-space parameterization.

The two-site Bose-Hubbard junction is described either by classical
phase-space coordinates (z, phi) -- population imbalance and relative
phase -- or by the two complex amplitudes (xi1, xi2) of an SU(2) atomic
coherent state (ACS).  Everything downstream (mean-field flow, the
multi-configuration variational engine, the exact Fock reference) shares
the conversions defined here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Input outside the physically admissible domain."""


class PoleError(RuntimeError):
    """A mean-field trajectory reached |z| = 1, where the phase equation is singular."""


class DegenerateBasisError(RuntimeError):
    """Every singular value of the variational linear system fell below the cutoff."""


@dataclass(frozen=True)
class SystemParams:
    """Hamiltonian constants: tunneling J > 0, on-site interaction U, particle number S >= 1."""

    J: float
    U: float
    S: int

    def __post_init__(self):
        if not self.J > 0:
            raise DomainError(f"tunneling amplitude must be positive, got J={self.J}")
        if int(self.S) != self.S or self.S < 1:
            raise DomainError(f"particle number must be an integer >= 1, got S={self.S}")
        object.__setattr__(self, "S", int(self.S))
        if not math.isfinite(self.U) or not math.isfinite(self.J):
            raise DomainError("J and U must be finite")


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Mean-field state: population imbalance z in [-1, 1] and relative phase phi (radians).

    phi is kept unwrapped; wrap only for display or Husimi grids.
    """

    z: float
    phi: float

    def __post_init__(self):
        if abs(self.z) > 1.0:
            raise DomainError(f"population imbalance must satisfy |z| <= 1, got z={self.z}")


@dataclass(frozen=True)
class AcsParams:
    """Complex amplitudes (xi1, xi2) of one SU(2) coherent state, |xi1|^2 + |xi2|^2 = 1."""

    xi1: complex
    xi2: complex

    def __post_init__(self):
        nrm = abs(self.xi1) ** 2 + abs(self.xi2) ** 2
        if abs(nrm - 1.0) > 1e-12:
            raise DomainError(f"ACS amplitudes must be normalized, |xi|^2 = {nrm!r}")


def lambda_strength(params: SystemParams) -> float:
    """Strength parameter U(S-1)/(2J) organizing the Rabi/Josephson/Fock regimes."""
    return params.U * (params.S - 1) / (2.0 * params.J)


def acs_from_phase_space(point: PhaseSpacePoint) -> AcsParams:
    """ACS amplitudes for a phase-space point:

    xi1 = sqrt((1+z)/2),  xi2 = sqrt((1-z)/2) * exp(-i phi).
    """
    z = point.z
    xi1 = math.sqrt((1.0 + z) / 2.0)
    xi2 = math.sqrt((1.0 - z) / 2.0) * cmath.exp(-1j * point.phi)
    return AcsParams(complex(xi1), xi2)


def phase_space_from_acs(acs: AcsParams) -> PhaseSpacePoint:
    """Inverse map: z = |xi1|^2 - |xi2|^2, phi = arg(xi1) - arg(xi2).

    At the poles z = +-1 the phase is pure gauge; phi = 0 is returned by
    convention so the value never propagates NaNs downstream.
    """
    z = abs(acs.xi1) ** 2 - abs(acs.xi2) ** 2
    z = max(-1.0, min(1.0, z))
    if abs(acs.xi1) == 0.0 or abs(acs.xi2) == 0.0:
        return PhaseSpacePoint(z, 0.0)
    phi = cmath.phase(acs.xi1) - cmath.phase(acs.xi2)
    # fold into (-pi, pi] so the round trip is the identity on that strip
    phi = math.remainder(phi, 2.0 * math.pi)
    if phi <= -math.pi:
        phi += 2.0 * math.pi
    return PhaseSpacePoint(z, phi)


def wrap_phase(phi: float) -> float:
    """Fold an unwrapped phase into (-pi, pi]."""
    w = math.remainder(phi, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w
