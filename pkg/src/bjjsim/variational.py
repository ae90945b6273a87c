"""Multi-configuration variational propagation.

The trial state is a superposition of N coherent-state configurations with
time-dependent coefficients and amplitudes.  Stationarity of the action
turns the Schrodinger equation into an implicit linear system for the
parameter velocities, M ydot = rhs, whose matrix is i times a Gram matrix
of tangent vectors.  The system is rank-deficient by construction (one
gauge direction per configuration), so every stage is solved by
singular-value-regularized least squares; the cutoff discards the gauge
null space and nothing else in well-conditioned bases.

Propagation uses fixed-step classical RK4.  To keep the coefficient phases
slow, the Hamiltonian is shifted by the initial energy expectation before
each run; the shift is a pure gauge (a global phase on the state) and every
reported observable is evaluated with the unshifted Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .core import (
    AcsParams,
    DomainError,
    PhaseSpacePoint,
    SystemParams,
    acs_from_phase_space,
    phase_space_from_acs,
)
from .gcs import MultiConfigState, energy_expectation_mc, multiconfig_fock_batch, state_norm

PRESET_PLASMA_N2 = "preset-plasma-n2"
PRESET_MIRROR = "preset-mirror"
RANDOM_SAMPLER = "random"

# rejection thresholds for the row-overlap modulus in the random sampler,
# tried strictest first so small bases come out well separated while large
# ones still fit on the sphere
SAMPLER_OVERLAP_LADDER = (0.8, 0.9, 0.95, 0.99)


@dataclass(frozen=True)
class VariationalConfig:
    """Run settings for one propagation.

    epsilon_seed is the amplitude handed to initially unoccupied
    configurations: exact zeros would zero out their parameter rows and make
    the linear system structurally singular.
    """

    multiplicity: int
    step: float = 0.01
    epsilon_seed: float = 1e-8
    svd_cutoff: float = 1e-10
    sampler: str = PRESET_PLASMA_N2
    seed: int | None = None

    def __post_init__(self):
        if self.multiplicity < 1:
            raise DomainError("multiplicity must be >= 1")
        if not 0 < self.epsilon_seed <= 1e-6:
            raise DomainError("epsilon_seed must lie in (0, 1e-6]")
        if not 0 < self.svd_cutoff <= 1e-6:
            raise DomainError("svd_cutoff must lie in (0, 1e-6]")
        if not self.step > 0:
            raise DomainError("step must be positive")
        if self.sampler not in (PRESET_PLASMA_N2, PRESET_MIRROR, RANDOM_SAMPLER):
            raise DomainError(f"unknown sampler {self.sampler!r}")


def init_basis(initial: AcsParams, cfg: VariationalConfig, S: int) -> MultiConfigState:
    """Initial multi-configuration state: the physical coherent state plus
    epsilon-seeded companions.

    Samplers for the companions:

    - preset-plasma-n2 places a single companion at (z, phi) = (0, 2 pi/3),
      suited to small-oscillation beating studies.
    - preset-mirror places the companion at the parity image (-z, -phi) of
      the initial state.  The mirror configuration is energy-degenerate
      with the initial one, which opens the resonant inter-well transfer
      channel that attractive-interaction confinement studies probe.
    - random draws companions uniformly over z in (-0.9, 0.9) and phi in
      [0, 2 pi), rejecting rows whose single-particle overlap modulus with
      any accepted row exceeds the tightest workable rung of the separation
      ladder.  Near-parallel rows are the enemy: a companion seeded close
      to the occupied configuration is captured by it within a few steps
      and the resulting degenerate pair (with large canceling coefficients)
      wrecks the conditioning of the whole run.
    """
    N = cfg.multiplicity
    Xi = np.zeros((N, 2), dtype=complex)
    Xi[0] = (initial.xi1, initial.xi2)
    A = np.full(N, cfg.epsilon_seed, dtype=complex)
    A[0] = 1.0

    if N > 1:
        if cfg.sampler in (PRESET_PLASMA_N2, PRESET_MIRROR):
            if N != 2:
                raise DomainError("a preset sampler defines exactly one companion (multiplicity 2)")
            if cfg.sampler == PRESET_PLASMA_N2:
                companion = acs_from_phase_space(PhaseSpacePoint(0.0, 2.0 * math.pi / 3.0))
            else:
                start = phase_space_from_acs(initial)
                if abs(start.z) < 1e-9:
                    raise DomainError("the mirror preset needs a nonzero initial imbalance")
                companion = acs_from_phase_space(PhaseSpacePoint(-start.z, -start.phi))
            Xi[1] = (companion.xi1, companion.xi2)
        else:
            rng = np.random.default_rng(cfg.seed)
            for threshold in SAMPLER_OVERLAP_LADDER:
                placed = 1
                attempts = 0
                while placed < N and attempts < 1000:
                    z = rng.uniform(-0.9, 0.9)
                    phi = rng.uniform(0.0, 2.0 * math.pi)
                    cand = acs_from_phase_space(PhaseSpacePoint(z, phi))
                    row = np.array([cand.xi1, cand.xi2])
                    attempts += 1
                    if np.max(np.abs(Xi[:placed].conj() @ row)) > threshold:
                        continue
                    Xi[placed] = row
                    placed += 1
                if placed == N:
                    break
            else:
                raise RuntimeError(
                    f"companion sampling failed: 1000 rejected draws at every separation rung"
                )

    state = MultiConfigState(S, A, Xi)
    return MultiConfigState(S, A / state_norm(state), Xi)


def assemble_eom(
    state: MultiConfigState, params: SystemParams, energy_shift: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """The linear system M ydot = rhs for the stacked velocities
    (Adot_1..Adot_N, Xidot_11, Xidot_12, ..., Xidot_N2)."""
    return backend.assemble_eom_arrays(
        state.A, state.Xi, state.S, params.J, params.U, energy_shift
    )


def step(
    state: MultiConfigState,
    params: SystemParams,
    cfg: VariationalConfig,
    energy_shift: float = 0.0,
) -> MultiConfigState:
    """One RK4 step of size cfg.step; rows are renormalized afterwards with
    the compensating factor absorbed into the coefficients."""
    A, Xi = backend.rk4_step(
        state.A, state.Xi, state.S, params.J, params.U, cfg.step, cfg.svd_cutoff, energy_shift
    )
    return MultiConfigState(state.S, A, Xi)


@dataclass(frozen=True)
class VariationalRun:
    """Raw propagation output: parameter samples on a uniform time grid."""

    t: np.ndarray
    A: np.ndarray
    Xi: np.ndarray
    S: int
    step_used: float

    def fock_samples(self) -> np.ndarray:
        return multiconfig_fock_batch(self.A, self.Xi, self.S)

    def state(self, i: int) -> MultiConfigState:
        return MultiConfigState(self.S, self.A[i], self.Xi[i])


def reference_energy(state: MultiConfigState, params: SystemParams) -> float:
    """Energy expectation used as the propagation gauge shift."""
    return energy_expectation_mc(state, params)


def propagate(
    state: MultiConfigState,
    params: SystemParams,
    cfg: VariationalConfig,
    t_final: float,
    sample_dt: float,
    auto_shift: bool = True,
) -> VariationalRun:
    """Propagate to t_final, recording every sample_dt (both rounded to whole
    steps; the step is shrunk if needed so it divides the sample spacing)."""
    if not t_final > 0 or not sample_dt > 0:
        raise DomainError("t_final and sample_dt must be positive")
    per_sample = max(1, round(sample_dt / cfg.step))
    h = sample_dt / per_sample
    n_samples = int(round(t_final / sample_dt))
    shift = -reference_energy(state, params) if auto_shift else 0.0
    A_s, Xi_s = backend.propagate_mc(
        state.A,
        state.Xi,
        state.S,
        params.J,
        params.U,
        h,
        n_samples * per_sample,
        per_sample,
        cfg.svd_cutoff,
        shift,
    )
    t = sample_dt * np.arange(n_samples + 1)
    return VariationalRun(t=t, A=A_s, Xi=Xi_s, S=state.S, step_used=h)


def propagate_audited(
    state: MultiConfigState,
    params: SystemParams,
    cfg: VariationalConfig,
    t_final: float,
    sample_dt: float,
    norm_tol: float = 1e-6,
    energy_tol: float = 1e-6,
    max_halvings: int = 4,
) -> VariationalRun:
    """Propagate, then halve the step until the norm and energy drifts pass.

    Drifts are measured in the Fock representation at every sample, so the
    audit is independent of the propagation algebra.
    """
    from .observables import observable_table  # local import avoids a cycle

    h = cfg.step
    for _ in range(max_halvings + 1):
        run = propagate(state, params, cfg, t_final, sample_dt)
        table = observable_table(run.fock_samples(), params)
        norm_drift = float(np.max(np.abs(table["norm"] - table["norm"][0])))
        e0 = table["energy"][0]
        energy_drift = float(np.max(np.abs(table["energy"] - e0)) / (abs(e0) + 1.0))
        if norm_drift < norm_tol and energy_drift < energy_tol:
            return run
        h *= 0.5
        cfg = VariationalConfig(
            multiplicity=cfg.multiplicity,
            step=h,
            epsilon_seed=cfg.epsilon_seed,
            svd_cutoff=cfg.svd_cutoff,
            sampler=cfg.sampler,
            seed=cfg.seed,
        )
    raise ArithmeticError(
        f"conservation audit still failing at step {h * 2:.3e}: "
        f"norm drift {norm_drift:.3e}, energy drift {energy_drift:.3e}"
    )


def induced_phase_space_velocity(xi, xi_dot) -> tuple[float, float]:
    """(dz/dt, dphi/dt) implied by one configuration's amplitude velocity.

    Gauge-safe: common phase and norm drifts of the row cancel in both
    outputs, so the values can be compared directly with the classical flow.
    """
    x1, x2 = complex(xi[0]), complex(xi[1])
    d1, d2 = complex(xi_dot[0]), complex(xi_dot[1])
    n = abs(x1) ** 2 + abs(x2) ** 2
    z = (abs(x1) ** 2 - abs(x2) ** 2) / n
    g1 = 2.0 * (x1.conjugate() * d1).real
    g2 = 2.0 * (x2.conjugate() * d2).real
    dz = (g1 - g2) / n - z * (g1 + g2) / n
    dphi = (d1 / x1).imag - (d2 / x2).imag
    return dz, dphi
