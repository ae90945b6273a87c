import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bjjsim.core import DomainError, PhaseSpacePoint, PoleError, SystemParams
from bjjsim.meanfield import (
    linearized_solution,
    mf_energy,
    mf_integrate,
    mf_rhs,
    mf_trajectory_arrays,
    mqst_threshold,
    plasma_frequency,
    ssb_fixed_points,
    stability_at_origin,
)
from bjjsim.scenarios import dominant_frequency


def test_mf_rhs_examples():
    params = SystemParams(1.0, 0.7, 12)
    assert mf_rhs(PhaseSpacePoint(0.0, 0.0), params) == (0.0, 0.0)

    dz, dphi = mf_rhs(PhaseSpacePoint(0.0, math.pi / 2.0), SystemParams(1.0, 0.3, 9))
    assert dz == pytest.approx(2.0, abs=1e-15)
    assert dphi == pytest.approx(0.0, abs=1e-15)

    dz, dphi = mf_rhs(PhaseSpacePoint(0.1, 0.0), SystemParams(1.0, 0.1, 20))
    assert dz == 0.0
    assert dphi == pytest.approx(-0.2 / math.sqrt(0.99) - 0.19, abs=1e-14)


def test_mf_rhs_pole():
    with pytest.raises(PoleError):
        mf_rhs(PhaseSpacePoint(1.0, 0.0), SystemParams(1.0, 0.1, 20))


@settings(max_examples=100, deadline=None)
@given(z=st.floats(-0.99, 0.99), phi=st.floats(-6.0, 6.0))
def test_mf_rhs_parity_equivariance(z, phi):
    params = SystemParams(1.0, -0.4, 15)
    dz, dphi = mf_rhs(PhaseSpacePoint(z, phi), params)
    dz_m, dphi_m = mf_rhs(PhaseSpacePoint(-z, -phi), params)
    assert dz_m == pytest.approx(-dz, abs=1e-12)
    assert dphi_m == pytest.approx(-dphi, abs=1e-12)


def test_mf_energy_examples():
    assert mf_energy(PhaseSpacePoint(0.0, math.pi), SystemParams(1.0, 0.77, 20)) == pytest.approx(20.0)
    assert mf_energy(PhaseSpacePoint(0.0, 0.0), SystemParams(1.0, -0.3, 20)) == pytest.approx(-20.0)
    assert mf_energy(PhaseSpacePoint(1.0, 0.0), SystemParams(1.0, 0.1, 20)) == pytest.approx(9.5)


def test_stability_at_origin_center():
    report = stability_at_origin(SystemParams(1.0, 0.1, 20))
    assert report.classification == "center"
    assert np.allclose(report.jacobian, [[0.0, 2.0], [-2.0 - 1.9, 0.0]])
    expected = 2.0 * math.sqrt(1.95)
    assert sorted(ev.imag for ev in report.eigenvalues) == pytest.approx([-expected, expected])
    assert all(abs(ev.real) < 1e-14 for ev in report.eigenvalues)


def test_stability_at_origin_harmonic_limit():
    report = stability_at_origin(SystemParams(1.0, 0.0, 33))
    assert sorted(ev.imag for ev in report.eigenvalues) == pytest.approx([-2.0, 2.0])


def test_stability_at_origin_saddle():
    report = stability_at_origin(SystemParams(1.0, -0.12, 20))
    assert report.classification == "saddle"
    vals = sorted(ev.real for ev in report.eigenvalues)
    expected = 2.0 * math.sqrt(0.14)
    assert vals == pytest.approx([-expected, expected], abs=1e-12)


def test_eigenvalues_are_characteristic_roots():
    for params in (SystemParams(1.0, 0.1, 20), SystemParams(1.0, -0.3, 20)):
        report = stability_at_origin(params)
        for ev in report.eigenvalues:
            jac = report.jacobian
            residual = ev * ev - (jac[0, 0] + jac[1, 1]) * ev + np.linalg.det(jac)
            assert abs(residual) < 1e-12
        numeric = np.linalg.eigvals(report.jacobian)
        assert sorted(numeric, key=lambda v: (v.real, v.imag)) == pytest.approx(
            sorted(report.eigenvalues, key=lambda v: (v.real, v.imag)), abs=1e-12
        )


def test_ssb_fixed_points_values():
    assert ssb_fixed_points(SystemParams(1.0, 0.1, 20)) is None

    broken = ssb_fixed_points(SystemParams(1.0, -0.12, 50))
    assert broken.points[0].z == pytest.approx(0.9404, abs=5e-4)
    assert broken.points[1].z == pytest.approx(-broken.points[0].z)

    broken = ssb_fixed_points(SystemParams(1.0, -0.15, 20))
    assert broken.points[0].z == pytest.approx(0.7124, abs=5e-4)


def test_ssb_fixed_points_are_stationary_centers():
    params = SystemParams(1.0, -0.15, 20)
    broken = ssb_fixed_points(params)
    for point in broken.points:
        dz, dphi = mf_rhs(point, params)
        assert math.hypot(dz, dphi) < 1e-12
    assert broken.report.classification == "center"
    # closed-form eigenvalues match the Jacobian spectrum
    numeric = sorted(np.linalg.eigvals(broken.report.jacobian), key=lambda v: v.imag)
    stated = sorted(broken.report.eigenvalues, key=lambda v: v.imag)
    assert numeric == pytest.approx(stated, abs=1e-12)


def test_mqst_threshold_examples():
    assert mqst_threshold(PhaseSpacePoint(0.5, 0.0)) == pytest.approx(14.928203230275509, abs=1e-9)
    assert mqst_threshold(PhaseSpacePoint(1.0, 0.0)) == pytest.approx(2.0)
    # evaluated directly: (1 - sqrt(0.75)) / 0.125
    assert mqst_threshold(PhaseSpacePoint(0.5, math.pi)) == pytest.approx(1.0717967697244908, abs=1e-12)
    with pytest.raises(ZeroDivisionError):
        mqst_threshold(PhaseSpacePoint(0.0, 0.0))


def test_linearized_solution_branches():
    pt = linearized_solution(0.1, SystemParams(1.0, 0.0, 20), math.pi / 2.0)
    assert pt.z == pytest.approx(-0.1, abs=1e-12)
    assert pt.phi == pytest.approx(0.0, abs=1e-12)

    assert plasma_frequency(SystemParams(1.0, 0.1, 20)) == pytest.approx(2.0 * math.sqrt(1.95))

    params = SystemParams(1.0, -0.12, 20)  # hyperbolic branch
    t = 0.37
    pt = linearized_solution(0.1, params, t)
    kappa = 2.0 * math.sqrt(0.14)
    assert pt.z == pytest.approx(0.1 * math.cosh(kappa * t), rel=1e-12)
    assert pt.phi == pytest.approx(0.1 * math.sqrt(0.14) * math.sinh(kappa * t), rel=1e-12)


def test_mf_integrate_energy_audit():
    params = SystemParams(1.0, 0.1, 20)
    rel_tol = 1e-10
    record = mf_integrate(PhaseSpacePoint(0.1, 0.0), params, 100.0, rel_tol, 0.01)
    # phi is carried alongside the observable columns for the classical engine
    energies = np.array(
        [mf_energy(PhaseSpacePoint(z, p), params) for z, p in zip(record.z, record.phi)]
    )
    e0 = mf_energy(PhaseSpacePoint(0.1, 0.0), params)
    assert np.max(np.abs(energies - e0)) < 10.0 * rel_tol * (abs(e0) + 1.0)


def test_mf_integrate_closed_orbit():
    record = mf_integrate(PhaseSpacePoint(0.01, 0.0), SystemParams(1.0, 0.1, 20), 100.0, 1e-10, 0.01)
    assert np.max(record.z) - 0.01 < 1e-6
    assert np.min(record.z) > -0.01 - 1e-6


def test_mf_integrate_matches_linearization():
    params = SystemParams(1.0, 0.1, 20)
    z0 = 1e-4
    period = 2.0 * math.pi / plasma_frequency(params)
    t, z, phi = mf_trajectory_arrays(PhaseSpacePoint(z0, 0.0), params, period, 1e-10, period / 256)
    for ti, zi in zip(t, z):
        assert abs(zi - linearized_solution(z0, params, ti).z) < 1e-8


def test_mf_integrate_free_limit():
    t, z, _ = mf_trajectory_arrays(PhaseSpacePoint(0.1, 0.0), SystemParams(1.0, 0.0, 7), 20.0, 1e-10, 0.01)
    assert np.max(np.abs(z - 0.1 * np.cos(2.0 * t))) < 1e-3  # linearization error O(z0^3)


def test_plasma_frequency_from_spectrum():
    params = SystemParams(1.0, 0.1, 20)
    t, z, _ = mf_trajectory_arrays(PhaseSpacePoint(0.01, 0.0), params, 400.0, 1e-10, 0.01)
    measured = dominant_frequency(t, z)
    assert abs(measured - plasma_frequency(params)) / plasma_frequency(params) < 0.01


def test_validation():
    with pytest.raises(DomainError):
        mf_integrate(PhaseSpacePoint(0.1, 0.0), SystemParams(1.0, 0.1, 20), -1.0)
    with pytest.raises(DomainError):
        plasma_frequency(SystemParams(1.0, -0.3, 20))
