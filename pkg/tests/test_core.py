import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bjjsim.core import (
    AcsParams,
    DomainError,
    PhaseSpacePoint,
    SystemParams,
    acs_from_phase_space,
    lambda_strength,
    phase_space_from_acs,
    wrap_phase,
)


def test_lambda_strength_values():
    assert lambda_strength(SystemParams(1.0, 0.53, 50)) == pytest.approx(12.985, abs=1e-12)
    assert lambda_strength(SystemParams(1.0, 0.0, 20)) == 0.0
    assert lambda_strength(SystemParams(1.0, -0.12, 50)) == pytest.approx(-2.94, abs=1e-12)


def test_lambda_strength_antisymmetric_in_u():
    for u in (0.05, 0.3, 1.2):
        plus = lambda_strength(SystemParams(1.0, u, 17))
        minus = lambda_strength(SystemParams(1.0, -u, 17))
        assert plus == -minus


def test_acs_from_phase_space_examples():
    acs = acs_from_phase_space(PhaseSpacePoint(1.0, 0.0))
    assert acs.xi1 == pytest.approx(1.0) and acs.xi2 == pytest.approx(0.0)

    acs = acs_from_phase_space(PhaseSpacePoint(0.0, 0.0))
    assert acs.xi1 == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)
    assert acs.xi2 == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)

    acs = acs_from_phase_space(PhaseSpacePoint(0.5, 0.0))
    assert acs.xi1 == pytest.approx(0.8660254037844386, abs=1e-15)
    assert acs.xi2 == pytest.approx(0.5, abs=1e-15)


def test_phase_space_from_acs_examples():
    # pole: phase is gauge, returned as zero by convention
    pt = phase_space_from_acs(AcsParams(1.0, 0.0))
    assert pt.z == 1.0 and pt.phi == 0.0

    r = 1.0 / math.sqrt(2.0)
    pt = phase_space_from_acs(AcsParams(r, r * cmath.exp(-1j * math.pi / 3.0)))
    assert pt.z == pytest.approx(0.0, abs=1e-15)
    assert pt.phi == pytest.approx(math.pi / 3.0, abs=1e-14)

    pt = phase_space_from_acs(AcsParams(0.8660254037844386, 0.5))
    assert pt.z == pytest.approx(0.5, abs=1e-14)
    assert pt.phi == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(
    z=st.floats(-0.999999, 0.999999),
    phi=st.floats(-math.pi + 1e-9, math.pi),
)
def test_round_trip_identity(z, phi):
    back = phase_space_from_acs(acs_from_phase_space(PhaseSpacePoint(z, phi)))
    assert abs(back.z - z) < 1e-12
    assert abs(back.phi - phi) < 1e-12


def test_validation_errors():
    with pytest.raises(DomainError):
        SystemParams(0.0, 0.1, 20)
    with pytest.raises(DomainError):
        SystemParams(1.0, 0.1, 0)
    with pytest.raises(DomainError):
        PhaseSpacePoint(1.0000001, 0.0)
    with pytest.raises(DomainError):
        AcsParams(1.0, 0.1)


def test_wrap_phase():
    assert wrap_phase(math.pi) == pytest.approx(math.pi)
    assert wrap_phase(-math.pi) == pytest.approx(math.pi)
    assert wrap_phase(2.5 * math.pi) == pytest.approx(0.5 * math.pi)
