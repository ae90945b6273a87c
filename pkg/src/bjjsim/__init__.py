"""Two-site Bose-Hubbard junction dynamics.

Three propagation engines over one observable surface: classical mean
field, multi-configuration SU(2) coherent-state variational dynamics, and
the exact Fock-space reference.
"""

from .backend import COMPILED, backend_name
from .core import (
    AcsParams,
    DegenerateBasisError,
    DomainError,
    PhaseSpacePoint,
    PoleError,
    SystemParams,
    acs_from_phase_space,
    lambda_strength,
    phase_space_from_acs,
)

__version__ = "0.1.0"

__all__ = [
    "AcsParams",
    "COMPILED",
    "DegenerateBasisError",
    "DomainError",
    "PhaseSpacePoint",
    "PoleError",
    "SystemParams",
    "acs_from_phase_space",
    "backend_name",
    "lambda_strength",
    "phase_space_from_acs",
    "__version__",
]
