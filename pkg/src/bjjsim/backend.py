"""Backend selection for the propagation hot loops.

The compiled extension is preferred; the pure-Python twin is used when the
extension was not built or when BJJSIM_PURE_PYTHON is set (useful for
debugging and for the backend benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("BJJSIM_PURE_PYTHON", "").strip() not in ("", "0"):
    from . import _kernel_py as impl
else:
    try:
        from . import _kernel as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as impl

COMPILED: bool = bool(getattr(impl, "COMPILED", False))

assemble_eom_arrays = impl.assemble_eom_arrays
rk4_step = impl.rk4_step
propagate_mc = impl.propagate_mc
mf_propagate = impl.mf_propagate


def backend_name() -> str:
    return "compiled" if COMPILED else "pure-python"
