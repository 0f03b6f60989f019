"""Backend selection for the hot stepping loop.

The compiled extension is preferred when importable; the numpy fallback
implements the identical contract. Both backends stay importable so they
can be benchmarked against each other.
"""
from __future__ import annotations

import numpy as np

from . import py_stepper

try:
    from . import _stepper as _compiled
    HAVE_COMPILED = True
except ImportError:
    _compiled = None
    HAVE_COMPILED = False

__all__ = ["HAVE_COMPILED", "run_manufactured", "backend_name", "available_backends"]


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if HAVE_COMPILED else ("python",)


def backend_name() -> str:
    return "compiled" if HAVE_COMPILED else "python"


def run_manufactured(M, S1, S2, dt, alphas, betas, u0, bc, bs, c_freq, trial_pts, uc, us,
                     backend: str | None = None):
    """Dispatch to the selected backend; `backend` forces 'compiled' or 'python'."""
    if backend is None:
        backend = backend_name()
    if backend == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel is not available")
        return _compiled.run_manufactured(
            np.asfortranarray(M, dtype=np.float64),
            np.asfortranarray(S1, dtype=np.float64),
            np.asfortranarray(S2, dtype=np.float64),
            float(dt),
            np.ascontiguousarray(alphas, dtype=np.float64),
            np.ascontiguousarray(betas, dtype=np.float64),
            np.ascontiguousarray(u0, dtype=np.float64),
            np.ascontiguousarray(bc, dtype=np.float64),
            np.ascontiguousarray(bs, dtype=np.float64),
            float(c_freq),
            np.asfortranarray(trial_pts, dtype=np.float64),
            np.ascontiguousarray(uc, dtype=np.float64),
            np.ascontiguousarray(us, dtype=np.float64),
        )
    if backend == "python":
        return py_stepper.run_manufactured(
            M, S1, S2, dt, alphas, betas, u0, bc, bs, c_freq, trial_pts, uc, us
        )
    raise ValueError(f"unknown backend {backend!r}")
