"""Selection of the numerical kernel backend.

Two interchangeable kernel implementations exist for the hot paths (the two
Monte Carlo simulators and the RK4 steppers):

* ``numba`` — scalar event loops compiled with ``numba.njit`` (fast path);
* ``numpy`` — vectorized lockstep over replications (pure-numpy fallback).

Both consume random draws in exactly the same per-replication order from
the same splitmix64 streams, so simulation results are reproducible
per backend and agree across backends (see ``tests/test_rng_backend.py``).

Selection order: an explicit ``backend=`` argument wins, then the
``TRANSIENTQ_BACKEND`` environment variable (``auto`` | ``numba`` |
``numpy``), then ``auto``, which means "numba if importable, else numpy".
"""

from __future__ import annotations

import os
from types import ModuleType

from .errors import TransientQError

ENV_VAR = "TRANSIENTQ_BACKEND"
BACKENDS = ("auto", "numba", "numpy")

try:
    import numba  # noqa: F401

    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False


def numba_available() -> bool:
    """Whether the compiled backend can be used in this environment."""
    return _HAVE_NUMBA


def resolve_backend(backend: str | None = None) -> str:
    """Resolve a backend request to a concrete name: 'numba' or 'numpy'."""
    choice = backend if backend is not None else os.environ.get(ENV_VAR, "auto")
    choice = str(choice).strip().lower() or "auto"
    if choice not in BACKENDS:
        raise ValueError(
            f"unknown backend {choice!r}; expected one of {', '.join(BACKENDS)}"
        )
    if choice == "auto":
        return "numba" if _HAVE_NUMBA else "numpy"
    if choice == "numba" and not _HAVE_NUMBA:
        raise TransientQError(
            "the numba backend was requested but numba is not importable; "
            "install numba or select TRANSIENTQ_BACKEND=numpy"
        )
    return choice


def get_kernels(backend: str | None = None) -> tuple[str, ModuleType]:
    """Return ``(name, module)`` for the resolved kernel backend."""
    name = resolve_backend(backend)
    if name == "numba":
        from . import _kernels_numba as module
    else:
        from . import _kernels_numpy as module
    return name, module
