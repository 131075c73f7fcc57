"""Optional numba acceleration for the numeric kernels.

The kernels in :mod:`espkit._kernels` are written as plain loops over
contiguous complex128 arrays, so the same source runs either jit-compiled
(the default when numba is importable) or interpreted.  Set the environment
variable ``ESPKIT_NO_NUMBA=1`` before import to force the pure-numpy
fallback path; ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

ENV_FLAG = "ESPKIT_NO_NUMBA"


def _flag_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


NUMBA_ENABLED = False
if not _flag_disabled():
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _njit = None


def jit_kernel(func):
    """Compile ``func`` with numba when enabled, else return it unchanged."""
    if NUMBA_ENABLED:
        return _njit(cache=True)(func)
    return func
