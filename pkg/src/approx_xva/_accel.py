"""Optional numba acceleration.

Set ``APPROX_XVA_DISABLE_NUMBA=1`` to force the pure-numpy code paths even
when numba is importable.
"""

import os

_DISABLED = os.environ.get("APPROX_XVA_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by APPROX_XVA_DISABLE_NUMBA")
    from numba import njit  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        # bare @njit and @njit(...) both become no-ops
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator


def backend() -> str:
    return "numba" if HAS_NUMBA else "numpy"
