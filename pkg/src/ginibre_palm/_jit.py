"""Optional numba acceleration with a pure-numpy fallback.

The hot sampling loops are compiled with numba when it is importable and
not disabled through the ``GINIBRE_PALM_DISABLE_JIT`` environment variable.
Everything else in the package is plain numpy and does not care.
"""

import os

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap


_env_disabled = os.environ.get("GINIBRE_PALM_DISABLE_JIT", "0") not in ("0", "", "false", "False")
_jit_enabled = HAS_NUMBA and not _env_disabled


def jit_enabled() -> bool:
    """Whether compiled sampling kernels are active."""
    return _jit_enabled


def enable_jit():
    global _jit_enabled
    if not HAS_NUMBA:
        raise RuntimeError("numba is not installed")
    _jit_enabled = True


def disable_jit():
    global _jit_enabled
    _jit_enabled = False
