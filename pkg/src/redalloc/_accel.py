"""Backend selection for the hot kernels.

Set ``REDALLOC_DISABLE_NUMBA=1`` before import to run the pure-numpy
path. Numba is also skipped silently if it cannot be imported.
"""
import os
import warnings


def _env_disabled():
    return os.environ.get("REDALLOC_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _env_disabled()

if not HAVE_NUMBA and not _env_disabled():  # pragma: no cover
    warnings.warn("numba could not be imported; falling back to numpy kernels")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, identity otherwise.

    The decorated function is compiled lazily, so importing a module full of
    jitted kernels costs nothing when the numpy backend is selected.
    """
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
