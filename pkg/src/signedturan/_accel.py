"""Numba switch for the hot kernels.

Set ``SIGNEDTURAN_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable. The choice is made once, at import time.
"""

from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

_FALSY = {"", "0", "false", "no", "off"}

NUMBA_REQUESTED = os.environ.get("SIGNEDTURAN_DISABLE_NUMBA", "").strip().lower() in _FALSY

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_REQUESTED and NUMBA_AVAILABLE

if NUMBA_REQUESTED and not NUMBA_AVAILABLE:  # pragma: no cover
    logger.warning("numba not importable, falling back to numpy kernels")


def njit(*args, **kwargs):
    """``numba.njit`` with cache on; the identity decorator when numba is off.

    Functions keep their Python body either way, so the loop variants stay
    testable without compilation (via ``.py_func`` when compiled).
    """
    kwargs.setdefault("cache", True)

    def wrap(func):
        if USE_NUMBA:
            return numba.njit(**kwargs)(func)
        return func

    if len(args) == 1 and callable(args[0]):
        return wrap(args[0])
    return wrap


def py_func(func):
    """Underlying Python function of a (possibly) jitted kernel."""
    return getattr(func, "py_func", func)
