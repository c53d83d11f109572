"""Optional numba acceleration.

Set ``SCRIPTBRIDGE_DISABLE_NUMBA=1`` to force the pure-numpy code paths,
e.g. for debugging or on platforms without an LLVM toolchain.
"""

import os

_DISABLED = os.environ.get("SCRIPTBRIDGE_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
    "on",
)

try:
    if _DISABLED:
        raise ImportError
    import numba as nb  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    nb = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, else an identity decorator.

    The undecorated function stays reachable as ``.py_func`` in both cases.
    """

    def wrap(fn):
        if HAVE_NUMBA:
            return nb.njit(cache=True, **kwargs)(fn)
        fn.py_func = fn
        return fn

    if args and callable(args[0]):
        return wrap(args[0])
    return wrap
