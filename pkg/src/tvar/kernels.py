"""Hot enumeration loops, backed by the compiled extension when available.

The compiled module works in 64-bit integers.  Inputs whose magnitudes could
overflow during enumeration are routed to the pure-Python implementation, so
results never depend on which backend ran.  Set ``TVAR_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from . import _kernels_py

try:
    if os.environ.get("TVAR_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

# keep accumulated sums well inside int64
_LIMIT = 1 << 40


def _small(*arrays):
    for arr in arrays:
        for x in arr:
            if isinstance(x, (list, tuple)):
                if any(abs(int(y)) >= _LIMIT for y in x):
                    return False
            elif abs(int(x)) >= _LIMIT:
                return False
    return True


def _pick(fits):
    return _compiled if (_compiled is not None and fits) else _kernels_py


def box_points(A, b, lo, hi):
    """Integer points of ``{x : A x >= b}`` inside the box ``[lo, hi]``."""
    A = [[int(v) for v in row] for row in A]
    b = [int(v) for v in b]
    lo = [int(v) for v in lo]
    hi = [int(v) for v in hi]
    width = max((h - l for l, h in zip(lo, hi)), default=0)
    fits = _small(A, b, lo, hi) and width < _LIMIT
    return _pick(fits).box_points(A, b, lo, hi)


def weight_fibers(W, bound):
    """Pairs ``(W a, a)`` for all ``a >= 0`` with ``sum(a) <= bound``."""
    W = [[int(v) for v in row] for row in W]
    fits = _small(W) and bound < _LIMIT
    return _pick(fits).weight_fibers(W, int(bound))


def reducible_mask(vals):
    vals = [[int(v) for v in row] for row in vals]
    return _pick(_small(vals)).reducible_mask(vals)
