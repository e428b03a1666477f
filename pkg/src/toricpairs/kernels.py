"""Kernel dispatch: compiled int64 kernels when available, Python otherwise.

Set ``TORICPAIRS_PURE_PYTHON=1`` to force the fallback.  The compiled kernels
raise ``OverflowError`` when an intermediate value leaves int64 range; the
call is then repeated on arbitrary-precision ints, so results never depend on
the backend.
"""

import os

from . import _pykernels

_ckernels = None
if not os.environ.get("TORICPAIRS_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def _dispatch(name, *args):
    if _ckernels is not None:
        try:
            return getattr(_ckernels, name)(*args)
        except OverflowError:
            pass
    return getattr(_pykernels, name)(*args)


def smith(rows, m, n):
    return _dispatch("smith", rows, m, n)


def bareiss_rank(rows):
    return _dispatch("bareiss_rank", rows)


def min_partition(classes, weights, unit):
    return _dispatch("min_partition", classes, weights, unit)
