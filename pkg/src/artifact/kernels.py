"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``ARTIFACT_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by the test that cross-checks both backends).
"""

import os

from . import _fallback

BACKEND = "python"

if os.environ.get("ARTIFACT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _fallback
    else:
        BACKEND = "cython"
else:
    _impl = _fallback

koszul_exponent = _impl.koszul_exponent
reorder_exponent = _impl.reorder_exponent
perm_parity = _impl.perm_parity
unshuffles = _impl.unshuffles


def invariant_factors_small(rows, cols, entries):
    """Invariant factors, falling back to big integers on int64 overflow."""
    try:
        return _impl.invariant_factors_small(rows, cols, entries)
    except OverflowError:
        return _fallback.invariant_factors_small(rows, cols, entries)


__all__ = [
    "BACKEND",
    "koszul_exponent",
    "reorder_exponent",
    "perm_parity",
    "unshuffles",
    "invariant_factors_small",
]
