"""Kernel dispatch: compiled extension when available, NumPy fallback otherwise.

Set SPINERASE_PURE_PYTHON=1 to force the fallback (used by the benchmark and
by backend-equivalence tests).
"""

import os

from . import _pykernels

if os.environ.get("SPINERASE_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _cykernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

run_cycles = _impl.run_cycles
bernoulli_chain = _impl.bernoulli_chain

__all__ = ["BACKEND", "bernoulli_chain", "run_cycles"]
