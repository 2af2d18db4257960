"""Hot numeric kernels: compiled core with a pure-numpy fallback.

The compiled extension is selected at import time; set ``LNRE_PURE_PYTHON=1``
to force the fallback (useful for benchmarking and debugging).
"""

import os

from . import _fallback

if os.environ.get("LNRE_PURE_PYTHON"):
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback
        BACKEND = "python"

gauss_kde_eval = _impl.gauss_kde_eval
gauss_kde_self_weights = _impl.gauss_kde_self_weights

__all__ = ["BACKEND", "gauss_kde_eval", "gauss_kde_self_weights"]
