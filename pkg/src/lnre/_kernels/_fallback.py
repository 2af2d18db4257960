"""Pure-numpy implementations of the hot kernels.

Used whenever the compiled extension is unavailable (or disabled through
``LNRE_PURE_PYTHON=1``).  Semantics must stay identical to ``_core.pyx``.
"""

import numpy as np

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)

# Cap on the size of the broadcast (query x centers) matrix; larger
# problems are evaluated in chunks to bound memory.
_CHUNK = 1 << 22


def gauss_kde_eval(query, centers, h):
    """Evaluate the Gaussian-kernel density estimate at the query points.

    ghat(y) = (1 / (n h)) * sum_j phi((y - c_j) / h) with phi the standard
    normal density.  Both arguments are treated as 1-d float64 arrays.
    """
    q = np.ascontiguousarray(query, dtype=np.float64).ravel()
    c = np.ascontiguousarray(centers, dtype=np.float64).ravel()
    n = c.size
    if n == 0:
        raise ValueError("need at least one kernel center")
    if h <= 0.0:
        raise ValueError("bandwidth must be positive")
    out = np.empty(q.size, dtype=np.float64)
    step = max(1, _CHUNK // n)
    for lo in range(0, q.size, step):
        z = (q[lo : lo + step, None] - c) / h
        out[lo : lo + step] = np.exp(-0.5 * z * z).sum(axis=1)
    out *= _INV_SQRT_2PI / (h * n)
    return out


def gauss_kde_self_weights(centers, h, beta):
    """Power weights ghat(c_j)**(beta - 1) at the sample's own points.

    beta == 1 short-circuits to exact ones: no kernel evaluation, so the
    unweighted reductions hold exactly.
    """
    c = np.ascontiguousarray(centers, dtype=np.float64).ravel()
    if beta == 1.0:
        return np.ones(c.size)
    dens = gauss_kde_eval(c, c, h)
    return dens ** (beta - 1.0)
