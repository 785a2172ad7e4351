"""Pure numpy versions of the compiled kernels in ``_core``."""

import numpy as np

_CHUNK = 1 << 15


def cumulant_sums(lam, weight, n, max_order, scale=1.0):
    """``out[m-1] = sum_k w_k (b_k^m + (1 - rho_k^m) sum_{s<n} a_{s,k}^m)``, ``rho_k = exp(-lam_k)``.

    ``a`` and ``b`` are divided by ``scale`` before powering.
    """
    lam = np.ascontiguousarray(lam, dtype=float)
    weight = np.ascontiguousarray(weight, dtype=float)
    if not 1 <= max_order <= 16:
        raise ValueError("max_order must lie in [1, 16]")
    if lam.shape != weight.shape:
        raise ValueError("lam and weight must have the same length")
    if n < 1:
        raise ValueError("n must be >= 1")
    orders = np.arange(1, max_order + 1)
    out = np.zeros(max_order)
    for start in range(0, lam.size, _CHUNK):
        lk = lam[start:start + _CHUNK]
        rho = np.exp(-lk)
        a = np.zeros_like(rho)
        acc = np.zeros((max_order, rho.size))
        for _ in range(n):
            a = 1.0 + rho * a
            sa = a / scale
            p = sa.copy()
            for j in range(max_order):
                acc[j] += p
                p *= sa
        b = rho * a / scale
        bm = b[None, :] ** orders[:, None]
        innov = -np.expm1(-orders[:, None] * lk[None, :])
        out += ((bm + innov * acc) * weight[start:start + _CHUNK]).sum(axis=1)
    return out


def superpose(rho, x0, ptr, steps, values, n):
    """Sum of AR(1) component paths at times ``1..n`` (see ``_core.superpose``)."""
    rho = np.asarray(rho, dtype=float)
    K = rho.size
    ptr = np.asarray(ptr)
    if np.shape(x0) != (K,) or ptr.shape != (K + 1,):
        raise ValueError("inconsistent component arrays")
    steps = np.asarray(steps)
    values = np.asarray(values, dtype=float)
    if steps.shape != values.shape:
        raise ValueError("steps and values must have the same length")
    comp = np.repeat(np.arange(K), np.diff(ptr))
    w = np.zeros((n, K))
    np.add.at(w, (steps - 1, comp), values)
    x = np.asarray(x0, dtype=float).copy()
    out = np.empty(n)
    for i in range(n):
        x = rho * x + w[i]
        out[i] = x.sum()
    return out
