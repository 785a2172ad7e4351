# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.  Same signatures and semantics as ``_fallback``."""

import numpy as np
from libc.math cimport exp, expm1

DEF MAX_ORDER = 16


def cumulant_sums(const double[::1] lam, const double[::1] weight, Py_ssize_t n, int max_order,
                  double scale=1.0):
    """``out[m-1] = sum_k w_k (b_k^m + (1 - rho_k^m) sum_{s<n} a_{s,k}^m)``, ``rho_k = exp(-lam_k)``.

    ``a`` and ``b`` are divided by ``scale`` before powering, so the result
    is the sum divided by ``scale**m``; pass ``scale = n`` to avoid overflow.

    Components are accumulated in index order, so the result does not depend
    on how the caller splits work across threads.
    """
    if max_order < 1 or max_order > MAX_ORDER:
        raise ValueError("max_order must lie in [1, 16]")
    if lam.shape[0] != weight.shape[0]:
        raise ValueError("lam and weight must have the same length")
    if n < 1:
        raise ValueError("n must be >= 1")
    cdef Py_ssize_t K = lam.shape[0]
    cdef Py_ssize_t k, s
    cdef int j
    cdef double acc[MAX_ORDER]
    cdef double tot[MAX_ORDER]
    cdef double rho, a, p, b, pb
    cdef double a0, a1, a2, a3, r0, r1, r2, r3, q
    cdef double c0[4]
    cdef double c1[4]
    cdef double c2[4]
    cdef double c3[4]
    cdef double av[4]
    cdef double rv[4]
    cdef int i
    cdef double inv = 1.0 / scale
    for j in range(MAX_ORDER):
        tot[j] = 0.0
    with nogil:
        if max_order <= 4:
            # four components at a time; each keeps its own accumulators
            k = 0
            while k < K:
                for i in range(4):
                    av[i] = 0.0
                    rv[i] = exp(-lam[k + i]) if k + i < K else 0.0
                    c0[i] = 0.0
                    c1[i] = 0.0
                    c2[i] = 0.0
                    c3[i] = 0.0
                for s in range(n):
                    for i in range(4):
                        a = 1.0 + rv[i] * av[i]
                        av[i] = a
                        a = a * inv
                        q = a * a
                        c0[i] += a
                        c1[i] += q
                        c2[i] += q * a
                        c3[i] += q * q
                for i in range(4):
                    if k + i >= K:
                        break
                    acc[0] = c0[i]
                    acc[1] = c1[i]
                    acc[2] = c2[i]
                    acc[3] = c3[i]
                    b = rv[i] * av[i] * inv
                    pb = b
                    for j in range(max_order):
                        tot[j] += weight[k + i] * (pb - expm1(-(j + 1) * lam[k + i]) * acc[j])
                        pb *= b
                k += 4
        else:
            for k in range(K):
                rho = exp(-lam[k])
                a = 0.0
                for j in range(max_order):
                    acc[j] = 0.0
                for s in range(n):
                    a = 1.0 + rho * a
                    p = a * inv
                    for j in range(max_order):
                        acc[j] += p
                        p *= a * inv
                b = rho * a * inv
                pb = b
                for j in range(max_order):
                    tot[j] += weight[k] * (pb - expm1(-(j + 1) * lam[k]) * acc[j])
                    pb *= b
    out = np.empty(max_order)
    for j in range(max_order):
        out[j] = tot[j]
    return out


def superpose(const double[::1] rho, const double[::1] x0, const long[::1] ptr,
              const long[::1] steps, const double[::1] values, Py_ssize_t n):
    """Sum of AR(1) component paths at times ``1..n``.

    Component ``k`` starts at ``x0[k]`` and its innovations are the entries
    ``ptr[k]:ptr[k+1]`` of ``steps`` (1-based, sorted) and ``values``;
    several entries may share a step.
    """
    cdef Py_ssize_t K = rho.shape[0]
    if x0.shape[0] != K or ptr.shape[0] != K + 1:
        raise ValueError("inconsistent component arrays")
    if steps.shape[0] != values.shape[0]:
        raise ValueError("steps and values must have the same length")
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k, i, p, end
    cdef double x, r
    with nogil:
        for k in range(K):
            x = x0[k]
            r = rho[k]
            p = ptr[k]
            end = ptr[k + 1]
            for i in range(n):
                x = r * x
                while p < end and steps[p] == i + 1:
                    x += values[p]
                    p += 1
                out[i] += x
    return out_arr
