"""Independent reference computations used only by the tests.

None of these share code paths with the package: they use mpmath, direct
loops or contour integrals instead of the closed forms under test.
"""

import math

import mpmath as mp
import numpy as np


def cauchy_cumulants(family, orders, nodes=128, frac=0.5):
    """Cumulants as Taylor coefficients of ``s -> cgf(-i s)`` on a circle.

    The trapezoidal rule on a circle of radius ``r`` inside the disc of
    analyticity converges like ``(r/R)**nodes``, so the result is exact to
    rounding for ``frac = 0.5``.
    """
    r = frac * family.analytic_radius()
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    s = r * np.exp(1j * theta)
    vals = np.asarray(family.cgf(-1j * s), dtype=complex)
    coef = np.fft.fft(vals) / nodes
    return {m: (coef[m] * math.factorial(m) / r**m).real for m in orders}


def richardson_derivative(f, m, h0, levels=8, ratio=1.4):
    """m-th derivative at 0 by central differences with Richardson extrapolation."""

    def d(h):
        return sum((-1) ** j * math.comb(m, j) * f((m / 2 - j) * h) for j in range(m + 1)) / h**m

    table = [[d(h0)]]
    best, err = table[0][0], math.inf
    for i in range(1, levels):
        row = [d(h0 / ratio**i)]
        for j in range(1, i + 1):
            fac = ratio ** (2 * j)
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (fac - 1))
            e = max(abs(row[j] - row[j - 1]), abs(row[j] - table[i - 1][j - 1]))
            if e < err:
                best, err = row[j], e
        if abs(row[i] - table[i - 1][i - 1]) > 2 * err:
            break
        table.append(row)
    return best, err


def brute_cumulant_from_representation(c_m, lam, hurst, delta, k_max, m, n):
    """Partial-sum cumulant from the explicit AR(1) representation.

    ``b = sum_{i=1}^n rho^i`` and ``a_s = sum_{i=0}^s rho^i`` are summed
    term by term in mpmath; no recursion is used.
    """
    mp.mp.dps = 40
    a_exp = 2 * (1 - mp.mpf(hurst))
    total = mp.mpf(0)
    for k in range(1, k_max + 1):
        rho = mp.e ** (-mp.mpf(lam) / k)
        dk = mp.mpf(delta) * mp.mpf(k) ** (-(1 + a_exp))
        b = mp.fsum(rho**i for i in range(1, n + 1))
        innov = mp.fsum(mp.fsum(rho**i for i in range(0, s + 1)) ** m for s in range(n))
        total += dk * (b**m + (1 - rho**m) * innov)
    return float(c_m * total)


def brute_variance_from_covariance(c2, lam, hurst, delta, k_max, n):
    """``sum_{i,j} R(|i-j|)`` with ``R`` summed directly over components."""
    a = 2 * (1 - hurst)
    k = np.arange(1, k_max + 1, dtype=float)
    dk = delta * k ** -(1 + a)
    lags = np.abs(np.subtract.outer(np.arange(n), np.arange(n))).ravel()
    r = c2 * (np.exp(-np.outer(np.arange(n), lam / k)) @ dk)
    return float(math.fsum(r[lags]))


def mp_zeta_tail_series(s, k_max):
    """``sum_{k<=k_max} k**-s`` in mpmath."""
    mp.mp.dps = 30
    return float(mp.fsum(mp.mpf(k) ** (-s) for k in range(1, k_max + 1)))
