"""Exact and asymptotic second- and higher-order structure of supOU sums.

A superposition is parametrised by a base rate ``lam``, a Hurst index
``H`` in (1/2, 1) and a marginal family whose scale parameter is the base
scale ``delta``.  Component ``k`` has rate ``lam/k``, autoregressive
coefficient ``rho_k = exp(-lam/k)`` and scale ``delta * k**-(1 + 2(1-H))``.

Infinite superpositions are truncated at ``k_max``; every sum over
components then carries an integral estimate of the ``k > k_max`` remainder
(midpoint rule, i.e. the integral starts at ``k_max + 1/2``).  The remainder
is included in the returned values and reported separately as ``tail``.

The slowly varying function is ``L*(t) = t**(2(1-H)) * R(t)`` so that
``R(t) = L*(t) / t**(2(1-H))`` holds exactly; the asymptotic constants
``D_m`` are expressed against ``L*``.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np
from scipy import integrate, special
from scipy.stats import qmc

from . import kernels
from .marginals import MarginalFamily, make_family
from .special import special_gamma, special_zeta

__all__ = [
    "QuadratureError",
    "SupouSpec",
    "Component",
    "TailedValue",
    "ARCoefficients",
    "DConstant",
    "CumulantReport",
    "ScalingFunction",
    "NormingConstants",
    "covariance_R",
    "covariance_many",
    "slowly_varying_Lstar",
    "lstar_limit",
    "lstar_ratio_bound",
    "ar_coefficients",
    "exact_cumulant",
    "exact_cumulants",
    "brute_force_cumulant",
    "asymptotic_constant_D",
    "quadrature_D",
    "asymptotic_cumulant",
    "partial_sum_variance_exact",
    "cumulant_report",
    "theoretical_tau",
    "tau_over_q_increasing",
    "scaling_function",
    "clt_norming",
    "central_moment_from_cumulants",
    "write_golden",
    "read_golden",
]

_TAIL_NODES = 64


class QuadratureError(RuntimeError):
    """A quadrature did not reach its requested tolerance."""


class Component(NamedTuple):
    family: MarginalFamily
    lam: float


class TailedValue(NamedTuple):
    """A sum over components; ``value`` already includes ``tail``."""

    value: float
    tail: float = 0.0
    tail_error: float = 0.0

    @property
    def truncated(self) -> float:
        return self.value - self.tail

    @property
    def tail_bound(self) -> float:
        """Remainder estimate relative to the full value."""
        return abs(self.tail / self.value) if self.value else 0.0


class Schedule(NamedTuple):
    k: np.ndarray
    lam: np.ndarray
    rho: np.ndarray
    delta: np.ndarray


@dataclass(frozen=True)
class SupouSpec:
    """Superposition of OU type components on the long-memory schedule.

    With ``infinite=False`` the object describes the finite superposition of
    exactly ``k_max`` components and no remainder is added.
    """

    family: MarginalFamily
    lam: float = 1.0
    hurst: float = 0.75
    k_max: int = 1000
    infinite: bool = True

    def __post_init__(self):
        if not isinstance(self.family, MarginalFamily):
            raise TypeError("family must be a MarginalFamily")
        if not (math.isfinite(self.hurst) and 0.5 < self.hurst < 1.0):
            raise ValueError("hurst out of (0.5,1)")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError("lambda must be > 0")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise ValueError("k_max must be an integer >= 1")
        object.__setattr__(self, "k_max", int(self.k_max))

    @property
    def decay(self) -> float:
        """``2(1-H)``, the decay index of the covariance."""
        return 2.0 * (1.0 - self.hurst)

    @property
    def delta(self) -> float:
        return self.family.scale

    @cached_property
    def schedule(self) -> Schedule:
        k = np.arange(1, self.k_max + 1, dtype=float)
        lam_k = self.lam / k
        return Schedule(k, lam_k, np.exp(-lam_k), self.delta * k ** -(1.0 + self.decay))

    def unit_cumulant(self, m: int) -> float:
        return self.family.cumulant(m) / self.family.scale

    def components(self) -> list[Component]:
        sched = self.schedule
        return [Component(self.family.with_scale(d), lk) for d, lk in zip(sched.delta, sched.lam)]

    def mean(self) -> float:
        """Mean of one observation of the (truncated) superposition."""
        return sum(c.family.mean() for c in self.components())

    def replace(self, **changes) -> "SupouSpec":
        fields = {
            "family": self.family,
            "lam": self.lam,
            "hurst": self.hurst,
            "k_max": self.k_max,
            "infinite": self.infinite,
        }
        fields.update(changes)
        return SupouSpec(**fields)

    def to_dict(self) -> dict:
        return {
            "family": self.family.to_dict(),
            "lambda": self.lam,
            "hurst": self.hurst,
            "k_max": self.k_max,
            "infinite": self.infinite,
        }


# -- covariance and the slowly varying function -------------------------------


def _tail_cut(spec: SupouSpec) -> float:
    # remainder over k > k_max, in the variable x = lam/u, runs over (0, X]
    return spec.lam / (spec.k_max + 0.5)


def covariance_many(ts, spec: SupouSpec) -> tuple[np.ndarray, np.ndarray]:
    """Covariance ``R(t)`` and its remainder part for an array of lags."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0):
        raise ValueError("covariance lag must be >= 0")
    sched = spec.schedule
    c2 = spec.unit_cumulant(2)
    flat = ts.ravel()
    trunc = np.empty_like(flat)
    chunk = max(1, (1 << 22) // spec.k_max)
    for start in range(0, flat.size, chunk):
        tt = flat[start:start + chunk]
        trunc[start:start + chunk] = np.exp(-np.outer(tt, sched.lam)) @ sched.delta
    trunc *= c2
    tail = np.zeros_like(flat)
    if spec.infinite:
        a = spec.decay
        X = _tail_cut(spec)
        pref = c2 * spec.delta * spec.lam**-a
        zero = flat == 0
        tail[zero] = pref * X**a / a
        tpos = flat[~zero]
        tail[~zero] = pref * tpos**-a * special.gammainc(a, tpos * X) * special.gamma(a)
    return (trunc + tail).reshape(ts.shape), tail.reshape(ts.shape)


def covariance_R(t: float, spec: SupouSpec) -> TailedValue:
    """``R(t) = C_2 sum_k delta_k exp(-lam_k t)`` with the ``k > k_max`` remainder."""
    if t < 0:
        raise ValueError("covariance lag must be >= 0")
    value, tail = covariance_many(np.array([t]), spec)
    return TailedValue(float(value[0]), float(tail[0]))


def slowly_varying_Lstar(t: float, spec: SupouSpec) -> TailedValue:
    """``L*(t) = t**(2(1-H)) R(t)``."""
    if t <= 0:
        raise ValueError("L* is defined for t > 0")
    r = covariance_R(t, spec)
    f = t**spec.decay
    return TailedValue(r.value * f, r.tail * f)


def lstar_limit(spec: SupouSpec) -> float:
    """``lim L*(t) = C_2 delta Gamma(2(1-H)) lam**-(2(1-H))``."""
    a = spec.decay
    return spec.unit_cumulant(2) * spec.delta * special_gamma(a) * spec.lam**-a


def lstar_ratio_bound(spec: SupouSpec) -> float:
    """Uniform bound on ``L*(s)/L*(t)`` over ``s >= 0``, ``t >= 1``.

    The upper bound ``Gamma(a) + exp(-a) a**a`` of the normalised ``L*``
    divided by its lower bound ``gamma(a, lam)`` at ``t = 1``.
    """
    a = spec.decay
    upper = special_gamma(a) + math.exp(-a) * a**a
    lower = special.gammainc(a, spec.lam) * special_gamma(a)
    return upper / lower


def variance_zeta(spec: SupouSpec) -> float:
    """Variance of the untruncated superposition, ``C_2 delta zeta(1 + 2(1-H))``."""
    return spec.unit_cumulant(2) * spec.delta * special_zeta(1.0 + spec.decay)


# -- exact cumulants of partial sums -----------------------------------------


@dataclass(frozen=True)
class ARCoefficients:
    """Weights of the initial value (``b``) and of the innovations (``a``)."""

    n: int
    rho: float
    b: float
    a: np.ndarray  # a[s], s = 0..n-1


def _ar_coefficients_rho(rho: float, n: int) -> ARCoefficients:
    s = np.arange(n)
    a = (1.0 - rho ** (s + 1.0)) / (1.0 - rho)
    b = rho * (1.0 - rho**n) / (1.0 - rho)
    return ARCoefficients(n, rho, b, a)


def ar_coefficients(spec: SupouSpec, k: int, n: int) -> ARCoefficients:
    """Coefficients of the partial sum of component ``k`` (1-based) up to ``n``."""
    if not 1 <= k <= spec.k_max:
        raise ValueError(f"component index must lie in [1, {spec.k_max}]")
    if n < 1:
        raise ValueError("horizon must be >= 1")
    return _ar_coefficients_rho(float(spec.schedule.rho[k - 1]), int(n))


def _jacobi_rule(a: float, nodes: int):
    # Gauss-Jacobi on [0, 1] with weight t**(a-1)
    x, w = special.roots_jacobi(nodes, 0.0, a - 1.0)
    return 0.5 * (x + 1.0), w / 2.0**a


def _power_sums(lam, weight, n, max_order):
    """Kernel sums with ``a`` and ``b`` divided by ``n`` (order ``m`` is scaled by ``n**-m``)."""
    return kernels.cumulant_sums(np.ascontiguousarray(lam), np.ascontiguousarray(weight), int(n), max_order, float(n))


def _scale_back(scaled: float, m: int, n: int) -> float:
    if scaled == 0.0:
        return 0.0
    logv = math.log(abs(scaled)) + m * math.log(n)
    if logv > 709.0:
        raise OverflowError(f"cumulant of order {m} at n={n} exceeds double range")
    return math.copysign(math.exp(logv), scaled)


def exact_cumulants(spec: SupouSpec, orders: Sequence[int], n: int) -> dict[int, TailedValue]:
    """Exact cumulants of the centred partial sum ``S(n) - E S(n)``.

    ``kappa_m = C_m sum_k delta_k [b_k^m + (1 - rho_k^m) sum_{s<n} a_{s,k}^m]``,
    evaluated in ``O(n k_max)`` with the recursion ``a_s = 1 + rho a_{s-1}``.
    """
    orders = sorted({int(m) for m in orders})
    if not orders or orders[0] < 2:
        raise ValueError("cumulant orders must be >= 2")
    if n < 1:
        raise ValueError("horizon must be >= 1")
    n = int(n)
    max_order = orders[-1]
    sched = spec.schedule
    trunc = _power_sums(sched.lam, sched.delta, n, max_order)
    tail = np.zeros(max_order)
    tail_err = np.zeros(max_order)
    if spec.infinite:
        a = spec.decay
        X = _tail_cut(spec)
        pref = spec.delta * spec.lam**-a * X**a
        t, w = _jacobi_rule(a, _TAIL_NODES)
        tail = pref * _power_sums(X * t, w, n, max_order)
        t2, w2 = _jacobi_rule(a, _TAIL_NODES // 2)
        tail_err = np.abs(tail - pref * _power_sums(X * t2, w2, n, max_order))
    out = {}
    for m in orders:
        cm = spec.unit_cumulant(m)
        total = _scale_back(cm * (trunc[m - 1] + tail[m - 1]), m, n)
        tl = _scale_back(cm * tail[m - 1], m, n)
        err = _scale_back(cm * tail_err[m - 1], m, n)
        out[m] = TailedValue(total, tl, err)
    return out


def exact_cumulant(spec: SupouSpec, m: int, n: int) -> TailedValue:
    """Exact ``m``-th cumulant (``m >= 2``) of the centred partial sum at ``n``."""
    return exact_cumulants(spec, [m], n)[m]


def brute_force_cumulant(spec: SupouSpec, m: int, n: int) -> float:
    """Term-by-term evaluation of the truncated cumulant sum (no recursion, no remainder).

    Intended as a reference for small ``n`` and ``k_max``.
    """
    cm = spec.unit_cumulant(m)
    total = 0.0
    for k in range(1, spec.k_max + 1):
        rho = math.exp(-spec.lam / k)
        delta = spec.delta * k ** -(1.0 + spec.decay)
        b = sum(rho**i for i in range(1, n + 1))
        innov = 0.0
        for j in range(1, n + 1):
            a = sum(rho**i for i in range(0, n - j + 1))
            innov += a**m
        total += delta * (b**m + (1.0 - rho**m) * innov)
    return cm * total


def partial_sum_variance_exact(spec: SupouSpec, n: int) -> TailedValue:
    """``Var S(n) = n R(0) + 2 sum_{j<n} (n-j) R(j)``, built from the covariance."""
    if n < 1:
        raise ValueError("horizon must be >= 1")
    n = int(n)
    j = np.arange(n, dtype=float)
    r, tail = covariance_many(j, spec)
    w = 2.0 * (n - j)
    w[0] = n
    return TailedValue(float(w @ r), float(w @ tail))


# -- asymptotic constants ----------------------------------------------------


@dataclass(frozen=True)
class DConstant:
    """``D_m = D_{m,I} + D_{m,II}`` with an independent quadrature estimate."""

    m: int
    hurst: float
    value: float
    part_I: float
    part_II: float
    quad_value: float = math.nan
    quad_error: float = math.nan


def _falling(a: float, r: int) -> float:
    out = 1.0
    for i in range(1, r + 1):
        out *= i - a
    return out


def _d_parts_closed(m: int, hurst: float) -> tuple[float, float]:
    # m-fold antiderivative of s**-a is s**(m-a) / prod_{i<=m}(i - a); the
    # cube integral of f(x_1 + ... + x_m) is the m-th forward difference of it
    a = 2.0 * (1.0 - hurst)
    part_I = sum((-1) ** (m - j) * math.comb(m, j) * j ** (m - a) for j in range(m + 1)) / _falling(a, m)
    r = m - 1
    diff = sum(
        (-1) ** (r - j) * math.comb(r, j) * (j ** (r - a) - (j + 1) ** (r - a)) for j in range(r + 1)
    )
    part_II = m * diff / (_falling(a, r) * (m - a))
    return part_I, part_II


def quadrature_D(m: int, hurst: float, points: tuple[int, int] = (1 << 16, 1 << 18), seed: int = 20240601):
    """Numerical ``(D_I, D_II, error)`` without the family factor.

    ``m = 2`` uses adaptive 2-D quadrature; ``m >= 3`` uses scrambled Sobol
    points at two sample sizes, the error being their difference.
    """
    a = 2.0 * (1.0 - hurst)
    e = 2.0 * hurst - 2.0
    if m == 2:
        i1, e1 = integrate.dblquad(lambda y, x: (x + y) ** e, 0.0, 1.0, 0.0, 1.0, epsabs=1e-11, epsrel=1e-10)
        i2, e2 = integrate.dblquad(
            lambda y, x: y**e - (y + 1.0 - x) ** e,
            0.0, 1.0, 0.0, lambda x: 1.0 - x, epsabs=1e-11, epsrel=1e-10,
        )
        return i1, 2.0 * i2, e1 + 2.0 * e2

    def estimate(npts: int) -> tuple[float, float]:
        sob = qmc.Sobol(d=m, scramble=True, seed=seed)
        u = sob.random(npts)
        # avoid the exact origin of the unit cube
        u = np.clip(u, 1e-300, None)
        d1 = float(np.mean(u.sum(axis=1) ** -a))
        x = u[:, 0]
        c = 1.0 - x
        ysum = c * u[:, 1:].sum(axis=1)
        vals = (ysum**e - (ysum + c) ** e) * c ** (m - 1)
        d2 = m * float(np.mean(vals))
        return d1, d2

    small, large = points
    s1, s2 = estimate(small)
    l1, l2 = estimate(large)
    err = abs(l1 - s1) + abs(l2 - s2)
    return l1, l2, err


def asymptotic_constant_D(
    m: int,
    hurst: float,
    family: MarginalFamily | None = None,
    *,
    check: bool = False,
    rtol: float | None = None,
) -> DConstant:
    """Constant of ``kappa_{m,n} ~ D_m L*(n) n**(m - 2(1-H))``.

    Computed in closed form for every ``m``; with ``check=True`` an
    independent quadrature is run and a disagreement beyond ``rtol`` raises
    :class:`QuadratureError`.  ``family`` supplies the factor ``C_m/C_2``
    (1 when omitted).
    """
    if not 2 <= m <= 16:
        raise ValueError("D_m is available for 2 <= m <= 16")
    if not 0.5 < hurst < 1.0:
        raise ValueError("hurst out of (0.5,1)")
    ratio = 1.0 if family is None else family.cumulant(m) / family.cumulant(2)
    p1, p2 = _d_parts_closed(m, hurst)
    qv, qe = math.nan, math.nan
    if check:
        q1, q2, qe = quadrature_D(m, hurst)
        qv = ratio * (q1 + q2)
        qe = ratio * qe
        tol = rtol if rtol is not None else (1e-8 if m == 2 else 2e-3)
        if abs(qv - ratio * (p1 + p2)) > tol * abs(ratio * (p1 + p2)):
            raise QuadratureError(
                f"D_{m}(H={hurst}): quadrature {qv:.8g} disagrees with closed form "
                f"{ratio * (p1 + p2):.8g} beyond rtol={tol:g}"
            )
    return DConstant(m, hurst, ratio * (p1 + p2), ratio * p1, ratio * p2, qv, qe)


def asymptotic_cumulant(spec: SupouSpec, m: int, n: int) -> float:
    """``D_m L*(n) n**(m - 2(1-H))`` with ``L*`` evaluated exactly at ``n``."""
    if m < 2 or n < 1:
        raise ValueError("need m >= 2 and n >= 1")
    d = asymptotic_constant_D(m, spec.hurst, spec.family).value
    return d * slowly_varying_Lstar(n, spec).value * float(n) ** (m - spec.decay)


@dataclass(frozen=True)
class CumulantReport:
    grid: tuple[int, ...]
    orders: tuple[int, ...]
    k_max: tuple[int, ...]  # per horizon
    exact: np.ndarray  # [order, horizon]
    asymptotic: np.ndarray
    tail_bound: np.ndarray

    @property
    def ratio(self) -> np.ndarray:
        return self.exact / self.asymptotic

    def rows(self):
        for i, m in enumerate(self.orders):
            for j, n in enumerate(self.grid):
                yield {
                    "m": m,
                    "n": n,
                    "k_max": self.k_max[j],
                    "exact": self.exact[i, j],
                    "asymptotic": self.asymptotic[i, j],
                    "ratio": self.ratio[i, j],
                    "tail_bound": self.tail_bound[i, j],
                }


def cumulant_report(
    spec: SupouSpec,
    orders: Sequence[int],
    grid: Sequence[int],
    k_max_per_n: int | None = None,
    threads: int = 1,
) -> CumulantReport:
    """Exact and asymptotic cumulants over a grid of horizons.

    With ``k_max_per_n`` the truncation grows with the horizon,
    ``k_max = k_max_per_n * n``.  Grid points are independent and may run
    on several threads; results are merged by index.
    """
    orders = tuple(sorted({int(m) for m in orders}))
    grid = tuple(int(n) for n in grid)

    def one(n):
        s = spec.replace(k_max=k_max_per_n * n) if k_max_per_n else spec
        ex = exact_cumulants(s, orders, n)
        lstar = slowly_varying_Lstar(n, s).value
        asy = [asymptotic_constant_D(m, s.hurst, s.family).value * lstar * float(n) ** (m - s.decay) for m in orders]
        return s.k_max, [ex[m].value for m in orders], asy, [ex[m].tail_bound for m in orders]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, grid))
    else:
        results = [one(n) for n in grid]
    kmaxes = tuple(r[0] for r in results)
    exact = np.array([r[1] for r in results]).T
    asym = np.array([r[2] for r in results]).T
    tails = np.array([r[3] for r in results]).T
    return CumulantReport(grid, orders, kmaxes, exact, asym, tails)


# -- scaling function ---------------------------------------------------------


def theoretical_tau(q: int, hurst: float) -> float:
    """``tau(q) = q - 2(1-H)`` for even ``q >= 2``."""
    if int(q) != q or q < 2 or q % 2:
        raise ValueError("theoretical tau is available for even integer q >= 2 only")
    if not 0.5 < hurst < 1.0:
        raise ValueError("hurst out of (0.5,1)")
    return q - 2.0 * (1.0 - hurst)


def tau_over_q_increasing(p: int, r: int, hurst: float) -> bool:
    """Whether ``tau(p)/p < tau(r)/r``."""
    return theoretical_tau(p, hurst) / p < theoretical_tau(r, hurst) / r


@dataclass(frozen=True)
class ScalingFunction:
    hurst: float
    q: tuple[int, ...]
    tau: tuple[float, ...]
    q_bar: float = math.inf  # no appendix family has a finite moment bound

    def tau_over_q_nondecreasing(self) -> bool:
        r = [t / q for q, t in zip(self.q, self.tau)]
        return all(x <= y for x, y in zip(r, r[1:]))

    def is_convex(self, tol: float = 1e-12) -> bool:
        q, t = self.q, self.tau
        for i in range(1, len(q) - 1):
            w = (q[i] - q[i - 1]) / (q[i + 1] - q[i - 1])
            if t[i] > (1 - w) * t[i - 1] + w * t[i + 1] + tol:
                return False
        return True


def scaling_function(hurst: float, qs: Sequence[int] = (2, 4, 6)) -> ScalingFunction:
    qs = tuple(int(q) for q in qs)
    return ScalingFunction(hurst, qs, tuple(theoretical_tau(q, hurst) for q in qs))


# -- CLT norming ---------------------------------------------------------------


class NormingConstants(NamedTuple):
    c_paper: float
    c_exact: float


def clt_norming(components: Sequence[tuple[float, float]], n: int) -> NormingConstants:
    """Norming constants for ``(S_K(n) - E S_K(n)) / (c sqrt(n))``.

    ``components`` holds ``(variance, lam_k)`` pairs.  ``c_paper`` uses the
    factor ``(1 - e^{-lam})/(1 + e^{-lam})``; ``c_exact`` is
    ``sqrt(Var S_K(n) / n)`` from the exact AR(1) covariances, whose limit has
    the reciprocal factor.
    """
    if not components:
        raise ValueError("need at least one component")
    if n < 1:
        raise ValueError("horizon must be >= 1")
    h = np.arange(1, n, dtype=float)
    printed = 0.0
    exact = 0.0
    for var, lam in components:
        if not (var >= 0 and math.isfinite(var)):
            raise ValueError("component variances must be finite and >= 0")
        if not lam > 0:
            raise ValueError("component rates must be > 0")
        rho = math.exp(-lam)
        printed += var * (1.0 - rho) / (1.0 + rho)
        exact += var * (1.0 + 2.0 * float(np.sum((1.0 - h / n) * rho**h)))
    return NormingConstants(math.sqrt(printed), math.sqrt(exact))


# -- moments from cumulants --------------------------------------------------


def central_moment_from_cumulants(kappa: dict[int, float], q: int) -> float:
    """Central moment of order ``q`` from cumulants ``kappa[2..q]`` (``kappa_1 = 0``)."""
    mu = [1.0] + [0.0] * q
    for r in range(1, q + 1):
        acc = 0.0
        for j in range(2, r + 1):
            acc += math.comb(r - 1, j - 1) * kappa[j] * mu[r - j]
        mu[r] = acc
    return mu[q]


# -- golden files ------------------------------------------------------------

GOLDEN_COLUMNS = ("H", "lambda", "family", "m", "n", "exact_cumulant", "tail_bound", "k_max")


def _family_token(family: MarginalFamily) -> str:
    return family.kind + ":" + ";".join(f"{k}={v!r}" for k, v in family.params.items())


def _parse_family(token: str) -> MarginalFamily:
    kind, _, rest = token.partition(":")
    params = dict(item.split("=", 1) for item in rest.split(";") if item)
    return make_family(kind, **{k: float(v) for k, v in params.items()})


def write_golden(path, specs_and_points) -> None:
    """Write ``(spec, m, n)`` triples with their exact cumulants as CSV."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(GOLDEN_COLUMNS)
        for spec, m, n in specs_and_points:
            val = exact_cumulant(spec, m, n)
            w.writerow([
                repr(spec.hurst), repr(spec.lam), _family_token(spec.family), m, n,
                repr(val.value), repr(val.tail_bound), spec.k_max,
            ])


def read_golden(path) -> list[tuple[SupouSpec, int, int, float, float]]:
    """Read a golden CSV back into ``(spec, m, n, exact, tail_bound)`` tuples.

    Specs are finite when ``tail_bound`` is zero and infinite otherwise.
    """
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != GOLDEN_COLUMNS:
            raise ValueError(f"golden file header must be {GOLDEN_COLUMNS}")
        for row in reader:
            tail = float(row["tail_bound"])
            spec = SupouSpec(
                _parse_family(row["family"]),
                lam=float(row["lambda"]),
                hurst=float(row["H"]),
                k_max=int(row["k_max"]),
                infinite=tail > 0.0,
            )
            out.append((spec, int(row["m"]), int(row["n"]), float(row["exact_cumulant"]), tail))
    return out
