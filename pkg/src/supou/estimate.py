"""Estimators over replicated ensembles: k-statistics, absolute moments,
log-log scaling fits, intermittency verdicts and normality diagnostics.

Replications are iid, so standard errors come from the leave-one-out
jackknife throughout; only the normality report uses the bootstrap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .analytics import SupouSpec, central_moment_from_cumulants, exact_cumulants

__all__ = [
    "Estimate",
    "ScalingFit",
    "IntermittencyVerdict",
    "NormalityReport",
    "k_statistics",
    "empirical_abs_moment",
    "fit_scaling",
    "fit_scaling_ensemble",
    "intermittency_check",
    "normality_diagnostics",
    "exact_moment_curve",
    "Z_THRESHOLD",
]

Z_THRESHOLD = 3.0
MIN_HORIZONS = 4
MIN_DECADES = 1.8


@dataclass(frozen=True)
class Estimate:
    value: float
    se: float


def _jackknife_se(leave_one_out: np.ndarray) -> float:
    n = leave_one_out.size
    dev = leave_one_out - leave_one_out.mean()
    return math.sqrt((n - 1) / n * float(dev @ dev))


def _kstat_from_sums(n, s1, s2, s3, s4, m):
    if m == 1:
        return s1 / n
    if m == 2:
        return (n * s2 - s1**2) / (n * (n - 1))
    if m == 3:
        return (2 * s1**3 - 3 * n * s1 * s2 + n**2 * s3) / (n * (n - 1) * (n - 2))
    num = (
        -6 * s1**4
        + 12 * n * s1**2 * s2
        - 3 * n * (n - 1) * s2**2
        - 4 * n * (n + 1) * s1 * s3
        + n**2 * (n + 1) * s4
    )
    return num / (n * (n - 1) * (n - 2) * (n - 3))


def k_statistics(samples, m: int) -> Estimate:
    """Unbiased k-statistic of order ``m <= 4`` with a jackknife standard error.

    Needs at least 10 samples for ``m <= 2`` and 100 for ``m`` in {3, 4}.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if m not in (1, 2, 3, 4):
        raise ValueError("k-statistics are available for orders 1..4")
    need = 10 if m <= 2 else 100
    if x.size < need:
        raise ValueError(f"k-statistic of order {m} needs at least {need} samples, got {x.size}")
    n = x.size
    shift = x.mean()
    # centring keeps the power sums well conditioned; k_m (m >= 2) is shift invariant
    y = x - shift
    p = [y, y * y, y**3, y**4]
    sums = [float(v.sum()) for v in p]
    value = _kstat_from_sums(float(n), *sums, m)
    loo = _kstat_from_sums(float(n - 1), *(s - v for s, v in zip(sums, p)), m)
    if m == 1:
        value += shift
        loo = loo + shift
    return Estimate(float(value), _jackknife_se(np.asarray(loo)))


def empirical_abs_moment(samples, q: float) -> Estimate:
    """``mean(|x|**q)`` with a jackknife standard error."""
    if not q > 0:
        raise ValueError("moment order must be > 0")
    x = np.abs(np.asarray(samples, dtype=float).ravel())
    if x.size < 2:
        raise ValueError("need at least two samples")
    p = x**q
    total = float(p.sum())
    n = p.size
    loo = (total - p) / (n - 1)
    return Estimate(total / n, _jackknife_se(loo))


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares slope of ``log E|Y(n)|^q`` against ``log n``."""

    q: float
    n: tuple[int, ...]
    log_n: tuple[float, ...]
    log_moment: tuple[float, ...]
    slope: float
    intercept: float
    slope_se: float
    r2: float
    moment_se: tuple[float, ...] = ()
    residual_se: float = 0.0

    @property
    def tau_over_q(self) -> float:
        return self.slope / self.q

    def rows(self):
        for i, n in enumerate(self.n):
            yield {
                "q": self.q,
                "n": n,
                "log_n": self.log_n[i],
                "log_moment": self.log_moment[i],
                "moment": math.exp(self.log_moment[i]),
                "moment_se": self.moment_se[i] if self.moment_se else 0.0,
            }

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "tau_hat": self.slope,
            "intercept": self.intercept,
            "slope_se": self.slope_se,
            "residual_se": self.residual_se,
            "r2": self.r2,
            "n": list(self.n),
        }


def _check_grid(n: np.ndarray, min_decades: float) -> None:
    if n.size < MIN_HORIZONS or np.unique(n).size != n.size:
        raise ValueError(f"scaling fit needs at least {MIN_HORIZONS} distinct horizons")
    if np.any(n < 1):
        raise ValueError("horizons must be >= 1")
    span = math.log10(n.max() / n.min())
    if span < min_decades:
        raise ValueError(f"horizon grid spans {span:.2f} decades; at least {min_decades} required")


def _ols(x: np.ndarray, y: np.ndarray):
    xm = x.mean()
    sxx = float(((x - xm) ** 2).sum())
    coef = (x - xm) / sxx
    slope = float(coef @ y)
    intercept = float(y.mean() - slope * xm)
    resid = y - (intercept + slope * x)
    rss = float(resid @ resid)
    dof = x.size - 2
    se = math.sqrt(rss / dof / sxx) if dof > 0 else 0.0
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    return slope, intercept, se, r2, coef


def fit_scaling(
    horizons: Sequence[int],
    moments: Sequence[float],
    q: float,
    moment_se: Sequence[float] | None = None,
    min_decades: float = MIN_DECADES,
) -> ScalingFit:
    """Fit ``tau(q)`` from a moment curve given directly (e.g. computed exactly).

    The slope standard error is the ordinary least-squares one.
    """
    n = np.asarray(horizons, dtype=float)
    mom = np.asarray(moments, dtype=float)
    if n.shape != mom.shape:
        raise ValueError("horizons and moments must have the same length")
    _check_grid(n, min_decades)
    if np.any(mom <= 0) or not np.all(np.isfinite(mom)):
        raise ValueError("moments must be finite and > 0")
    x, y = np.log(n), np.log(mom)
    slope, intercept, se, r2, _ = _ols(x, y)
    return ScalingFit(
        float(q),
        tuple(int(v) for v in n),
        tuple(x.tolist()),
        tuple(y.tolist()),
        slope,
        intercept,
        se,
        r2,
        tuple(moment_se) if moment_se is not None else (),
        se,
    )


def fit_scaling_ensemble(
    horizons: Sequence[int],
    partial_sums: np.ndarray,
    q: float,
    min_decades: float = MIN_DECADES,
) -> ScalingFit:
    """Fit ``tau(q)`` from an ensemble of centred partial sums.

    ``partial_sums`` has one row per replication and one column per horizon.
    The slope standard error is the jackknife over replications (the same
    paths feed every horizon, so per-horizon errors are correlated).
    """
    n = np.asarray(horizons, dtype=float)
    ps = np.asarray(partial_sums, dtype=float)
    if ps.ndim != 2 or ps.shape[1] != n.size:
        raise ValueError("partial_sums must have shape (replications, len(horizons))")
    _check_grid(n, min_decades)
    if ps.shape[0] < 10:
        raise ValueError("need at least 10 replications")
    p = np.abs(ps) ** q
    total = p.sum(axis=0)
    R = ps.shape[0]
    mom = total / R
    if np.any(mom <= 0):
        raise ValueError("moments must be > 0")
    mse = [empirical_abs_moment(ps[:, j], q).se for j in range(n.size)]
    x, y = np.log(n), np.log(mom)
    slope, intercept, resid_se, r2, coef = _ols(x, y)
    loo = np.log((total[None, :] - p) / (R - 1)) @ coef
    return ScalingFit(
        float(q),
        tuple(int(v) for v in n),
        tuple(x.tolist()),
        tuple(y.tolist()),
        slope,
        intercept,
        _jackknife_se(loo),
        r2,
        tuple(mse),
        resid_se,
    )


@dataclass(frozen=True)
class IntermittencyVerdict:
    p: float
    r: float
    ratio_p: float
    ratio_r: float
    difference: float
    se: float
    verdict: str  # "intermittent" | "not-detected" | "inconclusive"
    z: float = Z_THRESHOLD

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def intermittency_check(fit_p: ScalingFit, fit_r: ScalingFit, z: float = Z_THRESHOLD) -> IntermittencyVerdict:
    """Compare ``tau(p)/p`` with ``tau(r)/r`` for ``p < r``.

    ``intermittent`` when the increase exceeds ``z`` propagated standard
    errors, ``not-detected`` when there is no increase at all, and
    ``inconclusive`` for an increase inside the error band.
    """
    if not fit_p.q < fit_r.q:
        raise ValueError("intermittency_check needs fit_p.q < fit_r.q")
    a, b = fit_p.tau_over_q, fit_r.tau_over_q
    diff = b - a
    se = math.hypot(fit_p.slope_se / fit_p.q, fit_r.slope_se / fit_r.q)
    if diff > z * se:
        verdict = "intermittent"
    elif diff <= 0.0:
        verdict = "not-detected"
    else:
        verdict = "inconclusive"
    return IntermittencyVerdict(fit_p.q, fit_r.q, a, b, diff, se, verdict, z)


@dataclass(frozen=True)
class NormalityReport:
    n: int
    skewness: float
    excess_kurtosis: float
    ks_distance: float
    ks_critical: float
    ci: dict = field(default_factory=dict)  # statistic -> (low, high)
    alpha: float = 0.01

    @property
    def ks_pass(self) -> bool:
        return self.ks_distance < self.ks_critical

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
            "ks_distance": self.ks_distance,
            "ks_critical": self.ks_critical,
            "alpha": self.alpha,
            "ci": {k: list(v) for k, v in self.ci.items()},
        }


def _skew_kurt(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = z - z.mean(axis=-1, keepdims=True)
    m2 = (d**2).mean(axis=-1)
    return (d**3).mean(axis=-1) / m2**1.5, (d**4).mean(axis=-1) / m2**2 - 3.0


def normality_diagnostics(
    samples,
    loc: float | None = None,
    scale: float | None = None,
    bootstrap: int = 500,
    seed: int = 0,
    alpha: float = 0.01,
) -> NormalityReport:
    """Skewness, excess kurtosis and the KS distance to N(0, 1).

    Samples are standardised by ``loc``/``scale`` when given (the CLT norming),
    otherwise by their own mean and standard deviation.  Percentile bootstrap
    intervals at level 95% accompany each statistic.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 500:
        raise ValueError("normality diagnostics need at least 500 samples")
    loc = float(x.mean()) if loc is None else loc
    scale = float(x.std(ddof=1)) if scale is None else scale
    if not scale > 0:
        raise ValueError("scale must be > 0")
    z = (x - loc) / scale
    skew, kurt = (float(v) for v in _skew_kurt(z))
    ks = float(stats.kstest(z, "norm").statistic)
    crit = float(stats.kstwo.ppf(1.0 - alpha, z.size))
    ci = {}
    if bootstrap:
        rng = np.random.Generator(np.random.Philox(key=seed))
        idx = rng.integers(0, z.size, size=(bootstrap, z.size))
        bz = z[idx]
        bs, bk = _skew_kurt(bz)
        srt = np.sort(bz, axis=1)
        cdf = stats.norm.cdf(srt)
        i = np.arange(1, z.size + 1)
        bks = np.maximum((i / z.size - cdf).max(axis=1), (cdf - (i - 1) / z.size).max(axis=1))
        for name, vals in (("skewness", bs), ("excess_kurtosis", bk), ("ks_distance", bks)):
            lo, hi = np.percentile(vals, [2.5, 97.5])
            ci[name] = (float(lo), float(hi))
    return NormalityReport(z.size, skew, kurt, ks, crit, ci, alpha)


def exact_moment_curve(
    spec: SupouSpec,
    q: int,
    grid: Sequence[int],
    k_max_per_n: int | None = None,
) -> np.ndarray:
    """``E Y(n)^q`` for even ``q`` from exact cumulants, over a horizon grid."""
    if int(q) != q or q < 2 or q % 2:
        raise ValueError("exact moment curves are available for even q >= 2")
    out = []
    for n in grid:
        s = spec.replace(k_max=k_max_per_n * int(n)) if k_max_per_n else spec
        kap = {m: v.value for m, v in exact_cumulants(s, range(2, q + 1), int(n)).items()}
        out.append(central_moment_from_cumulants(kap, int(q)))
    return np.array(out)
