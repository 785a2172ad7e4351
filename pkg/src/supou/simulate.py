"""Monte Carlo simulation of OU type components and their superpositions.

Each component is simulated at integer times through its AR(1) form
``X(i) = rho X(i-1) + W(i)`` started from the stationary law, which is
exact in law at integer times.  For Gamma marginals the innovation is the
compound Poisson sum ``W = sum_{j<=N} rho**U_j J_j`` with
``N ~ Poisson(alpha*log(1/rho))``, ``U_j`` uniform and ``J_j`` exponential
with rate ``beta``; over a whole horizon this is the same as throwing
``Poisson(alpha*lam*n)`` jumps uniformly on ``(0, n]`` and discounting each
one to the end of its unit interval.  Other families use a shifted-gamma
surrogate matched to the first three innovation cumulants and are flagged
as approximate.

Random streams are Philox counter-based generators keyed on
``(master_seed, stream_id)``, so replication ``r`` draws the same numbers
whatever the number of worker threads.
"""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import kernels
from .analytics import Component, SupouSpec
from .marginals import (
    Gamma,
    InverseGaussian,
    MarginalFamily,
    NormalInverseGaussian,
    TemperedStable,
    VarianceGamma,
)

__all__ = [
    "ApproximateSamplerWarning",
    "RngStream",
    "PathSample",
    "Ensemble",
    "sample_stationary",
    "sample_innovation",
    "innovation_is_exact",
    "simulate_superposition",
    "replicate",
]

Model = Union[SupouSpec, Sequence[Component]]

_U64 = (1 << 64) - 1


class ApproximateSamplerWarning(UserWarning):
    """Draws come from a moment-matched surrogate, not the exact law."""


@dataclass(frozen=True)
class RngStream:
    """Independent random stream identified by ``(master_seed, stream_id)``."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v <= _U64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer")

    @property
    def key(self) -> int:
        return (int(self.master_seed) << 64) | int(self.stream_id)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError("rng must be a numpy Generator or an RngStream")


# -- stationary laws ---------------------------------------------------------


def _positive_stable(rng, kappa: float, c: float, size) -> np.ndarray:
    """Draws with Laplace transform ``exp(-c u**kappa)`` (Kanter's representation)."""
    u = rng.uniform(0.0, math.pi, size)
    e = rng.exponential(1.0, size)
    a = np.sin(kappa * u) / np.sin(u) ** (1.0 / kappa)
    b = (np.sin((1.0 - kappa) * u) / e) ** ((1.0 - kappa) / kappa)
    return c ** (1.0 / kappa) * a * b


def _tempered_stable(rng, fam: TemperedStable, size: int) -> np.ndarray:
    if fam.kappa == 0.5:
        return rng.wald(fam.delta / fam.gamma, fam.delta**2, size)
    # exact: sum of `parts` iid pieces, each an exponentially tilted stable
    # drawn by rejection with acceptance probability exp(-delta*gamma/parts)
    parts = max(1, math.ceil(fam.delta * fam.gamma))
    c = fam.delta / parts * 2.0**fam.kappa
    theta = fam.tilt / 2.0
    need = size * parts
    out = np.empty(0)
    while out.size < need:
        batch = max(64, int(1.7 * (need - out.size)) + 16)
        s = _positive_stable(rng, fam.kappa, c, batch)
        keep = rng.uniform(size=batch) <= np.exp(-theta * s)
        out = np.concatenate([out, s[keep]])
    return out[:need].reshape(size, parts).sum(axis=1)


def _stationary_scaled(base: MarginalFamily, scales: np.ndarray, rng) -> np.ndarray:
    """One draw per entry of ``scales`` from ``base.with_scale(scale)``."""
    r = scales / base.scale
    if isinstance(base, Gamma):
        return rng.gamma(base.alpha * r, 1.0 / base.beta)
    if isinstance(base, InverseGaussian):
        d = base.delta * r
        return rng.wald(d / base.gamma, d**2)
    if isinstance(base, VarianceGamma):
        g = rng.gamma(2.0 * base.kappa * r, 2.0 / base.gamma**2)
        return base.mu * r + base.beta * g + np.sqrt(g) * rng.standard_normal(scales.size)
    if isinstance(base, NormalInverseGaussian):
        if base.gamma == 0.0:
            raise ValueError("normal_inverse_gaussian with alpha == |beta| cannot be sampled")
        d = base.delta * r
        v = rng.wald(d / base.gamma, d**2)
        return base.mu * r + base.beta * v + np.sqrt(v) * rng.standard_normal(scales.size)
    if isinstance(base, TemperedStable):
        out = np.empty(scales.size)
        uniq, inv = np.unique(scales, return_inverse=True)
        for j, s in enumerate(uniq):
            sel = np.flatnonzero(inv == j)
            out[sel] = _tempered_stable(rng, base.with_scale(float(s)), sel.size)
        return out
    raise TypeError(f"no sampler for {type(base).__name__}")


def sample_stationary(family: MarginalFamily, rng, size: int | None = None):
    """Draw from the marginal law of ``family``.

    All five families are sampled exactly: Gamma directly, IG through the
    Wald law, VG and NIG as normal variance-mean mixtures, TS by tilted
    stable rejection (IG when ``kappa = 1/2``).
    """
    gen = _as_generator(rng)
    n = 1 if size is None else int(size)
    out = _stationary_scaled(family, np.full(n, family.scale), gen)
    return float(out[0]) if size is None else out


# -- innovations --------------------------------------------------------------


def innovation_is_exact(family: MarginalFamily) -> bool:
    return isinstance(family, Gamma)


def _check_rho(rho: float) -> None:
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")


def _gamma_innovations(fam: Gamma, rho: float, gen, size: int) -> np.ndarray:
    counts = gen.poisson(fam.alpha * -math.log(rho), size)
    total = int(counts.sum())
    jumps = rho ** gen.uniform(size=total) * gen.exponential(1.0 / fam.beta, total)
    owner = np.repeat(np.arange(size), counts)
    return np.bincount(owner, weights=jumps, minlength=size)


def _surrogate_params(family: MarginalFamily, rho: float):
    k1, k2, k3 = (family.cumulant(m) * (1.0 - rho**m) for m in (1, 2, 3))
    if abs(k3) <= 1e-12 * k2**1.5:
        return k1, k2, 0.0, 0.0
    sign = math.copysign(1.0, k3)
    theta = abs(k3) / (2.0 * k2)
    shape = k2 / theta**2
    return k1 - sign * shape * theta, k2, shape, sign * theta


def _surrogate_draws(params, gen, size: int) -> np.ndarray:
    shift, var, shape, theta = params
    if shape == 0.0:
        return shift + math.sqrt(var) * gen.standard_normal(size)
    return shift + theta * gen.gamma(shape, 1.0, size)


def sample_innovation(family: MarginalFamily, rho: float, rng, size: int | None = None):
    """Draw the AR(1) innovation ``W`` with ``cgf(W)(u) = cgf(X)(u) - cgf(X)(rho u)``.

    Exact for Gamma.  Other families get a shifted (possibly reflected)
    gamma matching the innovation mean, variance and third cumulant; an
    :class:`ApproximateSamplerWarning` is issued.
    """
    _check_rho(rho)
    gen = _as_generator(rng)
    n = 1 if size is None else int(size)
    if isinstance(family, Gamma):
        out = _gamma_innovations(family, rho, gen, n)
    else:
        warnings.warn(
            f"{family.kind} innovations use a moment-matched surrogate", ApproximateSamplerWarning, stacklevel=2
        )
        out = _surrogate_draws(_surrogate_params(family, rho), gen, n)
    return float(out[0]) if size is None else out


# -- paths ----------------------------------------------------------------------


@dataclass
class PathSample:
    """One simulated path and its centred partial sums."""

    values: np.ndarray
    centered_partial_sums: np.ndarray
    mean: float
    replication_id: int = 0
    exact: bool = True

    @property
    def n(self) -> int:
        return self.values.size


def _components(model: Model) -> list[Component]:
    if isinstance(model, SupouSpec):
        return model.components()
    comps = [c if isinstance(c, Component) else Component(*c) for c in model]
    if not comps:
        raise ValueError("a superposition needs at least one component")
    for c in comps:
        if not c.lam > 0:
            raise ValueError("component rates must be > 0")
    return comps


def _grouped(comps: list[Component]):
    groups = defaultdict(list)
    for idx, c in enumerate(comps):
        groups[c.family.with_scale(1.0)].append(idx)
    return groups


def _gamma_horizon_jumps(fam: Gamma, scales, lam, idx, n: int, gen):
    """Jumps of the driving processes of Gamma components over ``(0, n]``."""
    shape = fam.alpha * scales / fam.scale
    counts = gen.poisson(shape * lam * n)
    total = int(counts.sum())
    owner = np.repeat(np.arange(len(idx)), counts)
    tau = gen.uniform(0.0, n, total)
    size = gen.exponential(1.0 / fam.beta, total)
    step = np.maximum(np.ceil(tau), 1.0)
    value = size * np.exp(-lam[owner] * (step - tau))
    return np.asarray(idx)[owner], step.astype(np.int64), value


@dataclass
class _Plan:
    comps: list
    lam: np.ndarray
    rho: np.ndarray
    groups: list  # (base family, component indices, scales)
    mean: float


def _plan(model) -> _Plan:
    if isinstance(model, _Plan):
        return model
    comps = _components(model)
    lam = np.array([c.lam for c in comps], dtype=float)
    groups = [
        (base, np.array(idx), np.array([comps[i].family.scale for i in idx], dtype=float))
        for base, idx in _grouped(comps).items()
    ]
    mean = float(math.fsum(c.family.mean() for c in comps))
    return _Plan(comps, lam, np.exp(-lam), groups, mean)


def simulate_superposition(model: Model, n: int, rng, replication_id: int = 0) -> PathSample:
    """Simulate ``X(1..n)`` of a (truncated) superposition and its centred partial sums.

    Centring uses the analytic mean of the components, never the sample mean.
    """
    if n < 1:
        raise ValueError("horizon must be >= 1")
    n = int(n)
    gen = _as_generator(rng)
    plan = _plan(model)
    K = len(plan.comps)
    x0 = np.empty(K)
    comp_ids, steps, vals = [], [], []
    exact = True
    for base, idx, scales in plan.groups:
        x0[idx] = _stationary_scaled(base, scales, gen)
        if isinstance(base, Gamma):
            c, s, v = _gamma_horizon_jumps(base, scales, plan.lam[idx], idx, n, gen)
        else:
            exact = False
            warnings.warn(
                f"{base.kind} innovations use a moment-matched surrogate", ApproximateSamplerWarning, stacklevel=2
            )
            c = np.repeat(idx, n)
            s = np.tile(np.arange(1, n + 1, dtype=np.int64), len(idx))
            v = np.concatenate([
                _surrogate_draws(_surrogate_params(plan.comps[i].family, float(plan.rho[i])), gen, n) for i in idx
            ])
        comp_ids.append(c)
        steps.append(s)
        vals.append(v)
    comp_ids = np.concatenate(comp_ids).astype(np.int64)
    steps = np.concatenate(steps).astype(np.int64)
    vals = np.concatenate(vals).astype(float)
    order = np.lexsort((steps, comp_ids))
    comp_ids, steps, vals = comp_ids[order], steps[order], vals[order]
    ptr = np.zeros(K + 1, dtype=np.int64)
    np.cumsum(np.bincount(comp_ids, minlength=K), out=ptr[1:])
    values = kernels.superpose(plan.rho, x0, ptr, steps, vals, n)
    centred = np.cumsum(values - plan.mean)
    return PathSample(values, centred, plan.mean, replication_id, exact)


# -- replication --------------------------------------------------------------


@dataclass
class Ensemble:
    """Centred partial sums of ``R`` independent replications at a set of horizons."""

    master_seed: int
    horizons: tuple[int, ...]
    replication_ids: np.ndarray
    partial_sums: np.ndarray  # shape (R, len(horizons))
    exact: bool = True
    paths: list[PathSample] = field(default_factory=list)

    @property
    def terminal(self) -> np.ndarray:
        return self.partial_sums[:, -1]

    def at(self, n: int) -> np.ndarray:
        return self.partial_sums[:, self.horizons.index(int(n))]


def replicate(
    model: Model,
    n: int,
    replications: int,
    master_seed: int,
    horizons: Sequence[int] | None = None,
    threads: int = 1,
    keep_paths: bool = False,
) -> Ensemble:
    """Run ``replications`` independent paths of length ``n``.

    Replication ``r`` uses ``RngStream(master_seed, r)``; results are stored
    by replication index so the ensemble does not depend on ``threads``.
    ``horizons`` (default ``(n,)``) selects where partial sums are recorded.
    """
    if replications < 1:
        raise ValueError("need at least one replication")
    horizons = tuple(sorted({int(h) for h in (horizons or (n,))}))
    if horizons[0] < 1 or horizons[-1] > n:
        raise ValueError("horizons must lie in [1, n]")
    cols = np.array(horizons) - 1
    plan = _plan(model)

    def run(r: int):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ApproximateSamplerWarning)
            return simulate_superposition(plan, n, RngStream(master_seed, r), replication_id=r)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            paths = list(pool.map(run, range(replications)))
    else:
        paths = [run(r) for r in range(replications)]
    sums = np.stack([p.centered_partial_sums[cols] for p in paths])
    exact = all(p.exact for p in paths)
    if not exact:
        warnings.warn("ensemble uses approximate innovations", ApproximateSamplerWarning, stacklevel=2)
    return Ensemble(
        master_seed,
        horizons,
        np.arange(replications),
        sums,
        exact,
        paths if keep_paths else [],
    )
