"""Self-decomposable marginal laws and their cumulants.

Five families are supported: Gamma, inverse Gaussian (IG), variance gamma
(VG), normal inverse Gaussian (NIG) and positive tempered stable (TS).  Each
family is closed under convolution in one "scale" parameter, and every
cumulant of order two or more is proportional to it.  That scale is what the
superposition schedule shrinks component by component.

The cumulant generating function is ``log E exp(i*zeta*X)``; cumulants are
``kappa_m = (-i)^m d^m/dzeta^m cgf(0)``, which equals the m-th derivative of
``s -> cgf(-i*s)`` at zero.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

__all__ = [
    "DomainError",
    "MarginalFamily",
    "Gamma",
    "InverseGaussian",
    "VarianceGamma",
    "NormalInverseGaussian",
    "TemperedStable",
    "CumulantVector",
    "FAMILIES",
    "make_family",
    "cgf",
    "cumulant",
    "unit_cumulant",
    "cumulant_vector",
]

# distance below which an argument counts as sitting on a branch cut
BRANCH_TOL = 1e-10


class DomainError(ValueError):
    """Argument outside the strip where the cumulant transform is analytic."""


def _check_cut(w, what: str) -> None:
    w = np.asarray(w, dtype=complex)
    # distance to the principal cut (-inf, 0]
    dist = np.where(w.real <= 0.0, np.abs(w.imag), np.abs(w))
    if np.any(dist < BRANCH_TOL):
        raise DomainError(f"{what}: argument on or within {BRANCH_TOL:g} of the branch cut")


def _log(w, what):
    _check_cut(w, what)
    return np.log(np.asarray(w, dtype=complex))


def _sqrt(w, what):
    _check_cut(w, what)
    return np.sqrt(np.asarray(w, dtype=complex))


def _power(w, p, what):
    return np.exp(p * _log(w, what))


def _scalar(z):
    z = np.asarray(z)
    return complex(z) if z.ndim == 0 else z


@dataclass(frozen=True)
class MarginalFamily:
    """Base class of the marginal families.

    Subclasses are frozen dataclasses whose fields are the family
    parameters.  ``scale_param`` names the convolution parameter that every
    cumulant of order >= 2 is proportional to; ``location_params`` lists
    parameters that add under convolution but do not enter those cumulants.
    """

    kind: ClassVar[str] = ""
    scale_param: ClassVar[str] = ""
    location_params: ClassVar[tuple[str, ...]] = ()

    @property
    def scale(self) -> float:
        return getattr(self, self.scale_param)

    @property
    def params(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}

    def with_scale(self, value: float) -> "MarginalFamily":
        """Copy with the scale parameter set to ``value``.

        Location parameters are rescaled in proportion so that the whole law
        shrinks the way the superposition schedule requires.
        """
        ratio = value / self.scale
        changes = {self.scale_param: value}
        for name in self.location_params:
            changes[name] = getattr(self, name) * ratio
        return dataclasses.replace(self, **changes)

    def cgf(self, zeta):
        """Cumulant transform at (complex) ``zeta``."""
        s = 1j * np.asarray(zeta, dtype=complex)
        return _scalar(self._cgf_s(s))

    def _cgf_s(self, s):
        raise NotImplementedError

    def cumulant(self, m: int) -> float:
        raise NotImplementedError

    def mean(self) -> float:
        return self.cumulant(1)

    def variance(self) -> float:
        return self.cumulant(2)

    def analytic_radius(self) -> float:
        """Distance from 0 to the nearest singularity of ``s -> cgf(-i s)``."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params}


@dataclass(frozen=True)
class Gamma(MarginalFamily):
    """Gamma law with shape ``alpha`` and rate ``beta``."""

    alpha: float
    beta: float

    kind: ClassVar[str] = "gamma"
    scale_param: ClassVar[str] = "alpha"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("gamma: alpha must be > 0")
        if not self.beta > 0:
            raise ValueError("gamma: beta must be > 0")

    def _cgf_s(self, s):
        return -self.alpha * _log(1.0 - s / self.beta, "gamma cgf")

    def cumulant(self, m: int) -> float:
        _check_order(m)
        return self.alpha * math.factorial(m - 1) / self.beta**m

    def analytic_radius(self) -> float:
        return self.beta


@dataclass(frozen=True)
class InverseGaussian(MarginalFamily):
    """Inverse Gaussian law, ``cgf = delta*(gamma - sqrt(gamma^2 - 2 i zeta))``."""

    delta: float
    gamma: float

    kind: ClassVar[str] = "inverse_gaussian"
    scale_param: ClassVar[str] = "delta"

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("inverse_gaussian: delta must be > 0")
        if not self.gamma > 0:
            raise ValueError("inverse_gaussian: gamma must be > 0")

    def _cgf_s(self, s):
        return self.delta * (self.gamma - _sqrt(self.gamma**2 - 2.0 * s, "inverse_gaussian cgf"))

    def cumulant(self, m: int) -> float:
        _check_order(m)
        num = math.factorial(2 * m)
        den = (2 * m - 1) * math.factorial(m) * 2**m
        return self.delta * (num / den) / self.gamma ** (2 * m - 1)

    def analytic_radius(self) -> float:
        return self.gamma**2 / 2.0


@dataclass(frozen=True)
class VarianceGamma(MarginalFamily):
    """Variance gamma law.

    ``cgf = i*mu*zeta + 2*kappa*log(gamma^2 / (alpha^2 - (beta + i zeta)^2))``
    with ``gamma^2 = alpha^2 - beta^2``.  The squared ``gamma`` in the
    numerator is what makes ``cgf(0) = 0``.
    """

    kappa: float
    alpha: float
    beta: float = 0.0
    mu: float = 0.0

    kind: ClassVar[str] = "variance_gamma"
    scale_param: ClassVar[str] = "kappa"
    location_params: ClassVar[tuple[str, ...]] = ("mu",)

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError("variance_gamma: kappa must be > 0")
        if not self.alpha > abs(self.beta):
            raise ValueError("variance_gamma: need alpha > |beta|")

    @property
    def gamma(self) -> float:
        return math.sqrt(self.alpha**2 - self.beta**2)

    def _cgf_s(self, s):
        a, b = self.alpha, self.beta
        # log(alpha^2 - (beta+s)^2) split so the cuts sit at the true singularities
        logs = _log(a - b - s, "variance_gamma cgf") + _log(a + b + s, "variance_gamma cgf")
        return self.mu * s + 2.0 * self.kappa * (2.0 * math.log(self.gamma) - logs)

    def cumulant(self, m: int) -> float:
        _check_order(m)
        a, b = self.alpha, self.beta
        val = 2.0 * self.kappa * math.factorial(m - 1) * ((a - b) ** -m + (-1) ** m * (a + b) ** -m)
        return val + self.mu if m == 1 else val

    def analytic_radius(self) -> float:
        return self.alpha - abs(self.beta)


@dataclass(frozen=True)
class NormalInverseGaussian(MarginalFamily):
    """Normal inverse Gaussian law.

    ``cgf = i*mu*zeta + delta*(gamma - sqrt(alpha^2 - (beta + i zeta)^2))``.
    """

    alpha: float
    beta: float = 0.0
    delta: float = 1.0
    mu: float = 0.0

    kind: ClassVar[str] = "normal_inverse_gaussian"
    scale_param: ClassVar[str] = "delta"
    location_params: ClassVar[tuple[str, ...]] = ("mu",)

    def __post_init__(self):
        if not self.alpha >= abs(self.beta):
            raise ValueError("normal_inverse_gaussian: need alpha >= |beta|")
        if not self.alpha > 0:
            raise ValueError("normal_inverse_gaussian: alpha must be > 0")
        if not self.delta > 0:
            raise ValueError("normal_inverse_gaussian: delta must be > 0")

    @property
    def gamma(self) -> float:
        return math.sqrt(self.alpha**2 - self.beta**2)

    def _cgf_s(self, s):
        a, b = self.alpha, self.beta
        root = _sqrt(a - b - s, "nig cgf") * _sqrt(a + b + s, "nig cgf")
        return self.mu * s + self.delta * (self.gamma - root)

    def cumulant(self, m: int) -> float:
        _check_order(m)
        g = self.gamma
        if g == 0.0:
            raise DomainError("normal_inverse_gaussian with alpha == |beta| has no finite cumulants")
        # Taylor coefficients of sqrt(g^2 - 2 b s - s^2) by the square-root recursion
        p = [g * g, -2.0 * self.beta, -1.0]
        q = [g]
        for k in range(1, m + 1):
            pk = p[k] if k < len(p) else 0.0
            conv = sum(q[i] * q[k - i] for i in range(1, k))
            q.append((pk - conv) / (2.0 * g))
        val = -self.delta * q[m] * math.factorial(m)
        return val + self.mu if m == 1 else val

    def analytic_radius(self) -> float:
        return self.alpha - abs(self.beta)


@dataclass(frozen=True)
class TemperedStable(MarginalFamily):
    """Positive tempered stable law.

    ``cgf = delta*gamma - delta*(gamma^(1/kappa) - 2 i zeta)^kappa`` with
    ``0 < kappa < 1``.  ``kappa = 1/2`` is the inverse Gaussian law.
    """

    kappa: float
    delta: float
    gamma: float

    kind: ClassVar[str] = "tempered_stable"
    scale_param: ClassVar[str] = "delta"

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("tempered_stable: kappa must lie in (0, 1)")
        if not self.delta > 0:
            raise ValueError("tempered_stable: delta must be > 0")
        if not self.gamma > 0:
            raise ValueError("tempered_stable: gamma must be > 0")

    @property
    def tilt(self) -> float:
        """``gamma^(1/kappa)``, twice the exponential tempering rate."""
        return self.gamma ** (1.0 / self.kappa)

    def _cgf_s(self, s):
        c = self.tilt
        return self.delta * self.gamma - self.delta * _power(c - 2.0 * s, self.kappa, "tempered_stable cgf")

    def cumulant(self, m: int) -> float:
        _check_order(m)
        c = self.tilt
        falling = 1.0
        for j in range(m):
            falling *= self.kappa - j
        return -self.delta * self.gamma * (-2.0 / c) ** m * falling

    def analytic_radius(self) -> float:
        return self.tilt / 2.0


FAMILIES: dict[str, type[MarginalFamily]] = {
    cls.kind: cls for cls in (Gamma, InverseGaussian, VarianceGamma, NormalInverseGaussian, TemperedStable)
}


def make_family(kind: str, **params) -> MarginalFamily:
    """Build a family from its ``kind`` string and keyword parameters."""
    try:
        cls = FAMILIES[kind]
    except KeyError:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {sorted(FAMILIES)}") from None
    allowed = {f.name for f in dataclasses.fields(cls)}
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(f"{kind}: unknown parameters {sorted(unknown)}")
    try:
        return cls(**{k: float(v) for k, v in params.items()})
    except TypeError as exc:
        raise ValueError(f"{kind}: {exc}") from None


def _check_order(m: int) -> None:
    if int(m) != m or m < 1:
        raise ValueError(f"cumulant order must be an integer >= 1, got {m!r}")


def cgf(family: MarginalFamily, zeta):
    """``log E exp(i*zeta*X)`` on the principal branch; raises DomainError on a cut."""
    return family.cgf(zeta)


def cumulant(family: MarginalFamily, m: int) -> float:
    """Exact cumulant of order ``m``."""
    return family.cumulant(m)


def unit_cumulant(family: MarginalFamily, m: int) -> float:
    """Cumulant of order ``m >= 2`` per unit of the family's scale parameter."""
    if m < 2:
        raise ValueError("unit cumulants are defined for orders m >= 2 only")
    return family.cumulant(m) / family.scale


@dataclass(frozen=True)
class CumulantVector:
    orders: tuple[int, ...]
    values: tuple[float, ...]
    per_unit: tuple[float, ...]  # nan for m = 1


def cumulant_vector(family: MarginalFamily, orders=(1, 2, 3, 4)) -> CumulantVector:
    orders = tuple(int(m) for m in orders)
    values = tuple(family.cumulant(m) for m in orders)
    per_unit = tuple(v / family.scale if m >= 2 else math.nan for m, v in zip(orders, values))
    return CumulantVector(orders, values, per_unit)
