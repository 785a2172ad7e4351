import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from supou.marginals import (
    DomainError,
    Gamma,
    InverseGaussian,
    NormalInverseGaussian,
    TemperedStable,
    VarianceGamma,
    cgf,
    cumulant,
    cumulant_vector,
    make_family,
    unit_cumulant,
)

from oracles import cauchy_cumulants, richardson_derivative

FAMILIES = [
    Gamma(2.0, 1.5),
    InverseGaussian(1.3, 2.0),
    VarianceGamma(0.7, 2.0, 0.5, 0.3),
    NormalInverseGaussian(2.0, 0.7, 1.2, -0.4),
    TemperedStable(0.3, 1.1, 1.4),
    TemperedStable(0.5, 1.0, 2.0),
]
IDS = [f.kind + str(i) for i, f in enumerate(FAMILIES)]


# -- examples -----------------------------------------------------------------


def test_cgf_vanishes_at_zero():
    assert cgf(Gamma(1.0, 1.0), 0.0) == 0
    assert cgf(InverseGaussian(1.0, 2.0), 0.0) == 0
    for fam in FAMILIES:
        assert abs(cgf(fam, 0.0)) < 1e-15


def test_gamma_first_derivative_is_mean():
    fam = Gamma(2.0, 1.0)
    d, _ = richardson_derivative(lambda s: cgf(fam, -1j * s).real, 1, 0.1)
    assert d == pytest.approx(2.0, rel=1e-9)


def test_documented_cumulant_values():
    assert cumulant(Gamma(3.0, 2.0), 2) == pytest.approx(0.75, rel=1e-15)
    assert cumulant(InverseGaussian(1.0, 1.0), 1) == pytest.approx(1.0, rel=1e-15)
    assert cumulant(NormalInverseGaussian(2.0, 0.0, 1.0, 0.0), 2) == pytest.approx(0.5, rel=1e-14)
    assert unit_cumulant(Gamma(5.0, 1.0), 3) == pytest.approx(2.0, rel=1e-15)
    assert unit_cumulant(Gamma(5.0, 2.0), 2) == pytest.approx(0.25, rel=1e-15)
    assert unit_cumulant(InverseGaussian(3.0, 1.0), 2) == pytest.approx(1.0, rel=1e-15)


def test_nig_second_cumulant_matches_finite_differences():
    fam = NormalInverseGaussian(2.0, 0.0, 1.0, 0.0)
    d, _ = richardson_derivative(lambda s: cgf(fam, -1j * s).real, 2, 0.4)
    assert d == pytest.approx(0.5, rel=1e-8)


def test_tempered_stable_half_is_inverse_gaussian():
    ts, ig = TemperedStable(0.5, 1.3, 2.0), InverseGaussian(1.3, 2.0)
    for m in range(1, 7):
        assert ts.cumulant(m) == pytest.approx(ig.cumulant(m), rel=1e-13)
    z = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(ts.cgf(z), ig.cgf(z), rtol=1e-13, atol=1e-15)


def test_unit_cumulant_rejects_mean():
    with pytest.raises(ValueError):
        unit_cumulant(Gamma(1.0, 1.0), 1)


def test_cumulant_vector():
    cv = cumulant_vector(Gamma(2.0, 1.0), (1, 2, 3))
    assert cv.values == (2.0, 2.0, 4.0)
    assert math.isnan(cv.per_unit[0]) and cv.per_unit[1:] == (1.0, 2.0)


# -- construction and domain errors -------------------------------------------


@pytest.mark.parametrize(
    "kind, params",
    [
        ("gamma", {"alpha": 0.0, "beta": 1.0}),
        ("gamma", {"alpha": 1.0, "beta": -1.0}),
        ("inverse_gaussian", {"delta": 1.0, "gamma": 0.0}),
        ("variance_gamma", {"kappa": 1.0, "alpha": 1.0, "beta": 1.0}),
        ("normal_inverse_gaussian", {"alpha": 1.0, "beta": 2.0, "delta": 1.0}),
        ("tempered_stable", {"kappa": 1.0, "delta": 1.0, "gamma": 1.0}),
        ("gamma", {"alpha": 1.0, "beta": 1.0, "mu": 0.0}),
        ("cauchy", {}),
    ],
)
def test_invalid_parameters_rejected(kind, params):
    with pytest.raises(ValueError):
        make_family(kind, **params)


def test_cgf_on_branch_cut_is_domain_error():
    # s = i*zeta = beta puts log(1 - s/beta) on its branch point
    with pytest.raises(DomainError):
        cgf(Gamma(1.0, 2.0), -2.0j)
    with pytest.raises(DomainError):
        cgf(Gamma(1.0, 2.0), -3.0j)
    with pytest.raises(DomainError):
        cgf(InverseGaussian(1.0, 2.0), -2.5j)
    # just inside the strip is fine
    assert np.isfinite(cgf(Gamma(1.0, 2.0), -1.9j))


def test_nig_boundary_case_has_no_cumulants():
    fam = NormalInverseGaussian(1.0, 1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        fam.cumulant(2)


# -- oracles ------------------------------------------------------------------


@pytest.mark.parametrize("fam", FAMILIES, ids=IDS)
def test_cumulants_match_contour_oracle(fam):
    ref = cauchy_cumulants(fam, range(1, 7))
    for m in range(1, 7):
        assert fam.cumulant(m) == pytest.approx(ref[m], rel=1e-6, abs=1e-13), m


@pytest.mark.parametrize("fam", FAMILIES, ids=IDS)
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_cumulants_match_real_axis_differences(fam, m):
    f = lambda s: cgf(fam, -1j * s).real  # noqa: E731
    d, _ = richardson_derivative(f, m, 1.6 * fam.analytic_radius() / m)
    assert fam.cumulant(m) == pytest.approx(d, rel=1e-6, abs=1e-10)


# -- properties ---------------------------------------------------------------

pos = st.floats(0.2, 5.0)


@st.composite
def families(draw):
    kind = draw(st.sampled_from(["gamma", "ig", "vg", "nig", "ts"]))
    if kind == "gamma":
        return Gamma(draw(pos), draw(pos))
    if kind == "ig":
        return InverseGaussian(draw(pos), draw(pos))
    alpha = draw(pos)
    beta = draw(st.floats(-0.8, 0.8)) * alpha
    mu = draw(st.floats(-2, 2))
    if kind == "vg":
        return VarianceGamma(draw(pos), alpha, beta, mu)
    if kind == "nig":
        return NormalInverseGaussian(alpha, beta, draw(pos), mu)
    # keep the tilt gamma**(1/kappa) well away from the branch-cut guard
    return TemperedStable(draw(st.floats(0.1, 0.95)), draw(pos), draw(st.floats(0.5, 5.0)))


@given(families(), st.sampled_from([0.1, 1.0, 10.0]), st.integers(2, 6))
def test_unit_cumulant_invariant_under_scale(fam, factor, m):
    scaled = fam.with_scale(fam.scale * factor)
    assert unit_cumulant(scaled, m) == pytest.approx(unit_cumulant(fam, m), rel=1e-12)


@given(families(), st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_convolution_closure(fam, u, v):
    a, b = fam.with_scale(u), fam.with_scale(v)
    both = fam.with_scale(u + v)
    r = 0.9 * min(a.analytic_radius(), both.analytic_radius())
    z = np.concatenate([np.linspace(-4, 4, 9), 1j * np.linspace(-r, r, 5)])
    np.testing.assert_allclose(a.cgf(z) + b.cgf(z), both.cgf(z), rtol=1e-11, atol=1e-11)


@given(families())
def test_second_cumulant_positive(fam):
    assert fam.cumulant(2) > 0


@given(families(), st.integers(2, 6))
def test_cumulant_proportional_to_scale(fam, m):
    assert fam.with_scale(2.0 * fam.scale).cumulant(m) == pytest.approx(2.0 * fam.cumulant(m), rel=1e-12)
