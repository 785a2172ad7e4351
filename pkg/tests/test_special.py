import math

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from supou.special import special_gamma, special_zeta


def test_gamma_examples():
    assert special_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert special_gamma(5) == 24.0
    assert special_gamma(1.0) == 1.0


def test_zeta_example():
    assert special_zeta(1.5) == pytest.approx(2.6123753486854883, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, float("nan"), float("inf")])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        special_gamma(x)


@pytest.mark.parametrize("s", [1.0, 0.5, -2.0, float("nan")])
def test_zeta_domain(s):
    with pytest.raises(ValueError):
        special_zeta(s)


@given(st.floats(1e-6, 170.0))
def test_gamma_against_mpmath(x):
    mp.mp.dps = 30
    assert special_gamma(x) == pytest.approx(float(mp.gamma(x)), rel=1e-12)


@given(st.floats(1.001, 60.0))
def test_zeta_against_mpmath(s):
    mp.mp.dps = 30
    assert special_zeta(s) == pytest.approx(float(mp.zeta(s)), rel=1e-12)


@given(st.floats(0.01, 100.0))
def test_gamma_recurrence(x):
    assert special_gamma(x + 1) == pytest.approx(x * special_gamma(x), rel=1e-12)
