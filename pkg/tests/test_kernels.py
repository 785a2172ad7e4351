import importlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from supou import _fallback, kernels

try:
    from supou import _core
except ImportError:  # extension not built
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled extension not built")


def _naive_sums(lam, w, n, max_order):
    out = np.zeros(max_order)
    for lk, wk in zip(lam, w):
        rho = np.exp(-lk)
        a = np.cumsum(rho ** np.arange(n))
        b = rho * a[-1]
        for m in range(1, max_order + 1):
            out[m - 1] += wk * (b**m + (1 - rho**m) * np.sum(a**m))
    return out


@st.composite
def component_sets(draw):
    k = draw(st.integers(1, 12))
    lam = np.array(draw(st.lists(st.floats(1e-3, 5.0), min_size=k, max_size=k)))
    w = np.array(draw(st.lists(st.floats(0.0, 2.0), min_size=k, max_size=k)))
    return lam, w


@given(component_sets(), st.integers(1, 40), st.integers(1, 6))
def test_fallback_sums_match_naive(comps, n, max_order):
    lam, w = comps
    np.testing.assert_allclose(_fallback.cumulant_sums(lam, w, n, max_order), _naive_sums(lam, w, n, max_order),
                               rtol=1e-11)


@needs_core
@given(component_sets(), st.integers(1, 60), st.integers(1, 9), st.sampled_from([1.0, 7.0]))
def test_backends_agree_on_sums(comps, n, max_order, scale):
    lam, w = comps
    np.testing.assert_allclose(_core.cumulant_sums(lam, w, n, max_order, scale),
                               _fallback.cumulant_sums(lam, w, n, max_order, scale), rtol=1e-13)


def _random_superpose_inputs(rng, K, n, per):
    rho = rng.uniform(0.1, 0.99, K)
    x0 = rng.normal(size=K)
    counts = rng.integers(0, per + 1, K)
    ptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    steps = np.concatenate([np.sort(rng.integers(1, n + 1, c)) for c in counts]).astype(np.int64)
    values = rng.exponential(size=steps.size)
    return rho, x0, ptr, steps, values


@needs_core
@pytest.mark.parametrize("K, n, per", [(1, 1, 3), (5, 50, 20), (40, 300, 500)])
def test_backends_agree_on_superpose(K, n, per):
    rng = np.random.default_rng(K * n)
    args = _random_superpose_inputs(rng, K, n, per)
    np.testing.assert_allclose(_core.superpose(*args, n), _fallback.superpose(*args, n), rtol=1e-13, atol=1e-12)


def test_superpose_single_component_recursion():
    rho, x0 = np.array([0.5]), np.array([2.0])
    ptr = np.array([0, 2], dtype=np.int64)
    steps = np.array([1, 3], dtype=np.int64)
    values = np.array([1.0, 4.0])
    out = kernels.superpose(rho, x0, ptr, steps, values, 3)
    np.testing.assert_allclose(out, [2.0, 1.0, 4.5])


def test_fallback_rejects_bad_order():
    with pytest.raises(ValueError):
        _fallback.cumulant_sums(np.ones(2), np.ones(2), 4, 0)


def test_pure_python_switch(monkeypatch):
    monkeypatch.setenv("SUPOU_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.cumulant_sums is _fallback.cumulant_sums
    finally:
        monkeypatch.delenv("SUPOU_PURE_PYTHON")
        importlib.reload(kernels)
