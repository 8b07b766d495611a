import math

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from latdet.specfun import (
    BESSEL_CROSSOVER,
    DomainError,
    bessel_i0,
    bessel_i0e,
    bessel_in,
    catalan_constant,
    dedekind_eta_imag,
    i0e_asymptotic_series,
    i0e_power_series,
)


def mp_i0e(x):
    return float(mpmath.besseli(0, x) * mpmath.exp(-x))


@pytest.mark.parametrize("x", [0.0, 1e-8, 0.5, 1.0, 5.0, 29.9, 30.0, 30.1, 100.0, 1e4, 1e8])
def test_i0e_matches_mpmath(x):
    assert bessel_i0e(x) == pytest.approx(mp_i0e(x), rel=5e-15, abs=1e-300)


def test_i0_small_values():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i0(1.0) == pytest.approx(1.2660658777520082, rel=1e-15)


def test_array_input_keeps_shape():
    x = np.linspace(0, 60, 13).reshape(13, 1)
    out = bessel_i0e(x)
    assert out.shape == x.shape
    np.testing.assert_allclose(out.ravel(), sp.i0e(x.ravel()), rtol=5e-15)


@pytest.mark.parametrize("bad", [-1.0, float("nan"), float("inf")])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        bessel_i0e(bad)


def test_branches_agree_at_crossover():
    x = BESSEL_CROSSOVER
    assert i0e_power_series(x) == pytest.approx(i0e_asymptotic_series(x), rel=1e-14)


@pytest.mark.parametrize("order", [1, 2, 5, 12])
@pytest.mark.parametrize("x", [0.3, 4.0, 31.0, 250.0])
def test_bessel_in_scaled(order, x):
    ref = float(mpmath.besseli(order, x) * mpmath.exp(-x))
    assert bessel_in(order, x, scaled=True) == pytest.approx(ref, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=700.0))
def test_i0e_against_scipy(x):
    assert bessel_i0e(x) == pytest.approx(sp.i0e(x), rel=2e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e3))
def test_i0e_bounded_and_decreasing(x):
    a, b = bessel_i0e(x), bessel_i0e(x + 0.5)
    assert 0 < b <= a <= 1


def test_catalan():
    assert catalan_constant() == pytest.approx(float(mpmath.catalan), abs=2e-16)


@pytest.mark.parametrize("y", [0.05, 0.3, 1.0, 1.7, 6.0])
def test_eta_against_mpmath(y):
    mpmath.mp.dps = 30
    q = mpmath.exp(-2 * mpmath.pi * y)
    ref = float(q ** (mpmath.mpf(1) / 24) * mpmath.qp(q))
    mpmath.mp.dps = 15
    assert dedekind_eta_imag(y) == pytest.approx(ref, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.05, max_value=20.0))
def test_eta_modular_symmetry(y):
    assert dedekind_eta_imag(1 / y) == pytest.approx(math.sqrt(y) * dedekind_eta_imag(y), rel=1e-12)


def test_eta_rejects_nonpositive():
    with pytest.raises(DomainError):
        dedekind_eta_imag(0.0)
