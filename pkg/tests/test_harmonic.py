from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from conftest import random_coeffs
from revival_lab import (
    FourierCoeffs,
    GridFunction,
    HarmonicSum,
    ParameterError,
    PiecewiseConstant,
    Sampled,
    analyze,
    convolve,
    extend_even_odd,
    reflect,
    synthesize,
    translate,
)
from revival_lab.core import evaluate, sample

SQRT_2PI = math.sqrt(2 * math.pi)
coeff_seeds = st.integers(0, 2**32 - 1)
shifts = st.floats(-20, 20, allow_nan=False)


def test_analyze_step_mean_and_odd_modes():
    c = analyze(PiecewiseConstant.step(math.pi), 8)
    assert c[0] == pytest.approx(math.pi / SQRT_2PI, abs=1e-15)
    # int_pi^2pi e^{-imx} dx = (1 - (-1)^m) i/m
    for m in range(1, 9):
        expected = 0 if m % 2 == 0 else 2j / m / SQRT_2PI
        assert abs(c[m] - expected) < 1e-15


def test_analyze_single_harmonic():
    c = analyze(HarmonicSum([(3, 1.0)]), 8)
    assert c[3] == pytest.approx(SQRT_2PI, abs=1e-14)
    assert np.abs(np.delete(c.values, 3 + 8)).max() < 1e-15


def test_synthesize_constant_mode():
    u = synthesize(FourierCoeffs.from_dict(4, {0: SQRT_2PI}), 64)
    np.testing.assert_allclose(u.samples, 1.0, atol=1e-15)


def test_round_trip_band_limited(rng):
    c = random_coeffs(rng, 64)
    back = analyze(Sampled(synthesize(c, 512)), 64)
    assert np.abs(back.values - c.values).max() < 1e-12


def test_sampled_analysis_warns_and_refuses():
    g = Sampled(synthesize(FourierCoeffs.zeros(8), 40))
    with pytest.warns(UserWarning):
        analyze(g, 16)
    with pytest.raises(ParameterError):
        analyze(g, 30)


def test_sampled_analysis_aliasing_error():
    # e^{i 20 x} sampled at N=24 aliases exactly onto mode -4
    g = sample(HarmonicSum([(20, 1.0)]), 24)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = analyze(Sampled(g), 8)
    assert abs(c[-4] - SQRT_2PI) < 1e-12


def _sine_series_partial(x, M):
    """Independent oracle: the |m| <= M partial sum of the step on [pi, 2pi)."""
    k = np.arange(1, M + 1, 2)
    return 0.5 - (2 / np.pi) * np.sin(np.outer(x, k)) @ (1 / k)


def test_gibbs_overshoot():
    M, N = 64, 2**14
    u = synthesize(analyze(PiecewiseConstant.step(math.pi), M), N)
    overshoot = u.samples.real.max() - 1
    oracle = _sine_series_partial(u.x, M).max() - 1
    assert abs(overshoot - oracle) < 1e-12
    # classical limit Si(pi)/pi - 1/2
    assert overshoot == pytest.approx(special.sici(np.pi)[0] / np.pi - 0.5, abs=2e-3)
    assert overshoot == pytest.approx(0.089, abs=1e-3)


def test_translate_matches_shifted_data():
    s = 1.234
    u = PiecewiseConstant([0.5, 2.0], [1.0, -1.0])
    moved = PiecewiseConstant([0.5 + s, 2.0 + s], [1.0, -1.0])
    assert np.abs(translate(analyze(u, 32), s).values - analyze(moved, 32).values).max() < 1e-14


@given(coeff_seeds, shifts, shifts)
def test_translate_group_and_isometry(seed, s, r):
    c = random_coeffs(np.random.default_rng(seed), 16)
    assert translate(c, s).norm() == pytest.approx(c.norm(), rel=1e-13)
    lhs = translate(translate(c, s), r).values
    assert np.abs(lhs - translate(c, s + r).values).max() < 1e-9 * c.norm()
    assert np.abs(translate(c, 2 * math.pi).values - c.values).max() < 1e-12 * c.norm()


@given(coeff_seeds, shifts)
def test_reflect_involution_and_translate(seed, s):
    c = random_coeffs(np.random.default_rng(seed), 16)
    assert np.array_equal(reflect(reflect(c)).values, c.values)
    lhs = reflect(translate(c, s)).values
    assert np.abs(lhs - translate(reflect(c), -s).values).max() < 1e-12 * c.norm()


def test_reflect_step():
    up = PiecewiseConstant.step(math.pi)  # 1 on [pi, 2pi)
    down = PiecewiseConstant([0.0, math.pi], [1.0, 0.0])
    assert np.abs(reflect(analyze(up, 32)).values - analyze(down, 32).values).max() < 1e-15


def test_even_odd_extension():
    x = np.linspace(0.1, 6.2, 9)
    one = HarmonicSum([(0, 1.0)], domain_length=math.pi)
    np.testing.assert_allclose(evaluate(extend_even_odd(one, 1), x), 1.0, atol=1e-14)
    np.testing.assert_allclose(evaluate(extend_even_odd(one, -1), x), np.where(x < math.pi, 1, -1), atol=1e-14)
    sine = HarmonicSum([(1, -0.5j), (-1, 0.5j)], domain_length=math.pi)
    np.testing.assert_allclose(evaluate(extend_even_odd(sine, -1), x), np.sin(x), atol=1e-14)
    with pytest.raises(ParameterError):
        extend_even_odd(PiecewiseConstant.step(math.pi), 1)


def test_convolve_against_quadrature():
    f = HarmonicSum([(1, 1.0), (-2, 0.5j), (3, 0.25)])
    g = HarmonicSum([(1, 2.0), (3, -1.0), (4, 1.0)])
    h = synthesize(convolve(analyze(f, 8), analyze(g, 8)), 32)
    for n in (0, 3, 11):
        x = h.x[n]
        integrand = lambda y: evaluate(f, np.array([x - y]))[0] * evaluate(g, np.array([y]))[0]  # noqa: E731
        re = integrate.quad(lambda y: integrand(y).real, 0, 2 * math.pi, limit=200)[0]
        im = integrate.quad(lambda y: integrand(y).imag, 0, 2 * math.pi, limit=200)[0]
        assert abs(h.samples[n] - (re + 1j * im) / SQRT_2PI) < 1e-10


@given(coeff_seeds)
def test_convolution_commutes_and_has_unit(seed):
    r = np.random.default_rng(seed)
    f, g = random_coeffs(r, 12), random_coeffs(r, 12)
    np.testing.assert_allclose(convolve(f, g).values, convolve(g, f).values, rtol=1e-15, atol=1e-15)
    unit = FourierCoeffs(12, np.ones(25))
    assert np.array_equal(convolve(f, unit).values, f.values)


@given(coeff_seeds)
def test_parseval_and_linearity(seed):
    r = np.random.default_rng(seed)
    c = random_coeffs(r, 20)
    u = synthesize(c, 128)
    assert u.norm() == pytest.approx(c.norm(), rel=1e-12)
    a, b = complex(*r.normal(size=2)), complex(*r.normal(size=2))
    f, g = HarmonicSum([(1, 1.0), (5, 2.0)]), PiecewiseConstant([1.0, 4.0], [0.5, -1.0])
    both = analyze(Sampled(GridFunction(2 * math.pi, a * sample(f, 4096).samples + b * sample(g, 4096).samples)), 20)
    sep = a * analyze(Sampled(sample(f, 4096)), 20) + b * analyze(Sampled(sample(g, 4096)), 20)
    assert np.abs(both.values - sep.values).max() < 1e-12


def test_synthesize_half_domain():
    c = analyze(HarmonicSum([(2, 1.0)]), 4)
    half = synthesize(c, 32, domain_length=math.pi)
    assert half.domain_length == pytest.approx(math.pi)
    np.testing.assert_allclose(half.samples, np.exp(2j * half.x), atol=1e-14)
