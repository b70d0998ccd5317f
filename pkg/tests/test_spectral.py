from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from conftest import non_self_adjoint_pairs, random_coeffs, self_adjoint_pairs, smooth_data
from revival_lab import (
    FourierCoeffs,
    HarmonicSum,
    IntPolynomial,
    NumericalError,
    ParameterError,
    PiecewiseConstant,
    PseudoPeriodicLS,
    RationalTime,
    analyze,
    evolve_airy_qp,
    evolve_ls_pseudo,
    evolve_periodic,
    evolve_robin,
    ls_pp_model,
    robin_model,
    synthesize,
    translate,
)
from revival_lab.core import evaluate, moments
from revival_lab.spectral import airy_qp_model, ls_pseudo_modes, robin_modes

TWO_PI = 2 * math.pi
PAIRS = self_adjoint_pairs(np.random.default_rng(1), 4) + non_self_adjoint_pairs(np.random.default_rng(2), 4)


def gauss_legendre(n: int = 600):
    x, w = np.polynomial.legendre.leggauss(n)
    return math.pi * (x + 1), math.pi * w


def exact_norm(u: HarmonicSum) -> float:
    """L2 norm on [0, 2pi) from closed-form moments (no grid)."""
    f, a = u.frequencies, u.amplitudes
    total = 0j
    for fk, ak in zip(f, a):
        total += np.conj(ak) * np.sum(a * moments(HarmonicSum([(0, 1.0)]), 1j * (f - fk)))
    return math.sqrt(total.real)


def eigen_combination(model, weights: dict[int, complex]) -> HarmonicSum:
    terms = []
    s = 1 / np.sqrt(TWO_PI * model.tau)
    for j, c in weights.items():
        k = float(model.k(j))
        terms += [(k, c * s), (-k, c * s * model.Lambda0)]
    return HarmonicSum(terms)


class TestPseudoPeriodicModel:
    def test_quasi_periodic_quarter(self):
        m = ls_pp_model(PseudoPeriodicLS.quasi_periodic(0.25))
        assert m.k0 == pytest.approx(0.25)
        assert abs(m.gamma - 1j) < 1e-15
        assert m.Lambda0 == 0 and m.I0 == 0 and m.tau == 1

    @pytest.mark.parametrize("theta", [0.5, 0.7, 0.999])
    def test_quasi_periodic_branch(self, theta):
        m = ls_pp_model(PseudoPeriodicLS.quasi_periodic(theta))
        assert m.k0 == pytest.approx(theta)
        assert m.Lambda0 == 0

    def test_reciprocal_pair(self):
        m = ls_pp_model(2, 0.5)
        assert (m.gamma + 1 / m.gamma).real == pytest.approx(1.6)
        assert m.self_adjoint
        assert m.tau == pytest.approx(1 + abs(m.Lambda0) ** 2)
        assert m.I0 == pytest.approx(m.Lambda0)

    def test_periodic_limit_refused(self):
        with pytest.raises(ParameterError) as exc:
            ls_pp_model(1, 1)
        assert exc.value.kind == "periodic-degenerate"

    def test_accepts_boundary_object(self):
        assert ls_pp_model(PseudoPeriodicLS(0.3, 2)) == ls_pp_model(0.3, 2)

    @pytest.mark.parametrize("pair", PAIRS)
    def test_boundary_conditions(self, pair):
        b0, b1 = pair
        m = ls_pp_model(b0, b1)
        for j in (-7, 0, 3, 20):
            scale = 1 + abs(m.k(j))
            assert abs(b0 * m.phi(j, 0.0) - m.phi(j, TWO_PI)) < 1e-12
            assert abs(b1 * m.phi(j, 0.0, 1) - m.phi(j, TWO_PI, 1)) < 1e-12 * scale
            assert abs(m.psi(j, 0.0) - np.conj(b1) * m.psi(j, TWO_PI)) < 1e-12
            assert abs(m.psi(j, 0.0, 1) - np.conj(b0) * m.psi(j, TWO_PI, 1)) < 1e-12 * scale
            # eigen-equation -phi'' = k^2 phi
            x = np.array([0.3, 2.1, 5.0])
            np.testing.assert_allclose(-m.phi(j, x, 2), m.k(j) ** 2 * m.phi(j, x), atol=1e-11 * scale**2)

    @pytest.mark.parametrize("pair", PAIRS)
    def test_bi_orthogonality(self, pair):
        m = ls_pp_model(*pair)
        x, w = gauss_legendre()
        js = np.arange(-32, 33)
        Phi = np.array([m.phi(j, x) for j in js])
        Psi = np.array([m.psi(j, x) for j in js])
        gram = (Phi * w) @ Psi.conj().T
        assert np.abs(gram - np.eye(js.size)).max() < 1e-10

    @pytest.mark.parametrize("pair", PAIRS)
    def test_coefficients_recover_finite_combination(self, pair):
        m = ls_pp_model(*pair)
        weights = {-2: 0.5, 0: 1.0, 3: -1j}
        j, a = m.coefficients(eigen_combination(m, weights), 6)
        expected = np.array([weights.get(int(k), 0) for k in j])
        assert np.abs(a - expected).max() < 1e-12

    def test_degenerate_normalization(self):
        # beta0 = beta1 = -2 gives r = -5/4 (refused); -1, -1 is quasi-periodic theta = 1/2
        m = ls_pp_model(-1, -1)
        assert m.k0 == pytest.approx(0.5)
        with pytest.raises(ParameterError):
            ls_pp_model(-2, -2)


@pytest.mark.parametrize("pair", self_adjoint_pairs(np.random.default_rng(5), 4))
def test_self_adjoint_norm_preservation(pair):
    m = ls_pp_model(*pair)
    u0 = eigen_combination(m, {-3: 1.0, -1: 0.5j, 0: 0.25, 2: -1.0, 5: 0.75})
    n0 = exact_norm(u0)
    for t in (0.3, 1.0, TWO_PI / 3, 7.7):
        j, b = ls_pseudo_modes(u0, m, t, 8)
        ut = eigen_combination(m, {int(jj): bb for jj, bb in zip(j, b) if abs(bb) > 0})
        assert exact_norm(ut) == pytest.approx(n0, rel=1e-8)


def test_evolve_ls_pseudo_reconstructs_at_zero():
    m = ls_pp_model(0.3, 2)
    u0 = eigen_combination(m, {-1: 1.0, 2: 0.5})
    u = evolve_ls_pseudo(u0, m, 0.0, 16, 256)
    assert np.abs(u.samples - evaluate(u0, u.x)).max() < 1e-8


def test_evolve_periodic_half_period_is_translation(rng):
    c = random_coeffs(rng, 40)
    out = evolve_periodic(IntPolynomial.monomial(2), c, RationalTime(1, 2))
    assert np.array_equal(out.values, np.where(c.m % 2 == 0, 1, -1) * c.values)
    assert np.abs(out.values - translate(c, math.pi).values).max() < 1e-13 * c.norm()


@given(st.integers(0, 2**32 - 1), st.floats(-50, 50))
def test_evolve_periodic_unitary_and_float_rational_agree(seed, t):
    c = random_coeffs(np.random.default_rng(seed), 16)
    P = IntPolynomial((0, 1, 0, 1))
    assert evolve_periodic(P, c, t).norm() == pytest.approx(c.norm(), rel=1e-12)
    rt = RationalTime(2, 7)
    diff = evolve_periodic(P, c, rt).values - evolve_periodic(P, c, rt.t).values
    assert np.abs(diff).max() < 1e-11 * c.norm()


class TestAiry:
    def test_theta_zero_is_periodic_cubic(self, step):
        t = 0.83
        u = evolve_airy_qp(step, 0.0, t, 64, 512)
        ref = synthesize(evolve_periodic(IntPolynomial.monomial(3), analyze(step, 64), t), 512)
        assert np.abs(u.samples - ref.samples).max() < 1e-12

    @pytest.mark.parametrize("theta", [0.25, math.sqrt(2) / 3])
    def test_norm_preserved_on_grid(self, theta):
        u0 = HarmonicSum([(m + theta, 1 / (1 + m * m)) for m in range(-6, 7)])
        n0 = evolve_airy_qp(u0, theta, 0.0, 8, 256).norm()
        for t in (0.5, 2.0, TWO_PI / 5):
            assert evolve_airy_qp(u0, theta, t, 8, 256).norm() == pytest.approx(n0, rel=1e-12)

    def test_boundary_conditions(self):
        model = airy_qp_model(0.3)
        beta = np.exp(2j * math.pi * 0.3)
        for d in range(3):
            assert abs(beta * model.phi(4, 0.0, d) - model.phi(4, TWO_PI, d)) < 1e-12 * 5**d


class TestRobin:
    def test_constants_at_half(self):
        m = robin_model(0.5)
        assert m.m_b == 1.0 and m.lambda_b == -1.0
        assert m.A_b == pytest.approx(math.sqrt(2 / (math.exp(2 * math.pi) - 1)))
        np.testing.assert_allclose(np.abs(m.Lambda(np.arange(1, 50))), 1.0, atol=1e-15)

    @pytest.mark.parametrize("b", [0.1, 0.35, 0.6, 0.95])
    def test_boundary_conditions_and_norms(self, b):
        m = robin_model(b)
        for f in [m.phi_b] + [lambda x, d=0, j=j: m.phi(j, x, d) for j in (1, 4, 9)]:
            for x in (0.0, math.pi):
                assert abs(b * f(x) - (1 - b) * f(x, 1)) < 1e-11 * (1 + abs(f(x, 1)))
        norm_b = integrate.quad(lambda x: m.phi_b(x) ** 2, 0, math.pi)[0]
        assert norm_b == pytest.approx(1.0, rel=1e-10)
        x, w = gauss_legendre(400)
        x, w = x / 2, w / 2
        funcs = [m.phi_b(x)] + [m.phi(j, x) for j in range(1, 20)]
        gram = np.array([[np.sum(w * f * np.conj(g)) for g in funcs] for f in funcs])
        assert np.abs(gram - np.eye(len(funcs))).max() < 1e-10

    def test_dirichlet_zeros(self, half_step):
        u = evolve_robin(half_step, 1.0, 0.9, 128, 1024)
        assert abs(u.samples[0]) < 1e-13

    def test_parameter_overflow(self):
        with pytest.raises(NumericalError) as exc:
            robin_model(0.9999)
        assert exc.value.kind == "parameter-overflow"

    @pytest.mark.parametrize("b", [0.0, 0.35, 1.0])
    def test_series_reconstructs_finite_combination(self, b):
        m = robin_model(b)
        if b == 0:
            u0 = HarmonicSum([(0, 0.3), (2, 0.5), (-2, 0.5)], domain_length=math.pi)
        elif b == 1:
            u0 = HarmonicSum([(3, 0.5j), (-3, -0.5j)], domain_length=math.pi)
        else:
            s = 1 / math.sqrt(TWO_PI)
            terms = [term for j in (2, 5) for term in ((j, s), (-j, -s * complex(m.Lambda(j))))]
            u0 = HarmonicSum(terms, domain_length=math.pi)
        u = evolve_robin(u0, b, 0.0, 16, 256)
        assert np.abs(u.samples - evaluate(u0, u.x)).max() < 1e-12

    def test_modal_energy_constant_and_bessel(self, half_step):
        n0 = math.sqrt(math.pi / 2)
        energies = [np.sum(np.abs(robin_modes(half_step, 0.35, t, 512)[1]) ** 2) for t in (0.0, 1.0, 3.3)]
        assert max(energies) - min(energies) < 1e-12
        assert energies[0] <= n0**2 + 1e-12
        assert energies[0] == pytest.approx(n0**2, rel=2e-3)
