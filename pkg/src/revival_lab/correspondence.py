"""Representation formulas linking boundary value problems to periodic ones.

Each engine rebuilds a solution from periodic evolutions, revival operators,
translations, reflections and modulations. Their outputs are meant to be
compared against the direct series of :mod:`revival_lab.spectral`.

Engines acting at rational times accept ``pointwise=True``. In that mode the
revival operators are applied as finite sums of translates of the exact
initial profile, so nothing is truncated and jumps stay sharp. The default
mode works in a symmetric coefficient window ``|m| <= M`` identical to the
one used by the spectral solvers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import compare
from .core import (
    TWO_PI,
    FourierCoeffs,
    GridFunction,
    InitialCondition,
    IntPolynomial,
    ParameterError,
    RationalTime,
    TimeLike,
    as_exact,
    as_float_time,
    domain_length,
    evaluate,
    grid_points,
    modulate,
    moments,
    reduce_rational,
)
from .harmonic import DEFAULT_M, DEFAULT_N, analyze, extend_even_odd, reflect, synthesize, translate
from .revival import (
    apply_revival_physical,
    apply_translates,
    compose_translates,
    revival_translates,
)
from .spectral import evolve_periodic, ls_pp_model, robin_model

SCHRODINGER = IntPolynomial.monomial(2)
AIRY = IntPolynomial.monomial(3)


def _reflected(u: InitialCondition):
    return as_exact(u).reflect()


def _modulate_samples(g: GridFunction, alpha: float) -> GridFunction:
    return g.with_samples(g.samples * np.exp(1j * alpha * g.x))


def _revived(f, ops, shift: float, M: int, N: int, pointwise: bool) -> GridFunction:
    """``T_shift R_ops f`` on the grid of ``[0, 2pi)``.

    ``ops`` is a sequence of ``(ell, RationalTime)`` applied left to right.
    """
    if pointwise:
        pairs = [revival_translates(IntPolynomial.monomial(ell), t) for ell, t in ops]
        w, s = compose_translates(*pairs)
        x = grid_points(N)
        return GridFunction(TWO_PI, apply_translates(lambda y: evaluate(f, y), w, s + shift, x))
    c = analyze(f, M)
    for ell, t in ops:
        c = apply_revival_physical(ell, t, c)
    return synthesize(translate(c, shift), N)


# --------------------------------------------------------------------------
# Pseudo-periodic Schrodinger
# --------------------------------------------------------------------------

def ls_pp_via_periodic(u0: InitialCondition, beta0, beta1, t: TimeLike,
                       M: int = DEFAULT_M, N: int = DEFAULT_N) -> GridFunction:
    """Pseudo-periodic solution assembled from four periodic evolutions.

    With ``v0 = exp(-i k0 x) u0`` and ``w0 = exp(i k0 x) u0``::

        u = exp(-i k0^2 t)/tau * ( e^{i k0 x} T_{2 k0 t} [v + conj(I0) w~]
                                 + Lambda0 e^{-i k0 x} T_{-2 k0 t} [v~ + conj(I0) w] )

    where ``v, w, v~, w~`` are the periodic Schrodinger evolutions of
    ``v0, w0`` and their reflections. For self-adjoint conditions the weights
    ``Lambda0, conj(Lambda0), |Lambda0|^2`` and prefactor ``1/(1+|Lambda0|^2)`` are used.
    """
    model = ls_pp_model(beta0, beta1)
    k0 = model.k0
    v = analyze(modulate(u0, -k0), M)
    w = analyze(modulate(u0, k0), M)
    v, w, vr, wr = (evolve_periodic(SCHRODINGER, c, t) for c in (v, w, reflect(v), reflect(w)))
    tf = as_float_time(t)
    if model.self_adjoint:
        L = model.Lambda0
        pref = 1 / (1 + abs(L) ** 2)
        plus = v + wr * np.conj(L)
        minus = vr * L + w * (abs(L) ** 2)
    else:
        pref = 1 / model.tau
        Ibar = np.conj(model.I0)
        plus = v + wr * Ibar
        minus = (vr + w * Ibar) * model.Lambda0
    up = _modulate_samples(synthesize(translate(plus, 2 * k0 * tf), N), k0)
    um = _modulate_samples(synthesize(translate(minus, -2 * k0 * tf), N), -k0)
    return GridFunction(TWO_PI, np.exp(-1j * k0**2 * tf) * pref * (up.samples + um.samples))


def ls_pp_revival(u0: InitialCondition, beta0, beta1, t: RationalTime,
                  M: int = DEFAULT_M, N: int = DEFAULT_N, pointwise: bool = False) -> GridFunction:
    """Pseudo-periodic solution at ``t = 2 pi p/q`` from second-order revivals.

    Four terms, each ``weight * e^{+-i k0 x} T_{+-4 pi k0 p/q} R2(p, q) [e^{-+i k0 x} g]``
    with ``g`` either ``u0`` or its reflection, and weights
    ``1, Lambda0 e^{-2 pi i k0}, conj(I0) e^{2 pi i k0}, Lambda0 conj(I0)``.
    """
    model = ls_pp_model(beta0, beta1)
    k0 = model.k0
    s = 2 * k0 * t.t
    Ibar = np.conj(model.I0)
    g0, gr = as_exact(u0), _reflected(u0)
    terms = [
        (+1, 1.0, g0),
        (-1, model.Lambda0 * np.exp(-2j * np.pi * k0), gr),
        (+1, Ibar * np.exp(2j * np.pi * k0), gr),
        (-1, model.Lambda0 * Ibar, g0),
    ]
    out = np.zeros(N, complex)
    for sign, weight, g in terms:
        if weight == 0:
            continue
        part = _revived(g.modulate(-sign * k0), [(2, t)], sign * s, M, N, pointwise)
        out += weight * _modulate_samples(part, sign * k0).samples
    return GridFunction(TWO_PI, np.exp(-1j * k0**2 * t.t) / model.tau * out)


def ls_qp_revival(u0: InitialCondition, theta: float, t: RationalTime,
                  M: int = DEFAULT_M, N: int = DEFAULT_N, pointwise: bool = False) -> GridFunction:
    """``e^{-i theta^2 t} e^{i theta x} T_{4 pi theta p/q} R2(p, q) [e^{-i theta x} u0]``."""
    theta = float(theta)
    if not 0 <= theta < 1:
        raise ParameterError("invalid-theta", f"theta={theta} not in [0, 1)")
    part = _revived(modulate(u0, -theta), [(2, t)], 2 * theta * t.t, M, N, pointwise)
    out = _modulate_samples(part, theta)
    return out.with_samples(np.exp(-1j * theta**2 * t.t) * out.samples)


# --------------------------------------------------------------------------
# Quasi-periodic Airy
# --------------------------------------------------------------------------

def as_rational_theta(theta) -> Fraction:
    """Interpret ``theta`` as an exact fraction ``c/d`` in ``[0, 1)``."""
    if isinstance(theta, tuple):
        frac = Fraction(*theta)
    elif isinstance(theta, (Fraction, int, str)):
        frac = Fraction(theta)
    else:
        frac = Fraction(float(theta)).limit_denominator(10_000)
        if abs(float(frac) - float(theta)) > 1e-12:
            raise ParameterError("invalid-theta", f"theta={theta} is not a recognisable rational")
    if not 0 <= frac < 1:
        raise ParameterError("invalid-theta", f"theta={frac} must satisfy 0 <= c < d")
    return frac


def airy_qp_via_ls(u0: InitialCondition, theta, t: RationalTime,
                   M: int = DEFAULT_M, N: int = DEFAULT_N) -> GridFunction:
    """Quasi-periodic Airy solution via a periodic Schrodinger evolution.

    ``v0 = R3(p, q)[e^{-i theta x} u0]`` is evolved by the periodic
    Schrodinger flow for time ``3 theta t``, translated by ``3 theta^2 t`` and
    multiplied by ``e^{-i theta^3 t} e^{i theta x}``.
    """
    th = float(theta)
    if not 0 <= th < 1:
        raise ParameterError("invalid-theta", f"theta={theta} not in [0, 1)")
    c = apply_revival_physical(3, t, analyze(modulate(u0, -th), M))
    c = evolve_periodic(SCHRODINGER, c, 3 * th * t.t)
    g = _modulate_samples(synthesize(translate(c, 3 * th**2 * t.t), N), th)
    return g.with_samples(np.exp(-1j * th**3 * t.t) * g.samples)


def airy_shifted_time(theta: Fraction, t: RationalTime) -> RationalTime:
    """The reduced time ``2 pi (3 c p)/(d q)`` of the second-order revival factor."""
    return reduce_rational(3 * theta.numerator * t.p, theta.denominator * t.q)


def airy_qp_revival(u0: InitialCondition, theta, t: RationalTime,
                    M: int = DEFAULT_M, N: int = DEFAULT_N, pointwise: bool = False) -> GridFunction:
    """Quasi-periodic Airy solution for rational ``theta = c/d`` at ``t = 2 pi p/q``.

    ``u = e^{i theta x} e^{-i theta^3 t} T_{3 theta^2 t} R2(3cp, dq) R3(p, q) [e^{-i theta x} u0]``.
    """
    frac = as_rational_theta(theta)
    th = float(frac)
    ops = [(3, t), (2, airy_shifted_time(frac, t))]
    part = _revived(modulate(u0, -th), ops, 3 * th**2 * t.t, M, N, pointwise)
    g = _modulate_samples(part, th)
    return g.with_samples(np.exp(-1j * th**3 * t.t) * g.samples)


@dataclass(frozen=True)
class AltReading:
    """Sampling points ``sigma_k``, translations ``s_k`` and weights ``W_k`` of a
    translate-sum representation of the Airy flow."""

    name: str
    Q: int
    sigma: np.ndarray
    shifts: np.ndarray
    weights: np.ndarray

    def multiplier(self, n, theta: float) -> np.ndarray:
        """Fourier multiplier ``sum_k W_k e^{-i (n + theta) s_k}`` on mode ``e^{i(n+theta)x}``."""
        k = np.asarray(n, float) + theta
        return np.exp(-1j * np.outer(k, self.shifts)) @ self.weights


def alt_reading(theta, t: RationalTime, reading: str = "printed") -> AltReading:
    """Build the double-sum weights for the alternative Airy representation.

    ``printed`` samples the eigenfunctions at ``pi k/(d q)`` and translates by
    ``pi k/(2 d q)``. ``consistent`` uses ``2 pi k/(d^2 q)`` for both, which
    makes the multiplier equal to ``e^{-i (n+theta)^3 t}`` for every ``n``.
    """
    frac = as_rational_theta(theta)
    d, th = frac.denominator, float(frac)
    Q = d * d * t.q
    k = np.arange(Q)
    if reading == "printed":
        sigma, shifts = np.pi * k / (d * t.q), np.pi * k / (2 * d * t.q)
    elif reading == "consistent":
        sigma = shifts = TWO_PI * k / Q
    else:
        raise ParameterError("invalid-reading", f"unknown reading {reading!r}")
    km = np.arange(Q) + th
    # W_k = (sqrt(2pi)/Q) sum_m e^{-i k_m^3 t} phi_m(sigma_k),  phi_m = e^{i k_m x}/sqrt(2pi)
    weights = np.exp(1j * np.outer(sigma, km)) @ np.exp(-1j * km**3 * t.t) / Q
    return AltReading(reading, Q, sigma, shifts, weights)


def airy_qp_alt(u0: InitialCondition, theta, t: RationalTime, M: int = DEFAULT_M,
                N: int = DEFAULT_N, reading: str = "printed", pointwise: bool = False) -> GridFunction:
    """Alternative Airy representation ``sum_k W_k u~0(x - s_k)``.

    ``u~0`` is the quasi-periodic extension of ``u0``, i.e.
    ``u~0(x + 2 pi n) = e^{2 pi i theta n} u0(x)``. See :func:`alt_reading`.
    """
    th = float(as_rational_theta(theta))
    alt = alt_reading(theta, t, reading)
    v0 = modulate(u0, -th)
    if pointwise:
        x = grid_points(N)
        vals = apply_translates(lambda y: np.exp(1j * th * y) * evaluate(v0, y), alt.weights, alt.shifts, x)
        return GridFunction(TWO_PI, vals)
    c = analyze(v0, M)
    return _modulate_samples(synthesize(c.map(alt.multiplier(c.m, th)), N), th)


def airy_alt_report(u0: InitialCondition, theta, t: RationalTime,
                    M: int = DEFAULT_M, N: int = DEFAULT_N) -> dict:
    """Cross-check both readings of the alternative representation.

    For each reading: the worst multiplier error over ``|n| <= M`` and the
    relative L2 distance to :func:`airy_qp_revival` (untruncated, pointwise).
    """
    th = float(as_rational_theta(theta))
    n = np.arange(-M, M + 1)
    exact = np.exp(-1j * (n + th) ** 3 * t.t)
    reference = airy_qp_revival(u0, theta, t, M, N, pointwise=True)
    report = {"theta": str(as_rational_theta(theta)), "p": t.p, "q": t.q, "M": M, "N": N}
    for reading in ("printed", "consistent"):
        alt = alt_reading(theta, t, reading)
        out = airy_qp_alt(u0, theta, t, M, N, reading=reading, pointwise=True)
        cmp = compare(out, reference)
        report[reading] = {
            "multiplier_err": float(np.max(np.abs(alt.multiplier(n, th) - exact))),
            "sup_err": cmp.sup_err,
            "rel_l2_err": cmp.l2_rel_err,
        }
    return report


# --------------------------------------------------------------------------
# Robin problem
# --------------------------------------------------------------------------

def _robin_checked(b: float):
    if b <= 0 or b >= 1:
        raise ParameterError("use-limit-solver", f"b={b}: use the Neumann/Dirichlet series of evolve_robin")
    return robin_model(b)


def robin_f1_hat(b: float, m) -> np.ndarray:
    """Fourier coefficients ``m_b / (2 (m_b - i m))`` of the kernel ``f1``."""
    mb = b / (1 - b)
    return mb / (2 * (mb - 1j * np.asarray(m, float)))


def robin_f1(b: float, x) -> np.ndarray:
    """``f1(x) = sqrt(pi/2) m_b e^{m_b x}/(e^{2 pi m_b} - 1)`` on ``[0, 2pi)``, overflow-free."""
    mb = b / (1 - b)
    x = np.asarray(x, float)
    return math.sqrt(math.pi / 2) * mb * np.exp(mb * (x - TWO_PI)) / -math.expm1(-TWO_PI * mb)


def _rank_one_term(u0: InitialCondition, b: float, t: float, x) -> np.ndarray:
    # 2 sqrt(2/pi) <u0, e^{m_b .}> f1(x), written with <u0, e^{m_b(. - pi)}> to stay finite
    mb = b / (1 - b)
    inner = complex(moments(u0, np.array([mb + 0j]), origin=math.pi)[0])
    amp = 2 * mb / -math.expm1(-TWO_PI * mb)
    return amp * inner * np.exp(1j * mb**2 * t) * np.exp(mb * (np.asarray(x, float) - math.pi))


def _check_half(u0: InitialCondition) -> None:
    if not np.isclose(domain_length(u0), math.pi, rtol=0, atol=1e-12):
        raise ParameterError("domain-mismatch", "Robin data must live on (0, pi)")


def robin_parts(u0: InitialCondition, b: float, M: int) -> dict[str, FourierCoeffs]:
    """The five periodic initial data ``n0, h0, v0, z0, w0``."""
    _check_half(u0)
    _robin_checked(b)
    up = analyze(extend_even_odd(u0, +1), M)
    um = analyze(extend_even_odd(u0, -1), M)
    f1 = FourierCoeffs(M, robin_f1_hat(b, up.m))
    f1r = reflect(f1)
    conv = lambda f, g: FourierCoeffs(M, f.values * g.values)  # noqa: E731
    return {
        "n": up,
        "h": conv(f1 + f1r, up),
        "v": conv(f1r - f1, up),
        "z": conv(f1 - f1r, um),
        "w": conv(f1 + f1r, um),
    }


def robin_via_periodic(u0: InitialCondition, b: float, t: TimeLike,
                       M: int = DEFAULT_M, N: int = DEFAULT_N // 2) -> GridFunction:
    """Robin solution from five periodic Schrodinger evolutions plus the rank-one mode.

    ``u = <u0, phi_b> e^{i m_b^2 t} phi_b + n - h + v + z + w`` restricted to ``(0, pi)``.
    """
    parts = robin_parts(u0, b, M)
    ev = {k: evolve_periodic(SCHRODINGER, c, t) for k, c in parts.items()}
    total = ev["n"] - ev["h"] + ev["v"] + ev["z"] + ev["w"]
    g = synthesize(total, N, domain_length=math.pi)
    tf = as_float_time(t)
    return g.with_samples(g.samples + _rank_one_term(u0, b, tf, g.x))


def robin_revival(u0: InitialCondition, b: float, t: RationalTime,
                  M: int = DEFAULT_M, N: int = DEFAULT_N // 2) -> GridFunction:
    """Robin solution at ``t = 2 pi p/q``.

    ``2 sqrt(2/pi) <u0, e^{m_b .}> e^{i m_b^2 t} f1 + R2(p, q)[u0+] + R2(p, q)[2 f1 * (u0- - u0+)]``
    restricted to ``(0, pi)``.
    """
    _check_half(u0)
    _robin_checked(b)
    up = analyze(extend_even_odd(u0, +1), M)
    um = analyze(extend_even_odd(u0, -1), M)
    corr = FourierCoeffs(M, 2 * robin_f1_hat(b, up.m) * (um.values - up.values))
    total = apply_revival_physical(2, t, up) + apply_revival_physical(2, t, corr)
    g = synthesize(total, N, domain_length=math.pi)
    return g.with_samples(g.samples + _rank_one_term(u0, b, t.t, g.x))
