"""Gauss-type weight vectors and periodic revival operators.

At ``t = 2 pi p/q`` the periodic flow with dispersion ``P`` is a weighted sum
of ``q`` translates of the initial profile, with weights

    G(k) = sum_{m=0}^{q-1} exp(-2 pi i P(m) p/q) exp(2 pi i m k/q).

All phases are reduced modulo ``q`` in integer arithmetic before
exponentiation, so identities such as ``exp(-2 pi i n) = 1`` hold exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    SQRT_2PI,
    TWO_PI,
    FourierCoeffs,
    InitialCondition,
    IntPolynomial,
    RationalTime,
    evaluate,
)


def roots_of_unity(q: int) -> np.ndarray:
    """``exp(2 pi i r/q)`` for ``r = 0..q-1``, with the exact values at quarter turns."""
    r = np.arange(q)
    w = np.exp(2j * np.pi * r / q)
    # clean up the points where cos/sin are exactly 0 or +-1
    w[(4 * r) % q == 0] = np.round(w[(4 * r) % q == 0])
    return w


@dataclass(frozen=True, eq=False)
class GaussWeights:
    """Translate weights ``G(k)``, ``k = 0..q-1``.

    ``normalized`` weights carry the ``1/sqrt(2 pi)`` of ``e_m(2 pi k/q)``.
    """

    q: int
    values: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        if self.values.shape != (self.q,):
            raise ValueError("weight vector must have length q")

    def raw(self) -> np.ndarray:
        return self.values * SQRT_2PI if self.normalized else self.values


def gauss_weights(P: IntPolynomial, t: RationalTime, normalized: bool = False) -> GaussWeights:
    p, q = t.p, t.q
    roots = roots_of_unity(q)
    m = np.arange(q)
    phase = (-(P.mod(m, q) * (p % q))[:, None] + np.outer(m, m)) % q
    G = roots[phase].sum(axis=0)
    if normalized:
        G = G / SQRT_2PI
    return GaussWeights(q, G, normalized)


def _translate_exact(f: FourierCoeffs, k: int, q: int, roots: np.ndarray) -> np.ndarray:
    # coefficients of T_{2 pi k/q} f
    return roots[(-f.m * k) % q] * f.values


def apply_revival_physical(ell: int, t: RationalTime, f: FourierCoeffs) -> FourierCoeffs:
    """``R_ell(p, q) f`` assembled as ``(sqrt(2pi)/q) sum_k G(k) T_{2 pi k/q} f``."""
    G = gauss_weights(IntPolynomial.monomial(ell), t, normalized=True)
    roots = roots_of_unity(t.q)
    out = np.zeros_like(f.values)
    for k, g in enumerate(G.values):
        if g != 0:
            out += g * _translate_exact(f, k, t.q, roots)
    return FourierCoeffs(f.M, out * SQRT_2PI / t.q)


def revival_multiplier(ell: int, t: RationalTime, m) -> np.ndarray:
    """``exp(-i m^ell 2 pi p/q)`` with the exponent reduced mod ``q``."""
    m = np.asarray(m, dtype=np.int64)
    r = (IntPolynomial.monomial(ell).mod(m, t.q) * (t.p % t.q)) % t.q
    return np.conj(roots_of_unity(t.q))[r]


def apply_revival_spectral(ell: int, t: RationalTime, f: FourierCoeffs) -> FourierCoeffs:
    """``R_ell(p, q) f`` as the Fourier multiplier ``exp(-i j^ell 2 pi p/q)``."""
    return f.map(revival_multiplier(ell, t, f.m))


def revival2(t: RationalTime, f: FourierCoeffs) -> FourierCoeffs:
    return apply_revival_physical(2, t, f)


def revival3(t: RationalTime, f: FourierCoeffs) -> FourierCoeffs:
    return apply_revival_physical(3, t, f)


def revival_translates(P: IntPolynomial, t: RationalTime) -> tuple[np.ndarray, np.ndarray]:
    """Weights ``G(k)/q`` and shifts ``2 pi k/q`` of the nonzero translates.

    The periodic solution at ``t`` is ``sum_k w_k u*(x - s_k)``.
    """
    G = gauss_weights(P, t).values / t.q
    keep = np.abs(G) > 1e-13
    return G[keep], TWO_PI * np.arange(t.q)[keep] / t.q


def compose_translates(*pairs) -> tuple[np.ndarray, np.ndarray]:
    """Weights and shifts of a composition of translate sums."""
    w, s = np.ones(1, complex), np.zeros(1)
    for wk, sk in pairs:
        w = np.outer(w, wk).ravel()
        s = np.add.outer(s, sk).ravel()
    return w, s


def apply_translates(f, weights, shifts, x) -> np.ndarray:
    """``sum_k weights[k] f(x - shifts[k])`` for a callable ``f``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, complex)
    for w, s in zip(weights, shifts):
        out += w * f(x - s)
    return out


def revival_pointwise(P: IntPolynomial, t: RationalTime, u: InitialCondition, x) -> np.ndarray:
    """Untruncated revival formula ``(1/q) sum_k G(k) u*(x - 2 pi k/q)`` at points ``x``.

    ``u*`` is the 2pi-periodic extension of ``u``; no Fourier truncation is
    involved, so jumps of ``u`` are reproduced exactly.
    """
    w, s = revival_translates(P, t)
    return apply_translates(lambda y: evaluate(u, y), w, s, x)
