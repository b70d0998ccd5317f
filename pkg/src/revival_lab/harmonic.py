"""Fourier analysis/synthesis and the geometric operations on 2pi-periodic data.

Translation, reflection and convolution act on coefficient windows, where
they are exact; grid-space translation is only offered for whole-cell shifts.
"""
from __future__ import annotations

import warnings

import numpy as np

from .core import (
    SQRT_2PI,
    TWO_PI,
    FourierCoeffs,
    GridFunction,
    InitialCondition,
    ParameterError,
    Sampled,
    as_exact,
)

DEFAULT_M = 256
DEFAULT_N = 4096


def _check_full_period(L: float) -> None:
    if not np.isclose(L, TWO_PI, rtol=0, atol=1e-12):
        raise ParameterError("domain-mismatch", f"expected data on [0, 2pi), got length {L}")


def analyze(u: InitialCondition, M: int = DEFAULT_M) -> FourierCoeffs:
    """Coefficients ``<u, e_m>`` for ``|m| <= M``.

    Piecewise and harmonic data are integrated in closed form. Sampled data
    use the discrete transform, which needs ``N >= 2M+1`` samples.
    """
    if M < 1:
        raise ParameterError("invalid-window", "M must be >= 1")
    u = as_exact(u)
    _check_full_period(u.domain_length)
    m = np.arange(-M, M + 1)
    if isinstance(u, Sampled):
        N = u.grid.N
        if N < 2 * M + 1:
            raise ParameterError("aliasing-risk", f"N={N} samples cannot resolve |m| <= {M}")
        if N < 4 * M:
            warnings.warn(f"N={N} < 4M={4 * M}: sampled coefficients near |m|=M are aliased", stacklevel=2)
        spectrum = np.fft.fft(u.grid.samples) * (u.grid.dx / SQRT_2PI)
        return FourierCoeffs(M, spectrum[m % N])
    return FourierCoeffs(M, u.moments(-1j * m) / SQRT_2PI)


def synthesize(c: FourierCoeffs, N: int = DEFAULT_N, domain_length: float = TWO_PI) -> GridFunction:
    """Evaluate ``sum c(m) e_m(x)`` on the grid of ``[0, domain_length)``.

    ``domain_length`` must divide 2pi; for ``pi`` the first half of a
    doubled grid on ``[0, 2pi)`` is returned.
    """
    ratio = TWO_PI / domain_length
    r = int(round(ratio))
    if r < 1 or abs(ratio - r) > 1e-9:
        raise ParameterError("domain-mismatch", "domain length must be 2pi/r for integer r")
    K = N * r
    if K < 2 * c.M + 1:
        raise ParameterError("grid-too-small", f"N={N} cannot carry |m| <= {c.M}")
    a = np.zeros(K, complex)
    np.add.at(a, c.m % K, c.values)
    samples = np.fft.ifft(a) * (K / SQRT_2PI)
    return GridFunction(domain_length, samples[:N])


def translate(c: FourierCoeffs, s: float) -> FourierCoeffs:
    """Periodic translation ``f -> f*(x - s)``: ``c(m) -> exp(-ims) c(m)``."""
    return c.map(np.exp(-1j * c.m * s))


def reflect(c: FourierCoeffs) -> FourierCoeffs:
    """``f(x) -> f(2pi - x)``: ``c(m) -> c(-m)``."""
    return FourierCoeffs(c.M, c.values[::-1])


def extend_even_odd(u: InitialCondition, sign: int):
    """Even (``sign=+1``) or odd (``sign=-1``) extension of data on ``(0, pi)`` to ``(0, 2pi)``."""
    if sign not in (1, -1):
        raise ParameterError("invalid-sign", "sign must be +1 or -1")
    u = as_exact(u)
    if not np.isclose(u.domain_length, np.pi, rtol=0, atol=1e-12):
        raise ParameterError("domain-mismatch", "even/odd extension needs data on (0, pi)")
    return u.extend(sign)


def convolve(f: FourierCoeffs, g: FourierCoeffs) -> FourierCoeffs:
    """Periodic convolution ``(1/sqrt(2pi)) int f*(x-y) g*(y) dy``, i.e. ``f(m) g(m)``."""
    M = min(f.M, g.M)
    return FourierCoeffs(M, f.truncate(M).values * g.truncate(M).values)


def translate_grid(u: GridFunction, k: int) -> GridFunction:
    """Whole-cell periodic shift by ``s = k * dx``."""
    return u.with_samples(np.roll(u.samples, k))


def modulate_grid(u: GridFunction, alpha: float) -> GridFunction:
    """Multiply samples by ``exp(i alpha x)``."""
    return u.with_samples(u.samples * np.exp(1j * alpha * u.x))
