"""Domain model shared by every solver: times, boundary data, initial data, grids.

All values are immutable after construction. Arrays held by the dataclasses
are copied and flagged read-only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi
SQRT_2PI = math.sqrt(TWO_PI)

#: Tolerance used for reality and degeneracy checks on boundary parameters.
TOL = 1e-12


# --------------------------------------------------------------------------
# Errors
# --------------------------------------------------------------------------

class RevivalLabError(Exception):
    """Base class. ``kind`` is a short stable identifier such as ``"undefined-k0"``."""

    def __init__(self, kind: str, message: str = ""):
        self.kind = kind
        super().__init__(f"{kind}: {message}" if message else kind)


class ParameterError(RevivalLabError, ValueError):
    """Invalid user-supplied parameters (bad fraction, unsupported boundary data...)."""


class NumericalError(RevivalLabError, ArithmeticError):
    """A computation that cannot be carried out in double precision."""


def _frozen(a, dtype=None) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


# --------------------------------------------------------------------------
# Rational times
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalTime:
    """The time ``t = 2*pi*p/q`` with ``gcd(p, q) = 1``.

    Use :func:`reduce_rational` to build one from an unreduced pair.
    """

    p: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError("invalid-denominator", f"q={self.q}")
        if self.p < 0:
            raise ParameterError("invalid-numerator", f"p={self.p}")
        if math.gcd(self.p, self.q) != 1:
            raise ParameterError("not-reduced", f"gcd({self.p}, {self.q}) != 1")

    @property
    def t(self) -> float:
        return TWO_PI * self.p / self.q

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return self.t


def reduce_rational(p: int, q: int) -> RationalTime:
    """Reduce ``p/q`` to lowest terms. ``(0, q)`` reduces to ``(0, 1)``."""
    p, q = int(p), int(q)
    if q == 0:
        raise ParameterError("invalid-denominator", "q must be >= 1")
    if q < 0:
        p, q = -p, -q
    g = math.gcd(p, q)
    return RationalTime(p // g, q // g)


TimeLike = Union[float, RationalTime]


def as_float_time(t: TimeLike) -> float:
    return t.t if isinstance(t, RationalTime) else float(t)


# --------------------------------------------------------------------------
# Integer polynomials (dispersion relations)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if any(c != c0 for c, c0 in zip(cs, self.coeffs)):
            raise ParameterError("non-integer-polynomial", str(self.coeffs))
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs or (0,))

    @classmethod
    def monomial(cls, degree: int) -> "IntPolynomial":
        return cls((0,) * degree + (1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        out = np.zeros_like(m)
        for c in reversed(self.coeffs):
            out = out * m + c
        return out

    def mod(self, m, q: int) -> np.ndarray:
        """``P(m) mod q`` in exact integer arithmetic (entries in ``[0, q)``)."""
        m = np.asarray(m, dtype=np.int64) % q
        out = np.zeros_like(m)
        for c in reversed(self.coeffs):
            out = (out * m + c) % q
        return out

    def __str__(self) -> str:
        terms = []
        for k, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "" if k == 0 else ("m" if k == 1 else f"m^{k}")
            coef = str(abs(c)) if (abs(c) != 1 or not mono) else ""
            body = f"{coef}*{mono}" if coef and mono else coef or mono
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return text + "".join(f" {sign} {body}" for sign, body in terms[1:])


# --------------------------------------------------------------------------
# Boundary data
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Periodic:
    """Periodic problem ``u_t + i P(-i d/dx) u = 0`` on ``[0, 2pi]``."""

    P: IntPolynomial = field(default_factory=lambda: IntPolynomial.monomial(2))


@dataclass(frozen=True)
class PseudoPeriodicLS:
    """Schrodinger equation with ``beta0 u(0) = u(2pi)``, ``beta1 u'(0) = u'(2pi)``."""

    beta0: complex
    beta1: complex

    @classmethod
    def quasi_periodic(cls, theta: float) -> "PseudoPeriodicLS":
        beta = complex(np.exp(2j * np.pi * float(theta)))
        return cls(beta, beta)


@dataclass(frozen=True)
class QuasiPeriodicAiry:
    """Airy equation with ``exp(2 pi i theta) d^k u(0) = d^k u(2pi)``, k = 0, 1, 2.

    ``theta`` may be a :class:`fractions.Fraction` when an exact rational
    value is needed by the revival formulas.
    """

    theta: Union[float, Fraction]


@dataclass(frozen=True)
class Robin:
    """Schrodinger equation on ``(0, pi)`` with ``b u = (1-b) u_x`` at both ends."""

    b: float


BoundarySpec = Union[Periodic, PseudoPeriodicLS, QuasiPeriodicAiry, Robin]


@dataclass(frozen=True)
class BoundaryCheck:
    spec: BoundarySpec
    self_adjoint: bool
    periodic_degenerate: bool = False
    ratio: float | None = None


def pseudo_ratio(beta0: complex, beta1: complex) -> complex:
    """``(1 + beta0 beta1) / (beta0 + beta1)``, the cosine of ``2 pi k0``."""
    s = complex(beta0) + complex(beta1)
    if abs(s) <= TOL:
        raise ParameterError("undefined-k0", "beta0 + beta1 = 0")
    return (1 + complex(beta0) * complex(beta1)) / s


def validate_boundary(spec: BoundarySpec) -> BoundaryCheck:
    """Check the admissibility conditions of ``spec`` and compute degeneracy flags."""
    if isinstance(spec, Periodic):
        if spec.P.degree < 1:
            raise ParameterError("invalid-polynomial", "dispersion relation must be non-constant")
        return BoundaryCheck(spec, self_adjoint=True)
    if isinstance(spec, PseudoPeriodicLS):
        r = pseudo_ratio(spec.beta0, spec.beta1)
        if abs(r.imag) > TOL or abs(r.real) > 1 + TOL:
            raise ParameterError(
                "complex-spectrum-unsupported",
                f"(1+b0 b1)/(b0+b1) = {r:.6g} is not a real number in [-1, 1]",
            )
        self_adjoint = abs(np.conj(spec.beta0) * spec.beta1 - 1) <= TOL
        return BoundaryCheck(
            spec,
            self_adjoint=bool(self_adjoint),
            periodic_degenerate=abs(r.real - 1) <= TOL,
            ratio=float(np.clip(r.real, -1.0, 1.0)),
        )
    if isinstance(spec, QuasiPeriodicAiry):
        if not 0 <= spec.theta < 1:
            raise ParameterError("invalid-theta", f"theta={spec.theta} not in [0, 1)")
        return BoundaryCheck(spec, self_adjoint=True)
    if isinstance(spec, Robin):
        if not 0 <= spec.b <= 1:
            raise ParameterError("invalid-robin-parameter", f"b={spec.b} not in [0, 1]")
        return BoundaryCheck(spec, self_adjoint=True)
    raise ParameterError("unknown-boundary", type(spec).__name__)


# --------------------------------------------------------------------------
# Grids and coefficient windows
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples on the uniform grid ``x_n = n L / N`` of ``[0, L)``."""

    domain_length: float
    samples: np.ndarray

    def __post_init__(self):
        s = _frozen(self.samples, complex)
        if s.ndim != 1 or s.size < 2:
            raise ParameterError("invalid-grid", "need a 1-d grid with N >= 2")
        if not np.all(np.isfinite(s)):
            raise NumericalError("non-finite-samples")
        object.__setattr__(self, "samples", s)

    @property
    def N(self) -> int:
        return self.samples.size

    @property
    def dx(self) -> float:
        return self.domain_length / self.N

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.N) * self.dx

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.dx))

    def with_samples(self, samples) -> "GridFunction":
        return GridFunction(self.domain_length, samples)


def grid_points(N: int, domain_length: float = TWO_PI) -> np.ndarray:
    return np.arange(N) * (domain_length / N)


@dataclass(frozen=True, eq=False)
class FourierCoeffs:
    """Coefficients ``c(m)``, ``|m| <= M``, in the basis ``e_m = exp(imx)/sqrt(2 pi)``."""

    M: int
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values, complex)
        if self.M < 0 or v.shape != (2 * self.M + 1,):
            raise ParameterError("invalid-window", f"expected {2 * self.M + 1} values for M={self.M}")
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, M: int) -> "FourierCoeffs":
        return cls(M, np.zeros(2 * M + 1, complex))

    @classmethod
    def from_dict(cls, M: int, entries: dict[int, complex]) -> "FourierCoeffs":
        v = np.zeros(2 * M + 1, complex)
        for m, c in entries.items():
            if abs(m) <= M:
                v[m + M] = c
        return cls(M, v)

    @property
    def m(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    def __getitem__(self, m: int) -> complex:
        if abs(m) > self.M:
            return 0j
        return complex(self.values[m + self.M])

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def truncate(self, M: int) -> "FourierCoeffs":
        if M >= self.M:
            v = np.zeros(2 * M + 1, complex)
            v[M - self.M: M + self.M + 1] = self.values
            return FourierCoeffs(M, v)
        return FourierCoeffs(M, self.values[self.M - M: self.M + M + 1])

    def map(self, multiplier) -> "FourierCoeffs":
        return FourierCoeffs(self.M, self.values * multiplier)

    def __add__(self, other: "FourierCoeffs") -> "FourierCoeffs":
        M = max(self.M, other.M)
        return FourierCoeffs(M, self.truncate(M).values + other.truncate(M).values)

    def __sub__(self, other: "FourierCoeffs") -> "FourierCoeffs":
        return self + (-1) * other

    def __mul__(self, scalar) -> "FourierCoeffs":
        return FourierCoeffs(self.M, self.values * scalar)

    __rmul__ = __mul__


# --------------------------------------------------------------------------
# Initial data
# --------------------------------------------------------------------------

def _segment_integral(z: np.ndarray, a: float, b: float, origin: float) -> np.ndarray:
    """``int_a^b exp(z (x - origin)) dx`` for an array of complex ``z``.

    Anchored at whichever endpoint keeps the exponent's real part bounded, so
    large positive or negative ``Re z`` does not overflow.
    """
    h = b - a
    out = np.empty(z.shape, complex)
    small = np.abs(z * h) < 1e-8
    zs = z[small]
    out[small] = np.exp(zs * (a - origin)) * h * (1 + zs * h / 2)
    zb = z[~small]
    right = zb.real > 0
    res = np.empty(zb.shape, complex)
    zr = zb[right]
    res[right] = np.exp(zr * (b - origin)) * (-np.expm1(-zr * h)) / zr
    zl = zb[~right]
    res[~right] = np.exp(zl * (a - origin)) * np.expm1(zl * h) / zl
    out[~small] = res
    return out


@dataclass(frozen=True, eq=False)
class PiecewiseExponential:
    """Exact carrier: on piece ``[edges[i], edges[i+1])`` the function is
    ``sum_l amps[i][l] * exp(i * freqs[i][l] * x)``.

    Closed under modulation, reflection and even/odd extension, and every
    inner product against an exponential has a closed form. Built by
    :class:`PiecewiseConstant` and :class:`HarmonicSum`.
    """

    edges: np.ndarray
    freqs: tuple
    amps: tuple

    def __post_init__(self):
        e = _frozen(self.edges, float)
        if e.ndim != 1 or e.size < 2 or e[0] != 0 or np.any(np.diff(e) <= 0):
            raise ParameterError("invalid-breakpoints", "edges must start at 0 and increase strictly")
        if len(self.freqs) != e.size - 1 or len(self.amps) != e.size - 1:
            raise ParameterError("invalid-breakpoints", "one term list per piece")
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "freqs", tuple(_frozen(f, float) for f in self.freqs))
        object.__setattr__(self, "amps", tuple(_frozen(a, complex) for a in self.amps))

    @property
    def domain_length(self) -> float:
        return float(self.edges[-1])

    def moments(self, mu, origin: float = 0.0) -> np.ndarray:
        """``int_0^L u(x) exp(mu (x - origin)) dx`` for each entry of ``mu``."""
        mu = np.asarray(mu, dtype=complex)
        flat = mu.ravel()
        out = np.zeros(flat.shape, complex)
        for a, b, fr, am in zip(self.edges[:-1], self.edges[1:], self.freqs, self.amps):
            for k, A in zip(fr, am):
                if A == 0:
                    continue
                # exp(i k x) exp(mu (x - origin)) = exp(i k origin) exp((mu + i k)(x - origin))
                out += A * np.exp(1j * k * origin) * _segment_integral(flat + 1j * k, a, b, origin)
        return out.reshape(mu.shape)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        L = self.domain_length
        xr = np.mod(x, L)
        idx = np.clip(np.searchsorted(self.edges, xr, side="right") - 1, 0, len(self.freqs) - 1)
        out = np.zeros(xr.shape, complex)
        for i, (fr, am) in enumerate(zip(self.freqs, self.amps)):
            sel = idx == i
            if np.any(sel):
                xs = xr[sel]
                out[sel] = np.exp(1j * np.outer(xs, fr)) @ am
        return out

    def modulate(self, alpha: float) -> "PiecewiseExponential":
        """Multiply by ``exp(i alpha x)``."""
        return PiecewiseExponential(self.edges, tuple(f + alpha for f in self.freqs), self.amps)

    def reflect(self) -> "PiecewiseExponential":
        """``x -> u(L - x)``."""
        L = self.domain_length
        edges = L - self.edges[::-1]
        freqs = tuple(-f for f in reversed(self.freqs))
        amps = tuple(a * np.exp(1j * f * L) for f, a in zip(reversed(self.freqs), reversed(self.amps)))
        return PiecewiseExponential(edges, freqs, amps)

    def extend(self, sign: int) -> "PiecewiseExponential":
        """Even (``sign=+1``) or odd (``sign=-1``) extension to ``[0, 2L)``."""
        L = self.domain_length
        mirrored = self.reflect()
        edges = np.concatenate([self.edges, L + mirrored.edges[1:]])
        # on [L, 2L): sign * u(2L - x) = sign * u_reflected(x - L)
        freqs = self.freqs + mirrored.freqs
        amps = self.amps + tuple(sign * a * np.exp(-1j * f * L) for f, a in zip(mirrored.freqs, mirrored.amps))
        return PiecewiseExponential(edges, freqs, amps)

    def scale(self, c: complex) -> "PiecewiseExponential":
        return PiecewiseExponential(self.edges, self.freqs, tuple(a * c for a in self.amps))


@dataclass(frozen=True, eq=False)
class PiecewiseConstant:
    """Piecewise-constant data on ``[0, L)``.

    ``values[i]`` holds on ``[breakpoints[i], breakpoints[i+1])``; the last
    value holds on ``[breakpoints[-1], L)`` and wraps round to
    ``[0, breakpoints[0])``. The value at a breakpoint is the value of the
    interval to its right.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    domain_length: float = TWO_PI

    def __post_init__(self):
        bp = _frozen(self.breakpoints, float)
        vals = _frozen(self.values, complex)
        if bp.ndim != 1 or bp.size == 0 or bp.size != vals.size:
            raise ParameterError("invalid-breakpoints", "need one value per breakpoint")
        if np.any(np.diff(bp) <= 0) or bp[0] < 0 or bp[-1] >= self.domain_length:
            raise ParameterError("invalid-breakpoints", "breakpoints must increase strictly inside [0, L)")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)

    @classmethod
    def step(cls, at: float = math.pi, low: complex = 0.0, high: complex = 1.0,
             domain_length: float = TWO_PI) -> "PiecewiseConstant":
        """``low`` on ``[0, at)``, ``high`` on ``[at, L)``."""
        return cls([0.0, at], [low, high], domain_length)

    def as_piecewise(self) -> PiecewiseExponential:
        bp, vals, L = self.breakpoints, self.values, self.domain_length
        if bp[0] > 0:
            edges = np.concatenate([[0.0], bp, [L]])
            vals = np.concatenate([vals[-1:], vals])
        else:
            edges = np.concatenate([bp, [L]])
        zero = np.zeros(1)
        return PiecewiseExponential(edges, tuple(zero for _ in vals), tuple(np.array([v]) for v in vals))

    @property
    def jump_locations(self) -> np.ndarray:
        pw = self.as_piecewise()
        return pw.edges[1:-1][np.diff(np.array([a[0] for a in pw.amps])) != 0]


@dataclass(frozen=True, eq=False)
class HarmonicSum:
    """``u(x) = sum amplitude * exp(i m x)`` over ``terms = [(m, amplitude), ...]``.

    Frequencies are normally integers. Non-integer frequencies are accepted
    and give quasi-periodic data, e.g. finite combinations of the
    eigenfunctions of a non-periodic problem.
    """

    terms: tuple
    domain_length: float = TWO_PI

    def __post_init__(self):
        terms = tuple((float(m), complex(a)) for m, a in self.terms)
        if not terms:
            raise ParameterError("empty-harmonic-sum")
        object.__setattr__(self, "terms", terms)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([m for m, _ in self.terms])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, a in self.terms])

    def as_piecewise(self) -> PiecewiseExponential:
        return PiecewiseExponential([0.0, self.domain_length], (self.frequencies,), (self.amplitudes,))


@dataclass(frozen=True, eq=False)
class Sampled:
    """Initial data given as grid samples; integrals use the rectangle rule."""

    grid: GridFunction

    @property
    def domain_length(self) -> float:
        return self.grid.domain_length

    def moments(self, mu, origin: float = 0.0) -> np.ndarray:
        mu = np.asarray(mu, dtype=complex)
        x = self.grid.x
        out = np.exp(np.multiply.outer(mu.ravel(), x - origin)) @ self.grid.samples * self.grid.dx
        return out.reshape(mu.shape)

    def __call__(self, x) -> np.ndarray:
        g = self.grid
        xs = np.append(g.x, g.domain_length)
        ys = np.append(g.samples, g.samples[0])
        xr = np.mod(np.asarray(x, float), g.domain_length)
        return np.interp(xr, xs, ys.real) + 1j * np.interp(xr, xs, ys.imag)

    def modulate(self, alpha: float) -> "Sampled":
        g = self.grid
        return Sampled(g.with_samples(g.samples * np.exp(1j * alpha * g.x)))

    def reflect(self) -> "Sampled":
        s = self.grid.samples
        return Sampled(self.grid.with_samples(np.roll(s[::-1], 1)))

    def extend(self, sign: int) -> "Sampled":
        s = self.grid.samples
        # second half at x = L + n h maps to u(L - n h); x = L itself uses the last sample
        tail = np.concatenate([s[-1:], s[:0:-1]])
        return Sampled(GridFunction(2 * self.domain_length, np.concatenate([s, sign * tail])))

    def scale(self, c: complex) -> "Sampled":
        return Sampled(self.grid.with_samples(self.grid.samples * c))


InitialCondition = Union[PiecewiseConstant, HarmonicSum, Sampled, PiecewiseExponential]


def as_exact(u: InitialCondition) -> Union[PiecewiseExponential, Sampled]:
    """Normalise any initial condition to a carrier supporting moments and transforms."""
    if isinstance(u, (PiecewiseConstant, HarmonicSum)):
        return u.as_piecewise()
    if isinstance(u, (PiecewiseExponential, Sampled)):
        return u
    if isinstance(u, GridFunction):
        return Sampled(u)
    raise ParameterError("unknown-initial-condition", type(u).__name__)


def moments(u: InitialCondition, mu, origin: float = 0.0) -> np.ndarray:
    """``int_0^L u(x) exp(mu (x - origin)) dx``, exact for piecewise and harmonic data."""
    return as_exact(u).moments(mu, origin)


def evaluate(u: InitialCondition, x) -> np.ndarray:
    """Pointwise values of the ``L``-periodic extension of ``u``."""
    return as_exact(u)(x)


def modulate(u: InitialCondition, alpha: float):
    """``exp(i alpha x) u(x)``."""
    return as_exact(u).modulate(alpha)


def domain_length(u: InitialCondition) -> float:
    return as_exact(u).domain_length


def sample(u: InitialCondition, N: int) -> GridFunction:
    L = domain_length(u)
    return GridFunction(L, evaluate(u, grid_points(N, L)))
