"""Direct eigenfunction-expansion solvers.

Every solver here sums its eigenfunction series term by term on the grid,
using closed-form eigenpairs, exact inner products and direct exponential
sums (no FFTs, translations or reflections). They are the reference that
the representation formulas in :mod:`revival_lab.correspondence` are checked
against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    SQRT_2PI,
    TOL,
    TWO_PI,
    FourierCoeffs,
    GridFunction,
    InitialCondition,
    IntPolynomial,
    NumericalError,
    ParameterError,
    PseudoPeriodicLS,
    QuasiPeriodicAiry,
    RationalTime,
    Robin,
    TimeLike,
    as_float_time,
    domain_length,
    grid_points,
    moments,
    validate_boundary,
)
from .harmonic import DEFAULT_M, DEFAULT_N
from .revival import roots_of_unity

#: Largest ``m_b = b/(1-b)`` accepted by the Robin solver.
MAX_ROBIN_RATE = 700.0


def exp_sum(amplitudes, wavenumbers, x, chunk: int = 1 << 22) -> np.ndarray:
    """``sum_j amplitudes[j] * exp(i wavenumbers[j] x)`` by direct summation."""
    a = np.asarray(amplitudes, complex)
    k = np.asarray(wavenumbers, float)
    x = np.asarray(x, float)
    out = np.empty(x.shape, complex)
    step = max(1, chunk // max(1, k.size))
    for s in range(0, x.size, step):
        xs = x[s:s + step]
        out[s:s + step] = np.exp(1j * np.outer(xs, k)) @ a
    return out


# --------------------------------------------------------------------------
# Periodic problems
# --------------------------------------------------------------------------

def evolve_periodic(P: IntPolynomial, c0: FourierCoeffs, t: TimeLike) -> FourierCoeffs:
    """``c(m) = exp(-i P(m) t) c0(m)``; rational ``t`` uses exact phase reduction."""
    if isinstance(t, RationalTime):
        r = (P.mod(c0.m, t.q) * (t.p % t.q)) % t.q
        return c0.map(np.conj(roots_of_unity(t.q))[r])
    return c0.map(np.exp(-1j * P(c0.m) * float(t)))


# --------------------------------------------------------------------------
# Pseudo-periodic Schrodinger problem
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PseudoPeriodicModel:
    """Spectral data of ``-phi'' = lambda phi`` with ``beta0 phi(0) = phi(2pi)``,
    ``beta1 phi'(0) = phi'(2pi)``.

    Eigenvalues are ``k_j^2`` with ``k_j = j + k0``. ``phi`` and ``psi`` are
    bi-orthogonal: ``<phi_j, psi_k> = delta_jk``.
    """

    beta0: complex
    beta1: complex
    k0: float
    gamma: complex
    tau: complex
    Lambda0: complex
    I0: complex
    self_adjoint: bool

    def k(self, j) -> np.ndarray:
        return np.asarray(j, float) + self.k0

    def phi(self, j: int, x, derivative: int = 0) -> np.ndarray:
        k = self.k(j)
        x = np.asarray(x, float)
        val = (1j * k) ** derivative * np.exp(1j * k * x) \
            + self.Lambda0 * (-1j * k) ** derivative * np.exp(-1j * k * x)
        return val / np.sqrt(TWO_PI * self.tau)

    def psi(self, j: int, x, derivative: int = 0) -> np.ndarray:
        # normalised so that <phi_j, psi_j> = 1 when tau is complex
        k = self.k(j)
        x = np.asarray(x, float)
        val = (1j * k) ** derivative * np.exp(1j * k * x) \
            + self.I0 * (-1j * k) ** derivative * np.exp(-1j * k * x)
        return val / (SQRT_2PI * np.conj(np.sqrt(self.tau)))

    def coefficients(self, u0: InitialCondition, M: int) -> tuple[np.ndarray, np.ndarray]:
        """Mode indices ``j`` and ``<u0, psi_j>`` for ``|j| <= M``."""
        j = np.arange(-M, M + 1)
        k = self.k(j)
        lhs = moments(u0, -1j * k) + np.conj(self.I0) * moments(u0, 1j * k)
        return j, lhs / (SQRT_2PI * np.sqrt(self.tau))


def _pick(num_den_pairs) -> complex:
    num, den = max(num_den_pairs, key=lambda nd: abs(nd[1]))
    if abs(den) <= TOL:
        raise NumericalError("degenerate-normalization", "eigenfunction coefficient is 0/0")
    return num / den


def ls_pp_model(beta0, beta1=None) -> PseudoPeriodicModel:
    """Closed-form spectral constants for the pseudo-periodic Schrodinger problem.

    ``k0 = arccos(r)/(2 pi)`` on the principal branch, with
    ``r = (1 + beta0 beta1)/(beta0 + beta1)`` and ``gamma = exp(2 pi i k0)``.
    Quasi-periodic data ``beta0 = beta1 = exp(2 pi i theta)`` are handled
    directly: ``k0 = theta``, ``Lambda0 = I0 = 0``, ``tau = 1``. This covers
    ``theta = 1/2``, where the spectrum is double and the general formulas
    are 0/0.
    """
    spec = beta0 if isinstance(beta0, PseudoPeriodicLS) else PseudoPeriodicLS(complex(beta0), complex(beta1))
    check = validate_boundary(spec)
    if check.periodic_degenerate:
        raise ParameterError(
            "periodic-degenerate",
            "(1+b0 b1)/(b0+b1) = 1: k0 = 0 and Lambda0 is 0/0; use the periodic solver",
        )
    b0, b1 = complex(spec.beta0), complex(spec.beta1)
    if abs(b0 - b1) <= TOL and abs(abs(b0) - 1) <= TOL:
        theta = (math.atan2(b0.imag, b0.real) / TWO_PI) % 1.0
        return PseudoPeriodicModel(b0, b1, theta, b0, 1 + 0j, 0j, 0j, True)
    r = check.ratio
    k0 = math.acos(r) / TWO_PI
    gamma = complex(r, math.sqrt(max(0.0, 1 - r * r)))
    Lambda0 = _pick([(gamma - b0, b0 - 1 / gamma), (gamma - b1, 1 / gamma - b1)])
    c0, c1 = b0.conjugate(), b1.conjugate()
    I0 = _pick([(c1 * gamma - 1, 1 - c1 / gamma), (c0 * gamma - 1, c0 / gamma - 1)])
    tau_den = (b0 * gamma - 1) * (b1 * gamma - 1)
    tau_num = (gamma**2 + 1) * (b0 * b1 + 1) - 2 * gamma * (b0 + b1)
    if abs(tau_den) <= TOL or abs(tau_num) <= TOL * abs(tau_den):
        raise NumericalError("degenerate-normalization", f"tau = {tau_num}/{tau_den}")
    return PseudoPeriodicModel(b0, b1, k0, gamma, tau_num / tau_den, Lambda0, I0, check.self_adjoint)


def ls_pseudo_modes(u0: InitialCondition, model: PseudoPeriodicModel, t: float, M: int):
    """``j`` and the modal amplitudes ``<u0, psi_j> exp(-i k_j^2 t)``."""
    j, a = model.coefficients(u0, M)
    return j, a * np.exp(-1j * model.k(j) ** 2 * float(t))


def evolve_ls_pseudo(u0: InitialCondition, model: PseudoPeriodicModel, t: TimeLike,
                     M: int = DEFAULT_M, N: int = DEFAULT_N) -> GridFunction:
    """``sum_{|j|<=M} <u0, psi_j> exp(-i k_j^2 t) phi_j(x)`` on the grid of ``[0, 2pi)``."""
    j, b = ls_pseudo_modes(u0, model, as_float_time(t), M)
    k = model.k(j)
    x = grid_points(N)
    u = exp_sum(b, k, x) + model.Lambda0 * exp_sum(b, -k, x)
    return GridFunction(TWO_PI, u / np.sqrt(TWO_PI * model.tau))


# --------------------------------------------------------------------------
# Quasi-periodic Airy problem
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AiryQPModel:
    """Eigenpairs ``(m + theta)^3``, ``exp(i (m + theta) x)/sqrt(2 pi)`` of ``-phi''' = i lambda phi``."""

    theta: float

    def k(self, m) -> np.ndarray:
        return np.asarray(m, float) + self.theta

    def eigenvalue(self, m) -> np.ndarray:
        return self.k(m) ** 3

    def phi(self, m: int, x, derivative: int = 0) -> np.ndarray:
        k = self.k(m)
        return (1j * k) ** derivative * np.exp(1j * k * np.asarray(x, float)) / SQRT_2PI

    def coefficients(self, u0: InitialCondition, M: int) -> tuple[np.ndarray, np.ndarray]:
        m = np.arange(-M, M + 1)
        return m, moments(u0, -1j * self.k(m)) / SQRT_2PI


def airy_qp_model(theta) -> AiryQPModel:
    validate_boundary(QuasiPeriodicAiry(theta))
    return AiryQPModel(float(theta))


def airy_qp_modes(u0: InitialCondition, theta, t: float, M: int):
    model = airy_qp_model(theta)
    m, a = model.coefficients(u0, M)
    return m, a * np.exp(-1j * model.eigenvalue(m) * float(t))


def evolve_airy_qp(u0: InitialCondition, theta, t: TimeLike,
                   M: int = DEFAULT_M, N: int = DEFAULT_N) -> GridFunction:
    """``sum_{|m|<=M} <u0, phi_m> exp(-i k_m^3 t) phi_m(x)`` with ``k_m = m + theta``."""
    m, b = airy_qp_modes(u0, theta, as_float_time(t), M)
    u = exp_sum(b, m + float(theta), grid_points(N)) / SQRT_2PI
    return GridFunction(TWO_PI, u)


# --------------------------------------------------------------------------
# Robin problem on (0, pi)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RobinModel:
    """Spectrum of ``-phi''`` on ``(0, pi)`` with ``b phi = (1-b) phi'`` at both ends.

    For ``0 < b < 1``: one negative eigenvalue ``-m_b^2`` with ``phi_b = A_b exp(m_b x)``,
    and ``j^2``, ``j >= 1``, with ``phi_j = (exp(ijx) - Lambda_j exp(-ijx))/sqrt(2 pi)``.
    """

    b: float

    @property
    def m_b(self) -> float:
        return self.b / (1 - self.b) if self.b < 1 else math.inf

    @property
    def lambda_b(self) -> float:
        return -self.m_b ** 2

    @property
    def A_b(self) -> float:
        m = self.m_b
        if m == 0:
            return 1 / math.sqrt(math.pi)
        # sqrt(2m/(e^{2 pi m} - 1)) written to stay finite for large m
        return math.exp(-math.pi * m) * math.sqrt(2 * m / -math.expm1(-2 * math.pi * m))

    def Lambda(self, j) -> np.ndarray:
        j = np.asarray(j, float)
        b = self.b
        return (b - (1 - b) * 1j * j) / (b + (1 - b) * 1j * j)

    def phi_b(self, x, derivative: int = 0) -> np.ndarray:
        m = self.m_b
        x = np.asarray(x, float)
        if m == 0:
            return np.full(x.shape, 1 / math.sqrt(math.pi)) * (derivative == 0)
        scale = math.sqrt(2 * m / -math.expm1(-2 * math.pi * m))
        return m ** derivative * scale * np.exp(m * (x - math.pi))

    def phi(self, j: int, x, derivative: int = 0) -> np.ndarray:
        x = np.asarray(x, float)
        val = (1j * j) ** derivative * np.exp(1j * j * x) \
            - self.Lambda(j) * (-1j * j) ** derivative * np.exp(-1j * j * x)
        return val / SQRT_2PI

    def rank_one_coefficient(self, u0: InitialCondition) -> complex:
        """``<u0, phi_b>`` on ``(0, pi)``."""
        m = self.m_b
        if m == 0:
            return complex(moments(u0, np.zeros(1))[0]) / math.sqrt(math.pi)
        scale = math.sqrt(2 * m / -math.expm1(-2 * math.pi * m))
        return scale * complex(moments(u0, np.array([m + 0j]), origin=math.pi)[0])


def robin_model(b: float) -> RobinModel:
    validate_boundary(Robin(b))
    model = RobinModel(float(b))
    if 0 < b < 1 and model.m_b > MAX_ROBIN_RATE:
        raise NumericalError("parameter-overflow", f"m_b = {model.m_b:.4g} > {MAX_ROBIN_RATE}")
    return model


def _check_half_domain(u0: InitialCondition) -> None:
    if not np.isclose(domain_length(u0), math.pi, rtol=0, atol=1e-12):
        raise ParameterError("domain-mismatch", "Robin data must live on (0, pi)")


def robin_modes(u0: InitialCondition, b: float, t: float, M: int):
    """Modal amplitudes of the Robin series at time ``t``.

    Returns ``(j, amps)`` for ``j = 0..M``. Slot ``j = 0`` holds the
    amplitude of the ``b``-dependent mode: ``phi_b`` for ``0 < b < 1``, the
    constant for Neumann (``b = 0``) and nothing for Dirichlet (``b = 1``).
    """
    _check_half_domain(u0)
    model = robin_model(b)
    t = float(t)
    j = np.arange(0, M + 1)
    U_plus = moments(u0, -1j * j)    # int_0^pi u0 e^{-ijx}
    U_minus = moments(u0, 1j * j)    # int_0^pi u0 e^{+ijx}
    amps = np.zeros(M + 1, complex)
    if b == 0:
        amps[1:] = (U_plus[1:] + U_minus[1:]) / math.sqrt(2 * math.pi)  # <u0, sqrt(2/pi) cos jx>
        amps[0] = U_plus[0] / math.sqrt(math.pi)
    elif b == 1:
        amps[1:] = (U_minus[1:] - U_plus[1:]) / (1j * math.sqrt(2 * math.pi))  # <u0, sqrt(2/pi) sin jx>
    else:
        Lam = model.Lambda(j[1:])
        amps[1:] = (U_plus[1:] - np.conj(Lam) * U_minus[1:]) / SQRT_2PI
        amps[0] = model.rank_one_coefficient(u0) * np.exp(1j * model.m_b ** 2 * t)
        amps[1:] *= np.exp(-1j * j[1:] ** 2 * t)
        return j, amps
    amps[1:] *= np.exp(-1j * j[1:] ** 2 * t)
    return j, amps


def evolve_robin(u0: InitialCondition, b: float, t: TimeLike,
                 M: int = DEFAULT_M, N: int = DEFAULT_N // 2) -> GridFunction:
    """Robin series on the grid of ``[0, pi)``.

    ``b = 0`` and ``b = 1`` are summed as cosine and sine series.
    """
    j, a = robin_modes(u0, b, as_float_time(t), M)
    model = RobinModel(float(b))
    x = grid_points(N, math.pi)
    jj, aj = j[1:], a[1:]
    if b == 0:
        u = a[0] / math.sqrt(math.pi) + (exp_sum(aj, jj, x) + exp_sum(aj, -jj, x)) / math.sqrt(2 * math.pi)
    elif b == 1:
        u = (exp_sum(aj, jj, x) - exp_sum(aj, -jj, x)) / (1j * math.sqrt(2 * math.pi))
    else:
        u = a[0] * model.phi_b(x) + (exp_sum(aj, jj, x) - exp_sum(aj * model.Lambda(jj), -jj, x)) / SQRT_2PI
    return GridFunction(math.pi, u)
