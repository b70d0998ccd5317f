from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from revival_lab import HarmonicSum, PiecewiseConstant

settings.register_profile(
    "revival",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("revival")

# criterion number -> (passed, summary line); filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {line}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def step():
    return PiecewiseConstant.step(math.pi)


@pytest.fixture
def half_step():
    return PiecewiseConstant.step(math.pi / 2, domain_length=math.pi)


def smooth_data(seed: int = 7, K: int = 6) -> HarmonicSum:
    """A random trigonometric polynomial with rapidly decaying amplitudes."""
    r = np.random.default_rng(seed)
    return HarmonicSum([(m, (r.normal() + 1j * r.normal()) * 0.5 ** abs(m)) for m in range(-K, K + 1)])


def random_coeffs(r: np.random.Generator, M: int):
    from revival_lab import FourierCoeffs
    return FourierCoeffs(M, r.normal(size=2 * M + 1) + 1j * r.normal(size=2 * M + 1))


def self_adjoint_pairs(r: np.random.Generator, n: int) -> list[tuple[complex, complex]]:
    """``beta1 = 1/conj(beta0)`` with ``beta0 = rho e^{i alpha}``, away from the periodic limit."""
    out = []
    while len(out) < n:
        rho, alpha = r.uniform(0.3, 3.0), r.uniform(-math.pi, math.pi)
        b0 = rho * np.exp(1j * alpha)
        b1 = np.exp(1j * alpha) / rho
        ratio = 2 * math.cos(alpha) / (rho + 1 / rho)
        if abs(ratio) < 0.97 and abs(b0 - b1) > 0.05:
            out.append((complex(b0), complex(b1)))
    return out


def non_self_adjoint_pairs(r: np.random.Generator, n: int) -> list[tuple[complex, complex]]:
    """Real pairs with ``(1 + b0 b1)/(b0 + b1)`` in ``(-1, 1)`` and ``b0 b1 != 1``."""
    out = []
    while len(out) < n:
        a, b = r.uniform(0.2, 0.9), r.uniform(1.1, 3.0)
        a, b = (a, b) if r.random() < 0.5 else (b, a)
        if r.random() < 0.3:
            a, b = -a, -b
        if abs(a * b - 1) > 0.1 and abs((1 + a * b) / (a + b)) < 0.97:
            out.append((complex(a), complex(b)))
    return out
