"""Robin problem on (0, pi): jumps revive at rational times, but the profile is
no longer a finite sum of translates.

Run:  python demos/robin_weak_revival.py
"""
from __future__ import annotations

import math

from revival_lab import PiecewiseConstant, RationalTime, compare, detect_jumps, evolve_robin, robin_revival
from revival_lab.spectral import robin_model

M, N = 1024, 2048


def main() -> None:
    u0 = PiecewiseConstant.step(math.pi / 2, domain_length=math.pi)
    for b in (0.35, 0.6):
        model = robin_model(b)
        print(f"b = {b}: m_b = {model.m_b:.4f}, negative eigenvalue {model.lambda_b:.4f}")
        for t in (RationalTime(1, 2), RationalTime(1, 3), RationalTime(2, 5), 1.0):
            series = evolve_robin(u0, b, t, M, N)
            line = f"  t = {float(t):.4f}: {len(detect_jumps(series))} jumps"
            if isinstance(t, RationalTime):
                line += f", revival formula vs series {compare(robin_revival(u0, b, t, M, N), series).l2_rel_err:.1e}"
            print(line)

    print("\nNeumann limit b -> 0+ at t = 2pi/3:")
    t = RationalTime(1, 3)
    ref = evolve_robin(u0, 0.0, t, M, N)
    for b in (1e-1, 1e-2, 1e-3, 1e-4):
        print(f"  b = {b:g}: {compare(evolve_robin(u0, b, t, M, N), ref).l2_rel_err:.2e}")


if __name__ == "__main__":
    main()
