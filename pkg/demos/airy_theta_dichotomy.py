"""Quasi-periodic Airy flow: rational theta keeps the revival, irrational theta
smooths the jumps out even at rational times.

Run:  python demos/airy_theta_dichotomy.py
"""
from __future__ import annotations

import math
from fractions import Fraction

from revival_lab import PiecewiseConstant, RationalTime, airy_qp_revival, airy_qp_via_ls, compare, detect_jumps
from revival_lab.spectral import evolve_airy_qp

M, N = 1024, 4096
TIMES = [RationalTime(1, 2), RationalTime(1, 3), RationalTime(2, 5)]


def main() -> None:
    u0 = PiecewiseConstant.step(math.pi)
    for theta in (Fraction(1, 4), Fraction(1, 3), math.sqrt(2) / 3):
        counts = []
        for t in TIMES:
            series = evolve_airy_qp(u0, theta, t, M, N)
            counts.append(len(detect_jumps(series)))
            engine = airy_qp_revival if isinstance(theta, Fraction) else airy_qp_via_ls
            err = compare(engine(u0, theta, t, M, N), series).l2_rel_err
            print(f"theta={theta!s:>20} t=2pi*{t.p}/{t.q}: {counts[-1]} jumps, engine vs series {err:.1e}")
        print()


if __name__ == "__main__":
    main()
