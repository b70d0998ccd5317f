"""Periodic Schrodinger flow from a step: revival at rational times, a rough
continuous profile at generic ones.

Run:  python demos/talbot_revival.py
"""
from __future__ import annotations

import math

from revival_lab import (
    IntPolynomial,
    PiecewiseConstant,
    RationalTime,
    analyze,
    box_dimension,
    detect_jumps,
    evolve_periodic,
    gauss_weights,
    synthesize,
)

SQ = IntPolynomial.monomial(2)
M, N = 2**13, 2**16


def main() -> None:
    u0 = PiecewiseConstant.step(math.pi)
    c0 = analyze(u0, M)

    for t in (RationalTime(1, 2), RationalTime(1, 3), RationalTime(2, 5)):
        G = gauss_weights(SQ, t)
        live = [k for k, g in enumerate(G.values) if abs(g) > 1e-12]
        u = synthesize(evolve_periodic(SQ, c0, t), N)
        print(f"t = 2pi*{t.p}/{t.q}: {len(live)} translates (k = {live}), "
              f"{len(detect_jumps(u, periodic=True))} jumps, box dimension {box_dimension(u).estimate:.3f}")

    for t in (1.0, 2.0):
        u = synthesize(evolve_periodic(SQ, c0, t), N)
        est = box_dimension(u)
        print(f"t = {t}: {len(detect_jumps(u, periodic=True))} jumps, box dimension {est.estimate:.3f} +- {est.stderr:.3f}")


if __name__ == "__main__":
    main()
