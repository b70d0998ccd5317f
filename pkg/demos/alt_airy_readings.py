"""Two readings of the double-sum Airy representation, checked against the
composed revival formula.

The "printed" reading samples at pi k/(dq) and translates by pi k/(2dq); the
"consistent" reading uses 2 pi k/(d^2 q) for both.

Run:  python demos/alt_airy_readings.py
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

from revival_lab import PiecewiseConstant, RationalTime
from revival_lab.correspondence import airy_alt_report


def main() -> None:
    u0 = PiecewiseConstant.step(math.pi)
    for theta in (Fraction(1, 2), Fraction(1, 3)):
        for t in (RationalTime(1, 2), RationalTime(1, 3)):
            rep = airy_alt_report(u0, theta, t, M=256, N=2048)
            print(json.dumps({k: rep[k] for k in ("theta", "p", "q", "printed", "consistent")}, indent=1))


if __name__ == "__main__":
    main()
