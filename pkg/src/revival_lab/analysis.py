"""Diagnostics on computed profiles: jumps, box-counting dimension, errors, decay."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import ndimage, stats

from .core import FourierCoeffs, GridFunction, ParameterError

DEFAULT_WINDOW = 32
DEFAULT_FACTOR = 8.0
DEFAULT_SCALES = (2.0**-10, 2.0**-4)


@dataclass(frozen=True)
class Jump:
    """A detected discontinuity: ``location`` in x units and the height across it."""

    location: float
    magnitude: float
    ratio: float


def detect_jumps(u: GridFunction, window: int = DEFAULT_WINDOW, factor: float = DEFAULT_FACTOR,
                 periodic: bool = False) -> list[Jump]:
    """Flag grid cells whose increment dominates the local median increment.

    A cell ``[x_n, x_{n+1}]`` is flagged when ``|u_{n+1} - u_n|`` exceeds
    ``factor`` times the running median of ``|u_{k+1} - u_k|`` over
    ``window + 1`` neighbouring cells. Runs of consecutive flagged cells are
    merged into one jump (across the wrap-around cell when ``periodic``),
    located at the midpoint of its largest cell.

    With ``periodic=False`` the wrap-around cell ``[x_{N-1}, x_0 + L]`` is
    ignored, so a profile that only fails to be periodic is not flagged.
    """
    s = np.asarray(u.samples)
    if s.size < 64:
        raise ParameterError("grid-too-small", "jump detection needs N >= 64")
    if periodic:
        inc = np.abs(np.roll(s, -1) - s)
    else:
        inc = np.abs(np.diff(s))
    med = ndimage.median_filter(inc, size=window + 1, mode="wrap" if periodic else "reflect")
    floor = np.finfo(float).eps * max(1.0, float(np.max(np.abs(s))))
    ratio = inc / np.maximum(med, floor)
    flagged = np.flatnonzero(ratio > factor)
    jumps: list[Jump] = []
    if flagged.size == 0:
        return jumps
    runs = np.split(flagged, np.flatnonzero(np.diff(flagged) > 1) + 1)
    n = s.size
    if periodic and len(runs) > 1 and runs[0][0] == 0 and runs[-1][-1] == n - 1:
        runs = [np.concatenate([runs[-1], runs[0]])] + runs[1:-1]
    for run in runs:
        peak = run[np.argmax(inc[run])]
        start, stop = run[0], (run[-1] + 1) % n
        jumps.append(Jump(
            location=float(((peak + 0.5) * u.dx) % u.domain_length),
            magnitude=float(abs(s[stop] - s[start])),
            ratio=float(ratio[peak]),
        ))
    return jumps


@dataclass(frozen=True)
class DimensionEstimate:
    estimate: float
    stderr: float
    scales: np.ndarray
    counts: np.ndarray

    def __iter__(self):
        yield self.estimate
        yield self.stderr


def box_dimension(u: GridFunction, scale_range: tuple[float, float] = DEFAULT_SCALES) -> DimensionEstimate:
    """Box-counting dimension of the graph of ``Re u``.

    The graph is rescaled into the unit square. For each dyadic box size
    ``eps = 2^-k`` inside ``scale_range`` the grid is cut into ``1/eps``
    columns and each column contributes ``ceil(range/eps)`` boxes, where
    ``range`` is the oscillation of the samples in the column together with
    the first sample of the next one. The estimate is the least-squares
    slope of ``log N(eps)`` against ``log(1/eps)``.
    """
    lo, hi = sorted(scale_range)
    kmin, kmax = math.ceil(-math.log2(hi) - 1e-9), math.floor(-math.log2(lo) + 1e-9)
    ks = np.arange(kmin, kmax + 1)
    if ks.size < 4:
        raise ParameterError("insufficient-scales", f"scale range {scale_range} spans {ks.size} dyadic scales")
    y = np.real(u.samples)
    N = y.size
    if N < 2**14:
        warnings.warn(f"N={N} < 2^14: box-counting estimate is unreliable", stacklevel=2)
    if 2.0 ** ks[-1] > N:
        raise ParameterError("insufficient-scales", f"finest scale 2^-{ks[-1]} is below the grid spacing")
    span = float(np.ptp(y))
    y = (y - y.min()) / span if span > 0 else np.zeros_like(y)
    y = np.append(y, y[0])  # closes the last column (periodic profile)
    counts = []
    for k in ks:
        ncol = 2**int(k)
        eps = 1.0 / ncol
        edges = np.round(np.linspace(0, N, ncol + 1)).astype(int)
        total = 0
        for a, b in zip(edges[:-1], edges[1:]):
            seg = y[a:b + 1]
            total += max(math.ceil((seg.max() - seg.min()) / eps - 1e-12), 1)
        counts.append(total)
    counts = np.asarray(counts, float)
    fit = stats.linregress(ks * math.log(2), np.log(counts))
    return DimensionEstimate(float(fit.slope), float(fit.stderr), 2.0 ** -ks.astype(float), counts)


@dataclass(frozen=True)
class Comparison:
    sup_err: float
    l2_err: float
    l2_rel_err: float

    def as_dict(self) -> dict:
        return {"sup_err": self.sup_err, "l2_err": self.l2_err, "l2_rel_err": self.l2_rel_err}


def compare(f: GridFunction, g: GridFunction) -> Comparison:
    """Sup and L2 distances between two samplings of the same grid.

    The relative error is measured against ``g``. On a uniform periodic grid
    the trapezoidal rule is the plain sum times ``dx``.
    """
    if f.N != g.N or not math.isclose(f.domain_length, g.domain_length, rel_tol=0, abs_tol=1e-12):
        raise ParameterError("grid-mismatch", f"grids differ: N={f.N}/{g.N}, L={f.domain_length}/{g.domain_length}")
    d = f.samples - g.samples
    l2 = math.sqrt(float(np.sum(np.abs(d) ** 2)) * f.dx)
    ref = g.norm()
    return Comparison(float(np.max(np.abs(d))), l2, l2 / ref if ref > 0 else (0.0 if l2 == 0 else math.inf))


def decay_exponent(c: FourierCoeffs) -> float:
    """Slope of ``log|c(m)|`` against ``log|m|`` for ``M/4 <= |m| <= M``.

    Exactly vanishing coefficients (such as the even modes of a centred
    step) are left out of the fit.
    """
    if c.M < 64:
        raise ParameterError("window-too-small", "decay estimate needs M >= 64")
    m = np.abs(c.m)
    mag = np.abs(c.values)
    sel = (m >= c.M / 4) & (mag > 1e-14 * max(1.0, float(mag.max())))
    if np.count_nonzero(sel) < 2:
        raise ParameterError("undefined-decay", "coefficient tail vanishes")
    fit = stats.linregress(np.log(m[sel]), np.log(mag[sel]))
    return float(fit.slope)
