"""CSV serialisation of grid functions and coefficient windows.

Numbers are written in the shortest form that round-trips a double, so equal
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .core import TWO_PI, FourierCoeffs, GridFunction, ParameterError


def _fmt(v: float) -> str:
    return repr(float(v))


def write_grid_csv(path: str | Path, u: GridFunction) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "re", "im"])
        for x, z in zip(u.x, u.samples):
            w.writerow([_fmt(x), _fmt(z.real), _fmt(z.imag)])


def write_modes_csv(path: str | Path, modes, values) -> None:
    """Header ``m,re,im``; ``modes`` are integer labels of the basis functions."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "re", "im"])
        for m, z in zip(modes, values):
            w.writerow([int(m), _fmt(complex(z).real), _fmt(complex(z).imag)])


def write_coeffs_csv(path: str | Path, c: FourierCoeffs) -> None:
    write_modes_csv(path, c.m, c.values)


def _read_rows(path: str | Path, header: list[str]) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ParameterError("io-error", f"cannot read {path}: {exc.strerror}") from None
    if not rows or [h.strip() for h in rows[0]] != header:
        raise ParameterError("bad-csv", f"{path}: expected header {','.join(header)}")
    try:
        return np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float).reshape(-1, 3)
    except ValueError as exc:
        raise ParameterError("bad-csv", f"{path}: {exc}") from None


def read_grid_csv(path: str | Path) -> GridFunction:
    """Inverse of :func:`write_grid_csv`; the domain is ``pi`` or ``2 pi``, inferred from the spacing."""
    data = _read_rows(path, ["x", "re", "im"])
    if data.shape[0] < 2:
        raise ParameterError("bad-csv", f"{path}: need at least two samples")
    N = data.shape[0]
    L = (data[1, 0] - data[0, 0]) * N
    for cand in (TWO_PI, math.pi):
        if math.isclose(L, cand, rel_tol=1e-9):
            L = cand
            break
    return GridFunction(L, data[:, 1] + 1j * data[:, 2])


def read_coeffs_csv(path: str | Path) -> FourierCoeffs:
    data = _read_rows(path, ["m", "re", "im"])
    m = data[:, 0].astype(int)
    M = int(np.max(np.abs(m)))
    return FourierCoeffs.from_dict(M, {int(k): complex(a, b) for k, a, b in zip(m, data[:, 1], data[:, 2])})
