"""Workflows shared by the command line and the demos.

``solve`` dispatches on the boundary family, ``verify`` pits each
representation formula against its direct series, ``run_figure`` rebuilds
the appendix experiments and ``run_sweep`` evaluates a parameter grid.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import correspondence as corr
from . import spectral
from .analysis import box_dimension, compare, detect_jumps
from .config import RunConfig, parse_boundary, parse_initial, parse_time, time_to_json
from .core import (
    TWO_PI,
    GridFunction,
    IntPolynomial,
    ParameterError,
    Periodic,
    PiecewiseConstant,
    PseudoPeriodicLS,
    QuasiPeriodicAiry,
    RationalTime,
    Robin,
    TimeLike,
    grid_points,
    validate_boundary,
)
from .harmonic import analyze, synthesize
from .io import write_grid_csv
from .revival import apply_revival_physical, revival_pointwise
from .svg import Panel, write_svg


def cjson(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


@dataclass
class Solution:
    u: GridFunction
    constants: dict
    modes: tuple[np.ndarray, np.ndarray] | None = None
    engine: str = "series"


def _quasi_theta(spec: PseudoPeriodicLS) -> float | None:
    b0, b1 = complex(spec.beta0), complex(spec.beta1)
    if abs(b0 - b1) <= 1e-12 and abs(abs(b0) - 1) <= 1e-12:
        return (math.atan2(b0.imag, b0.real) / TWO_PI) % 1.0
    return None


def solve(boundary, u0, t: TimeLike, M: int, N: int, engine: str = "series") -> Solution:
    """Solve one problem.

    ``engine="series"`` sums the eigenfunction expansion. ``engine="revival"``
    uses the untruncated translate formulas at rational times (falling back
    to the periodic correspondence where no finite formula exists).
    """
    rational = isinstance(t, RationalTime)
    if engine == "revival" and not rational and not isinstance(boundary, QuasiPeriodicAiry):
        raise ParameterError("needs-rational-time", "the revival engine needs t = 2 pi p/q")
    check = validate_boundary(boundary)
    if isinstance(boundary, PseudoPeriodicLS) and check.periodic_degenerate:
        boundary = Periodic(IntPolynomial.monomial(2))
    if isinstance(boundary, Periodic):
        P = boundary.P
        consts = {"P": str(P)}
        if engine == "revival":
            x = grid_points(N)
            return Solution(GridFunction(TWO_PI, revival_pointwise(P, t, u0, x)), consts, engine="revival")
        c = spectral.evolve_periodic(P, analyze(u0, M), t)
        return Solution(synthesize(c, N), consts, (c.m, c.values))
    if isinstance(boundary, PseudoPeriodicLS):
        model = spectral.ls_pp_model(boundary)
        consts = {"k0": model.k0, "gamma": cjson(model.gamma), "tau": cjson(model.tau),
                  "Lambda0": cjson(model.Lambda0), "I0": cjson(model.I0), "self_adjoint": model.self_adjoint}
        if engine == "revival":
            theta = _quasi_theta(boundary)
            if theta is not None:
                u = corr.ls_qp_revival(u0, theta, t, M, N, pointwise=True)
            else:
                u = corr.ls_pp_revival(u0, boundary.beta0, boundary.beta1, t, M, N, pointwise=True)
            return Solution(u, consts, engine="revival")
        u = spectral.evolve_ls_pseudo(u0, model, t, M, N)
        return Solution(u, consts, spectral.ls_pseudo_modes(u0, model, float(t), M))
    if isinstance(boundary, QuasiPeriodicAiry):
        theta = boundary.theta
        consts = {"theta": float(theta)}
        if engine == "revival":
            if not rational:
                raise ParameterError("needs-rational-time", "the revival engine needs t = 2 pi p/q")
            if isinstance(theta, Fraction):
                u = corr.airy_qp_revival(u0, theta, t, M, N, pointwise=True)
                consts["shifted_time"] = time_to_json(corr.airy_shifted_time(theta, t))
            else:
                u = corr.airy_qp_via_ls(u0, theta, t, M, N)
            return Solution(u, consts, engine="revival")
        u = spectral.evolve_airy_qp(u0, theta, t, M, N)
        return Solution(u, consts, spectral.airy_qp_modes(u0, theta, float(t), M))
    if isinstance(boundary, Robin):
        b = boundary.b
        model = spectral.robin_model(b)
        consts = {"b": b, "m_b": model.m_b, "lambda_b": model.lambda_b, "A_b": model.A_b}
        if engine == "revival" and 0 < b < 1:
            return Solution(corr.robin_revival(u0, b, t, M, N), consts, engine="revival")
        u = spectral.evolve_robin(u0, b, t, M, N)
        return Solution(u, consts, spectral.robin_modes(u0, b, float(t), M))
    raise ParameterError("unknown-boundary", type(boundary).__name__)


# --------------------------------------------------------------------------
# Theorem verification
# --------------------------------------------------------------------------

DEFAULT_TOLERANCE = {
    "prop31": 1e-6, "cor32": 1e-6, "qprev": 1e-6, "thm11": 1e-6,
    "cor42": 1e-6, "prop43": 1e-8, "prop51": 1e-6, "thm12": 1e-5,
}
THEOREMS = tuple(DEFAULT_TOLERANCE)


def _need(cfg: RunConfig, kind, what: str):
    if not isinstance(cfg.boundary, kind):
        raise ParameterError("wrong-boundary", f"{what} needs a {kind.__name__} boundary")
    if cfg.initial is None or cfg.time is None:
        raise ParameterError("incomplete-config", f"{what} needs 'initial' and 'time'")


def _rational(cfg: RunConfig, what: str) -> RationalTime:
    if not isinstance(cfg.time, RationalTime):
        raise ParameterError("needs-rational-time", f"{what} needs t = 2 pi p/q")
    return cfg.time


def _theta_of(cfg: RunConfig):
    th = cfg.theta
    if th is None and isinstance(cfg.boundary, PseudoPeriodicLS):
        th = _quasi_theta(cfg.boundary)
    if th is None:
        raise ParameterError("wrong-boundary", "a quasi-periodic boundary is required")
    return th


def verify(theorem: str, cfg: RunConfig) -> dict:
    """Engine-vs-series check; the report's ``passed`` flag drives the exit code."""
    if theorem not in DEFAULT_TOLERANCE:
        raise ParameterError("unknown-theorem", f"{theorem!r} not in {', '.join(THEOREMS)}")
    M, N, u0 = cfg.M, cfg.N, cfg.initial
    extra: dict = {}
    if theorem in ("prop31", "cor32"):
        _need(cfg, PseudoPeriodicLS, theorem)
        b = cfg.boundary
        oracle = spectral.evolve_ls_pseudo(u0, spectral.ls_pp_model(b), cfg.time, M, N)
        if theorem == "prop31":
            engine = corr.ls_pp_via_periodic(u0, b.beta0, b.beta1, cfg.time, M, N)
        else:
            engine = corr.ls_pp_revival(u0, b.beta0, b.beta1, _rational(cfg, theorem), M, N)
    elif theorem == "qprev":
        _need(cfg, PseudoPeriodicLS, theorem)
        theta = float(_theta_of(cfg))
        t = _rational(cfg, theorem)
        oracle = spectral.evolve_ls_pseudo(u0, spectral.ls_pp_model(cfg.boundary), t, M, N)
        engine = corr.ls_qp_revival(u0, theta, t, M, N)
    elif theorem in ("thm11", "cor42", "prop43"):
        _need(cfg, QuasiPeriodicAiry, theorem)
        theta, t = cfg.boundary.theta, _rational(cfg, theorem)
        if theorem != "thm11":
            theta = corr.as_rational_theta(theta)
        oracle = spectral.evolve_airy_qp(u0, theta, t, M, N)
        if theorem == "thm11":
            engine = corr.airy_qp_via_ls(u0, theta, t, M, N)
        elif theorem == "cor42":
            engine = corr.airy_qp_revival(u0, theta, t, M, N)
            extra["shifted_time"] = time_to_json(corr.airy_shifted_time(theta, t))
        else:
            # the alternative formula is compared with the revival formula;
            # both are also checked against the direct series
            revival = corr.airy_qp_revival(u0, theta, t, M, N)
            extra["revival_vs_series"] = compare(revival, oracle).as_dict()
            for reading in ("printed", "consistent"):
                alt = corr.airy_qp_alt(u0, theta, t, M, N, reading=reading)
                extra[f"{reading}_vs_series"] = compare(alt, oracle).as_dict()
            extra["untruncated"] = corr.airy_alt_report(u0, theta, t, M, N)
            extra["reading"] = cfg.reading
            engine = corr.airy_qp_alt(u0, theta, t, M, N, reading=cfg.reading)
            oracle = revival
    elif theorem in ("prop51", "thm12"):
        _need(cfg, Robin, theorem)
        b = cfg.boundary.b
        oracle = spectral.evolve_robin(u0, b, cfg.time, M, N)
        if theorem == "prop51":
            engine = corr.robin_via_periodic(u0, b, cfg.time, M, N)
        else:
            engine = corr.robin_revival(u0, b, _rational(cfg, theorem), M, N)
    cmp = compare(engine, oracle)
    tol = cfg.tolerance if cfg.tolerance is not None else DEFAULT_TOLERANCE[theorem]
    report = {
        "theorem": theorem,
        "max_abs_err": cmp.sup_err,
        "rel_l2_err": cmp.l2_rel_err,
        "tolerance": tol,
        "passed": bool(cmp.l2_rel_err <= tol),
        "M": M,
        "N": N,
        "params": {"boundary": cfg.boundary_echo, "time": time_to_json(cfg.time)},
    }
    report.update(extra)
    return report


# --------------------------------------------------------------------------
# Appendix figures
# --------------------------------------------------------------------------

RATIONAL_PANELS = ((1, 2), (1, 3), (2, 5))
GENERIC_PANELS = (1.0, 1.5, 2.0)


@dataclass(frozen=True)
class FigureSpec:
    title: str
    boundary: object
    rational: bool
    expect_jumps: bool

    def panel_times(self) -> list[TimeLike]:
        if self.rational:
            return [RationalTime(p, q) for p, q in RATIONAL_PANELS]
        return list(GENERIC_PANELS)


SQRT2_3 = math.sqrt(2) / 3
FIGURES = {
    "airy_rt_quarter": FigureSpec("Airy, theta = 1/4, rational times", QuasiPeriodicAiry(Fraction(1, 4)), True, True),
    "airy_vt_quarter": FigureSpec("Airy, theta = 1/4, generic times", QuasiPeriodicAiry(Fraction(1, 4)), False, False),
    "airy_rt_sqrt2": FigureSpec("Airy, theta = sqrt(2)/3, rational times", QuasiPeriodicAiry(SQRT2_3), True, False),
    "airy_vt_sqrt2": FigureSpec("Airy, theta = sqrt(2)/3, generic times", QuasiPeriodicAiry(SQRT2_3), False, False),
    "robin_rt_035": FigureSpec("Robin, b = 0.35, rational times", Robin(0.35), True, True),
    "robin_vt_035": FigureSpec("Robin, b = 0.35, generic times", Robin(0.35), False, False),
    "robin_rt_06": FigureSpec("Robin, b = 0.6, rational times", Robin(0.6), True, True),
    "robin_vt_06": FigureSpec("Robin, b = 0.6, generic times", Robin(0.6), False, False),
}


def figure_initial(boundary):
    """Step data of the appendix: jump at pi on (0, 2pi), at pi/2 on (0, pi)."""
    if isinstance(boundary, Robin):
        return PiecewiseConstant.step(at=math.pi / 2, domain_length=math.pi)
    return PiecewiseConstant.step(at=math.pi)


def _time_label(t: TimeLike) -> str:
    return f"t = 2pi*{t.p}/{t.q}" if isinstance(t, RationalTime) else f"t = {float(t):g}"


def run_figure(fid: str, outdir: str | Path, M: int = 1024, N: int = 4096,
               window: int = 32, factor: float = 8.0) -> dict:
    """Write one CSV per panel, an SVG and return a report with jump checks."""
    if fid not in FIGURES:
        raise ParameterError("unknown-figure", f"{fid!r} not in {', '.join(FIGURES)}")
    spec = FIGURES[fid]
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    u0 = figure_initial(spec.boundary)
    n = N // 2 if isinstance(spec.boundary, Robin) else N
    panels, entries = [], []
    for i, t in enumerate(spec.panel_times()):
        sol = solve(spec.boundary, u0, t, M, n)
        name = f"{fid}_{i}.csv"
        write_grid_csv(outdir / name, sol.u)
        jumps = detect_jumps(sol.u, window, factor)
        entries.append({
            "time": time_to_json(t),
            "csv": name,
            "jumps": [{"location": j.location, "magnitude": j.magnitude} for j in jumps],
            "ok": bool(jumps) == spec.expect_jumps,
        })
        panels.append(Panel(_time_label(t), sol.u.x, sol.u.samples))
    write_svg(outdir / f"{fid}.svg", panels, spec.title)
    return {
        "figure": fid,
        "title": spec.title,
        "M": M,
        "N": n,
        "expect_jumps": spec.expect_jumps,
        "panels": entries,
        "ok": all(e["ok"] for e in entries),
    }


# --------------------------------------------------------------------------
# Parameter sweeps
# --------------------------------------------------------------------------

def _oracle_error(boundary, u0, t, M, N, series: GridFunction) -> float | None:
    """Relative L2 distance between a correspondence engine and the series, where one applies."""
    rational = isinstance(t, RationalTime)
    if isinstance(boundary, Periodic) and rational:
        ell = boundary.P.degree
        if boundary.P.coeffs != IntPolynomial.monomial(ell).coeffs:
            return None
        other = synthesize(apply_revival_physical(ell, t, analyze(u0, M)), N)
        return compare(other, series).l2_rel_err
    if isinstance(boundary, PseudoPeriodicLS):
        if validate_boundary(boundary).periodic_degenerate:
            return None
        eng = corr.ls_pp_via_periodic(u0, boundary.beta0, boundary.beta1, t, M, N)
        return compare(eng, series).l2_rel_err
    if isinstance(boundary, QuasiPeriodicAiry) and rational:
        return compare(corr.airy_qp_via_ls(u0, boundary.theta, t, M, N), series).l2_rel_err
    if isinstance(boundary, Robin) and 0 < boundary.b < 1:
        return compare(corr.robin_via_periodic(u0, boundary.b, t, M, N), series).l2_rel_err
    return None


def sweep_cells(cfg: RunConfig) -> list[tuple[dict, dict]]:
    sw = cfg.sweep or {"boundary": [], "times": []}
    return [(b, t) for b in sw["boundary"] for t in sw["times"]]


def run_sweep_cell(index: int, bobj: dict, tobj: dict, cfg: RunConfig) -> dict:
    boundary, echo = parse_boundary(bobj)
    t = parse_time(tobj)
    L = math.pi if isinstance(boundary, Robin) else TWO_PI
    u0 = parse_initial(cfg.raw["initial"], L) if "initial" in cfg.raw else figure_initial(boundary)
    N = cfg.raw.get("grid", {}).get("N", 4096 if L == TWO_PI else 2048)
    M = cfg.M
    sol = solve(boundary, u0, t, M, N)
    out = {
        "cell": index,
        "boundary": echo,
        "time": time_to_json(t),
        "jump_count": len(detect_jumps(sol.u, cfg.window, cfg.factor)),
    }
    if (cfg.sweep or {}).get("dimension", False):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            est = box_dimension(sol.u)
        out["dimension"] = {"estimate": est.estimate, "stderr": est.stderr}
    else:
        out["dimension"] = None
    out["oracle_rel_l2_err"] = _oracle_error(boundary, u0, t, M, N, sol.u)
    return out


def worker_count(cfg: RunConfig) -> int:
    env = os.environ.get("REVIVAL_LAB_WORKERS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ParameterError("bad-workers", f"REVIVAL_LAB_WORKERS={env!r} is not an integer") from None
        if n < 1:
            raise ParameterError("bad-workers", "REVIVAL_LAB_WORKERS must be >= 1")
        return n
    return int((cfg.sweep or {}).get("workers", min(4, os.cpu_count() or 1)))


def run_sweep(cfg: RunConfig) -> list[dict]:
    """Evaluate every (boundary, time) cell; results come back in cell order."""
    cells = sweep_cells(cfg)
    if not cells:
        return []
    with ThreadPoolExecutor(max_workers=worker_count(cfg)) as pool:
        futures = [pool.submit(run_sweep_cell, i, b, t, cfg) for i, (b, t) in enumerate(cells)]
        results = [f.result() for f in futures]
    return sorted(results, key=lambda r: r["cell"])
