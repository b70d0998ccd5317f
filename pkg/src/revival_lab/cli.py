"""``revival-lab`` command line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import experiments
from .analysis import DEFAULT_FACTOR, DEFAULT_SCALES, DEFAULT_WINDOW, box_dimension, detect_jumps
from .config import load_config, parse_polynomial, time_to_json
from .core import NumericalError, RevivalLabError, reduce_rational
from .io import read_grid_csv, write_grid_csv, write_modes_csv
from .revival import gauss_weights

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


def _dump(obj, path: str | Path | None = None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    if cfg.boundary is None or cfg.initial is None or cfg.time is None:
        raise RevivalLabError("config-error", "solve needs 'boundary', 'initial' and 'time'")
    engine = args.engine or cfg.engine
    sol = experiments.solve(cfg.boundary, cfg.initial, cfg.time, cfg.M, cfg.N, engine)
    write_grid_csv(args.out, sol.u)
    if args.coeffs:
        if sol.modes is None:
            raise RevivalLabError("config-error", f"engine {engine!r} does not produce modal coefficients")
        write_modes_csv(args.coeffs, *sol.modes)
    sidecar = {
        "boundary": cfg.boundary_echo,
        "time": time_to_json(cfg.time),
        "M": cfg.M,
        "N": cfg.N,
        "engine": sol.engine,
        "constants": sol.constants,
        "outputs": {"solution": str(args.out), "coeffs": str(args.coeffs) if args.coeffs else None},
    }
    target = Path(args.sidecar or f"{args.out}.json")
    if target.resolve() == Path(args.config).resolve():
        raise RevivalLabError("config-error", "sidecar path would overwrite the configuration file")
    _dump(sidecar, target)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    report = experiments.verify(args.theorem, cfg)
    _dump(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_figures(args) -> int:
    ids = list(experiments.FIGURES) if args.id == "all" else [args.id]
    reports = [experiments.run_figure(fid, args.outdir, args.M, args.N) for fid in ids]
    for rep in reports:
        _dump(rep, Path(args.outdir) / f"{rep['figure']}.json")
    _dump([{"figure": r["figure"], "ok": r["ok"]} for r in reports])
    return EXIT_OK if all(r["ok"] for r in reports) else EXIT_VERIFY


def cmd_dimension(args) -> int:
    u = read_grid_csv(args.input)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        est = box_dimension(u, (args.scale_min, args.scale_max))
    report = {
        "estimate": est.estimate,
        "stderr": est.stderr,
        "scales": est.scales.tolist(),
        "counts": est.counts.tolist(),
        "N": u.N,
        "note": "truncated Fourier series are not fractals; expect bias toward lower values",
        "warnings": [str(w.message) for w in caught],
    }
    _dump(report, args.out)
    return EXIT_OK


def cmd_jumps(args) -> int:
    u = read_grid_csv(args.input)
    jumps = detect_jumps(u, args.window, args.factor, periodic=args.periodic)
    _dump([{"location": j.location, "magnitude": j.magnitude, "ratio": j.ratio} for j in jumps], args.out)
    return EXIT_OK


def cmd_gauss(args) -> int:
    P = parse_polynomial(args.poly)
    t = reduce_rational(args.p, args.q)
    G = gauss_weights(P, t, normalized=args.normalized)
    _dump({
        "poly": str(P),
        "p": t.p,
        "q": t.q,
        "normalized": G.normalized,
        "weights": [[float(z.real), float(z.imag)] for z in G.values],
    })
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    rows = experiments.run_sweep(cfg)
    text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revival-lab", description="Revivals and fractalisation for dispersive equations.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one configured problem and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="solution CSV (x,re,im)")
    p.add_argument("--coeffs", help="also write modal amplitudes (m,re,im)")
    p.add_argument("--sidecar", help="JSON sidecar path (default: OUT.json)")
    p.add_argument("--engine", choices=["series", "revival"])
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a representation formula against the direct series")
    p.add_argument("--theorem", required=True, choices=experiments.THEOREMS)
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", help="rebuild an appendix figure as CSV + SVG")
    p.add_argument("id", choices=[*experiments.FIGURES, "all"])
    p.add_argument("--outdir", default="figures")
    p.add_argument("--M", type=int, default=1024)
    p.add_argument("--N", type=int, default=4096)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("dimension", help="box-counting dimension of a solution CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--scale-min", type=float, default=DEFAULT_SCALES[0])
    p.add_argument("--scale-max", type=float, default=DEFAULT_SCALES[1])
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("jumps", help="list jump discontinuities of a solution CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--factor", type=float, default=DEFAULT_FACTOR)
    p.add_argument("--periodic", action="store_true", help="also test the wrap-around cell")
    p.set_defaults(func=cmd_jumps)

    p = sub.add_parser("gauss", help="print Gauss-type translate weights as JSON")
    p.add_argument("--poly", default="m^2")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("sweep", help="evaluate a parameter grid, one JSON line per cell")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"revival-lab: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RevivalLabError as exc:
        print(f"revival-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
