"""JSON run configuration: schema validation and expression parsing.

Numeric fields may be numbers or expression strings such as ``"sqrt(2)/3"``,
``"2*pi/3"`` or ``"exp(I*pi/4)"``. Rational values of ``theta`` stay exact, and
times written as rational multiples of 2pi become :class:`RationalTime`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .core import (
    TWO_PI,
    BoundarySpec,
    HarmonicSum,
    IntPolynomial,
    ParameterError,
    Periodic,
    PiecewiseConstant,
    PseudoPeriodicLS,
    QuasiPeriodicAiry,
    RationalTime,
    RevivalLabError,
    Robin,
    Sampled,
    TimeLike,
    reduce_rational,
    validate_boundary,
)
from .harmonic import DEFAULT_M, DEFAULT_N
from .io import read_grid_csv


class ConfigError(RevivalLabError, ValueError):
    """Malformed configuration; ``line`` points into the source text when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__("config-error", prefix + message)


_TRANSFORMS = standard_transformations + (convert_xor,)
_NAMES = {"pi": sympy.pi, "I": sympy.I, "i": sympy.I, "e": sympy.E, "E": sympy.E,
          "sqrt": sympy.sqrt, "exp": sympy.exp}


def parse_number(value) -> sympy.Expr:
    """Parse a number or expression string into an exact sympy number."""
    if isinstance(value, bool):
        raise ConfigError(f"expected a number, got {value!r}")
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, float):
        return sympy.Float(value)
    try:
        expr = parse_expr(str(value), local_dict=dict(_NAMES), transformations=_TRANSFORMS)
    except Exception as exc:  # sympy raises a zoo of exception types
        raise ConfigError(f"cannot parse expression {value!r}: {exc}") from None
    if not getattr(expr, "is_number", False):
        raise ConfigError(f"expression {value!r} is not a number")
    return expr


def parse_real(value) -> float:
    z = complex(parse_number(value).evalf(30))
    if abs(z.imag) > 1e-14:
        raise ConfigError(f"{value!r} is not real")
    return z.real


def parse_complex(value) -> complex:
    return complex(parse_number(value).evalf(30))


def parse_theta(value) -> Fraction | float:
    """Exact fraction when the expression is rational, a float otherwise."""
    expr = sympy.nsimplify(parse_number(value)) if isinstance(value, float) else parse_number(value)
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    return parse_real(value)


def parse_polynomial(text: str) -> IntPolynomial:
    m = sympy.Symbol("m")
    try:
        expr = parse_expr(text, local_dict={"m": m}, transformations=_TRANSFORMS)
        poly = sympy.Poly(expr, m)
    except Exception as exc:
        raise ConfigError(f"cannot parse polynomial {text!r}: {exc}") from None
    coeffs = poly.all_coeffs()[::-1]
    if not all(c.is_Integer for c in coeffs):
        raise ConfigError(f"polynomial {text!r} must have integer coefficients")
    return IntPolynomial(tuple(int(c) for c in coeffs))


def parse_time(obj: dict) -> TimeLike:
    """``{"p": .., "q": ..}`` or ``{"t": expr}``; exact multiples of 2pi become rational."""
    if "p" in obj:
        return reduce_rational(int(obj["p"]), int(obj["q"]))
    expr = parse_number(obj["t"])
    ratio = sympy.nsimplify(expr / (2 * sympy.pi)) if not isinstance(obj["t"], (int, float)) else None
    if ratio is not None and ratio.is_Rational and ratio >= 0 and sympy.simplify(ratio * 2 * sympy.pi - expr) == 0:
        return reduce_rational(int(ratio.p), int(ratio.q))
    t = parse_real(obj["t"])
    if t < 0:
        raise ConfigError(f"time must be non-negative, got {t}")
    return t


def time_to_json(t: TimeLike) -> dict:
    if isinstance(t, RationalTime):
        return {"p": t.p, "q": t.q, "t": t.t}
    return {"t": float(t)}


def parse_boundary(obj: dict) -> tuple[BoundarySpec, dict]:
    """Boundary spec plus a dict of resolved parameter values for reports."""
    kind = obj["type"]
    if kind == "periodic":
        P = parse_polynomial(obj.get("P", "m^2"))
        spec: BoundarySpec = Periodic(P)
        echo = {"type": kind, "P": str(P)}
    elif kind == "pseudo_periodic":
        b0, b1 = parse_complex(obj["beta0"]), parse_complex(obj["beta1"])
        spec = PseudoPeriodicLS(b0, b1)
        echo = {"type": kind, "beta0": [b0.real, b0.imag], "beta1": [b1.real, b1.imag]}
    elif kind in ("quasi_periodic_ls", "quasi_periodic_airy"):
        theta = parse_theta(obj["theta"])
        if kind == "quasi_periodic_airy":
            spec = QuasiPeriodicAiry(theta)
        else:
            if not 0 <= theta < 1:
                raise ParameterError("invalid-theta", f"theta={theta} not in [0, 1)")
            spec = PseudoPeriodicLS.quasi_periodic(float(theta))
        echo = {"type": kind, "theta": float(theta)}
        if isinstance(theta, Fraction):
            echo["theta_exact"] = str(theta)
    elif kind == "robin":
        b = parse_real(obj["b"])
        spec = Robin(b)
        echo = {"type": kind, "b": b}
    else:  # pragma: no cover - excluded by the schema
        raise ConfigError(f"unknown boundary type {kind!r}")
    validate_boundary(spec)
    return spec, echo


def parse_initial(obj: dict, domain_length: float):
    kind = obj["type"]
    if kind == "step":
        at = parse_real(obj["at"]) if "at" in obj else domain_length / 2
        return PiecewiseConstant.step(at, parse_complex(obj.get("low", 0)), parse_complex(obj.get("high", 1)),
                                      domain_length=domain_length)
    if kind == "piecewise_constant":
        bps = [parse_real(v) for v in obj["breakpoints"]]
        vals = [parse_complex(v) for v in obj["values"]]
        return PiecewiseConstant(bps, vals, domain_length)
    if kind == "harmonic":
        return HarmonicSum([(parse_real(f), parse_complex(a)) for f, a in obj["terms"]], domain_length)
    if kind == "csv":
        g = read_grid_csv(obj["path"])
        if not math.isclose(g.domain_length, domain_length, rel_tol=1e-9):
            raise ConfigError(f"{obj['path']}: grid covers length {g.domain_length}, expected {domain_length}")
        return Sampled(g)
    raise ConfigError(f"unknown initial type {kind!r}")  # pragma: no cover


@dataclass
class RunConfig:
    boundary: BoundarySpec | None
    boundary_echo: dict
    initial: Any
    M: int
    N: int
    time: TimeLike | None
    tolerance: float | None
    engine: str
    reading: str
    window: int
    factor: float
    sweep: dict | None
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def domain_length(self) -> float:
        return math.pi if isinstance(self.boundary, Robin) else TWO_PI

    @property
    def theta(self):
        """Exact theta when rational, else float; ``None`` for other families."""
        if "theta_exact" in self.boundary_echo:
            return Fraction(self.boundary_echo["theta_exact"])
        return self.boundary_echo.get("theta")


def _schema() -> dict:
    return json.loads(resources.files("revival_lab").joinpath("config_schema.json").read_text())


def _locate(text: str, path) -> int | None:
    """Best-effort source line of a JSON path (keys searched in order)."""
    pos, found = 0, False
    for key in path:
        if isinstance(key, str):
            idx = text.find(f'"{key}"', pos)
            if idx >= 0:
                pos, found = idx, True
    return text.count("\n", 0, pos) + 1 if found else None


def load_config_text(text: str, base: Path | None = None) -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, exc.lineno) from None
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        if err.context:  # oneOf: report the errors of the branch whose "type" matched
            branches: dict[int, list] = {}
            for sub in err.context:
                branches.setdefault(sub.relative_schema_path[0], []).append(sub)
            matched = [b for b in branches.values() if not any(e.validator == "const" for e in b)]
            pool = matched[0] if matched else err.context
            err = max(pool, key=lambda e: len(e.absolute_path))
        path = list(err.absolute_path)
        where = "/".join(str(p) for p in path) or "<root>"
        raise ConfigError(f"{where}: {err.message}", _locate(text, path))
    return resolve(raw, base)


def resolve(raw: dict, base: Path | None = None) -> RunConfig:
    boundary, echo = (None, {})
    if "boundary" in raw:
        boundary, echo = parse_boundary(raw["boundary"])
    L = math.pi if isinstance(boundary, Robin) else TWO_PI
    initial = None
    if "initial" in raw:
        init = dict(raw["initial"])
        if init["type"] == "csv" and base is not None and not Path(init["path"]).is_absolute():
            init["path"] = str(base / init["path"])
        initial = parse_initial(init, L)
    det = raw.get("detector", {})
    return RunConfig(
        boundary=boundary,
        boundary_echo=echo,
        initial=initial,
        M=int(raw.get("truncation", {}).get("M", DEFAULT_M)),
        N=int(raw.get("grid", {}).get("N", DEFAULT_N if L == TWO_PI else DEFAULT_N // 2)),
        time=parse_time(raw["time"]) if "time" in raw else None,
        tolerance=float(raw["tolerance"]) if "tolerance" in raw else None,
        engine=raw.get("engine", "series"),
        reading=raw.get("reading", "printed"),
        window=int(det.get("window", 32)),
        factor=float(det.get("factor", 8.0)),
        sweep=raw.get("sweep"),
        raw=raw,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return load_config_text(text, path.parent)
