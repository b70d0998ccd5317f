"""Revival operators and eigenfunction solvers for the linear Schrodinger and
Airy equations on an interval."""
from __future__ import annotations

from .analysis import box_dimension, compare, decay_exponent, detect_jumps
from .core import (
    FourierCoeffs,
    GridFunction,
    HarmonicSum,
    IntPolynomial,
    NumericalError,
    ParameterError,
    Periodic,
    PiecewiseConstant,
    PseudoPeriodicLS,
    QuasiPeriodicAiry,
    RationalTime,
    RevivalLabError,
    Robin,
    Sampled,
    reduce_rational,
    validate_boundary,
)
from .correspondence import (
    airy_qp_alt,
    airy_qp_revival,
    airy_qp_via_ls,
    ls_pp_revival,
    ls_pp_via_periodic,
    ls_qp_revival,
    robin_revival,
    robin_via_periodic,
)
from .harmonic import analyze, convolve, extend_even_odd, reflect, synthesize, translate
from .revival import apply_revival_physical, apply_revival_spectral, gauss_weights
from .spectral import evolve_airy_qp, evolve_ls_pseudo, evolve_periodic, evolve_robin, ls_pp_model, robin_model

__version__ = "0.1.0"

__all__ = [
    "FourierCoeffs", "GridFunction", "HarmonicSum", "IntPolynomial", "NumericalError", "ParameterError",
    "Periodic", "PiecewiseConstant", "PseudoPeriodicLS", "QuasiPeriodicAiry", "RationalTime",
    "RevivalLabError", "Robin", "Sampled", "reduce_rational", "validate_boundary",
    "analyze", "synthesize", "translate", "reflect", "extend_even_odd", "convolve",
    "gauss_weights", "apply_revival_physical", "apply_revival_spectral",
    "evolve_periodic", "evolve_ls_pseudo", "evolve_airy_qp", "evolve_robin", "ls_pp_model", "robin_model",
    "ls_pp_via_periodic", "ls_pp_revival", "ls_qp_revival", "airy_qp_via_ls", "airy_qp_revival",
    "airy_qp_alt", "robin_via_periodic", "robin_revival",
    "detect_jumps", "box_dimension", "compare", "decay_exponent",
]
