"""Nonlinear (f-deformed) charge coherent states of two boson modes.

Submodules
----------
numerics
    Log-domain series summation, factorials and the modified Bessel function.
nonlinearity
    Nonlinearity functions ``f(n)`` and their catalog.
fock
    Truncated two-mode Fock space and symbolic operator expressions.
states
    Construction of the charge states and their even/odd parts.
nonclassicality
    Squeezing, Mandel and correlation measures.
presets, checks, cli
    Sweeps, figure presets, the verification suite and the command line.
"""

from .errors import (
    BesselOverflow,
    InvalidParameter,
    InvalidSpectrum,
    NLChargeError,
    NonConvergence,
    NumericError,
    OutOfRadius,
    ParityMismatch,
    UndefinedAtVacuum,
    UndefinedDenominator,
    UndefinedMeasure,
    UnknownMeasure,
    UnknownModel,
)
from .nonclassicality import MEASURE_NAMES, MeasureReport, evaluate, evaluate_fock
from .nonlinearity import NonlinearityModel, catalog, get_model, model_from_spectrum
from .numerics import LogNumber, TruncationPolicy
from .states import ChargeState, build_state, eigen_residual, normalization, overlap

__version__ = "0.1.0"

__all__ = [
    "BesselOverflow",
    "ChargeState",
    "InvalidParameter",
    "InvalidSpectrum",
    "LogNumber",
    "MEASURE_NAMES",
    "MeasureReport",
    "NLChargeError",
    "NonConvergence",
    "NonlinearityModel",
    "NumericError",
    "OutOfRadius",
    "ParityMismatch",
    "TruncationPolicy",
    "UndefinedAtVacuum",
    "UndefinedDenominator",
    "UndefinedMeasure",
    "UnknownMeasure",
    "UnknownModel",
    "build_state",
    "catalog",
    "eigen_residual",
    "evaluate",
    "evaluate_fock",
    "get_model",
    "model_from_spectrum",
    "normalization",
    "overlap",
]
