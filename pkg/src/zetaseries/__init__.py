"""Numerical evaluation of partial-fraction sums sum a_n/(n^s+z) and their
power-series counterparts with Dirichlet-series coefficients, including
boundary summation (Cesaro, Abel) and pole/residue measurement."""

from .core import EvalConfig, SumResult, default_config, format_complex, parse_complex
from .corpus import IdentityReport, eval_side, run_suite, verify
from .errors import (
    BoundaryError,
    CapacityError,
    CharacterRangeError,
    ConvergenceError,
    DomainError,
    NotAPoleError,
    PoleError,
    RadiusError,
    ZetaSeriesError,
)
from .poles import PoleRecord, pole_locations, residue, spiral_export, spiral_slopes
from .specs import get_general_dirichlet, get_sequence, get_spec
from .summation import SummationMethod

__version__ = "0.1.0"

__all__ = [
    "EvalConfig",
    "SumResult",
    "default_config",
    "format_complex",
    "parse_complex",
    "IdentityReport",
    "eval_side",
    "run_suite",
    "verify",
    "ZetaSeriesError",
    "BoundaryError",
    "CapacityError",
    "CharacterRangeError",
    "ConvergenceError",
    "DomainError",
    "NotAPoleError",
    "PoleError",
    "RadiusError",
    "PoleRecord",
    "pole_locations",
    "residue",
    "spiral_export",
    "spiral_slopes",
    "get_spec",
    "get_sequence",
    "get_general_dirichlet",
    "SummationMethod",
    "__version__",
]
