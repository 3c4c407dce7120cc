"""Shared value types: evaluation configuration and summation results."""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, replace

from .errors import DomainError

#: Everything below this real-part margin counts as "on the boundary line".
EPS_DOMAIN = 1e-9

#: Relative distance to a pole below which evaluation is refused.
POLE_EXCLUSION = 1e-9


@dataclass(frozen=True)
class EvalConfig:
    """Accuracy/budget knobs shared by all evaluators."""

    target_abs_error: float = 1e-12
    max_terms: int = 10**6
    euler_maclaurin_order: int = 8

    def __post_init__(self):
        if not (self.target_abs_error >= 1e-14):
            raise ValueError("target_abs_error below the double-precision floor 1e-14")
        if self.max_terms < 16:
            raise ValueError("max_terms must be at least 16")
        if self.euler_maclaurin_order < 2 or self.euler_maclaurin_order % 2:
            raise ValueError("euler_maclaurin_order must be an even integer >= 2")

    def with_target(self, target: float) -> "EvalConfig":
        return replace(self, target_abs_error=max(target, 1e-14))


def default_config() -> EvalConfig:
    """Default configuration; ZS_MAX_TERMS overrides the term budget."""
    max_terms = int(os.environ.get("ZS_MAX_TERMS", 10**6))
    return EvalConfig(max_terms=max_terms)


@dataclass(frozen=True)
class SumResult:
    """Value of a summation together with its error estimate and provenance."""

    value: complex
    abs_error_estimate: float
    terms_used: int
    method: str  # "direct", "euler_maclaurin_tail", "cesaro(k)", "abel"

    def __post_init__(self):
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise DomainError("non-finite summation value")
        if not math.isfinite(self.abs_error_estimate):
            raise DomainError("non-finite error estimate")


def require_finite(value: complex, name: str) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def format_complex(value: complex) -> str:
    """Render a complex number as the CLI's a+bi form."""
    if value.imag == 0:
        return f"{value.real:.15g}"
    sign = "+" if value.imag >= 0 else "-"
    return f"{value.real:.15g}{sign}{abs(value.imag):.15g}i"


def parse_complex(text: str) -> complex:
    """Parse the CLI's a+bi form (also accepts plain reals and 'i')."""
    cleaned = text.strip().replace(" ", "")
    if not cleaned:
        raise ValueError("empty complex literal")
    normalized = cleaned.replace("i", "j")
    # complex() rejects a bare trailing sign before j ("1+j"): patch to 1j
    normalized = normalized.replace("+j", "+1j").replace("-j", "-1j")
    if normalized == "j":
        normalized = "1j"
    try:
        value = complex(normalized)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex number {text!r}") from exc
    return require_finite(value, "complex literal")


def principal_power(n: float, s: complex) -> complex:
    """n**s via exp(s ln n) with the real logarithm (n > 0)."""
    s = complex(s)
    if s.imag == 0.0:
        return complex(n ** s.real)
    return cmath.exp(s * math.log(n))
