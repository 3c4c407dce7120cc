"""Summability methods for boundary points of the convergence disc:
iterated-mean Cesaro sums and Abel radial limits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import EvalConfig, SumResult
from .errors import ConvergenceError, DomainError
from .extrapolate import richardson

_MAX_CESARO_ORDER = 4
_STABLE_WINDOW = 10


@dataclass(frozen=True)
class SummationMethod:
    kind: str  # "direct" | "cesaro" | "abel"
    order: int = 0

    def __post_init__(self):
        if self.kind not in ("direct", "cesaro", "abel"):
            raise DomainError(f"unknown summation method {self.kind!r}")
        if self.kind == "cesaro" and not (1 <= self.order <= _MAX_CESARO_ORDER):
            raise DomainError(f"Cesaro order must be in 1..{_MAX_CESARO_ORDER}")

    @staticmethod
    def parse(text: str) -> "SummationMethod":
        text = text.strip().lower()
        if text == "direct":
            return DIRECT
        if text == "abel":
            return ABEL
        if text.startswith("cesaro"):
            sep = text[6:7]
            if sep in (":", "(", ","):
                order = int(text[7:].rstrip(")"))
            elif not text[6:]:
                order = 1
            else:
                raise DomainError(f"cannot parse summation method {text!r}")
            return SummationMethod("cesaro", order)
        raise DomainError(f"cannot parse summation method {text!r}")

    def __str__(self) -> str:
        return f"cesaro({self.order})" if self.kind == "cesaro" else self.kind


DIRECT = SummationMethod("direct")
ABEL = SummationMethod("abel")


class PartialSumStream:
    """Deterministic term source with block-wise (vectorized) access."""

    def __init__(self, term_vector: Callable[[np.ndarray], np.ndarray]):
        self._term_vector = term_vector
        self._cache = np.empty(0, dtype=np.complex128)

    def block(self, n: int) -> np.ndarray:
        if n > self._cache.size:
            ks = np.arange(self._cache.size, n, dtype=np.int64)
            new = np.asarray(self._term_vector(ks), dtype=np.complex128)
            self._cache = np.concatenate([self._cache, new])
        return self._cache[:n]

    def term(self, k: int) -> complex:
        return complex(self.block(k + 1)[k])


def stream_from_scalar(term: Callable[[int], complex]) -> PartialSumStream:
    return PartialSumStream(lambda ks: np.array([term(int(k)) for k in ks]))


def _oscillation(tail: np.ndarray) -> float:
    return float(np.ptp(tail.real) + np.ptp(tail.imag))


def cesaro_sum(stream: PartialSumStream, order: int, cfg: EvalConfig) -> SumResult:
    """k-fold iterated arithmetic means of partial sums (Holder means, which
    are summability-equivalent to Cesaro of the same small order).

    The error estimate is the observed oscillation of the last iterates and
    is heuristic, not a rigorous bound.
    """
    if not (1 <= order <= _MAX_CESARO_ORDER):
        raise DomainError(f"Cesaro order must be in 1..{_MAX_CESARO_ORDER}")
    n = 4096
    best: tuple[complex, float, int] | None = None
    while True:
        n = min(n, cfg.max_terms)
        terms = stream.block(n)
        x = np.cumsum(terms)
        denom = np.arange(1, n + 1, dtype=np.float64)
        for _ in range(order):
            x = np.cumsum(x) / denom
        # average consecutive means to cancel the parity component; the
        # remaining error creeps like c/n, for which the half-length drift
        # is an accurate estimator
        xs = 0.5 * (x[1:] + x[:-1])
        osc = _oscillation(xs[-_STABLE_WINDOW:]) + 1.5 * abs(xs[-1] - xs[n // 2])
        if best is None or osc < best[1]:
            best = (complex(xs[-1]), osc, n)
        if osc < cfg.target_abs_error:
            return SumResult(complex(xs[-1]), osc, n, f"cesaro({order})")
        if n >= cfg.max_terms:
            # the target was out of reach; return the best iterate with its
            # honest error estimate unless the means never settled at all
            value, err, used = best
            if err <= 1e-3 * (1.0 + abs(value)):
                return SumResult(value, err, used, f"cesaro({order})")
            raise ConvergenceError(
                f"Cesaro({order}) means did not stabilize within "
                f"{cfg.max_terms} terms (oscillation {err:.3g})"
            )
        n *= 4


def abel_limit(eval_at_radius: Callable[[float], SumResult], cfg: EvalConfig) -> SumResult:
    """Radial Abel limit: evaluate at r_j = 1 - 2^-j and Richardson-extrapolate
    in 1 - r.  Error estimate is the difference of the last two extrapolants
    plus the worst inner-evaluation error (heuristic)."""
    values = []
    inner_err = 0.0
    terms = 0
    best: tuple[complex, float] | None = None
    for j in range(3, 19):
        res = eval_at_radius(1.0 - 2.0**-j)
        values.append(res.value)
        inner_err = max(inner_err, res.abs_error_estimate)
        terms += res.terms_used
        if len(values) < 3:
            continue
        est, err = richardson(values, 2.0)
        if best is not None and err > 10 * best[1] and err > 1e3 * cfg.target_abs_error:
            raise ConvergenceError("Abel extrapolants diverge")
        if best is None or err < best[1]:
            best = (est, err)
        if err < cfg.target_abs_error:
            break
    assert best is not None
    if best[1] > 1e-3 * (1.0 + abs(best[0])):
        raise ConvergenceError(
            f"Abel extrapolation did not converge (err {best[1]:.3g})"
        )
    return SumResult(best[0], best[1] + inner_err, terms, "abel")
