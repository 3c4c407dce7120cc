"""Dirichlet-series building blocks: zeta, its derivatives, Hurwitz zeta,
Catalan beta and L-functions, all for Re(s) > 1 with Euler-Maclaurin tails.

The partial sum is cut at an N chosen adaptively from the Euler-Maclaurin
remainder bound; the reported error estimate is that bound.  N is selected
with the order-2 bound regardless of the configured correction order, so a
higher order can only shrink the reported estimate (monotone-error contract).
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import bernoulli, binom

from .core import EPS_DOMAIN, EvalConfig, SumResult, require_finite
from .errors import ConvergenceError, DomainError

_BERN = bernoulli(64)  # B_0 .. B_64; more than any admissible order needs

_MAX_DERIV_ORDER = 8


def _require_halfplane(s: complex, name: str = "s") -> complex:
    s = require_finite(s, name)
    if s.real <= 1 + EPS_DOMAIN:
        raise DomainError(f"Re({name}) must exceed 1 (got {s!r})")
    return s


def _pochhammer(s: complex, k: int) -> complex:
    out = 1.0 + 0.0j
    for i in range(k):
        out *= s + i
    return out


def _em_remainder_bound(s: complex, start: float, nu: int) -> float:
    """Rigorous bound on the Euler-Maclaurin remainder after nu correction
    terms, for a tail starting at `start` (Edwards-style bound)."""
    sigma = s.real
    lead = abs(_BERN[2 * nu + 2]) / math.factorial(2 * nu + 2)
    poch = abs(_pochhammer(s, 2 * nu + 1))
    decay = math.exp(-(sigma + 2 * nu + 1) * math.log(start))
    safety = abs(s + 2 * nu + 1) / (sigma + 2 * nu + 1)
    return lead * poch * decay * safety


def _choose_start(s: complex, target: float, max_terms: int) -> int:
    """Smallest power-of-two tail start whose order-2 bound meets target."""
    n = 16
    while _em_remainder_bound(s, n, 1) > target:
        n *= 2
        if n > max_terms:
            raise ConvergenceError(
                f"Euler-Maclaurin start exceeds max_terms={max_terms} for s={s!r}"
            )
    return n


def _em_tail(s: complex, start: float, order: int) -> tuple[complex, float]:
    """Sum over x = start, start+1, ... of x**(-s), plus its error bound."""
    nu = order // 2
    inv = cmath.exp(-s * math.log(start))  # start**-s
    tail = inv / 2 + inv * start / (s - 1)
    for j in range(1, nu + 1):
        c = _BERN[2 * j] / math.factorial(2 * j)
        tail += c * _pochhammer(s, 2 * j - 1) * inv * start ** (1 - 2 * j)
    return tail, _em_remainder_bound(s, start, nu)


def _partial_powers(s: complex, n_from: int, n_to: int) -> complex:
    """Sum of n**(-s) for n in [n_from, n_to)."""
    if n_to <= n_from:
        return 0.0 + 0.0j
    n = np.arange(n_from, n_to, dtype=np.float64)
    return complex(np.exp(-s * np.log(n)).sum())


@lru_cache(maxsize=65536)
def zeta(s: complex, cfg: EvalConfig = EvalConfig()) -> SumResult:
    """Riemann zeta for Re(s) > 1 with a rigorous tail bound."""
    s = _require_halfplane(s)
    n0 = _choose_start(s, cfg.target_abs_error, cfg.max_terms)
    value = _partial_powers(s, 1, n0)
    tail, bound = _em_tail(s, n0, cfg.euler_maclaurin_order)
    return SumResult(value + tail, bound, n0, "euler_maclaurin_tail")


@lru_cache(maxsize=65536)
def zeta_tail_from(s: complex, n_exclusive: int, cfg: EvalConfig = EvalConfig()) -> SumResult:
    """Sum of n**(-s) over n > n_exclusive."""
    s = _require_halfplane(s)
    n0 = max(_choose_start(s, cfg.target_abs_error, cfg.max_terms), n_exclusive + 1)
    value = _partial_powers(s, n_exclusive + 1, n0)
    tail, bound = _em_tail(s, n0, cfg.euler_maclaurin_order)
    return SumResult(value + tail, bound, n0 - n_exclusive, "euler_maclaurin_tail")


def _poch_poly_derivs(j: int, max_order: int) -> list[np.ndarray]:
    """Coefficients of s(s+1)...(s+2j-2) and its first max_order derivatives."""
    coeffs = npoly.polyfromroots([-i for i in range(2 * j - 1)])
    out = [coeffs]
    for _ in range(max_order):
        coeffs = npoly.polyder(coeffs)
        out.append(coeffs)
    return out


@lru_cache(maxsize=4096)
def zeta_deriv(m: int, s: complex, cfg: EvalConfig = EvalConfig()) -> SumResult:
    """m-th derivative of zeta: sum of (-ln n)**m n**(-s), Re(s) > 1.

    Termwise analytically differentiated Euler-Maclaurin formula; the error
    estimate inflates the zeta remainder bound by (ln N + 1)**m and is
    heuristic for m >= 1.
    """
    if m < 0:
        raise DomainError("derivative order must be >= 0")
    if m > _MAX_DERIV_ORDER:
        raise DomainError(f"derivative order limited to {_MAX_DERIV_ORDER}")
    if m == 0:
        return zeta(s, cfg)
    s = _require_halfplane(s)
    n0 = _choose_start(s, cfg.target_abs_error, cfg.max_terms)
    ln0 = math.log(n0)

    n = np.arange(2, n0, dtype=np.float64)
    logs = np.log(n)
    value = complex(((-logs) ** m * np.exp(-s * logs)).sum())

    inv = cmath.exp(-s * ln0)  # n0**-s
    value += (-ln0) ** m * inv / 2

    # d^m/ds^m of n0**(1-s)/(s-1) by the Leibniz rule
    for j in range(m + 1):
        value += (
            binom(m, j)
            * (-ln0) ** j
            * (inv * n0)
            * (-1) ** (m - j)
            * math.factorial(m - j)
            / (s - 1) ** (m - j + 1)
        )

    nu = cfg.euler_maclaurin_order // 2
    for j in range(1, nu + 1):
        c = _BERN[2 * j] / math.factorial(2 * j)
        polys = _poch_poly_derivs(j, m)
        scale = c * inv * n0 ** (1 - 2 * j)
        acc = 0.0 + 0.0j
        for l in range(m + 1):
            acc += binom(m, l) * (-ln0) ** (m - l) * npoly.polyval(s, polys[l])
        value += scale * acc

    bound = 2.0 * _em_remainder_bound(s, n0, nu) * (ln0 + 1.0) ** m
    return SumResult(value, bound, n0, "euler_maclaurin_tail")


@lru_cache(maxsize=65536)
def hurwitz_zeta(s: complex, a: float, cfg: EvalConfig = EvalConfig()) -> SumResult:
    """Hurwitz zeta: sum over n >= 0 of (n+a)**(-s), for 0 < a <= 1."""
    s = _require_halfplane(s)
    if not (0 < a <= 1):
        raise DomainError(f"shift parameter must lie in (0, 1], got {a}")
    n0 = _choose_start(s, cfg.target_abs_error, cfg.max_terms)
    n = np.arange(0, n0, dtype=np.float64)
    value = complex(np.exp(-s * np.log(n + a)).sum())
    tail, bound = _em_tail(s, n0 + a, cfg.euler_maclaurin_order)
    return SumResult(value + tail, bound, n0, "euler_maclaurin_tail")


def dirichlet_beta(s: complex, cfg: EvalConfig = EvalConfig()) -> SumResult:
    """Catalan beta: alternating sum over odd integers, via Hurwitz zetas."""
    s = _require_halfplane(s)
    q1 = hurwitz_zeta(s, 0.25, cfg)
    q3 = hurwitz_zeta(s, 0.75, cfg)
    scale = cmath.exp(-s * math.log(4))
    value = scale * (q1.value - q3.value)
    err = abs(scale) * (q1.abs_error_estimate + q3.abs_error_estimate)
    return SumResult(value, err, q1.terms_used + q3.terms_used, "euler_maclaurin_tail")


def l_function(s: complex, chi, cfg: EvalConfig = EvalConfig()) -> SumResult:
    """L(s, chi) assembled from Hurwitz zetas at rationals a/q."""
    s = _require_halfplane(s)
    q = chi.modulus
    scale = cmath.exp(-s * math.log(q)) if q > 1 else 1.0
    value = 0.0 + 0.0j
    err = 0.0
    terms = 0
    for a in range(1, q + 1):
        w = chi.value(a)
        if w == 0:
            continue
        hz = hurwitz_zeta(s, a / q, cfg)
        value += w * hz.value
        err += abs(w) * hz.abs_error_estimate
        terms += hz.terms_used
    return SumResult(scale * value, abs(scale) * err, max(terms, 1), "euler_maclaurin_tail")
