"""Coefficient-sequence specifications: ordinary Dirichlet series, power
series, general Dirichlet series and sequence pairs, plus the named registry
used by the CLI and the verification corpus."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaincc, gamma as gamma_fn

from .arith import ArithSieve, build_sieve, character
from .core import EPS_DOMAIN, EvalConfig, SumResult, require_finite
from .errors import ConvergenceError, DomainError
from .extrapolate import partial_sum_limit
from . import specialfns

_INF = float("inf")


@dataclass(frozen=True)
class Envelope:
    """Growth bound |a_n| <= scale * n**power * ln(n)**log_power (n >= 2)."""

    scale: float = 1.0
    power: float = 0.0
    log_power: int = 0

    def tail(self, sigma: float, n0: float) -> float:
        """Bound on sum over n > n0 of |a_n| n^-sigma via the integral test."""
        s = sigma - self.power
        if s <= 1:
            return _INF
        u = self.log_power
        x = (s - 1) * math.log(max(n0, 1.0))
        integral = float(gammaincc(u + 1, x) * gamma_fn(u + 1)) / (s - 1) ** (u + 1)
        bound = self.scale * integral
        if u > 0 and x < u:
            # integrand peaks at ln x = u/(s-1); if the peak lies past n0 the
            # integral test needs one extra term of the peak height
            bound += self.scale * (u / (math.e * (s - 1))) ** u
        return bound


@dataclass(frozen=True, eq=False)
class DirichletSpec:
    """Coefficients a_n with f(s) = sum a_n n^-s for Re(s) > sigma_a."""

    name: str
    sigma_a: float
    coeff_vector: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    envelope: Envelope = Envelope()
    series_value: Optional[Callable[[complex, EvalConfig], SumResult]] = field(
        default=None, repr=False
    )
    first_coeff: complex = 1.0 + 0.0j

    def coeff(self, n: int) -> complex:
        return complex(self.coeff_vector(np.array([n]))[0])

    def abs_tail(self, sigma: float, n0: float) -> float:
        return self.envelope.tail(sigma, n0)

    def deviation_bound(self, sigma: float) -> float:
        """Bound on |f(s') - a_1| for Re(s') >= sigma.

        Splits off the n=2 term so the bound decays like 2^-sigma; the crude
        integral bound from n=1 only decays like 1/sigma.  It also satisfies
        deviation_bound(sigma + d) <= deviation_bound(sigma) * 2^-d, which
        tail summations rely on.
        """
        e = self.envelope
        a2 = e.scale * 2.0**e.power * math.log(2.0) ** e.log_power
        return a2 * 2.0**-sigma + self.abs_tail(sigma, 2.0)

    def value(self, s: complex, cfg: EvalConfig) -> SumResult:
        """f(s) with controlled absolute error."""
        s = require_finite(s, "s")
        if s.real <= self.sigma_a + EPS_DOMAIN:
            raise DomainError(
                f"Re(s) must exceed sigma_a={self.sigma_a} for spec {self.name!r}"
            )
        if self.series_value is not None:
            return self.series_value(s, cfg)
        return self._direct_value(s, cfg)

    def _direct_value(self, s: complex, cfg: EvalConfig) -> SumResult:
        target = cfg.target_abs_error
        total = 0.0 + 0.0j
        n_done = 0
        block = 1024
        while n_done < cfg.max_terms:
            n = np.arange(n_done + 1, n_done + block + 1, dtype=np.float64)
            total += complex((self.coeff_vector(n) * np.exp(-s * np.log(n))).sum())
            n_done += block
            bound = self.abs_tail(s.real, n_done)
            if bound <= target:
                return SumResult(total, bound, n_done, "direct")
            block = min(block * 2, cfg.max_terms - n_done + 1)
        raise ConvergenceError(
            f"direct Dirichlet summation for {self.name!r} cannot reach "
            f"{target} within {cfg.max_terms} terms"
        )

    def partial(self, s: complex, n_terms: int) -> complex:
        if n_terms <= 0:
            return 0.0 + 0.0j
        n = np.arange(1, n_terms + 1, dtype=np.float64)
        return complex((self.coeff_vector(n) * np.exp(-s * np.log(n))).sum())

    def tail_after(self, s: complex, n_terms: int, cfg: EvalConfig) -> SumResult:
        """sum over n > n_terms of a_n n^-s."""
        full = self.value(s, cfg)
        part = self.partial(s, n_terms)
        noise = 1e-16 * self.abs_partial(s.real, n_terms)
        return SumResult(
            full.value - part, full.abs_error_estimate + noise, full.terms_used, full.method
        )

    def abs_partial(self, sigma: float, n_terms: int) -> float:
        if n_terms <= 0:
            return 0.0
        n = np.arange(1, n_terms + 1, dtype=np.float64)
        return float((np.abs(self.coeff_vector(n)) * n**-sigma).sum())


@dataclass(frozen=True, eq=False)
class PowerSeriesSpec:
    """Power series f(w) = sum_{k>=1} a_k w^k with radius R and f(0) = 0."""

    name: str
    radius: float
    coeff: Callable[[int], complex] = field(repr=False)
    coeff_abs_bound: Callable[[int], float] = field(repr=False)
    closed_form: Optional[Callable[[complex], complex]] = field(default=None, repr=False)

    @property
    def first_nonzero(self) -> int:
        for k in range(1, 8):
            if self.coeff(k) != 0:
                return k
        return 8

    def eval(self, w: complex, tol: float = 1e-15) -> complex:
        """f(w); closed form when available, else the truncated series."""
        w = require_finite(w, "w")
        if self.closed_form is not None:
            return self.closed_form(w)
        aw = abs(w)
        if aw >= self.radius:
            raise DomainError(f"|w|={aw} outside radius {self.radius} of {self.name!r}")
        total = 0.0 + 0.0j
        for k in range(1, 512):
            total += self.coeff(k) * w**k
            if self.tail_bound(k, aw) < tol:
                return total
        raise ConvergenceError(f"series for {self.name!r} too slow at |w|={aw}")

    def tail_bound(self, k_done: int, absw: float) -> float:
        """Bound on sum_{k>k_done} |a_k| |w|^k."""
        if absw == 0:
            return 0.0
        total = 0.0
        prev = None
        for k in range(k_done + 1, k_done + 257):
            t = self.coeff_abs_bound(k) * absw**k
            total += t
            if prev is not None and prev > 0 and t / prev < 0.75 and t < 1e-18 * max(total, 1.0):
                ratio = t / prev
                return total + t * ratio / (1 - ratio)
            if t == 0.0 and k > k_done + 8:
                return total
            prev = t
        if prev and prev > 0:
            # fall back to the worst observed ratio
            return total + prev  # pragma: no cover - loose fallback
        return total


@dataclass(frozen=True, eq=False)
class GeneralDirichletSpec:
    """Exponents lambda_n increasing to infinity; D(s) = sum exp(-lambda_n s)."""

    name: str
    sigma_a: float
    lam: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    series_value: Optional[Callable[[complex, EvalConfig], SumResult]] = field(
        default=None, repr=False
    )

    def value(self, s: complex, cfg: EvalConfig) -> SumResult:
        s = require_finite(s, "s")
        if s.real <= self.sigma_a + EPS_DOMAIN:
            raise DomainError(f"Re(s) must exceed sigma_a={self.sigma_a}")
        if self.series_value is not None:
            return self.series_value(s, cfg)
        return self.tail_value(s, 0, cfg)

    def tail_value(self, s: complex, n_from_exclusive: int, cfg: EvalConfig) -> SumResult:
        """sum over n > n_from_exclusive of exp(-lambda_n s), empirical bound."""
        sigma = s.real
        total = 0.0 + 0.0j
        n_done = n_from_exclusive
        block = 256
        while n_done < cfg.max_terms:
            n = np.arange(n_done + 1, n_done + block + 1, dtype=np.float64)
            lams = np.asarray(self.lam(n), dtype=np.float64)
            if not np.all(np.diff(lams) > 0):
                raise DomainError(f"lambda sequence of {self.name!r} not strictly increasing")
            total += complex(np.exp(-s * lams).sum())
            n_done += block
            last = float(lams[-1])
            nxt = float(self.lam(np.array([n_done + 1.0]))[0])
            gap = nxt - last
            if gap <= 0:
                raise DomainError(f"lambda sequence of {self.name!r} not strictly increasing")
            # geometric comparison using the last observed gap
            ratio = math.exp(-gap * sigma)
            bound = math.exp(-nxt * sigma) / max(1 - ratio, 1e-16)
            if bound <= cfg.target_abs_error:
                return SumResult(total, bound, n_done - n_from_exclusive, "direct")
            block = min(block * 2, cfg.max_terms)
        raise ConvergenceError(f"general Dirichlet series {self.name!r} converges too slowly")


@dataclass(frozen=True, eq=False)
class SequenceSpec:
    """Numerators a_n and denominators b_n with |b_n| nondecreasing to infinity."""

    name: str
    a: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    b: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    smooth: bool = True  # a and b accept real arguments; enables extrapolated tails
    a_power: float = 0.0       # |a_n| <= n**a_power
    b_growth: tuple[float, float] = (1.0, 2.0)  # |b_n| >= c * n**gamma

    def b1(self) -> complex:
        return complex(np.asarray(self.b(np.array([1.0])))[0])

    def coefficient_sum(self, k: int, cfg: EvalConfig) -> SumResult:
        """c_k = sum_n a_n / b_n^(k+1)."""
        c, gam = self.b_growth
        decay = gam * (k + 1) - self.a_power
        # the direct bound needs n ~ (1/tol)^(1/(decay-1)) terms; below
        # decay 3.5 that can exceed the term cap, so extrapolate instead
        if decay >= 3.5 or not self.smooth:
            return self._direct_coefficient(k, decay, cfg)
        value, err = partial_sum_limit(
            lambda n: np.asarray(self.a(n)) / np.asarray(self.b(n)) ** (k + 1)
        )
        return SumResult(value, err, 512 * 2**7, "direct")

    def _direct_coefficient(self, k: int, decay: float, cfg: EvalConfig) -> SumResult:
        c, gam = self.b_growth
        total = 0.0 + 0.0j
        n_done = 0
        block = 512
        while n_done < cfg.max_terms:
            n = np.arange(n_done + 1, n_done + block + 1, dtype=np.float64)
            bvals = np.asarray(self.b(n), dtype=np.complex128)
            # b^-(k+1) in log space; plain powers overflow for large k
            total += complex(
                (np.asarray(self.a(n)) * np.exp(-(k + 1) * np.log(bvals))).sum()
            )
            n_done += block
            bound = c ** -(k + 1) * n_done ** (1 - decay) / (decay - 1)
            if bound <= cfg.target_abs_error:
                return SumResult(total, bound, n_done, "direct")
            block = min(block * 2, cfg.max_terms)
        raise ConvergenceError(f"coefficient sum k={k} of {self.name!r} too slow")


# ---------------------------------------------------------------------------
# Built-in power series


def _inv_factorial(k: int) -> float:
    return 1.0 / math.factorial(k) if k < 171 else 0.0


ps_expm1 = PowerSeriesSpec(
    "expm1",
    _INF,
    lambda k: _inv_factorial(k),
    lambda k: _inv_factorial(k),
    lambda w: cmath.exp(w) - 1.0,
)

ps_log1p = PowerSeriesSpec(
    "log1p",
    1.0,
    lambda k: (-1.0) ** (k + 1) / k,
    lambda k: 1.0 / k,
    lambda w: cmath.log(1 + w),
)


def _sin_coeff(k: int) -> float:
    if k % 2 == 0:
        return 0.0
    m = (k - 1) // 2
    return (-1.0) ** m * _inv_factorial(k)


ps_sin = PowerSeriesSpec("sin", _INF, _sin_coeff, lambda k: abs(_sin_coeff(k)), cmath.sin)

ps_identity = PowerSeriesSpec(
    "identity",
    _INF,
    lambda k: 1.0 if k == 1 else 0.0,
    lambda k: 1.0 if k == 1 else 0.0,
    lambda w: w,
)

POWER_SERIES = {
    "expm1": ps_expm1,
    "log1p": ps_log1p,
    "sin": ps_sin,
    "identity": ps_identity,
}


# ---------------------------------------------------------------------------
# Registry of named Dirichlet specs

_SIEVE_START = 1 << 17


@lru_cache(maxsize=4)
def _sieve(limit: int) -> ArithSieve:
    return build_sieve(limit)


def sieve_values(table: str, n: np.ndarray) -> np.ndarray:
    idx = np.asarray(n, dtype=np.int64)
    limit = _SIEVE_START
    while limit < idx.max():
        limit *= 2
    sv = _sieve(limit)
    arr = getattr(sv, table)
    return arr[idx].astype(np.complex128)


def _propagate_ratio(u: SumResult, v: SumResult, terms: int) -> SumResult:
    """SumResult for u/v with first-order error propagation."""
    value = u.value / v.value
    err = (u.abs_error_estimate + abs(value) * v.abs_error_estimate) / abs(v.value)
    return SumResult(value, err, terms, "euler_maclaurin_tail")


def _ones_value(s: complex, cfg: EvalConfig) -> SumResult:
    return specialfns.zeta(s, cfg)

def _mobius_value(s: complex, cfg: EvalConfig) -> SumResult:
    z = specialfns.zeta(s, cfg)
    one = SumResult(1.0 + 0.0j, 0.0, 1, "direct")
    return _propagate_ratio(one, z, z.terms_used)

def _von_mangoldt_value(s: complex, cfg: EvalConfig) -> SumResult:
    zp = specialfns.zeta_deriv(1, s, cfg)
    z = specialfns.zeta(s, cfg)
    res = _propagate_ratio(zp, z, z.terms_used + zp.terms_used)
    return SumResult(-res.value, res.abs_error_estimate, res.terms_used, res.method)

def _totient_value(s: complex, cfg: EvalConfig) -> SumResult:
    num = specialfns.zeta(s - 1, cfg)
    den = specialfns.zeta(s, cfg)
    return _propagate_ratio(num, den, num.terms_used + den.terms_used)


def _char_spec(q: int, index: int) -> DirichletSpec:
    chi = character(q, index)
    return DirichletSpec(
        name=f"char:{q}:{index}",
        sigma_a=1.0,
        coeff_vector=chi.coeff_vector,
        envelope=Envelope(1.0, 0.0, 0),
        series_value=lambda s, cfg: specialfns.l_function(s, chi, cfg),
        first_coeff=chi.value(1),
    )


SPEC_NAMES = ("ones", "mobius", "von-mangoldt", "totient", "beta")


@lru_cache(maxsize=64)
def get_spec(name: str) -> DirichletSpec:
    """Look up a named coefficient spec ({ones, mobius, von-mangoldt, totient,
    beta, char:q:idx})."""
    if name == "ones":
        return DirichletSpec(
            "ones", 1.0, lambda n: np.ones_like(np.asarray(n, dtype=np.complex128)),
            Envelope(), _ones_value, 1.0 + 0.0j,
        )
    if name == "mobius":
        return DirichletSpec(
            "mobius", 1.0, lambda n: sieve_values("mobius", n),
            Envelope(), _mobius_value, 1.0 + 0.0j,
        )
    if name == "von-mangoldt":
        return DirichletSpec(
            "von-mangoldt", 1.0, lambda n: sieve_values("von_mangoldt", n),
            Envelope(1.0, 0.0, 1), _von_mangoldt_value, 0.0 + 0.0j,
        )
    if name == "totient":
        return DirichletSpec(
            "totient", 2.0, lambda n: sieve_values("totient", n),
            Envelope(1.0, 1.0, 0), _totient_value, 1.0 + 0.0j,
        )
    if name == "beta":
        return _char_spec(4, 1)
    if name == "beta-shifted":
        # beta spec with the n=1 term removed: f(s) = beta(s) - 1, no pole
        # inside the closed unit disc since a_1 = 0
        chi = character(4, 1)

        def shifted_coeffs(n: np.ndarray) -> np.ndarray:
            v = chi.coeff_vector(np.asarray(n)).copy()
            v[np.asarray(n, dtype=np.int64) == 1] = 0
            return v

        def shifted_value(s: complex, cfg: EvalConfig) -> SumResult:
            res = specialfns.l_function(s, chi, cfg)
            return SumResult(
                res.value - 1.0, res.abs_error_estimate, res.terms_used, res.method
            )

        return DirichletSpec(
            "beta-shifted", 1.0, shifted_coeffs, Envelope(), shifted_value, 0.0 + 0.0j
        )
    if name.startswith("char:"):
        try:
            _, q, index = name.split(":")
            return _char_spec(int(q), int(index))
        except ValueError as exc:
            raise DomainError(f"bad character spec name {name!r}") from exc
    raise DomainError(f"unknown spec name {name!r}")


# ---------------------------------------------------------------------------
# Named sequence pairs and general Dirichlet exponent sequences (CLI registry)


def _as_float(n: np.ndarray) -> np.ndarray:
    return np.asarray(n, dtype=np.float64)


SEQUENCES = {
    "nsq-plus-n": SequenceSpec(
        "nsq-plus-n",
        lambda n: np.ones_like(_as_float(n)),
        lambda n: _as_float(n) ** 2 + _as_float(n),
        smooth=True,
        a_power=0.0,
        b_growth=(1.0, 2.0),
    ),
    "nsq": SequenceSpec(
        "nsq",
        lambda n: np.ones_like(_as_float(n)),
        lambda n: _as_float(n) ** 2,
        smooth=True,
        a_power=0.0,
        b_growth=(1.0, 2.0),
    ),
    "ncube": SequenceSpec(
        "ncube",
        lambda n: np.ones_like(_as_float(n)),
        lambda n: _as_float(n) ** 3,
        smooth=True,
        a_power=0.0,
        b_growth=(1.0, 3.0),
    ),
}

GENERAL_DIRICHLET = {
    # lambda_n = n: D(s) = sum e^(-ns) = 1/(e^s - 1)
    "linear": GeneralDirichletSpec("linear", 0.0, lambda n: _as_float(n)),
}


def get_sequence(name: str) -> SequenceSpec:
    try:
        return SEQUENCES[name]
    except KeyError:
        raise DomainError(f"unknown sequence name {name!r}") from None


def get_general_dirichlet(name: str) -> GeneralDirichletSpec:
    try:
        return GENERAL_DIRICHLET[name]
    except KeyError:
        raise DomainError(f"unknown general Dirichlet name {name!r}") from None


@lru_cache(maxsize=256)
def weighted_spec(q: complex, m: int) -> DirichletSpec:
    """Coefficients n^q ln^m(n); Dirichlet series (-1)^m zeta^(m)(s - q)."""
    q = require_finite(q, "q")
    if m < 0:
        raise DomainError("log power must be >= 0")

    def coeffs(n: np.ndarray) -> np.ndarray:
        n = np.asarray(n, dtype=np.float64)
        logs = np.log(n)
        return np.exp(q * logs) * logs**m

    def value(s: complex, cfg: EvalConfig) -> SumResult:
        res = specialfns.zeta_deriv(m, s - q, cfg)
        return SumResult((-1.0) ** m * res.value, res.abs_error_estimate,
                         res.terms_used, res.method)

    return DirichletSpec(
        name=f"weighted(q={q}, m={m})",
        sigma_a=q.real + 1.0,
        coeff_vector=coeffs,
        envelope=Envelope(1.0, q.real, m),
        series_value=value,
        first_coeff=(1.0 + 0.0j) if m == 0 else 0.0 + 0.0j,
    )
