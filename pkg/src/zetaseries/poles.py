"""Pole structure of the partial-fraction functions g(z) = sum a_n/(n^s+z):
locations -n^s on a logarithmic spiral, and numerical residue measurement
by shrinking-radius extrapolation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import EvalConfig, principal_power, require_finite
from .errors import ConvergenceError, DomainError, NotAPoleError
from .extrapolate import richardson
from .series import lhs_partial_fraction
from .specs import DirichletSpec, weighted_spec


@dataclass(frozen=True)
class PoleRecord:
    n: int
    location: complex
    expected_residue: Optional[complex] = None
    measured_residue: Optional[complex] = None
    abs_error: Optional[float] = None


def pole_location(s: complex, n: int) -> complex:
    """-n^s with the principal branch of the exponential."""
    if n < 1:
        raise DomainError("pole index n must be >= 1")
    return -principal_power(n, s)


def pole_locations(s: complex, count: int) -> list[PoleRecord]:
    s = require_finite(s, "s")
    if count < 1:
        raise DomainError("count must be >= 1")
    return [PoleRecord(n, pole_location(s, n)) for n in range(1, count + 1)]


def spiral_export(s: complex, count: int) -> list[tuple[int, float, float, float, float]]:
    """Rows (n, re, im, |location|, arg location) for the poles -n^s.

    arg is the principal argument; for real s every row has arg = pi, for
    complex s the unwrapped arg grows linearly in ln n (the log spiral).
    """
    rows = []
    for rec in pole_locations(s, count):
        # normalize -0.0 components so phase(-1) is pi, not -pi
        loc = complex(rec.location.real + 0.0, rec.location.imag + 0.0)
        rows.append((rec.n, loc.real, loc.imag, abs(loc), cmath.phase(loc)))
    return rows


def spiral_slopes(rows) -> tuple[float, float]:
    """Least-squares slopes of (ln|location|, unwrapped arg) against ln n.

    For poles -n^s these recover (Re(s), Im(s))."""
    if len(rows) < 2:
        raise DomainError("need at least two rows for a slope")
    ln_n = np.log([r[0] for r in rows])
    ln_abs = np.log([r[3] for r in rows])
    args = np.unwrap([r[4] for r in rows])
    design = np.column_stack([ln_n, np.ones_like(ln_n)])
    slope_abs = np.linalg.lstsq(design, ln_abs, rcond=None)[0][0]
    slope_arg = np.linalg.lstsq(design, args, rcond=None)[0][0]
    return float(slope_abs), float(slope_arg)


def residue(
    spec: DirichletSpec,
    s: complex,
    n: int,
    cfg: EvalConfig = EvalConfig(),
    *,
    weighted: Optional[tuple[complex, int]] = None,
) -> PoleRecord:
    """Measured residue of the partial-fraction function at z = -n^s.

    Plain variant: g(z) = sum a_n/(n^s+z), residue a_n.  Weighted variant
    (q, m): the function sum_k (-1)^k zeta^(m)(sk+s-q) z^k, whose residue at
    -n^s is (-1)^m n^q ln^m(n).

    The limit (z+n^s) g(z) is taken along z_j = -n^s + rho_j n^s/|n^s|
    (radially toward the origin), rho_j = 10^-j for j = 2..6, and
    Richardson-extrapolated in rho.
    """
    s = require_finite(s, "s")
    if n < 1:
        raise DomainError("pole index n must be >= 1")
    sign = 1.0
    if weighted is not None:
        q, m = weighted
        spec = weighted_spec(q, m)
        sign = (-1.0) ** m
    a_n = spec.coeff(n)
    if a_n == 0:
        raise NotAPoleError(
            f"a_{n} = 0 for spec {spec.name!r}: no pole at -{n}^s"
        )
    expected = sign * a_n

    pole = pole_location(s, n)
    direction = -pole / abs(pole)  # radially toward the origin

    # distance to the nearest neighboring pole
    neighbors = [k for k in (n - 1, n + 1) if k >= 1 and spec.coeff(k) != 0]
    dist = min(
        (abs(pole_location(s, k) - pole) for k in neighbors), default=math.inf
    )
    # subtract the n+-1 terms analytically when the largest probe radius is
    # not safely inside the neighbor's basin
    subtract = [k for k in neighbors if 1e-2 >= 0.1 * abs(pole_location(s, k) - pole)]

    inner = cfg.with_target(min(cfg.target_abs_error, 1e-13))
    vals = []
    terms = 0
    for j in range(2, 7):
        rho = 10.0**-j
        z = pole + rho * direction
        res = lhs_partial_fraction(spec, s, z, inner)
        value = res.value
        for k in subtract:
            value -= spec.coeff(k) / (principal_power(k, s) + z)
        vals.append(sign * (z - pole) * value)
        terms += res.terms_used
    measured, err = richardson(vals, 10.0)
    err += 1e-2 * inner.target_abs_error  # probe evaluations enter scaled by rho
    if err > 1e-3 * (1.0 + abs(expected)):
        raise ConvergenceError(
            f"residue extrapolation at n={n} did not converge (err {err:.3g})"
        )
    return PoleRecord(n, pole, expected, measured, err)
