"""Richardson extrapolation helpers shared by tail summation, Abel limits
and residue measurement."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError


def richardson(values, ratio: float) -> tuple[complex, float]:
    """Extrapolate a sequence v_j = L + sum_i c_i h_j^i with h_j = h_0/ratio^j.

    Returns the diagonal estimate and the modulus of the last correction,
    which serves as the (heuristic) error estimate.
    """
    vals = [complex(v) for v in values]
    if len(vals) == 1:
        return vals[0], float("inf")
    row = vals
    diagonals = [vals[-1]]
    for m in range(1, len(vals)):
        mult = ratio**m
        row = [(mult * row[i + 1] - row[i]) / (mult - 1.0) for i in range(len(row) - 1)]
        diagonals.append(row[-1])
    # the last correction alone tends to flatter the estimate; include the
    # previous one as well
    err = abs(diagonals[-1] - diagonals[-2])
    if len(diagonals) >= 3:
        err += abs(diagonals[-2] - diagonals[-3])
    return diagonals[-1], err


def partial_sum_limit(
    term_vector,
    base: int = 512,
    levels: int = 8,
    dtype=np.complex128,
) -> tuple[complex, float]:
    """Limit of partial sums S_N as N -> inf for terms with an asymptotic
    tail in integer powers of 1/N.

    `term_vector(n_array)` must return the terms for an integer array of
    indices.  Partial sums are taken at N = base * 2^m and Richardson
    extrapolation in 1/N is applied.
    """
    top = base * 2 ** (levels - 1)
    n = np.arange(1, top + 1, dtype=np.float64)
    terms = np.asarray(term_vector(n), dtype=dtype)
    if not np.isfinite(terms).all():
        raise ConvergenceError("non-finite term in partial-sum extrapolation")
    csum = np.cumsum(terms)
    marks = [csum[base * 2**m - 1] for m in range(levels)]
    value, err = richardson(marks, 2.0)
    # random-walk rounding noise of the running sum, amplified by the
    # alternating-sign extrapolation weights
    noise = 4e-16 * float(np.abs(csum).max()) * math.sqrt(top)
    return value, err + noise
