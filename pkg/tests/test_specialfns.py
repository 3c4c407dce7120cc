"""Euler-Maclaurin special functions against independently computed values."""

import math

import pytest

from zetaseries.arith import character
from zetaseries.core import EvalConfig
from zetaseries.errors import DomainError
from zetaseries.specialfns import (
    dirichlet_beta,
    hurwitz_zeta,
    l_function,
    zeta,
    zeta_deriv,
    zeta_tail_from,
)

CFG = EvalConfig()


def check(result, expected, tol=1e-13):
    assert abs(result.value - expected) <= tol
    # the reported estimate must cover the actual error
    assert abs(result.value - expected) <= max(result.abs_error_estimate, tol)


def test_zeta_real():
    check(zeta(2), math.pi**2 / 6)
    check(zeta(4), math.pi**4 / 90)
    check(zeta(3), 1.20205690315959429)


def test_zeta_complex():
    check(zeta(3 + 4j), 0.890554906965073258 - 0.00807594542432725985j)


def test_zeta_near_boundary():
    # slowly convergent but still inside the admissible half-plane
    check(zeta(1.1), 10.5844484649508098, 1e-12)


def test_zeta_rejects_closed_halfplane():
    with pytest.raises(DomainError):
        zeta(1.0)
    with pytest.raises(DomainError):
        zeta(0.5 + 14j)


def test_zeta_deriv():
    check(zeta_deriv(1, 2), -0.937548254315843754)
    check(zeta_deriv(2, 3), 0.239746917305387184)
    check(zeta_deriv(0, 2), math.pi**2 / 6)


def test_zeta_tail_from():
    # zeta(2) minus the first 10 terms
    head = sum(1.0 / n**2 for n in range(1, 11))
    check(zeta_tail_from(2, 10), math.pi**2 / 6 - head)


def test_hurwitz():
    check(hurwitz_zeta(3, 0.25), 64.6638699687684602)
    check(hurwitz_zeta(2, 1.0), math.pi**2 / 6)


def test_hurwitz_decomposition():
    # zeta(s) = q^-s * sum_{r=1..q} zeta(s, r/q)
    for q in (2, 3, 4, 5):
        for s in (2.0, 3.5, 2 + 1j):
            total = sum(hurwitz_zeta(s, r / q).value for r in range(1, q + 1))
            assert abs(q ** (-complex(s)) * total - zeta(s).value) <= 1e-10


def test_dirichlet_beta():
    check(dirichlet_beta(2), 0.915965594177219015)  # Catalan's constant
    check(dirichlet_beta(3), math.pi**3 / 32)


def test_l_function_mod3():
    chi = character(3, 1)
    check(l_function(2, chi), 0.781302412896486297)
    check(l_function(3, chi), 0.884023811750079857)


def test_l_function_principal_is_scaled_zeta():
    # principal character mod 2: L(s) = (1 - 2^-s) zeta(s)
    chi = character(2, 0)
    check(l_function(2, chi), (1 - 0.25) * math.pi**2 / 6)


def test_error_estimates_within_target():
    for s in (2.0, 1.5, 3 + 4j):
        res = zeta(s, EvalConfig(target_abs_error=1e-13))
        assert res.abs_error_estimate <= 1e-13
