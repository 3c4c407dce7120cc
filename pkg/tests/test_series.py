"""Series evaluators: identity cross-checks, guards and invariants."""

import math

import pytest

from zetaseries import series
from zetaseries.core import EvalConfig
from zetaseries.errors import (
    BoundaryError,
    DomainError,
    PoleError,
    RadiusError,
)
from zetaseries.specs import POWER_SERIES, get_sequence, get_spec
from zetaseries.summation import ABEL, DIRECT, SummationMethod

CFG = EvalConfig()
ONES = get_spec("ones")
C1 = SummationMethod("cesaro", 1)


def agree(lhs, rhs, tol=1e-10):
    budget = lhs.abs_error_estimate + rhs.abs_error_estimate + tol
    assert abs(lhs.value - rhs.value) <= budget


# -- LHS closed forms -------------------------------------------------------

def test_lhs_is_zeta_at_origin():
    res = series.lhs_partial_fraction(ONES, 2, 0, CFG)
    assert abs(res.value - math.pi**2 / 6) <= 1e-12


def test_lhs_cotangent_closed_form():
    # sum 1/(n^2 + x^2) = pi coth(pi x)/(2x) - 1/(2x^2)
    for x in (0.3, 0.5, 0.9):
        truth = math.pi / math.tanh(math.pi * x) / (2 * x) - 1.0 / (2 * x * x)
        res = series.lhs_partial_fraction(ONES, 2, x * x, CFG)
        assert abs(res.value - truth) <= 1e-10


def test_lhs_quarter_shift():
    # sum 1/(n^2 + 1/4) = pi coth(pi/2) - 2
    truth = math.pi / math.tanh(math.pi / 2) - 2.0
    res = series.lhs_partial_fraction(ONES, 2, 0.25, CFG)
    assert abs(res.value - truth) <= 1e-12


def test_lhs_complex_z():
    lhs = series.lhs_partial_fraction(ONES, 2, 0.3 + 0.4j, CFG)
    rhs = series.rhs_zeta_series(ONES, 2, 0.3 + 0.4j, DIRECT, CFG)
    agree(lhs, rhs, 1e-12)


def test_lhs_pole_exclusion():
    with pytest.raises(PoleError):
        series.lhs_partial_fraction(ONES, 2, -4.0 + 1e-12, CFG)


def test_lhs_rejects_left_of_abscissa():
    with pytest.raises(DomainError):
        series.lhs_partial_fraction(ONES, 0.9, 0.5, CFG)


# -- RHS guards -------------------------------------------------------------

def test_rhs_radius_guard():
    with pytest.raises(RadiusError):
        series.rhs_zeta_series(ONES, 2, 1.5, DIRECT, CFG)


def test_rhs_boundary_guard():
    with pytest.raises(BoundaryError):
        series.rhs_zeta_series(ONES, 2, 1.0, DIRECT, CFG)
    with pytest.raises(BoundaryError):
        series.rhs_zeta_series(ONES, 2, complex(0, 1), DIRECT, CFG)


def test_rhs_pole_guard():
    with pytest.raises(PoleError):
        series.rhs_zeta_series(ONES, 2, -1.0, C1, CFG)


def test_rhs_minus_one_allowed_when_coefficient_vanishes():
    # a_1 = 0 removes the pole at z = -1
    spec = get_spec("von-mangoldt")
    res = series.rhs_zeta_series(spec, 2, -1.0, C1, CFG.with_target(1e-6))
    lhs = series.lhs_partial_fraction(spec, 2, -1.0, CFG)
    agree(lhs, res, 1e-6)


# -- identity equivalence spot checks --------------------------------------

@pytest.mark.parametrize("z", [0.5, -0.5, 0.9j, -0.3 + 0.2j])
def test_order_p_identity(z):
    lhs = series.lhs_partial_fraction(ONES, 2, z, CFG)
    rhs = series.rhs_zeta_series(ONES, 2, z, DIRECT, CFG)
    agree(lhs, rhs, 1e-12)


@pytest.mark.parametrize("name", ["mobius", "von-mangoldt", "totient", "beta"])
def test_dirichlet_identity(name):
    spec = get_spec(name)
    s = 3 if name == "totient" else 2
    lhs = series.lhs_partial_fraction(spec, s, 0.5, CFG)
    rhs = series.rhs_zeta_series(spec, s, 0.5, DIRECT, CFG)
    agree(lhs, rhs, 1e-10)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_derivative_identity(m):
    lhs = series.lhs_derivative(ONES, 2, 0.4, m, CFG)
    rhs = series.rhs_derivative(ONES, 2, 0.4, m, DIRECT, CFG)
    agree(lhs, rhs, 1e-11)


def test_derivative_matches_finite_difference():
    # sum a_n/(n^s+z)^2 = -d/dz sum a_n/(n^s+z)
    h = 1e-5
    up = series.lhs_partial_fraction(ONES, 2, 0.4 + h, CFG).value
    dn = series.lhs_partial_fraction(ONES, 2, 0.4 - h, CFG).value
    deriv = series.lhs_derivative(ONES, 2, 0.4, 1, CFG).value
    assert abs(deriv - (-(up - dn) / (2 * h))) <= 1e-7


def test_weighted_identity():
    lhs = series.lhs_weighted_series(1, 0, 2, 0.5, CFG)
    rhs = series.rhs_weighted_series(1, 0, 2, 0.5, DIRECT, CFG)
    agree(lhs, rhs, 1e-10)
    # frozen reference: sum ln(n)/(n^2 + 1/2)
    assert abs(lhs.value - 0.905981718501486504) <= 1e-10


def test_weighted_linear_numerator():
    # sum n/(n^3 + 1/2)
    lhs = series.lhs_weighted_series(0, 1, 3, 0.5, CFG)
    assert abs(lhs.value - 1.29409802479223057) <= 1e-10


def test_weighted_domain_guard():
    with pytest.raises(DomainError):
        series.lhs_weighted_series(0, 1.5, 2, 0.5, CFG)


def test_multi_factor_matches_derivative():
    # repeated factor (2,1) twice equals the m=1 derivative form
    mf = series.multi_factor_lhs([(2, 1), (2, 1)], ONES, 0.3, CFG)
    dv = series.lhs_derivative(ONES, 2, 0.3, 1, CFG)
    agree(mf, dv, 1e-11)
    rhs = series.multi_factor_rhs([(2, 1), (2, 1)], ONES, 0.3, CFG)
    agree(mf, rhs, 1e-10)


def test_multi_factor_mixed_exponents():
    lhs = series.multi_factor_lhs([(2, 1), (3, -1)], ONES, 0.4, CFG)
    rhs = series.multi_factor_rhs([(2, 1), (3, -1)], ONES, 0.4, CFG)
    agree(lhs, rhs, 1e-9)


def test_multi_factor_radius_guard():
    with pytest.raises(RadiusError):
        series.multi_factor_rhs([(2, 2), (3, 1)], ONES, 0.6, CFG)


def test_compose_identities():
    for name, z in (("expm1", 1.0), ("sin", 0.5), ("log1p", 0.5)):
        f = POWER_SERIES[name]
        lhs = series.compose_lhs(f, 2, z, CFG)
        rhs = series.compose_rhs(f, 2, z, DIRECT, CFG)
        agree(lhs, rhs, 1e-10)


def test_compose_frozen_values():
    assert abs(series.compose_lhs(POWER_SERIES["expm1"], 2, 1, CFG).value
               - 2.40744655479032851) <= 1e-10
    assert abs(series.compose_lhs(POWER_SERIES["sin"], 2, 0.5, CFG).value
               - 0.801531517145992921) <= 1e-10


def test_compose_abel_boundary():
    # sum ln(1 + 1/n^2) = ln(sinh(pi)/pi)
    truth = math.log(math.sinh(math.pi) / math.pi)
    rhs = series.compose_rhs(POWER_SERIES["log1p"], 2, 1.0, ABEL, CFG.with_target(1e-8))
    assert abs(rhs.value - truth) <= 1e-6
    lhs = series.compose_lhs(POWER_SERIES["log1p"], 2, 1.0, CFG)
    assert abs(lhs.value - truth) <= 1e-10


def test_compose_radius_guard():
    with pytest.raises(RadiusError):
        series.compose_rhs(POWER_SERIES["log1p"], 2, 1.2, DIRECT, CFG)


def test_dirichlet_compose_identity():
    f = POWER_SERIES["expm1"]
    g = get_spec("mobius")
    lhs = series.dirichlet_compose_lhs(f, g, 2, 2, 1.0 - 1e-9, CFG)
    rhs = series.dirichlet_compose_rhs(f, g, 2, 2, 1.0 - 1e-9, CFG)
    agree(lhs, rhs, 1e-10)
    assert abs(lhs.value - 1.6329761898371442) <= 1e-7


def test_general_dirichlet_identity():
    from zetaseries.specs import get_general_dirichlet

    f = POWER_SERIES["expm1"]
    gd = get_general_dirichlet("linear")
    lhs = series.general_dirichlet_lhs(f, gd, 1, 1.0 - 1e-9, CFG)
    rhs = series.general_dirichlet_rhs(f, gd, 1, 1.0 - 1e-9, CFG)
    agree(lhs, rhs, 1e-10)
    assert abs(lhs.value - 0.6698057058349002) <= 1e-7


def test_general_dirichlet_geometric():
    from zetaseries.specs import get_general_dirichlet

    gd = get_general_dirichlet("linear")
    f = POWER_SERIES["identity"] if "identity" in POWER_SERIES else None
    if f is None:
        pytest.skip("no identity power series registered")
    lhs = series.general_dirichlet_lhs(f, gd, 1, 0.5, CFG)
    assert abs(lhs.value - 0.5 / (math.e - 1)) <= 1e-12


def test_sequence_identity():
    seq = get_sequence("nsq-plus-n")
    lhs = series.sequence_lhs(seq, 1.0, CFG)
    rhs = series.sequence_rhs(seq, 1.0, DIRECT, CFG)
    agree(lhs, rhs, 1e-10)
    truth = 1.0 + math.sqrt(5) / 5 * math.pi * math.tan(math.pi * math.sqrt(5) / 2)
    assert abs(lhs.value - truth) <= 1e-10


def test_sequence_sign_convention_matches_partial_fraction():
    # b_n = n^2 with z -> -z reproduces sum 1/(n^2 + z)
    seq = get_sequence("nsq")
    for z in (0.3, -0.4, 0.2 + 0.1j):
        sres = series.sequence_lhs(seq, -z, CFG)
        pres = series.lhs_partial_fraction(ONES, 2, z, CFG)
        assert abs(sres.value - pres.value) <= 1e-10
        srhs = series.sequence_rhs(seq, -z, DIRECT, CFG)
        assert abs(srhs.value - pres.value) <= 1e-10


def test_sequence_guards():
    seq = get_sequence("nsq")
    with pytest.raises(RadiusError):
        series.sequence_rhs(seq, 1.5, DIRECT, CFG)
    with pytest.raises(BoundaryError):
        series.sequence_rhs(seq, -1.0, DIRECT, CFG)
    with pytest.raises(PoleError):
        series.sequence_rhs(seq, 1.0, DIRECT, CFG)  # z = b_1
    with pytest.raises(PoleError):
        series.sequence_lhs(seq, 4.0, CFG)  # z = b_2


# -- truncation monotonicity -------------------------------------------------

def test_error_estimate_monotone_in_budget():
    evals = [
        lambda c: series.lhs_partial_fraction(ONES, 2, 0.5, c),
        lambda c: series.rhs_zeta_series(ONES, 2, 0.5, DIRECT, c),
        lambda c: series.sequence_lhs(get_sequence("nsq-plus-n"), 0.5, c),
    ]
    for ev in evals:
        prev = None
        for budget in (2**10, 2**11, 2**12, 2**13):
            res = ev(EvalConfig(target_abs_error=1e-14, max_terms=budget))
            if prev is not None:
                assert res.abs_error_estimate <= prev * (1 + 1e-12)
            prev = res.abs_error_estimate
