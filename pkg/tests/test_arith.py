"""Sieve tables and Dirichlet character construction."""

import math

import numpy as np
import pytest

from zetaseries.arith import (
    build_sieve,
    character,
    character_group_order,
)
from zetaseries.errors import CharacterRangeError, DomainError


def test_sieve_small_values():
    sv = build_sieve(30)
    assert list(sv.mobius[1:11]) == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert list(sv.totient[1:11]) == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
    expected_lambda = {
        2: 2, 3: 3, 4: 2, 5: 5, 7: 7, 8: 2, 9: 3, 11: 11, 13: 13, 16: 2,
        17: 17, 19: 19, 23: 23, 25: 5, 27: 3, 29: 29,
    }
    for n in range(1, 31):
        want = math.log(expected_lambda[n]) if n in expected_lambda else 0.0
        assert sv.von_mangoldt[n] == pytest.approx(want, abs=1e-15)


def test_mobius_mertens_consistency():
    sv = build_sieve(10000)
    # sum of mu over squarefree support stays small (Mertens function)
    assert abs(int(sv.mobius[1:].sum())) < 100


def test_totient_multiplicativity():
    sv = build_sieve(1000)
    for a, b in [(3, 5), (4, 9), (7, 8), (11, 13)]:
        assert sv.totient[a * b] == sv.totient[a] * sv.totient[b]


def test_group_order_is_euler_phi():
    sv = build_sieve(50)
    for q in range(2, 50):
        assert character_group_order(q) == sv.totient[q]


def test_character_mod4():
    chi = character(4, 1)
    vals = [chi.value(n) for n in range(8)]
    assert vals == [0, 1, 0, -1, 0, 1, 0, -1]


def test_character_principal():
    chi = character(12, 0)
    for n in range(1, 13):
        want = 1.0 if math.gcd(n, 12) == 1 else 0.0
        assert chi.value(n) == want


def test_character_multiplicative():
    for q in (5, 7, 9, 12, 16):
        for idx in range(character_group_order(q)):
            chi = character(q, idx)
            for a in range(1, q):
                for b in range(1, q):
                    lhs = chi.value(a * b)
                    rhs = chi.value(a) * chi.value(b)
                    assert abs(lhs - rhs) <= 1e-12


def test_character_orthogonality():
    q = 7
    order = character_group_order(q)
    for idx in range(order):
        chi = character(q, idx)
        total = sum(chi.value(n) for n in range(q))
        want = order if idx == 0 else 0.0
        assert abs(total - want) <= 1e-12


def test_coeff_vector_accepts_float_indices():
    chi = character(4, 1)
    out = chi.coeff_vector(np.arange(1.0, 9.0))
    assert list(out.real) == [1, 0, -1, 0, 1, 0, -1, 0]


def test_character_index_range():
    with pytest.raises(CharacterRangeError):
        character(4, 2)
    with pytest.raises(DomainError):
        character(0, 0)
