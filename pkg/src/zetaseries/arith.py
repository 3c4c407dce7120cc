"""Arithmetic coefficient sequences (Mobius, von Mangoldt, totient) and
Dirichlet character tables."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, CharacterRangeError, DomainError

#: Largest sieve we are willing to hold in memory (three arrays of this size).
SIEVE_CAPACITY = 10**8


@dataclass(frozen=True)
class ArithSieve:
    """Tables of mu, Lambda and phi for 1 <= n <= limit (index 0 unused)."""

    limit: int
    mobius: np.ndarray       # int8, values in {-1, 0, 1}
    von_mangoldt: np.ndarray  # float64, ln p on prime powers, else 0
    totient: np.ndarray      # int64


def build_sieve(limit: int) -> ArithSieve:
    """Linear sieve over smallest prime factors."""
    if limit < 1:
        raise DomainError("sieve limit must be >= 1")
    if limit > SIEVE_CAPACITY:
        raise CapacityError(f"sieve limit {limit} exceeds capacity {SIEVE_CAPACITY}")
    spf = np.zeros(limit + 1, dtype=np.int64)
    primes: list[int] = []
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
        for p in primes:
            if p > spf[i] or i * p > limit:
                break
            spf[i * p] = p

    mobius = np.zeros(limit + 1, dtype=np.int8)
    totient = np.zeros(limit + 1, dtype=np.int64)
    von_mangoldt = np.zeros(limit + 1, dtype=np.float64)
    if limit >= 1:
        mobius[1] = 1
        totient[1] = 1
    for i in range(2, limit + 1):
        p = int(spf[i])
        m = i // p
        if m % p == 0:
            mobius[i] = 0
            totient[i] = totient[m] * p
        else:
            mobius[i] = -mobius[m]
            totient[i] = totient[m] * (p - 1)
        # prime power iff stripping the smallest prime factor leaves 1 or
        # another power of the same prime
        q = m
        while q % p == 0:
            q //= p
        if q == 1:
            von_mangoldt[i] = math.log(p)
    return ArithSieve(limit, mobius, von_mangoldt, totient)


def _factor(q: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= q:
        if q % d == 0:
            k = 0
            while q % d == 0:
                q //= d
                k += 1
            out.append((d, k))
        d += 1
    if q > 1:
        out.append((q, 1))
    return out


def _primitive_root(pk: int, p: int) -> int:
    """Primitive root modulo p**k for odd p (brute force; moduli are small)."""
    phi = pk - pk // p
    factors = [f for f, _ in _factor(phi)]
    for g in range(2, pk):
        if math.gcd(g, pk) != 1:
            continue
        if all(pow(g, phi // f, pk) != 1 for f in factors):
            return g
    raise RuntimeError(f"no primitive root modulo {pk}")  # unreachable for odd p


def _dlog(base: int, target: int, mod: int, order: int) -> int:
    acc = 1
    for e in range(order):
        if acc == target:
            return e
        acc = acc * base % mod
    raise RuntimeError(f"{target} not in <{base}> mod {mod}")  # unreachable for units


@dataclass(frozen=True)
class CharacterTable:
    """Dirichlet character mod q, tabulated on residues 0..q-1."""

    modulus: int
    values: np.ndarray = field(compare=False)  # complex128, length q
    index: int = 0

    def value(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def coeff_vector(self, n: np.ndarray) -> np.ndarray:
        idx = np.mod(np.asarray(n, dtype=np.int64), self.modulus)
        return self.values[idx]


def _group_structure(q: int) -> list[tuple[int, int, int]]:
    """(generator, order, prime-power modulus) per cyclic factor of (Z/q)*."""
    factors = _factor(q)
    comps: list[tuple[int, int, int]] = []  # (generator mod pk, order, pk)
    for p, k in factors:
        pk = p**k
        if p == 2:
            if k == 2:
                comps.append((3, 2, 4))
            elif k >= 3:
                comps.append((pk - 1, 2, pk))
                comps.append((3, 2 ** (k - 2), pk))
            # 2**1: trivial unit group
        else:
            comps.append((_primitive_root(pk, p), pk - pk // p, pk))
    return comps


def character_group_order(q: int) -> int:
    phi = q
    for p, _ in _factor(q):
        phi -= phi // p
    return phi if q > 1 else 1


def character(q: int, index: int) -> CharacterTable:
    """index-th character mod q; index 0 is the principal character.

    Indices are mixed-radix digits over the cyclic decomposition of the unit
    group, so every character appears exactly once for 0 <= index < phi(q).
    """
    if q < 1:
        raise DomainError("modulus must be >= 1")
    order = character_group_order(q)
    if not (0 <= index < order):
        raise CharacterRangeError(f"character index {index} outside group of order {order}")
    values = np.zeros(q, dtype=np.complex128)
    if q == 1:
        values[0] = 1.0
        return CharacterTable(1, values, index)

    comps = _group_structure(q)
    radices = [o for _, o, _ in comps]
    digits = []
    rem = index
    for r in radices:
        digits.append(rem % r)
        rem //= r

    for a in range(q):
        if math.gcd(a, q) != 1:
            continue
        phase = 0.0
        for (g, o, pk), e, d in zip(comps, digits, _component_dlogs(a, comps)):
            phase += e * d / o
        values[a] = cmath.exp(2j * math.pi * phase)
    # snap components that are exactly integral in exact arithmetic
    re, im = values.real.copy(), values.imag.copy()
    re[np.abs(re - np.round(re)) < 1e-12] = np.round(re[np.abs(re - np.round(re)) < 1e-12])
    im[np.abs(im - np.round(im)) < 1e-12] = np.round(im[np.abs(im - np.round(im)) < 1e-12])
    return CharacterTable(q, re + 1j * im, index)


def _component_dlogs(a: int, comps) -> list[int]:
    """Exponent of a over each cyclic generator, aligned with comps."""
    out: list[int] = []
    i = 0
    while i < len(comps):
        g, o, pk = comps[i]
        t = a % pk
        if pk % 2 == 0 and pk >= 8:
            # two generators {-1, 3} share this modulus; solve them jointly
            g2, o2, _ = comps[i + 1]
            for e1 in range(o):
                for e2 in range(o2):
                    if pow(g, e1, pk) * pow(g2, e2, pk) % pk == t:
                        out.extend([e1, e2])
                        break
                else:
                    continue
                break
            i += 2
        else:
            out.append(_dlog(g, t, pk, o))
            i += 1
    return out
