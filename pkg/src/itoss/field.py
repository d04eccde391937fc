"""Arithmetic over a prime field F_p.

All protocol values (secrets, shares, identities, random masks, randomized
components) are :class:`FieldElement` instances bound to one
:class:`PrimeModulus`. Mixing moduli raises :class:`ModulusMismatch`.

Randomness is never ambient: every sampler takes an explicit
``random.Random`` seeded by the caller.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from sympy import isprime

from .errors import ModulusMismatch, NotPrime, ZeroInverse

MAX_BITS = 256


@lru_cache(maxsize=256)
def _check_prime(p: int) -> None:
    if p < 2 or p.bit_length() > MAX_BITS or not isprime(p):
        raise NotPrime(f"{p} is not a prime of at most {MAX_BITS} bits")


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        _check_prime(self.p)

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def __repr__(self):
        return f"PrimeModulus({self.p})"


Operand = Union["FieldElement", int]


class FieldElement:
    """Immutable residue ``value`` mod ``modulus.p``.

    Plain ints are accepted as the other operand and reduced into the field;
    another FieldElement must share the modulus.
    """

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: PrimeModulus):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", int(value) % modulus.p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other: Operand) -> int:
        if isinstance(other, FieldElement):
            if other.modulus.p != self.modulus.p:
                raise ModulusMismatch(
                    f"cannot combine elements mod {self.modulus.p} and mod {other.modulus.p}"
                )
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value - o, self.modulus)

    def __rsub__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o - self.value, self.modulus)

    def __mul__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * inverse(FieldElement(o, self.modulus))

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.modulus)

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return inverse(self) ** (-exponent)
        return FieldElement(pow(self.value, exponent, self.modulus.p), self.modulus)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.modulus.p == other.modulus.p
        if isinstance(other, int):
            return self.value == other % self.modulus.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.modulus.p})"


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def inverse(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise ZeroInverse(f"0 has no inverse mod {a.p}")
    _, x, _ = egcd(a.value, a.p)
    return FieldElement(x, a.modulus)


def inv_mod(a: int, p: int) -> int:
    """Integer-level inverse used by the hot loops that avoid FieldElement."""
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {p}")
    return egcd(a, p)[1] % p


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def sample_uniform(rng: random.Random, modulus: PrimeModulus) -> FieldElement:
    return FieldElement(rng.randrange(modulus.p), modulus)


def sample_nonzero(rng: random.Random, modulus: PrimeModulus) -> FieldElement:
    """Uniform draw from F_p \\ {0}; resamples on zero."""
    while True:
        v = rng.randrange(modulus.p)
        if v:
            return FieldElement(v, modulus)


# -- codec shared by shares, secrets and randomized components ---------------


def to_hex(value: int) -> str:
    return format(value, "x")


def from_hex(text: str) -> int:
    return int(text, 16)


def encode_element(e: FieldElement) -> dict:
    return {"p": to_hex(e.p), "v": to_hex(e.value)}


def decode_element(record: dict, modulus: PrimeModulus | None = None) -> FieldElement:
    p = from_hex(record["p"])
    if modulus is None:
        modulus = PrimeModulus(p)
    elif modulus.p != p:
        raise ModulusMismatch(f"record is mod {p}, expected mod {modulus.p}")
    return FieldElement(from_hex(record["v"]), modulus)
