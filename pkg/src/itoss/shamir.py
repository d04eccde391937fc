"""Shamir share generation and classic Lagrange reconstruction."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import BadThreshold, DuplicateId, IdNotInGroup, ModulusMismatch, ZeroId
from .field import FieldElement, PrimeModulus, inverse, sample_uniform


@dataclass(frozen=True)
class Polynomial:
    """Coefficients ``a_0 .. a_{t-1}``; ``a_0`` is the secret."""

    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise BadThreshold("a sharing polynomial needs at least 2 coefficients")

    @property
    def threshold(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = x.modulus.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@dataclass(frozen=True)
class ShareTable:
    entries: Mapping[FieldElement, FieldElement]
    t: int
    modulus: PrimeModulus
    polynomial: Polynomial | None = None  # only kept when the dealer is asked to retain it

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def ids(self) -> list[FieldElement]:
        return list(self.entries)

    def share(self, uid: FieldElement) -> FieldElement:
        return self.entries[uid]

    def subset(self, ids: Iterable[FieldElement]) -> dict[FieldElement, FieldElement]:
        return {u: self.entries[u] for u in ids}


def check_ids(ids: Sequence[FieldElement], modulus: PrimeModulus | None = None) -> None:
    seen = set()
    for u in ids:
        if modulus is not None and u.p != modulus.p:
            raise ModulusMismatch(f"id {u!r} is not mod {modulus.p}")
        if u.value == 0:
            raise ZeroId("shareholder ids must be nonzero")
        if u.value in seen:
            raise DuplicateId(f"duplicate shareholder id {u.value}")
        seen.add(u.value)


def share_generate(
    secret: FieldElement,
    ids: Sequence[FieldElement],
    t: int,
    rng: random.Random,
    retain_polynomial: bool = False,
) -> ShareTable:
    """Deal ``s_j = f(U_j)`` for a fresh random polynomial with ``f(0) = secret``."""
    if t < 2 or t > len(ids):
        raise BadThreshold(f"need 2 <= t <= n, got t={t}, n={len(ids)}")
    check_ids(ids, secret.modulus)
    coeffs = (secret,) + tuple(sample_uniform(rng, secret.modulus) for _ in range(t - 1))
    f = Polynomial(coeffs)
    entries = {u: f(u) for u in ids}
    return ShareTable(entries, t, secret.modulus, f if retain_polynomial else None)


def lagrange_coeff_at_zero(j: FieldElement, group_ids: Sequence[FieldElement]) -> FieldElement:
    """``prod_{i != j} U_i / (U_i - U_j)``: the weight of ``f(U_j)`` in ``f(0)``."""
    check_ids(group_ids)
    if j not in group_ids:
        raise IdNotInGroup(f"id {j.value} is not in the group")
    num = j.modulus.one
    den = j.modulus.one
    for u in group_ids:
        if u == j:
            continue
        num = num * u
        den = den * (u - j)
    return num * inverse(den)


def reconstruct_classic(shares: Mapping[FieldElement, FieldElement]) -> FieldElement:
    """Interpolate ``f(0)`` from ``{id: share}``.

    The caller is responsible for passing at least ``t`` shares; with fewer
    the result is a uniformly unrelated field element, not an error.
    """
    ids = list(shares)
    if not ids:
        raise BadThreshold("no shares given")
    acc = ids[0].modulus.zero
    for u in ids:
        acc = acc + shares[u] * lagrange_coeff_at_zero(u, ids)
    return acc
