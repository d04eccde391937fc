"""Turning an ideal threshold scheme into a tightly-coupled one.

An ideal scheme is described by its per-participant component function
``g_j = component(s_j, group)`` and the commutative group operation whose
fold of all components yields the secret. Conversion masks each component
with RNS randomness whose fold is the identity element:
``c_j = g_j o r_j`` and ``fold(c) = fold(g) o e = s``.
"""

from __future__ import annotations

import itertools
import operator
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Sequence

from sympy import factorint
from sympy.ntheory import discrete_log

from .errors import BadThreshold, GroupTooSmall, InterfaceViolation, ZeroId
from .field import FieldElement, PrimeModulus, inverse, sample_nonzero, sample_uniform
from .netsim import RC, RNS, Group, Transcript, broadcast_private
from .rns import round_paths
from .shamir import ShareTable, check_ids, lagrange_coeff_at_zero, share_generate


@dataclass(frozen=True)
class Operation:
    """A commutative group law on a subset of F_p."""

    name: str
    combine: Callable[[FieldElement, FieldElement], FieldElement]
    identity: FieldElement
    invert: Callable[[FieldElement], FieldElement]
    sample: Callable[[random.Random], FieldElement]
    carrier: Callable[[], Iterable[FieldElement]]

    def fold(self, values: Iterable[FieldElement]) -> FieldElement:
        return reduce(self.combine, values, self.identity)


def additive(modulus: PrimeModulus) -> Operation:
    return Operation(
        "additive",
        operator.add,
        modulus.zero,
        operator.neg,
        lambda rng: sample_uniform(rng, modulus),
        lambda: (modulus(v) for v in range(modulus.p)),
    )


def multiplicative(modulus: PrimeModulus) -> Operation:
    return Operation(
        "multiplicative",
        operator.mul,
        modulus.one,
        inverse,
        lambda rng: sample_nonzero(rng, modulus),
        lambda: (modulus(v) for v in range(1, modulus.p)),
    )


@dataclass
class IdealScheme:
    name: str
    modulus: PrimeModulus
    op: Operation
    component: Callable[[FieldElement, FieldElement, Sequence[FieldElement]], FieldElement]
    share_gen: Callable[[FieldElement, Sequence[FieldElement], int, random.Random], ShareTable]
    secret_space: Callable[[], Iterable[FieldElement]]
    share_space: Callable[[], Iterable[FieldElement]]
    sample_secret: Callable[[random.Random], FieldElement]
    max_id: int  # ids must lie in 1..max_id
    notes: dict = field(default_factory=dict)

    def reconstruct(self, shares: dict[FieldElement, FieldElement]) -> FieldElement:
        ids = list(shares)
        return self.op.fold(self.component(shares[u], u, ids) for u in ids)


# -- concrete schemes -------------------------------------------------------


def shamir_additive(modulus: PrimeModulus) -> IdealScheme:
    def component(share, owner, ids):
        return share * lagrange_coeff_at_zero(owner, ids)

    op = additive(modulus)
    return IdealScheme(
        "shamir-additive",
        modulus,
        op,
        component,
        share_generate,
        op.carrier,
        op.carrier,
        op.sample,
        modulus.p - 1,
    )


def shamir_multiplicative(modulus: PrimeModulus) -> IdealScheme:
    """Shamir in the exponent of the order-``q`` subgroup of F_p*.

    ``q`` is the largest prime factor of ``p - 1`` and ``h`` generates the
    subgroup. Shares are ``h^f(U_j)``, components ``s_j^lambda_j`` and the
    product of components is ``h^f(0)``. The dealer needs the discrete log
    of the secret, so this is a desk-scale construction.
    """
    p = modulus.p
    q = max(factorint(p - 1))
    exponents = PrimeModulus(q)
    h = next(
        pow(x, (p - 1) // q, p) for x in range(2, p) if pow(x, (p - 1) // q, p) != 1
    )
    gen = modulus(h)

    def to_exp(u: FieldElement) -> FieldElement:
        if u.value == 0 or u.value >= q:
            raise ZeroId(f"id {u.value} must lie in 1..{q - 1}")
        return exponents(u.value)

    def share_gen(secret, ids, t, rng):
        check_ids(ids, modulus)
        if secret.value == 0 or pow(secret.value, q, p) != 1:
            raise BadThreshold(f"secret {secret.value} is not in the order-{q} subgroup")
        e = discrete_log(p, secret.value, h)
        inner = share_generate(exponents(e), [to_exp(u) for u in ids], t, rng)
        entries = {u: gen ** inner.entries[to_exp(u)].value for u in ids}
        return ShareTable(entries, t, modulus)

    def component(share, owner, ids):
        lam = lagrange_coeff_at_zero(to_exp(owner), [to_exp(u) for u in ids])
        return share ** lam.value

    def subgroup():
        return (gen ** e for e in range(q))

    return IdealScheme(
        "shamir-multiplicative",
        modulus,
        multiplicative(modulus),
        component,
        share_gen,
        subgroup,
        subgroup,
        lambda rng: gen ** rng.randrange(q),
        q - 1,
        {"q": q, "generator": h},
    )


# -- interface checks -------------------------------------------------------

EXHAUSTIVE_LIMIT = 4096


def verify_interface(scheme: IdealScheme, seed: int = 0, samples: int = 64) -> None:
    """Property checks run at registration; raises InterfaceViolation."""
    rng = random.Random(seed)
    op = scheme.op
    carrier = list(itertools.islice(op.carrier(), EXHAUSTIVE_LIMIT + 1))
    if len(carrier) <= 16:
        triples = list(itertools.product(carrier, repeat=3))
    else:
        triples = [tuple(op.sample(rng) for _ in range(3)) for _ in range(samples)]
    for a, b, c in triples:
        if op.combine(op.combine(a, b), c) != op.combine(a, op.combine(b, c)):
            raise InterfaceViolation(f"{scheme.name}: operation is not associative")
        if op.combine(a, b) != op.combine(b, a):
            raise InterfaceViolation(f"{scheme.name}: operation is not commutative")
        if op.combine(a, op.identity) != a or op.combine(a, op.invert(a)) != op.identity:
            raise InterfaceViolation(f"{scheme.name}: identity or inverse law fails")

    n = min(5, scheme.max_id)
    if n < 2:
        raise InterfaceViolation(f"{scheme.name}: fewer than 2 usable shareholder ids")
    ids = [scheme.modulus(v) for v in range(1, n + 1)]
    for t in range(2, n + 1):
        secret = scheme.sample_secret(rng)
        table = scheme.share_gen(secret, ids, t, rng)
        for m in range(t, n + 1):
            got = scheme.reconstruct(table.subset(ids[:m]))
            if got != secret:
                raise InterfaceViolation(
                    f"{scheme.name}: fold of components gave {got.value}, expected {secret.value}"
                )

    # share -> secret must be a bijection for fixed group and fixed other shares
    t = 2
    table = scheme.share_gen(scheme.sample_secret(rng), ids[:t], t, rng)
    fixed = scheme.component(table.share(ids[0]), ids[0], ids[:t])
    space = list(itertools.islice(scheme.share_space(), EXHAUSTIVE_LIMIT + 1))
    exhaustive = len(space) <= EXHAUSTIVE_LIMIT
    if not exhaustive:
        space = [table.share(ids[1])] + [scheme.sample_secret(rng) for _ in range(samples)]
        space = list(dict.fromkeys(space))
    images = {op.combine(fixed, scheme.component(s, ids[1], ids[:t])) for s in space}
    if len(images) != len(space):
        raise InterfaceViolation(f"{scheme.name}: share -> secret map is not injective")
    if exhaustive and images != set(scheme.secret_space()):
        raise InterfaceViolation(f"{scheme.name}: share -> secret map is not onto the secret space")


SCHEMES: dict[str, Callable[[PrimeModulus], IdealScheme]] = {
    "shamir-additive": shamir_additive,
    "shamir-multiplicative": shamir_multiplicative,
}


def get_scheme(name: str, modulus: PrimeModulus, verify: bool = True) -> IdealScheme:
    try:
        factory = SCHEMES[name]
    except KeyError:
        raise InterfaceViolation(f"unknown scheme {name!r}; known: {sorted(SCHEMES)}") from None
    scheme = factory(modulus)
    if verify:
        verify_interface(scheme)
    return scheme


# -- converted scheme -------------------------------------------------------


def rns_with_identity(
    group: Group, k: int, op: Operation, transcript: Transcript, rng: random.Random
) -> list[FieldElement]:
    """RNS with an arbitrary group law; the returned values fold to the identity.

    Position 0 closes once, after the last round, with the inverse of the
    fold of all final accumulators.
    """
    m = group.m
    draws = [[op.identity] * m for _ in range(k)]
    finals = []
    for i, path in enumerate(round_paths(m, k), start=1):
        acc = op.identity
        for h, pos in enumerate(path):
            w = op.sample(rng)
            draws[i - 1][pos] = w
            acc = op.combine(acc, w)
            transcript.send(RNS, pos, path[(h + 1) % m], acc, round=i)
        finals.append(acc)
    r = [op.fold(draws[i][pos] for i in range(k)) for pos in range(m)]
    r[0] = op.combine(r[0], op.invert(op.fold(finals)))
    return r


@dataclass
class ConvertedSession:
    secret: FieldElement
    transcript: Transcript
    r: list[FieldElement]
    rcs: list[FieldElement]
    recovered: list[FieldElement]


@dataclass
class Converted:
    scheme: IdealScheme

    def rcc(
        self,
        table: ShareTable,
        group: Group,
        k: int,
        transcript: Transcript,
        rng: random.Random,
    ) -> tuple[list[FieldElement], list[FieldElement]]:
        if group.m < table.t:
            raise GroupTooSmall(f"group of {group.m} is below the threshold t={table.t}")
        r = rns_with_identity(group, k, self.scheme.op, transcript, rng)
        ids = list(group.ids)
        rcs = [
            self.scheme.op.combine(self.scheme.component(table.share(u), u, ids), r[pos])
            for pos, u in enumerate(ids)
        ]
        return rcs, r

    def rcsr(self, rcs: Sequence[FieldElement]) -> FieldElement:
        return self.scheme.op.fold(rcs)

    def run_session(
        self,
        table: ShareTable,
        group: Group,
        k: int,
        rng: random.Random,
        transcript: Transcript | None = None,
    ) -> ConvertedSession:
        transcript = Transcript() if transcript is None else transcript
        rcs, r = self.rcc(table, group, k, transcript, rng)
        broadcast_private(transcript, rcs, RC)
        recovered = []
        for pos in range(group.m):
            got = {pos: rcs[pos]}
            for msg in transcript.messages:
                if msg.phase == RC and msg.receiver == pos:
                    got[msg.sender] = msg.payload
            recovered.append(self.rcsr([got[j] for j in range(group.m)]))
        return ConvertedSession(recovered[0], transcript, r, rcs, recovered)


def convert(scheme: IdealScheme, verify: bool = True) -> Converted:
    if verify:
        verify_interface(scheme)
    return Converted(scheme)
