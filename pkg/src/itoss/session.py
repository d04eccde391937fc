"""Tightly-coupled reconstruction: randomized components and sessions.

Each participant masks its Lagrange-weighted share with the private number
obtained from RNS, sends the resulting randomized component (RC) to every
other participant, and everyone sums all ``m`` RCs. The masks cancel only
when every RC of the group is present.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from math import sqrt
from typing import Sequence

from .errors import DuplicateId, GroupTooSmall, IdNotInGroup, IncompleteRcSet
from .field import FieldElement, PrimeModulus, sample_uniform
from .netsim import RC, Group, Transcript, broadcast_private
from .rns import RnsResult, run_rns
from .shamir import ShareTable, lagrange_coeff_at_zero


@dataclass(frozen=True)
class RandomizedComponent:
    owner: FieldElement
    c: FieldElement


@dataclass
class RcSet:
    group: Group
    components: dict[int, RandomizedComponent] = field(default_factory=dict)

    @property
    def modulus(self) -> PrimeModulus:
        return self.group.modulus

    def add(self, position: int, rc: RandomizedComponent) -> None:
        self.components[position] = rc

    def is_complete(self) -> bool:
        return set(self.components) == set(range(self.group.m))


def build_rc(
    share: FieldElement, owner: FieldElement, group: Group | Sequence[FieldElement], r: FieldElement
) -> RandomizedComponent:
    ids = group.ids if isinstance(group, Group) else tuple(group)
    if owner not in ids:
        raise IdNotInGroup(f"id {owner.value} is not in the group")
    return RandomizedComponent(owner, share * lagrange_coeff_at_zero(owner, ids) + r)


def reconstruct_from_rcs(rcs: RcSet) -> FieldElement:
    if not rcs.is_complete():
        missing = sorted(set(range(rcs.group.m)) - set(rcs.components))
        raise IncompleteRcSet(f"missing randomized components at positions {missing}")
    acc = rcs.modulus.zero
    for rc in rcs.components.values():
        acc = acc + rc.c
    return acc


@dataclass
class PublicInfo:
    """Everything an eavesdropper is assumed to know about a session."""

    modulus: PrimeModulus
    t: int
    ids: tuple[FieldElement, ...]
    k: int
    paths: list[tuple[int, ...]]

    @property
    def m(self) -> int:
        return len(self.ids)


@dataclass
class SessionResult:
    secret: FieldElement
    transcript: Transcript
    public: PublicInfo
    rns: RnsResult
    rcs: RcSet
    recovered: list[FieldElement]  # what each participant computed

    def __iter__(self):
        # allows `secret, transcript = run_session(...)`
        return iter((self.secret, self.transcript))


def _require_group(table: ShareTable, group: Group) -> None:
    if group.m < table.t:
        raise GroupTooSmall(f"group of {group.m} is below the threshold t={table.t}")
    for u in group.ids:
        if u not in table.entries:
            raise IdNotInGroup(f"id {u.value} holds no share in this table")


def run_session(
    table: ShareTable,
    group: Group,
    k: int,
    rng: random.Random,
    transcript: Transcript | None = None,
    retain: bool = False,
) -> SessionResult:
    """RNS, then RC construction, then all-to-all RC exchange and summation."""
    _require_group(table, group)
    transcript = Transcript() if transcript is None else transcript
    rns = run_rns(group, k, transcript, rng, retain=retain)

    rcs = RcSet(group)
    for pos, uid in enumerate(group.ids):
        rcs.add(pos, build_rc(table.share(uid), uid, group, rns.r[pos]))
    values = [rcs.components[pos].c for pos in range(group.m)]
    broadcast_private(transcript, values, RC)

    recovered = []
    for pos in range(group.m):
        received = RcSet(group, {pos: rcs.components[pos]})
        for msg in transcript.messages:
            if msg.phase == RC and msg.receiver == pos:
                received.add(msg.sender, RandomizedComponent(group.ids[msg.sender], msg.payload))
        recovered.append(reconstruct_from_rcs(received))

    public = PublicInfo(table.modulus, table.t, group.ids, k, rns.paths)
    return SessionResult(recovered[0], transcript, public, rns, rcs, recovered)


@dataclass
class IpAttackSummary:
    trials: int
    hits: int
    p: int
    counts: Counter

    @property
    def hit_rate(self) -> float:
        return self.hits / self.trials

    @property
    def expected_rate(self) -> float:
        return 1 / self.p

    @property
    def z_score(self) -> float:
        q = self.expected_rate
        sd = sqrt(self.trials * q * (1 - q))
        return (self.hits - self.trials * q) / sd


def simulate_ip_attack(
    table: ShareTable,
    honest_ids: Sequence[FieldElement],
    outsider_id: FieldElement,
    k: int,
    trials: int,
    rng: random.Random,
    fake_share: FieldElement | None = None,
    secret: FieldElement | None = None,
) -> IpAttackSummary:
    """An outsider joins ``m-1`` honest participants and sums every RC it sees.

    The outsider runs RNS honestly (it needs the channels) but owns no valid
    share. With ``fake_share=None`` it contributes a uniformly random RC;
    otherwise it builds its RC from ``fake_share`` exactly like an honest
    participant would. Honest participants weight their shares with the
    Lagrange coefficients of the full ``m``-party group, outsider included.

    Hits are scored against ``secret``, or against the dealer polynomial when
    the table retained it.
    """
    if outsider_id in table.entries:
        raise DuplicateId("the outsider must not hold a share of this table")
    group = Group(tuple(honest_ids) + (outsider_id,))
    if group.m < table.t:
        raise GroupTooSmall(f"group of {group.m} is below the threshold t={table.t}")
    if secret is None:
        if table.polynomial is None:
            raise ValueError("pass the true secret or a table that retained its polynomial")
        secret = table.polynomial.coeffs[0]
    out_pos = group.m - 1
    counts: Counter = Counter()
    hits = 0
    for _ in range(trials):
        rns = run_rns(group, k, Transcript(), rng)
        total = table.modulus.zero
        for pos, uid in enumerate(honest_ids):
            total = total + build_rc(table.share(uid), uid, group, rns.r[pos]).c
        if fake_share is None:
            total = total + sample_uniform(rng, table.modulus)
        else:
            total = total + build_rc(fake_share, outsider_id, group, rns.r[out_pos]).c
        counts[total.value] += 1
        if total == secret:
            hits += 1
    return IpAttackSummary(trials, hits, table.modulus.p, counts)
