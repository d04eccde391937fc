"""Simulated symmetric private channels (SPCs) among a group of participants.

Delivery is synchronous, loss-free and ordered. Every transmitted value is
appended to a :class:`Transcript` so that an eavesdropper holding a set of
cracked edges can be replayed against it afterwards.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DuplicateId, GroupTooSmall, IdNotInGroup, SelfSend
from .field import FieldElement, PrimeModulus, from_hex, to_hex

RNS = "rns"
RC = "rc"
SHUFFLE = "shuffle"


@dataclass(frozen=True)
class Group:
    """Ordered participant ids; list order fixes ring positions ``0..m-1``."""

    ids: tuple[FieldElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        if len(self.ids) < 2:
            raise GroupTooSmall("a group needs at least 2 participants")
        if len({u.value for u in self.ids}) != len(self.ids):
            raise DuplicateId("group ids must be distinct")

    @property
    def m(self) -> int:
        return len(self.ids)

    @property
    def modulus(self) -> PrimeModulus:
        return self.ids[0].modulus

    def position(self, uid: FieldElement) -> int:
        try:
            return self.ids.index(uid)
        except ValueError:
            raise IdNotInGroup(f"id {uid.value} is not in the group") from None

    def edges(self) -> list["Edge"]:
        return complete_graph(self.m)


@dataclass(frozen=True, order=True)
class Edge:
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise SelfSend(f"edge endpoints must differ, got {self.a}")
        if self.a > self.b:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    def __iter__(self):
        return iter((self.a, self.b))

    def __str__(self):
        return f"{self.a}-{self.b}"

    @classmethod
    def parse(cls, text: str) -> "Edge":
        a, b = text.split("-")
        return cls(int(a), int(b))


def complete_graph(m: int) -> list[Edge]:
    return [Edge(a, b) for a, b in itertools.combinations(range(m), 2)]


CrackSet = frozenset  # of Edge


@dataclass(frozen=True)
class Message:
    phase: str
    round: int  # 1-based RNS round; 0 outside RNS
    sender: int
    receiver: int
    payload: FieldElement

    @property
    def edge(self) -> Edge:
        return Edge(self.sender, self.receiver)

    def to_record(self) -> dict:
        return {
            "phase": self.phase,
            "round": self.round,
            "from": self.sender,
            "to": self.receiver,
            "payload": to_hex(self.payload.value),
        }


@dataclass
class Transcript:
    """Append-only message log of one session (single writer)."""

    messages: list[Message] = field(default_factory=list)
    header: dict = field(default_factory=dict)

    def send(
        self, phase: str, sender: int, receiver: int, payload: FieldElement, round: int = 0
    ) -> FieldElement:
        if sender == receiver:
            raise SelfSend(f"participant {sender} cannot send to itself")
        self.messages.append(Message(phase, round, sender, receiver, payload))
        return payload

    def __len__(self):
        return len(self.messages)

    def __iter__(self):
        return iter(self.messages)

    def count(self, phase: str | None = None) -> int:
        if phase is None:
            return len(self.messages)
        return sum(1 for msg in self.messages if msg.phase == phase)

    def edges_used(self, phase: str | None = None) -> set[Edge]:
        return {msg.edge for msg in self.messages if phase is None or msg.phase == phase}

    def to_jsonl(self) -> str:
        lines = []
        if self.header:
            lines.append(json.dumps({"header": self.header}, sort_keys=True))
        lines.extend(json.dumps(msg.to_record(), sort_keys=True) for msg in self.messages)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str, modulus: PrimeModulus | None = None) -> "Transcript":
        header: dict = {}
        messages = []
        for line in text.splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if "header" in rec:
                header = rec["header"]
                if modulus is None and "p" in header:
                    modulus = PrimeModulus(from_hex(header["p"]))
                continue
            if modulus is None:
                raise ValueError("transcript has no modulus in its header")
            messages.append(
                Message(
                    rec["phase"],
                    rec["round"],
                    rec["from"],
                    rec["to"],
                    FieldElement(from_hex(rec["payload"]), modulus),
                )
            )
        return cls(messages, header)


def send(
    transcript: Transcript,
    phase: str,
    sender: int,
    receiver: int,
    payload: FieldElement,
    round: int = 0,
) -> FieldElement:
    return transcript.send(phase, sender, receiver, payload, round)


def eavesdrop(transcript: Transcript, cracked: Iterable[Edge]) -> list[Message]:
    cracked = set(cracked)
    return [msg for msg in transcript.messages if msg.edge in cracked]


def broadcast_private(
    transcript: Transcript, values: Sequence[FieldElement], phase: str = RC
) -> None:
    """Each position sends its value to every other one over the SPCs: m(m-1) messages."""
    m = len(values)
    for j in range(m):
        for i in range(m):
            if i != j:
                transcript.send(phase, j, i, values[j])
