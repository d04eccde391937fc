"""Complete and partial shuffling, and the message/robustness comparison table.

Both baselines hide each participant's Lagrange component ``g_j`` behind
shuffling factors that cancel in the sum of all outputs.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .adversary import choose_k, l_spc, min_rc_route
from .errors import GroupTooSmall
from .field import FieldElement, sample_uniform
from .netsim import SHUFFLE, Transcript


def complete_shuffle(
    components: Sequence[FieldElement], transcript: Transcript, rng: random.Random
) -> list[FieldElement]:
    """Every pair ``j < i`` shares one factor ``x_ji``; m(m-1)/2 messages.

    Participant ``j`` outputs ``g_j + sum_{i>j} x_ji - sum_{i<j} x_ij``.
    """
    m = len(components)
    if m < 2:
        raise GroupTooSmall("complete shuffling needs at least 2 participants")
    modulus = components[0].modulus
    out = list(components)
    for j in range(m):
        for i in range(j + 1, m):
            x = sample_uniform(rng, modulus)
            transcript.send(SHUFFLE, j, i, x)
            out[j] = out[j] + x
            out[i] = out[i] - x
    return out


def partial_shuffle(
    components: Sequence[FieldElement], transcript: Transcript, rng: random.Random
) -> list[FieldElement]:
    """Each participant sends one factor to its ring successor; m messages.

    Participant ``j`` outputs ``g_j + x_j - x_{j-1}``.
    """
    m = len(components)
    if m < 3:
        raise GroupTooSmall("partial shuffling needs at least 3 participants")
    modulus = components[0].modulus
    factors = []
    for j in range(m):
        x = sample_uniform(rng, modulus)
        transcript.send(SHUFFLE, j, (j + 1) % m, x)
        factors.append(x)
    return [components[j] + factors[j] - factors[j - 1] for j in range(m)]


def partial_shuffle_bound(t: int, m: int) -> int:
    return min(min_rc_route(m), t + 1)


@dataclass(frozen=True)
class ComparisonRow:
    t: int
    m: int
    msgs_complete: int
    msgs_partial: int
    k: int
    msgs_rns: int
    bound_complete: int
    bound_partial: int
    bound_rns: int


CSV_FIELDS = [
    "t",
    "m",
    "msgs_complete",
    "msgs_partial",
    "k",
    "msgs_rns",
    "bound_complete",
    "bound_partial",
    "bound_rns",
]


def comparison_row(t: int, m: int) -> ComparisonRow:
    choice = choose_k(t, m)
    bound_rns = min(l_spc(t, m, choice.k), min_rc_route(m))
    return ComparisonRow(
        t=t,
        m=m,
        msgs_complete=m * (m - 1) // 2,
        msgs_partial=m,
        k=choice.k,
        msgs_rns=choice.k * m,
        bound_complete=min_rc_route(m),
        bound_partial=partial_shuffle_bound(t, m),
        bound_rns=bound_rns,
    )


def comparison_table(t_values: Iterable[int], m_range: Iterable[int]) -> list[ComparisonRow]:
    """Rows for every ``(t, m)`` with ``2 <= t <= m`` and ``m >= 3``; others are skipped."""
    m_values = list(m_range)
    return [
        comparison_row(t, m)
        for t in t_values
        for m in m_values
        if m >= 3 and 2 <= t <= m
    ]


def to_csv(rows: Iterable[ComparisonRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(asdict(row))
    return buf.getvalue()
