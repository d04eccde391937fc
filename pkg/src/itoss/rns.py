"""k-round Random Number Selection (RNS).

Round ``i`` walks the ring at stride ``d_i`` (an interval coprime to ``m``
and below ``m/2``), each participant adding a fresh uniform ``w`` to the
running sum before forwarding it. Because every stride is below ``m/2``
the rounds use pairwise disjoint channels. After the last round position 0
picks ``v0`` so that the private numbers ``r_j`` sum to zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from sympy import totient as _totient

from .errors import GroupTooSmall, NotCoprime, RoundCountTooLarge
from .field import FieldElement, inv_mod
from .netsim import RNS, Edge, Group, Transcript

# m = 6 has only one stride below m/2; a second disjoint ring is hard-coded.
SIX_PATHS = ((0, 1, 2, 3, 4, 5), (0, 2, 4, 1, 5, 3))


def totient(m: int) -> int:
    return int(_totient(m))


@dataclass(frozen=True)
class IntervalSet:
    m: int
    d: tuple[int, ...]

    def __len__(self):
        return len(self.d)


@lru_cache(maxsize=1024)
def interval_set(m: int) -> IntervalSet:
    """Strides ``1 = d_1 < d_2 < ...`` coprime to ``m`` and below ``m/2``.

    For ``m = 2`` no stride is below ``m/2``; the single ring ``0 -> 1 -> 0``
    (stride 1) is returned so that a one-round run remains possible.
    """
    if m < 2:
        raise GroupTooSmall(f"m={m}: need at least 2 participants")
    d = tuple(x for x in range(1, (m + 1) // 2) if 2 * x < m and gcd(x, m) == 1)
    return IntervalSet(m, d or (1,))


def max_rounds(m: int) -> int:
    if m < 5:
        return 1
    if m == 6:
        return 2
    return totient(m) // 2


def round_path(m: int, d: int) -> list[int]:
    if gcd(d, m) != 1:
        raise NotCoprime(f"stride {d} is not coprime to m={m}")
    return [(h * d) % m for h in range(m)]


def path_edges(path: list[int] | tuple[int, ...]) -> list[Edge]:
    """Ring edges of a traversal, including the closing hop back to the start."""
    m = len(path)
    return [Edge(path[h], path[(h + 1) % m]) for h in range(m)]


def round_paths(m: int, k: int) -> list[tuple[int, ...]]:
    """Traversal orders for rounds ``1..k`` (the k smallest strides)."""
    if k < 1:
        raise RoundCountTooLarge(f"k must be at least 1, got {k}")
    if m < 5 and k >= 2:
        raise GroupTooSmall(f"m={m} admits no two channel-disjoint rounds")
    limit = max_rounds(m)
    if k > limit:
        raise RoundCountTooLarge(f"k={k} exceeds the {limit} available rounds for m={m}")
    if m == 6:
        return list(SIX_PATHS[:k])
    return [tuple(round_path(m, d)) for d in interval_set(m).d[:k]]


@dataclass
class RnsResult:
    r: list[FieldElement]
    k: int
    paths: list[tuple[int, ...]]
    transcript: Transcript
    # internals below are kept only when run_rns(..., retain=True)
    w: list[list[FieldElement]] | None = None  # w[round-1][position]
    v0: FieldElement | None = None
    accumulators: list[FieldElement] | None = None  # W^i_{m-1} per round

    @property
    def disjoint_guarantee(self) -> bool:
        """False for groups of 2-4, where the channel-count bound does not apply."""
        return len(self.r) >= 5


def run_rns(
    group: Group,
    k: int,
    transcript: Transcript,
    rng: random.Random,
    retain: bool = False,
) -> RnsResult:
    m = group.m
    modulus = group.modulus
    p = modulus.p
    paths = round_paths(m, k)

    w = [[0] * m for _ in range(k)]
    final = []
    for i, path in enumerate(paths, start=1):
        acc = 0
        for h in range(m):
            pos = path[h]
            wv = rng.randrange(p)
            w[i - 1][pos] = wv
            acc = (acc + wv) % p
            transcript.send(RNS, pos, path[(h + 1) % m], FieldElement(acc, modulus), round=i)
        final.append(acc)

    # sum_i (W^i_{m-1} + v0) = 0, i.e. k*v0 = -sum_i W^i_{m-1}; position 0 folds v0
    # into each of its k round contributions so that sum_j r_j = 0.
    v0 = (-sum(final) * inv_mod(k, p)) % p
    r = [sum(w[i][j] for i in range(k)) % p for j in range(m)]
    r[0] = (r[0] + k * v0) % p

    result = RnsResult([FieldElement(x, modulus) for x in r], k, paths, transcript)
    if retain:
        result.w = [[FieldElement(x, modulus) for x in row] for row in w]
        result.v0 = FieldElement(v0, modulus)
        result.accumulators = [FieldElement(x, modulus) for x in final]
    return result
