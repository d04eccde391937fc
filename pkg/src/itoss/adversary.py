"""Channel-cracking analysis.

Two routes give an eavesdropper the secret: collect ``t`` shares by
recovering their RNS masks (cost ``l_spc``), or intercept all ``m``
randomized components (a minimum edge cover of K_m, ``ceil(m/2)`` edges).

:func:`knowledge_closure` decides exactly what a given set of cracked
channels reveals, by linear algebra over F_p on the unknowns of a session
(polynomial coefficients, every RNS draw ``w`` and the closure value
``v0``). :func:`min_crack_set` searches crack sets by increasing size with a
batched numpy elimination and re-checks its witness with the exact solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BadThreshold
from .field import FieldElement, inv_mod
from .netsim import RC, RNS, Edge, Message, Transcript, complete_graph, eavesdrop
from .rns import interval_set, max_rounds, path_edges, round_paths
from .session import PublicInfo, SessionResult
from .shamir import lagrange_coeff_at_zero

# -- analytic bounds ---------------------------------------------------------


def _check_tm(t: int, m: int) -> None:
    if not 1 <= t <= m:
        raise BadThreshold(f"need 1 <= t <= m, got t={t}, m={m}")


def _check_k(m: int, k: int) -> None:
    if k < 1 or k > max_rounds(m):
        round_paths(m, k)  # raises the matching error


def round_costs(t: int, m: int, k: int) -> list[int]:
    """Channels to crack per round to learn the masks of ``t`` ring neighbours."""
    _check_tm(t, m)
    _check_k(m, k)
    costs = []
    for d in interval_set(m).d[:k]:
        if t + d > m and t > d:
            costs.append(m)
        else:
            costs.append(t + min(d, t))
    return costs


def l_spc(t: int, m: int, k: int) -> int:
    """Least channels to crack for ``t`` shares through the RNS transcripts."""
    if m == 6 and k == 2:
        return share_route(t, round_paths(6, 2))[0]
    return sum(round_costs(t, m, k))


def min_rc_route(m: int) -> int:
    """Minimum edge cover of the complete graph K_m."""
    if m < 2:
        raise BadThreshold("need at least 2 participants")
    return (m + 1) // 2


def share_route(t: int, paths: Sequence[Sequence[int]]) -> tuple[int, frozenset[Edge]]:
    """Count channels touching ``t`` consecutive (round-1) participants.

    Path based counterpart of :func:`l_spc`: for each of the ``m`` possible
    blocks, takes every edge of every round that has an endpoint in the
    block, and returns the cheapest block's size and edge set.
    """
    first = paths[0]
    m = len(first)
    _check_tm(t, m)
    all_edges = [path_edges(path) for path in paths]
    best: frozenset[Edge] | None = None
    for start in range(m):
        block = {first[(start + h) % m] for h in range(t)}
        chosen = frozenset(
            e for edges in all_edges for e in edges if e.a in block or e.b in block
        )
        if best is None or len(chosen) < len(best):
            best = chosen
    return len(best), best


def edge_cover(m: int) -> frozenset[Edge]:
    edges = {Edge(2 * i, 2 * i + 1) for i in range(m // 2)}
    if m % 2:
        edges.add(Edge(m - 2, m - 1))
    return frozenset(edges)


@dataclass(frozen=True)
class RoundChoice:
    k: int
    bound: int  # min(l_spc, ceil(m/2)) at this k
    reachable: bool


def choose_k(t: int, m: int) -> RoundChoice:
    """Fewest rounds that push ``l_spc`` up to ``ceil(m/2)``.

    When no admissible ``k`` gets there, the largest ``k`` is returned with
    ``reachable=False`` and its (smaller) bound.
    """
    target = min_rc_route(m)
    top = max_rounds(m)
    for k in range(1, top + 1):
        cost = l_spc(t, m, k)
        if cost >= target:
            return RoundChoice(k, target, True)
    return RoundChoice(top, min(cost, target), False)


# -- linear model of what an eavesdropper learns -----------------------------


class LinearView:
    """Column layout and row builders for one session's unknowns.

    Columns: ``a_1..a_{t-1}``, ``w[i][j]`` for each round and position,
    ``v0``, and ``a_0`` last (so a pivot in the last column means the secret
    is pinned down).
    """

    def __init__(self, public: PublicInfo):
        self.public = public
        self.p = public.modulus.p
        m, k, t = public.m, public.k, public.t
        self.n_a = t
        self.w_base = t - 1
        self.v0_col = t - 1 + k * m
        self.a0_col = self.v0_col + 1
        self.ncols = self.a0_col + 1
        self._index = [{pos: h for h, pos in enumerate(path)} for path in public.paths]
        ids = list(public.ids)
        self._lagrange = [lagrange_coeff_at_zero(u, ids).value for u in ids]

    def a_col(self, power: int) -> int:
        return self.a0_col if power == 0 else power - 1

    def w_col(self, round_: int, pos: int) -> int:
        return self.w_base + (round_ - 1) * self.public.m + pos

    def share_vector(self, pos: int) -> list[int]:
        p = self.p
        u = self.public.ids[pos].value
        vec = [0] * self.ncols
        for power in range(self.n_a):
            vec[self.a_col(power)] = pow(u, power, p)
        return vec

    def constraint_row(self) -> list[int]:
        """Public protocol identity: sum_j r_j = 0."""
        vec = [0] * self.ncols
        for i in range(1, self.public.k + 1):
            for pos in range(self.public.m):
                vec[self.w_col(i, pos)] = 1
        vec[self.v0_col] = self.public.k % self.p
        return vec

    def message_row(self, msg: Message) -> list[int]:
        p = self.p
        vec = [0] * self.ncols
        if msg.phase == RNS:
            path = self.public.paths[msg.round - 1]
            for pos in path[: self._index[msg.round - 1][msg.sender] + 1]:
                vec[self.w_col(msg.round, pos)] = 1
        elif msg.phase == RC:
            j = msg.sender
            lam = self._lagrange[j]
            vec = [lam * x % p for x in self.share_vector(j)]
            for i in range(1, self.public.k + 1):
                vec[self.w_col(i, j)] = 1
            if j == 0:
                vec[self.v0_col] = self.public.k % p
        else:
            raise ValueError(f"no linear model for phase {msg.phase!r}")
        return vec


class _Echelon:
    """Incrementally maintained reduced row echelon basis over F_p, with RHS."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, tuple[list[int], int]] = {}

    def reduce(self, vec: list[int], rhs: int = 0) -> tuple[list[int], int]:
        p = self.p
        vec = list(vec)
        for pc, (row, b) in self.rows.items():
            c = vec[pc]
            if c:
                vec = [(x - c * y) % p for x, y in zip(vec, row)]
                rhs = (rhs - c * b) % p
        return vec, rhs

    def add(self, vec: list[int], rhs: int) -> bool:
        p = self.p
        vec, rhs = self.reduce(vec, rhs)
        pc = next((i for i, x in enumerate(vec) if x), None)
        if pc is None:
            if rhs:
                raise ValueError("observations are inconsistent with the session model")
            return False
        inv = inv_mod(vec[pc], p)
        vec = [x * inv % p for x in vec]
        rhs = rhs * inv % p
        for other, (row, b) in list(self.rows.items()):
            c = row[pc]
            if c:
                self.rows[other] = ([(x - c * y) % p for x, y in zip(row, vec)], (b - c * rhs) % p)
        self.rows[pc] = (vec, rhs)
        return True

    def solve_for(self, target: list[int]) -> int | None:
        """Value of ``target . x`` if the observations force it, else None."""
        p = self.p
        residual = list(target)
        value = 0
        for pc, (row, b) in self.rows.items():
            c = residual[pc]
            if c:
                residual = [(x - c * y) % p for x, y in zip(residual, row)]
                value = (value + c * b) % p
        return value if not any(residual) else None


@dataclass
class ClosureResult:
    secret_determined: bool
    secret: FieldElement | None
    determined_shares: set[int]
    determined_randomness: set[tuple[int, int]]  # (round, position)
    observed: int
    rank: int


def knowledge_closure(
    transcript: Transcript, cracked: Iterable[Edge], public: PublicInfo
) -> ClosureResult:
    view = LinearView(public)
    basis = _Echelon(view.p)
    basis.add(view.constraint_row(), 0)
    observed = eavesdrop(transcript, cracked)
    for msg in observed:
        if msg.phase in (RNS, RC):
            basis.add(view.message_row(msg), msg.payload.value)

    unit = [0] * view.ncols
    unit[view.a0_col] = 1
    secret = basis.solve_for(unit)

    shares = {pos for pos in range(public.m) if basis.solve_for(view.share_vector(pos)) is not None}
    randomness = set()
    for i in range(1, public.k + 1):
        for pos in range(public.m):
            unit = [0] * view.ncols
            unit[view.w_col(i, pos)] = 1
            if basis.solve_for(unit) is not None:
                randomness.add((i, pos))
    return ClosureResult(
        secret is not None,
        public.modulus(secret) if secret is not None else None,
        shares,
        randomness,
        len(observed),
        len(basis.rows),
    )


# -- exhaustive search for the cheapest crack set ----------------------------


class _BatchOracle:
    """Decides secret-determinability for many crack sets at once.

    Each edge contributes a fixed block of rows (its RNS and RC messages,
    zero-padded to a common height). For a batch of edge subsets the blocks
    are stacked under the public constraint row and forward-eliminated in
    numpy; the secret is determined exactly when some row's leading entry
    lands in the last (``a_0``) column.
    """

    MAX_P = 1 << 20

    def __init__(self, transcript: Transcript, public: PublicInfo, edges: list[Edge]):
        view = LinearView(public)
        self.p = view.p
        if self.p > self.MAX_P:
            raise ValueError("batched oracle supports p below 2**20")
        by_edge: dict[Edge, list[tuple[int, ...]]] = {e: [] for e in edges}
        for msg in transcript:
            if msg.phase in (RNS, RC):
                row = tuple(view.message_row(msg))
                rows = by_edge[msg.edge]
                if row not in rows:
                    rows.append(row)
        height = max(1, max(len(rows) for rows in by_edge.values()))
        self.blocks = np.zeros((len(edges), height, view.ncols), dtype=np.int64)
        for idx, e in enumerate(edges):
            for r, row in enumerate(by_edge[e]):
                self.blocks[idx, r] = row
        self.constraint = np.array(view.constraint_row(), dtype=np.int64)
        inv = np.zeros(self.p, dtype=np.int64)
        for x in range(1, self.p):
            inv[x] = inv_mod(x, self.p)
        self.inv = inv

    def determines(self, subsets: np.ndarray) -> np.ndarray:
        p = self.p
        batch, size = subsets.shape
        _, height, ncols = self.blocks.shape
        mat = np.empty((batch, 1 + size * height, ncols), dtype=np.int64)
        mat[:, 0, :] = self.constraint
        mat[:, 1:, :] = self.blocks[subsets].reshape(batch, size * height, ncols)
        # drop all-zero rows shared by every subset in the batch
        keep = np.flatnonzero(mat.any(axis=(0, 2)))
        mat = mat[:, keep, :]
        nrows = mat.shape[1]
        bidx = np.arange(batch)
        hit = np.zeros(batch, dtype=bool)
        for r in range(nrows):
            row = mat[:, r, :]
            nz = row != 0
            has = nz.any(axis=1)
            lead = nz.argmax(axis=1)
            hit |= has & (lead == ncols - 1)
            if r + 1 == nrows:
                break
            scale = self.inv[row[bidx, lead]]
            unit = row * scale[:, None] % p
            below = np.arange(r + 1, nrows)
            factors = mat[bidx[:, None], below[None, :], lead[:, None]]
            mat[:, r + 1 :, :] = (mat[:, r + 1 :, :] - factors[:, :, None] * unit[:, None, :]) % p
        return hit


@dataclass
class ObservedSession:
    """What an outside analyst holds: a transcript and the public parameters."""

    transcript: Transcript
    public: PublicInfo


@dataclass
class AttackReport:
    t: int
    m: int
    k: int
    analytic_share_route: int
    analytic_rc_route: int
    overall_bound: int
    oracle_minimum: int | None = None
    witness: tuple[Edge, ...] | None = None
    exact: bool = True
    subsets_examined: int = 0
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "m": self.m,
            "k": self.k,
            "analytic_share_route": self.analytic_share_route,
            "analytic_rc_route": self.analytic_rc_route,
            "overall_bound": self.overall_bound,
            "oracle_minimum": self.oracle_minimum,
            "witness": [str(e) for e in self.witness] if self.witness is not None else None,
            "exact": self.exact,
            "subsets_examined": self.subsets_examined,
            "notes": list(self.notes),
        }


def analytic_report(t: int, m: int, k: int) -> AttackReport:
    share = l_spc(t, m, k)
    rc = min_rc_route(m)
    return AttackReport(t, m, k, share, rc, min(share, rc))


def min_crack_set(
    session: SessionResult | ObservedSession, search_limit: int | None = None, batch_size: int = 4096
) -> AttackReport:
    """Exact minimum number of channels whose traffic pins down the secret.

    Subsets are enumerated by increasing size. The two analytic witnesses
    (an edge cover and the share-route channel set) are checked first with
    the exact solver; the search then only has to rule out every smaller
    subset. If ``search_limit`` subsets have been examined without
    finishing, the best verified witness is reported with ``exact=False``.
    """
    public = session.public
    transcript = session.transcript
    m, t, k = public.m, public.t, public.k
    report = analytic_report(t, m, k)
    edges = complete_graph(m)

    def verified(cracked: Iterable[Edge]) -> bool:
        return knowledge_closure(transcript, cracked, public).secret_determined

    candidates = [edge_cover(m), share_route(t, public.paths)[1], frozenset(edges)]
    best = min((c for c in candidates if verified(c)), key=len)
    report.witness = tuple(sorted(best))
    report.oracle_minimum = len(best)

    if public.modulus.p <= _BatchOracle.MAX_P:
        oracle = _BatchOracle(transcript, public, edges)
        determines = oracle.determines
    else:
        def determines(subsets: np.ndarray) -> np.ndarray:
            return np.array([verified(edges[i] for i in row) for row in subsets], dtype=bool)
    examined = 0
    for size in range(1, len(best)):
        combos = itertools.combinations(range(len(edges)), size)
        while True:
            chunk = list(itertools.islice(combos, batch_size))
            if not chunk:
                break
            if search_limit is not None and examined + len(chunk) > search_limit:
                report.exact = False
                report.subsets_examined = examined
                report.notes.append(f"search budget of {search_limit} subsets exhausted at size {size}")
                return report
            examined += len(chunk)
            hits = np.flatnonzero(determines(np.array(chunk, dtype=np.intp)))
            if hits.size:
                found = frozenset(edges[i] for i in chunk[hits[0]])
                if not verified(found):
                    raise AssertionError(f"batched oracle and exact solver disagree on {sorted(found)}")
                report.witness = tuple(sorted(found))
                report.oracle_minimum = size
                report.subsets_examined = examined
                return report
    report.subsets_examined = examined
    return report
