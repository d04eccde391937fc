import itertools

import pytest

from itoss.adversary import (
    ObservedSession,
    analytic_report,
    choose_k,
    edge_cover,
    knowledge_closure,
    l_spc,
    min_crack_set,
    min_rc_route,
    round_costs,
    share_route,
)
from itoss.field import PrimeModulus, make_rng
from itoss.netsim import Edge, Group, complete_graph
from itoss.rns import max_rounds, round_paths
from itoss.session import run_session
from itoss.shamir import share_generate

P = PrimeModulus(257)


def session(t, m, k, seed=0, secret=123, ids=None):
    ids = ids or [P(u) for u in range(1, m + 1)]
    table = share_generate(P(secret), ids, t, make_rng(seed))
    return run_session(table, Group(tuple(ids)), k, make_rng(seed + 1))


def test_l_spc_examples():
    assert l_spc(2, 330, 40) == 159
    assert l_spc(5, 5, 2) == 10
    assert l_spc(3, 10, 1) == 4
    assert l_spc(3, 10, 2) == 10
    assert round_costs(20, 100, 3) == [21, 23, 27]


def test_rc_route():
    assert min_rc_route(6) == 3
    assert min_rc_route(5) == 3
    assert min_rc_route(2) == 1


def test_edge_cover_touches_every_vertex():
    for m in range(2, 30):
        cover = edge_cover(m)
        assert len(cover) == min_rc_route(m)
        assert {v for e in cover for v in e} == set(range(m))


def test_choose_k():
    assert choose_k(3, 10).k == 2
    assert choose_k(5, 9).k == 1
    c = choose_k(2, 330)
    assert not c.reachable and c.bound == 159 and c.k == 40


def test_formula_agrees_with_path_count():
    for m in range(5, 26):
        for k in range(1, max_rounds(m) + 1):
            paths = round_paths(m, k)
            for t in range(2, m + 1):
                assert l_spc(t, m, k) == share_route(t, paths)[0], (t, m, k)


def test_closure_empty_and_cover():
    s = session(3, 7, 2)
    assert not knowledge_closure(s.transcript, [], s.public).secret_determined
    res = knowledge_closure(s.transcript, edge_cover(7), s.public)
    assert res.secret_determined and res.secret == 123


def test_closure_partial_round_one():
    s = session(2, 5, 2)
    res = knowledge_closure(s.transcript, [Edge(0, 1), Edge(1, 2), Edge(2, 3)], s.public)
    assert {(1, 1), (1, 2)} <= res.determined_randomness
    assert not any(i == 2 for i, _ in res.determined_randomness)
    assert res.determined_shares == set()
    assert not res.secret_determined


def test_closure_share_route_reveals_secret():
    s = session(2, 5, 2)
    cost, edges = share_route(2, s.public.paths)
    res = knowledge_closure(s.transcript, edges, s.public)
    assert cost == 7
    assert res.secret_determined and res.secret == 123
    assert len(res.determined_shares) >= 2


@pytest.mark.parametrize("t,k", [(2, 2), (5, 2), (2, 1)])
def test_min_crack_set_examples(t, k):
    report = min_crack_set(session(t, 5, k))
    assert report.exact
    assert report.oracle_minimum == 3
    assert len(report.witness) == 3


def brute_minimum(s):
    edges = complete_graph(s.public.m)
    for size in range(1, len(edges) + 1):
        for combo in itertools.combinations(edges, size):
            if knowledge_closure(s.transcript, combo, s.public).secret_determined:
                return size


def test_search_agrees_with_exact_brute_force():
    for t, k in [(2, 1), (3, 1), (3, 2), (4, 2)]:
        s = session(t, 5, k, seed=t * 10 + k)
        assert min_crack_set(s).oracle_minimum == brute_minimum(s)


def test_search_budget_gives_inexact_report():
    report = min_crack_set(session(3, 7, 2), search_limit=10)
    assert not report.exact
    assert report.witness is not None and report.notes


def test_oracle_never_exceeds_formula():
    for m in range(5, 8):
        for k in range(1, max_rounds(m) + 1):
            for t in range(2, m + 1):
                report = min_crack_set(session(t, m, k))
                assert report.oracle_minimum <= report.overall_bound, (t, m, k)


def test_even_groups_leak_through_two_end_channels():
    # consecutive ids 1..m, m even: lambda_1*U_1 + lambda_m*U_m = 0 (mod p), so the two
    # RCs on channels 0-1 and (m-2)-(m-1) plus the zero-sum constraint isolate f(0)
    for m in (6, 8):
        s = session(2, m, 1)
        res = knowledge_closure(s.transcript, [Edge(0, 1), Edge(m - 2, m - 1)], s.public)
        assert res.secret_determined and res.secret == 123


def test_analytic_report_record():
    rec = analytic_report(2, 330, 40).to_dict()
    assert rec["analytic_share_route"] == 159
    assert rec["analytic_rc_route"] == 165
    assert rec["overall_bound"] == 159


def test_observed_session_search():
    s = session(2, 5, 2)
    report = min_crack_set(ObservedSession(s.transcript, s.public))
    assert report.oracle_minimum == 3
