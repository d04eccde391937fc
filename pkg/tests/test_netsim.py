import pytest

from itoss.errors import DuplicateId, GroupTooSmall, IdNotInGroup, SelfSend
from itoss.field import PrimeModulus
from itoss.netsim import RC, RNS, Edge, Group, Transcript, broadcast_private, complete_graph, eavesdrop, send

P = PrimeModulus(257)


def test_send_read_back_and_order():
    tr = Transcript()
    send(tr, RNS, 0, 1, P(5), round=1)
    send(tr, RNS, 0, 1, P(9), round=1)
    assert [m.payload for m in tr] == [P(5), P(9)]
    assert tr.messages[0].edge == Edge(1, 0)


def test_self_send():
    with pytest.raises(SelfSend):
        Transcript().send(RC, 2, 2, P(1))
    with pytest.raises(SelfSend):
        Edge(3, 3)


def test_edges_are_undirected():
    assert Edge(4, 1) == Edge(1, 4)
    assert str(Edge(4, 1)) == "1-4"
    assert Edge.parse("3-0") == Edge(0, 3)


def test_complete_graph_size():
    assert len(complete_graph(7)) == 21
    assert len(set(complete_graph(7))) == 21


def test_eavesdrop_extremes():
    tr = Transcript()
    broadcast_private(tr, [P(v) for v in range(4)])
    assert eavesdrop(tr, []) == []
    assert eavesdrop(tr, complete_graph(4)) == tr.messages


def test_one_edge_of_broadcast_carries_two_rcs():
    tr = Transcript()
    broadcast_private(tr, [P(10 + v) for v in range(5)])
    assert len(tr) == 20
    seen = eavesdrop(tr, [Edge(1, 3)])
    assert sorted(m.payload.value for m in seen) == [11, 13]


def test_jsonl_round_trip():
    tr = Transcript(header={"p": "101"})
    tr.send(RNS, 0, 2, P(200), round=1)
    tr.send(RC, 1, 0, P(3))
    back = Transcript.from_jsonl(tr.to_jsonl())
    assert back.messages == tr.messages
    assert back.header == tr.header
    assert back.to_jsonl() == tr.to_jsonl()


def test_group_validation():
    with pytest.raises(GroupTooSmall):
        Group((P(1),))
    with pytest.raises(DuplicateId):
        Group((P(1), P(1)))
    g = Group((P(4), P(9), P(2)))
    assert g.position(P(2)) == 2
    with pytest.raises(IdNotInGroup):
        g.position(P(5))
