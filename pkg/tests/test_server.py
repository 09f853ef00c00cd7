import random

import pytest

import oracle
from epus_sky.edge import EdgeNode
from epus_sky.errors import ProtocolError
from epus_sky.server import ServerNode
from epus_sky.skyline import brute_force_skyline
from epus_sky.uncertain import UncertainObject
from epus_sky.wire import UpdateMessage


def obj(i, x, y):
    return UncertainObject.build(i, i, [(x, y)], [1.0])


def test_empty_messages_leave_state_alone():
    s = ServerNode(10)
    stats = s.server_step([UpdateMessage(1, 1), UpdateMessage(2, 1)])
    assert (stats.objects_rx, stats.bytes_rx, stats.comparisons) == (0, 0, 0)
    assert s.sk1 == set() and s.sk2 == set()
    assert s.receive_edge_update(UpdateMessage(1, 2)) == ([], [])
    assert s.update_global_skyline() == ([], [])


def test_brand_new_skyline_object_enters_window_and_pending():
    s = ServerNode(10)
    a = obj(1, 5, 5)
    removed, new = s.receive_edge_update(UpdateMessage(1, 0, [], [a]))
    assert removed == [] and new == [1] and 1 in s.window
    s.update_global_skyline()
    assert s.sk1 == {1}


def test_known_candidate_moves_to_pending_when_edge_promotes_it():
    s = ServerNode(10)
    a, b = obj(1, 1, 1), obj(2, 5, 5)
    s.server_step([UpdateMessage(1, 0, [], [a], [b])])
    assert (s.sk1, s.sk2) == ({1}, {2})
    # the edge drops a and promotes b
    removed, new = s.receive_edge_update(UpdateMessage(1, 1, [1], [b]))
    assert removed == [1] and new == [2]
    assert 2 not in s.state.sk2
    s.update_global_skyline()
    assert (s.sk1, s.sk2) == ({2}, set())


def test_skyline_object_demoted_by_candidate_message():
    s = ServerNode(10)
    a, b = obj(1, 5, 5), obj(2, 9, 9)
    s.server_step([UpdateMessage(1, 0, [], [a])])
    s.server_step([UpdateMessage(2, 0, [], [b], [])])
    assert s.sk1 == {1} and s.sk2 == {2}
    c = obj(3, 1, 1)
    # edge 1 sees c arrive and a fall to its candidate layer
    s.receive_edge_update(UpdateMessage(1, 1, [], [c], [a]))
    assert 1 in s.state.sk2
    s.update_global_skyline()
    assert (s.sk1, s.sk2) == ({3}, {1})


def test_new_object_dominating_everything():
    s = ServerNode(10)
    objs = [obj(i, 10 + i, 30 - i) for i in range(1, 6)]
    s.server_step([UpdateMessage(1, 0, [], objs)])
    assert s.sk1 == {1, 2, 3, 4, 5}
    s.server_step([UpdateMessage(2, 1, [], [obj(9, 0, 0)])])
    assert s.sk1 == {9} and s.sk2 == {1, 2, 3, 4, 5}


def test_window_overflow_aborts():
    s = ServerNode(2)
    with pytest.raises(ProtocolError):
        s.server_step([UpdateMessage(1, 0, [], [obj(1, 1, 9), obj(2, 9, 1), obj(3, 5, 5)])])


def test_messages_applied_in_edge_order():
    s1, s2 = ServerNode(10), ServerNode(10)
    m1 = UpdateMessage(1, 0, [], [obj(1, 1, 9)])
    m2 = UpdateMessage(2, 0, [], [obj(2, 9, 1)])
    s1.server_step([m2, m1])
    s2.server_step([m1, m2])
    assert s1.window.ids() == s2.window.ids() == [1, 2]


def run_system(seed, m, capacity, ticks, d=2, n=3, split=False):
    rng = random.Random(seed)
    edges = [EdgeNode(k, capacity, fanout=4) for k in range(1, m + 1)]
    server = ServerNode(m * capacity, fanout=4)
    nid = 0

    def fresh(k):
        nonlocal nid
        nid += 1
        o = oracle.random_object(rng, nid, d, n, spread=40, radius=3)
        if split and k == 1:
            # edge 1 lives in the low corner and should own the whole skyline
            o = UncertainObject.build(o.id, o.seq, [[x - 1000 for x in i.attrs]
                                                    for i in o.instances],
                                      [i.prob for i in o.instances])
        return o

    server.server_step([e.bootstrap([fresh(e.ecn_id) for _ in range(capacity)])
                        for e in edges])
    for _ in range(ticks):
        msgs = [e.step([fresh(e.ecn_id)] if rng.random() < 0.9 else []) for e in edges]
        server.server_step(msgs)
        union = [o for e in edges for o in e.window]
        yield edges, server, union


@pytest.mark.parametrize("m", [1, 2, 3])
def test_server_matches_centralized_oracle(m):
    for edges, server, union in run_system(m, m, 20, 300):
        assert server.sk1 == brute_force_skyline(union)
        held = list(server.window)
        sk1, sk2 = oracle.layers(held)
        assert (server.sk1, server.sk2) == (sk1, sk2)
        advertised = {o.id for o in union}
        assert set(server.window.ids()) <= advertised


def test_single_edge_collapse():
    for edges, server, _ in run_system(5, 1, 15, 100):
        assert server.sk1 == set(edges[0].state.sk1)


def test_dominant_edge_owns_skyline():
    for edges, server, union in run_system(6, 2, 10, 50, split=True):
        assert server.sk1 and all(oid in edges[0].window for oid in server.sk1)
        assert server.sk1 == brute_force_skyline(union)
