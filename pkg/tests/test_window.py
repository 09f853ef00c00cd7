import pytest
from hypothesis import given, strategies as st

from epus_sky.errors import UsageError
from epus_sky.uncertain import UncertainObject
from epus_sky.window import SlidingWindow


def obj(i):
    return UncertainObject.build(i, i, [(i, i)], [1.0])


# window after each arrival, capacity 4
TRACE = [[1], [1, 2], [1, 2, 3], [1, 2, 3, 4], [2, 3, 4, 5], [3, 4, 5, 6]]


def test_four_slot_trace():
    w = SlidingWindow(4)
    for t, expected in enumerate(TRACE, start=1):
        for o in w.collect_obsolete(1):
            w.remove(o.id)
        w.add([obj(t)])
        assert w.ids() == expected
        assert len(w) == len(expected)


def test_collect_obsolete_is_read_only():
    w = SlidingWindow(3)
    w.add([obj(1), obj(2), obj(3)])
    assert [o.id for o in w.collect_obsolete(2)] == [1, 2]
    assert w.ids() == [1, 2, 3]
    assert w.collect_obsolete(0) == []


def test_add_orders_by_sequence():
    w = SlidingWindow(5)
    w.add([obj(3), obj(1), obj(2)])
    assert w.ids() == [1, 2, 3]


def test_overflow_and_duplicates():
    w = SlidingWindow(2)
    w.add([obj(1)])
    with pytest.raises(UsageError):
        w.add([obj(2), obj(3)])
    with pytest.raises(UsageError):
        w.add([obj(1)])
    assert w.ids() == [1]
    with pytest.raises(UsageError):
        SlidingWindow(0)
    with pytest.raises(UsageError):
        w.collect_obsolete(-1)


def test_remove_and_lookup():
    w = SlidingWindow(3)
    w.add([obj(1), obj(2)])
    assert 2 in w and w[2].id == 2 and w.get(9) is None
    assert w.remove(1) and not w.remove(1)
    assert [o.id for o in w] == [2]


@given(st.integers(1, 8), st.lists(st.integers(0, 5), max_size=30))
def test_fifo_keeps_the_newest(capacity, batches):
    w = SlidingWindow(capacity)
    seq = 0
    for size in batches:
        size = min(size, capacity)
        for o in w.collect_obsolete(size):
            w.remove(o.id)
        w.add([obj(seq + k + 1) for k in range(size)])
        seq += size
        assert w.ids() == list(range(max(1, seq - capacity + 1), seq + 1))
