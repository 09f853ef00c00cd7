"""Edge node: slides its window, keeps both skyline layers, ships deltas."""

from __future__ import annotations

from typing import Sequence

from .errors import ConfigError
from .rtree import DEFAULT_FANOUT, RTree
from .skyline import SkylineState, compute_candidate_skyline, compute_skyline, update_skyline
from .uncertain import CostCounter, UncertainObject
from .window import SlidingWindow
from .wire import UpdateMessage


class EdgeNode:
    def __init__(self, ecn_id: int, capacity: int, fanout: int = DEFAULT_FANOUT,
                 check: bool = False):
        self.ecn_id = ecn_id
        self.window = SlidingWindow(capacity)
        self.index = RTree(fanout)
        self.state = SkylineState()
        self.counter = CostCounter()
        self.t = 0
        self.check = check

    @property
    def capacity(self) -> int:
        return self.window.capacity

    def receive_data(self, batch: Sequence[UncertainObject]) -> list[UncertainObject]:
        """Admit `batch`, evicting the oldest entries; returns what was evicted."""
        if len(batch) > self.capacity:
            raise ConfigError(
                f"batch of {len(batch)} exceeds window capacity {self.capacity}")
        if not batch:
            return []
        obsolete = self.window.collect_obsolete(len(batch))
        for o in obsolete:
            self.window.remove(o.id)
            self.index.delete(o.id)
        self.window.add(batch)
        for o in sorted(batch, key=lambda o: o.seq):
            self.index.insert(o)
        return obsolete

    def bootstrap(self, objects: Sequence[UncertainObject]) -> UpdateMessage:
        """Initial fill: both layers computed from scratch and shipped whole."""
        self.window.add(objects)
        self.index = RTree.bulk_load(self.window, self.index.fanout)
        sk1 = compute_skyline(self.window, self.index, self.counter)
        sk2 = compute_candidate_skyline(self.window, sk1, self.index, self.counter)
        self.state = SkylineState({i: self.window[i] for i in sorted(sk1)},
                                  {i: self.window[i] for i in sorted(sk2)})
        return UpdateMessage(self.ecn_id, self.t, [],
                             [self.state.sk1[i] for i in sorted(sk1)],
                             [self.state.sk2[i] for i in sorted(sk2)])

    def step(self, batch: Sequence[UncertainObject]) -> UpdateMessage:
        self.t += 1
        if not batch:
            return UpdateMessage(self.ecn_id, self.t)
        old1, old2 = self.state.ids()
        obsolete = self.receive_data(batch)
        update_skyline(self.state, batch, obsolete, self.window, self.index,
                       self.counter, check=self.check)
        if self.t % self.capacity == 0:
            # repack once per window turnover so incremental splits don't pile up overlap
            self.index = RTree.bulk_load(self.window, self.index.fanout)
        sk1, sk2 = self.state.sk1, self.state.sk2
        return UpdateMessage(
            self.ecn_id, self.t,
            sorted(o.id for o in obsolete),
            [sk1[i] for i in sorted(set(sk1) - old1)],
            [sk2[i] for i in sorted(set(sk2) - old2)],
        )
