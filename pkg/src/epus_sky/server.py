"""Server node: merges edge deltas into its window and keeps the global layers.

The server evicts only on explicit retraction. Objects named in a delta are
applied the way they arrive (brand-new ones join the window, known ones are
moved between the layers), and the end-of-tick update then re-places every
touched object starting from the state as of the start of the tick, so the
layers end the tick exact for the window the server now holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ProtocolError
from .rtree import DEFAULT_FANOUT, RTree
from .skyline import SkylineState, update_skyline
from .uncertain import CostCounter, UncertainObject
from .window import SlidingWindow
from .wire import OBJECT_PACKET_BYTES, UpdateMessage, message_cost_bytes


@dataclass
class ServerStepStats:
    objects_rx: int = 0
    bytes_rx: int = 0
    comparisons: int = 0


class ServerNode:
    def __init__(self, capacity: int, fanout: int = DEFAULT_FANOUT, check: bool = False,
                 object_bytes: int = OBJECT_PACKET_BYTES,
                 obsolete_bytes: int | None = None):
        self.window = SlidingWindow(capacity)
        self.index = RTree(fanout)
        self.state = SkylineState()
        self.counter = CostCounter()
        self.check = check
        self.object_bytes = object_bytes
        self.obsolete_bytes = obsolete_bytes
        self._boundary: SkylineState | None = None
        self._removed: dict[int, UncertainObject] = {}
        self._added: dict[int, UncertainObject] = {}
        self._moved: dict[int, UncertainObject] = {}

    @property
    def sk1(self) -> set[int]:
        return set(self.state.sk1)

    @property
    def sk2(self) -> set[int]:
        return set(self.state.sk2)

    def _admit(self, o: UncertainObject) -> None:
        if len(self.window) >= self.window.capacity:
            raise ProtocolError(
                f"server window overflow admitting object {o.id} "
                f"(capacity {self.window.capacity})")
        if o.id in self._removed:
            raise ProtocolError(f"object {o.id} re-advertised after retraction")
        self.window.add([o])
        self.index.insert(o)
        self._added[o.id] = o

    def receive_edge_update(self, msg: UpdateMessage) -> tuple[list[int], list[int]]:
        """Apply one edge delta; returns the tick's pending (obsolete ids, new ids)."""
        if self._boundary is None:
            self._boundary = self.state.copy()
        live = self.state
        for oid in msg.obsolete_ids:
            o = self.window.get(oid)
            if o is None:
                continue
            self.window.remove(oid)
            self.index.delete(oid)
            live.sk1.pop(oid, None)
            live.sk2.pop(oid, None)
            if self._added.pop(oid, None) is None:
                self._removed[oid] = o
            self._moved.pop(oid, None)
        for o in msg.new_skyline:
            if o.id not in self.window:
                self._admit(o)
            elif o.id in live.sk2:
                del live.sk2[o.id]
                self._moved[o.id] = self.window[o.id]
        for o in msg.new_candidates:
            if o.id not in self.window:
                self._admit(o)
                live.sk2[o.id] = o
            elif o.id in live.sk1:
                live.sk2[o.id] = live.sk1.pop(o.id)
                self._moved[o.id] = self.window[o.id]
        return sorted(self._removed), sorted(set(self._added) | set(self._moved))

    def update_global_skyline(self) -> tuple[list[int], list[int]]:
        """Close the tick: bring both layers in line with the current window."""
        if self._boundary is None:
            return [], []
        state = self._boundary
        moved = [self._moved[i] for i in sorted(self._moved)]
        new = [self._added[i] for i in sorted(self._added)] + moved
        obsolete = [self._removed[i] for i in sorted(self._removed)] + moved
        _, promoted, demoted = update_skyline(state, new, obsolete, self.window, self.index,
                                              self.counter, check=self.check)
        self.state = state
        self._boundary = None
        self._removed, self._added, self._moved = {}, {}, {}
        return promoted, demoted

    def server_step(self, msgs: Iterable[UpdateMessage]) -> ServerStepStats:
        msgs = sorted(msgs, key=lambda m: m.ecn_id)
        stats = ServerStepStats()
        before = self.counter.n
        for m in msgs:
            stats.objects_rx += m.object_count()
            stats.bytes_rx += message_cost_bytes(m, self.object_bytes, self.obsolete_bytes)
            self.receive_edge_update(m)
        if stats.objects_rx:
            self.update_global_skyline()
        else:
            self._boundary = None
        stats.comparisons = self.counter.n - before
        return stats
