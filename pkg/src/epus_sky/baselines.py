"""Comparison systems: full recompute at every step and full skyline upload.

PBF recomputes with all-pairs brute force, PRPO with R-tree pruning. Both
keep no candidate layer. Each edge still reports evicted ids so the server
can retire objects that fell out of the edge's latest advertisement.
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

from .edge import EdgeNode
from .rtree import DEFAULT_FANOUT, RTree
from .server import ServerStepStats
from .skyline import brute_force_skyline, compute_skyline
from .uncertain import CostCounter, UncertainObject
from .wire import OBJECT_PACKET_BYTES, UpdateMessage, message_cost_bytes


class MethodKind(enum.Enum):
    EPUS = "epus"
    PBF = "pbf"
    PRPO = "prpo"


def _recompute(node: EdgeNode, kind: MethodKind) -> set[int]:
    if kind is MethodKind.PBF:
        return brute_force_skyline(node.window, node.counter)
    return compute_skyline(node.window, node.index, node.counter)


def _full_step(node: EdgeNode, batch: Sequence[UncertainObject],
               kind: MethodKind) -> UpdateMessage:
    node.t += 1
    if not batch:
        return UpdateMessage(node.ecn_id, node.t)
    obsolete = node.receive_data(batch)
    sky = _recompute(node, kind)
    node.state.sk1 = {i: node.window[i] for i in sorted(sky)}
    node.state.sk2 = {}
    return UpdateMessage(node.ecn_id, node.t, sorted(o.id for o in obsolete),
                         [node.window[i] for i in sorted(sky)])


def pbf_edge_step(node: EdgeNode, batch: Sequence[UncertainObject]) -> UpdateMessage:
    return _full_step(node, batch, MethodKind.PBF)


def prpo_edge_step(node: EdgeNode, batch: Sequence[UncertainObject]) -> UpdateMessage:
    return _full_step(node, batch, MethodKind.PRPO)


def baseline_bootstrap(node: EdgeNode, objects: Sequence[UncertainObject],
                       kind: MethodKind) -> UpdateMessage:
    node.window.add(objects)
    node.index = RTree.bulk_load(node.window, node.index.fanout)
    sky = _recompute(node, kind)
    node.state.sk1 = {i: node.window[i] for i in sorted(sky)}
    return UpdateMessage(node.ecn_id, node.t, [], [node.window[i] for i in sorted(sky)])


class BaselineServer:
    """Holds each edge's latest advertised skyline and recomputes over their union."""

    def __init__(self, kind: MethodKind, fanout: int = DEFAULT_FANOUT,
                 object_bytes: int = OBJECT_PACKET_BYTES,
                 obsolete_bytes: int | None = None):
        if kind is MethodKind.EPUS:
            raise ValueError("BaselineServer serves PBF and PRPO only")
        self.kind = kind
        self.fanout = fanout
        self.object_bytes = object_bytes
        self.obsolete_bytes = obsolete_bytes
        self.adverts: dict[int, dict[int, UncertainObject]] = {}
        self.counter = CostCounter()
        self.sk1: set[int] = set()

    def window(self) -> list[UncertainObject]:
        return [o for ecn in sorted(self.adverts) for o in self.adverts[ecn].values()]

    def baseline_server_step(self, msgs: Iterable[UpdateMessage]) -> ServerStepStats:
        stats = ServerStepStats()
        before = self.counter.n
        for m in sorted(msgs, key=lambda m: m.ecn_id):
            stats.objects_rx += m.object_count()
            stats.bytes_rx += message_cost_bytes(m, self.object_bytes, self.obsolete_bytes)
            if m.is_empty():
                continue
            # a full advertisement supersedes the previous one, retractions included
            self.adverts[m.ecn_id] = {o.id: o for o in m.new_skyline}
        if stats.objects_rx:
            objs = self.window()
            if self.kind is MethodKind.PBF:
                self.sk1 = brute_force_skyline(objs, self.counter)
            else:
                self.sk1 = compute_skyline(objs, RTree.bulk_load(objs, self.fanout),
                                           self.counter)
        stats.comparisons = self.counter.n - before
        return stats

    server_step = baseline_server_step
