"""Workload generation, tick-driven simulation, latency model and CSV export."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from .baselines import (BaselineServer, MethodKind, baseline_bootstrap, pbf_edge_step,
                        prpo_edge_step)
from .edge import EdgeNode
from .errors import ConfigError
from .rtree import DEFAULT_FANOUT
from .server import ServerNode, ServerStepStats
from .uncertain import Instance, UncertainObject
from .wire import UpdateMessage

DOMAIN = 1000.0
ID_STRIDE = 10 ** 9


@dataclass
class SimConfig:
    m: int = 6
    d: int = 2
    n: int = 5
    r: float = 5.0
    window_k: int = 300
    steps: int = 100
    seed: int = 0
    method: MethodKind = MethodKind.EPUS
    rate_mbps: float = 1.0
    object_kb: float = 3.0
    obsolete_kb: float | None = None
    comp_power_edge: float = 1e7
    comp_power_server: float = 1e7
    batch: int = 1
    fanout: int = DEFAULT_FANOUT
    check: bool = False

    def __post_init__(self):
        if isinstance(self.method, str):
            self.method = MethodKind(self.method)
        for name in ("m", "n", "window_k", "batch"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.d < 2:
            raise ConfigError("d must be at least 2")
        if self.steps < 0:
            raise ConfigError("steps must be non-negative")
        if self.r < 0:
            raise ConfigError("r must be non-negative")
        if self.batch > self.window_k:
            raise ConfigError("batch cannot exceed the edge window")
        if self.fanout < 2:
            raise ConfigError("fanout must be at least 2")
        for name in ("rate_mbps", "object_kb", "comp_power_edge", "comp_power_server"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.obsolete_kb is not None and self.obsolete_kb < 0:
            raise ConfigError("obsolete_kb must be non-negative")

    @property
    def object_bytes(self) -> int:
        return round(self.object_kb * 1024)

    @property
    def obsolete_bytes(self) -> int | None:
        return None if self.obsolete_kb is None else round(self.obsolete_kb * 1024)


class StreamGenerator:
    """Independent object stream for one edge.

    Centers are uniform over the domain cube, instances uniform in the
    radius-r ball around the center, probabilities uniform then normalized.
    """

    def __init__(self, seed: int, ecn_id: int, d: int, n: int, r: float):
        self.rng = np.random.default_rng([seed, ecn_id])
        self.ecn_id, self.d, self.n, self.r = ecn_id, d, n, r
        self.seq = 0

    def generate_object(self) -> UncertainObject:
        self.seq += 1
        center = self.rng.uniform(0.0, DOMAIN, self.d)
        direction = self.rng.standard_normal((self.n, self.d))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        radius = self.r * self.rng.uniform(0.0, 1.0, (self.n, 1)) ** (1.0 / self.d)
        points = center + direction / norms * radius
        w = self.rng.uniform(0.0, 1.0, self.n) + 1e-12
        probs = w / w.sum()
        # fold rounding residue into the largest weight so the sum is 1 to the ulp
        probs[np.argmax(probs)] += 1.0 - probs.sum()
        insts = tuple(Instance(tuple(p.tolist()), float(q)) for p, q in zip(points, probs))
        return UncertainObject(self.ecn_id * ID_STRIDE + self.seq, self.seq, insts)

    def take(self, k: int) -> list[UncertainObject]:
        return [self.generate_object() for _ in range(k)]


@dataclass
class MetricsRecord:
    step: int
    method: str
    m: int
    d: int
    n: int
    r: float
    window_k: int
    comparisons_edge: list[int] = field(default_factory=list)
    comparisons_server: int = 0
    objects_tx: int = 0
    bytes_tx: int = 0
    l_comp_edge_s: float = 0.0
    l_comm_s: float = 0.0
    l_comp_server_s: float = 0.0
    l_system_s: float = 0.0

    @property
    def comparisons_edge_total(self) -> int:
        return sum(self.comparisons_edge)


def latency_of(comparisons_edge: list[int], objects_tx: int, comparisons_server: int,
               cfg: SimConfig, bytes_tx: int | None = None) -> tuple[float, float, float, float]:
    """(edge compute, server downlink, server compute, total) latency in seconds.

    Downlink time is priced per transmitted object at `cfg.object_kb`, or
    from `bytes_tx` directly when retractions are charged differently.
    """
    if not cfg.comp_power_edge > 0 or not cfg.comp_power_server > 0:
        raise ConfigError("computing power must be positive")
    if not cfg.rate_mbps > 0:
        raise ConfigError("link rate must be positive")
    m = len(comparisons_edge) or cfg.m
    l_edge = sum(c / cfg.comp_power_edge for c in comparisons_edge) / m
    if bytes_tx is None:
        l_comm = objects_tx * cfg.object_kb * 8 * 1024 / (cfg.rate_mbps * 1e6)
    else:
        l_comm = bytes_tx * 8 / (cfg.rate_mbps * 1e6)
    l_server = comparisons_server / cfg.comp_power_server
    return l_edge, l_comm, l_server, l_edge + l_comm + l_server


class Simulation:
    """One system of m edges and a server, advanced a tick at a time."""

    def __init__(self, cfg: SimConfig):
        self.cfg = cfg
        self.t = -1
        self.streams = [StreamGenerator(cfg.seed, k, cfg.d, cfg.n, cfg.r)
                        for k in range(1, cfg.m + 1)]
        self.edges = [EdgeNode(k, cfg.window_k, cfg.fanout, check=cfg.check)
                      for k in range(1, cfg.m + 1)]
        if cfg.method is MethodKind.EPUS:
            self.server = ServerNode(cfg.m * cfg.window_k, cfg.fanout, cfg.check,
                                     cfg.object_bytes, cfg.obsolete_bytes)
        else:
            self.server = BaselineServer(cfg.method, cfg.fanout, cfg.object_bytes,
                                         cfg.obsolete_bytes)
        self.last_messages: list[UpdateMessage] = []

    @property
    def server_sk1(self) -> set[int]:
        return set(self.server.sk1)

    def edge_union(self) -> list[UncertainObject]:
        return [o for e in self.edges for o in e.window]

    def _edge_step(self, edge: EdgeNode, batch) -> UpdateMessage:
        kind = self.cfg.method
        if self.t == 0:
            if kind is MethodKind.EPUS:
                return edge.bootstrap(batch)
            return baseline_bootstrap(edge, batch, kind)
        if kind is MethodKind.EPUS:
            return edge.step(batch)
        if kind is MethodKind.PBF:
            return pbf_edge_step(edge, batch)
        return prpo_edge_step(edge, batch)

    def tick(self) -> MetricsRecord:
        """Advance one tick; tick 0 fills every edge window and ships full sets."""
        self.t += 1
        cfg = self.cfg
        k = cfg.window_k if self.t == 0 else cfg.batch
        edge_cost, msgs = [], []
        for edge, stream in zip(self.edges, self.streams):
            before = edge.counter.n
            msgs.append(self._edge_step(edge, stream.take(k)))
            edge_cost.append(edge.counter.n - before)
        stats: ServerStepStats = self.server.server_step(msgs)
        self.last_messages = msgs
        rec = MetricsRecord(self.t, cfg.method.value, cfg.m, cfg.d, cfg.n, cfg.r,
                            cfg.window_k, edge_cost, stats.comparisons, stats.objects_rx,
                            stats.bytes_rx)
        (rec.l_comp_edge_s, rec.l_comm_s, rec.l_comp_server_s,
         rec.l_system_s) = latency_of(edge_cost, stats.objects_rx, stats.comparisons, cfg,
                                      None if cfg.obsolete_kb is None else stats.bytes_rx)
        return rec

    def run(self) -> Iterator[MetricsRecord]:
        while self.t < self.cfg.steps:
            yield self.tick()


def run_simulation(cfg: SimConfig) -> list[MetricsRecord]:
    return list(Simulation(cfg).run())


# -- CSV ----------------------------------------------------------------------

CSV_COLUMNS = ("step", "method", "m", "d", "n", "r", "window_k", "comparisons_edge_total",
               "comparisons_server", "objects_tx", "bytes_tx", "l_comp_edge_s", "l_comm_s",
               "l_comp_server_s", "l_system_s")
_INT_COLUMNS = {"step", "m", "d", "n", "window_k", "comparisons_edge_total",
                "comparisons_server", "objects_tx", "bytes_tx"}


def _fmt(v) -> str:
    return format(v, ".9g") if isinstance(v, float) else str(v)


def export_csv(records: list[MetricsRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            row = asdict(rec)
            row["comparisons_edge_total"] = rec.comparisons_edge_total
            w.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def read_csv(path) -> list[dict]:
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.DictReader(fh):
            rows.append({k: (raw[k] if k == "method" else
                             int(raw[k]) if k in _INT_COLUMNS else float(raw[k]))
                         for k in CSV_COLUMNS})
    return rows


def summarize(records: list[MetricsRecord]) -> dict:
    """Run totals plus the time-averaged per-tick transmitted object count."""
    if not records:
        return {"ticks": 0, "objects_tx": 0, "bytes_tx": 0, "avg_objects_tx": 0.0,
                "mean_l_system_s": 0.0}
    total_obj = sum(r.objects_tx for r in records)
    return {
        "ticks": len(records),
        "objects_tx": total_obj,
        "bytes_tx": sum(r.bytes_tx for r in records),
        "avg_objects_tx": total_obj / len(records),
        "comparisons_edge": sum(r.comparisons_edge_total for r in records),
        "comparisons_server": sum(r.comparisons_server for r in records),
        "mean_l_system_s": math.fsum(r.l_system_s for r in records) / len(records),
    }


def default_csv_name(cfg: SimConfig) -> str:
    return f"{cfg.method.value}_m{cfg.m}_d{cfg.d}_n{cfg.n}_r{cfg.r:g}_w{cfg.window_k}.csv"
