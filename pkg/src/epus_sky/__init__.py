"""Continuous probabilistic skyline over uncertain streams on edge nodes and a server."""

from .baselines import BaselineServer, MethodKind, pbf_edge_step, prpo_edge_step
from .edge import EdgeNode
from .errors import ConfigError, DecodeError, EpusError, ProtocolError, UsageError
from .harness import (MetricsRecord, SimConfig, Simulation, StreamGenerator, export_csv,
                      latency_of, read_csv, run_simulation)
from .rtree import RTree, bulk_load
from .server import ServerNode
from .skyline import (SkylineState, brute_force_skyline, compute_candidate_skyline,
                      compute_skyline, update_skyline)
from .uncertain import (EPS, CostCounter, Instance, Mbr, UncertainObject, certainly_dominates,
                        instance_dominance_probability, instance_dominates,
                        object_dominance_probability)
from .window import SlidingWindow
from .wire import UpdateMessage, decode, encode, message_cost_bytes

__all__ = [
    "BaselineServer", "MethodKind", "pbf_edge_step", "prpo_edge_step", "EdgeNode",
    "ConfigError", "DecodeError", "EpusError", "ProtocolError", "UsageError",
    "MetricsRecord", "SimConfig", "Simulation", "StreamGenerator", "export_csv", "latency_of",
    "read_csv", "run_simulation", "RTree", "bulk_load", "ServerNode", "SkylineState",
    "brute_force_skyline", "compute_candidate_skyline", "compute_skyline", "update_skyline",
    "EPS", "CostCounter", "Instance", "Mbr", "UncertainObject", "certainly_dominates",
    "instance_dominance_probability", "instance_dominates", "object_dominance_probability",
    "SlidingWindow", "UpdateMessage", "decode", "encode", "message_cost_bytes",
]
