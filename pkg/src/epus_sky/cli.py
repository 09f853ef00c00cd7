"""Command-line entry point: run, sweep, replay."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .baselines import MethodKind
from .errors import ConfigError, EpusError
from .harness import SimConfig, Simulation, default_csv_name, export_csv, summarize
from .server import ServerNode
from .wire import read_trace, write_trace

SWEEP_VALUES = {
    "ecns": ("m", [2, 4, 6, 8, 10]),
    "window": ("window_k", [100, 300, 500, 700]),
    "dims": ("d", list(range(2, 11))),
    "instances": ("n", list(range(3, 11))),
    "radius": ("r", [4, 6, 8, 10, 12, 14, 16, 18, 20]),
}


def _add_config_args(p: argparse.ArgumentParser) -> None:
    d = SimConfig()
    p.add_argument("--ecns", type=int, default=d.m)
    p.add_argument("--dims", type=int, default=d.d)
    p.add_argument("--instances", type=int, default=d.n)
    p.add_argument("--radius", type=float, default=d.r)
    p.add_argument("--window", type=int, default=d.window_k)
    p.add_argument("--steps", type=int, default=d.steps)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--rate-mbps", type=float, default=d.rate_mbps)
    p.add_argument("--object-kb", type=float, default=d.object_kb)
    p.add_argument("--obsolete-kb", type=float, default=None,
                   help="price retractions separately (default: same as an object)")
    p.add_argument("--comp-power", type=float, default=d.comp_power_edge,
                   help="comparisons per second, edge and server alike")
    p.add_argument("--batch", type=int, default=d.batch)
    p.add_argument("--fanout", type=int, default=d.fanout)
    p.add_argument("--check", action="store_true",
                   help="verify every state against a from-scratch recompute")


def _config(args, method: str) -> SimConfig:
    return SimConfig(m=args.ecns, d=args.dims, n=args.instances, r=args.radius,
                     window_k=args.window, steps=args.steps, seed=args.seed,
                     method=MethodKind(method), rate_mbps=args.rate_mbps,
                     object_kb=args.object_kb, obsolete_kb=args.obsolete_kb,
                     comp_power_edge=args.comp_power, comp_power_server=args.comp_power,
                     batch=args.batch, fanout=args.fanout, check=args.check)


def _run(cfg: SimConfig, trace_path=None):
    sim = Simulation(cfg)
    records = []
    trace = open(trace_path, "wb") if trace_path else None
    try:
        for rec in sim.run():
            records.append(rec)
            if trace is not None:
                write_trace(sim.last_messages, trace)
    finally:
        if trace is not None:
            trace.close()
    return records


def cmd_run(args) -> int:
    cfg = _config(args, args.method)
    if args.trace and cfg.method is not MethodKind.EPUS:
        raise ConfigError("--trace records delta messages and needs --method epus")
    records = _run(cfg, args.trace)
    out = args.out or default_csv_name(cfg)
    export_csv(records, out)
    print(json.dumps({"csv": str(out), **summarize(records)}))
    return 0


def cmd_sweep(args) -> int:
    field_name, defaults = SWEEP_VALUES[args.param]
    cast = float if field_name == "r" else int
    values = [cast(v) for v in args.values.split(",")] if args.values else defaults
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    methods = args.methods.split(",")
    for method in methods:
        base = _config(args, method)
        records = []
        for v in values:
            records.extend(_run(replace(base, **{field_name: v})))
        path = outdir / f"sweep_{args.param}_{method}.csv"
        export_csv(records, path)
        print(json.dumps({"csv": str(path), "method": method, "values": values,
                          **summarize(records)}))
    return 0


def cmd_replay(args) -> int:
    server = ServerNode(args.capacity, check=args.check)
    ticks = 0
    with open(args.trace, "rb") as fh:
        batch, step = [], None
        for msg in read_trace(fh):
            if step is not None and msg.step != step:
                server.server_step(batch)
                ticks += 1
                batch = []
            step = msg.step
            batch.append(msg)
        if batch:
            server.server_step(batch)
            ticks += 1
    print(json.dumps({"ticks": ticks, "window": len(server.window),
                      "sk1": sorted(server.sk1), "sk2": sorted(server.sk2)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epus-sky",
                                     description="Probabilistic skyline over edge streams.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one configuration and write a CSV")
    p.add_argument("--method", choices=[k.value for k in MethodKind], default="epus")
    _add_config_args(p)
    p.add_argument("--out", help="CSV path")
    p.add_argument("--trace", help="also write every edge message to this file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="vary one parameter, one CSV per method")
    p.add_argument("--param", choices=sorted(SWEEP_VALUES), required=True)
    p.add_argument("--values", help="comma-separated values (default: standard list)")
    p.add_argument("--methods", default="epus,pbf,prpo")
    p.add_argument("--outdir", default="sweeps")
    _add_config_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("replay", help="feed a message trace to a fresh server")
    p.add_argument("--trace", required=True)
    p.add_argument("--capacity", type=int, default=10 ** 6,
                   help="server window capacity")
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EpusError, OSError) as exc:
        print(f"epus-sky: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
