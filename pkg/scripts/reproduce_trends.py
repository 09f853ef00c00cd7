"""Desk-scale parameter sweeps comparing EPUS with the two baselines.

For each swept parameter, every method runs on the same seeds and the script
prints cumulative bytes sent and mean per-tick system latency. CSVs go to
--outdir. Window sizes are scaled down by default so a full sweep finishes
in minutes; pass --full for the standard value lists at full size.
"""

import argparse
from dataclasses import replace
from pathlib import Path

from epus_sky.baselines import MethodKind
from epus_sky.cli import SWEEP_VALUES
from epus_sky.harness import SimConfig, export_csv, run_simulation, summarize

DESK_VALUES = {
    "ecns": [2, 4, 6, 8, 10],
    "window": [25, 50, 75, 100],
    "dims": [2, 3, 4, 5, 6],
    "instances": [3, 5, 7, 10],
    "radius": [4, 8, 12, 16, 20],
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", default="ecns,window,dims,instances,radius")
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--window", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--full", action="store_true", help="standard value lists, full windows")
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args(argv)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    base = SimConfig(steps=args.steps, seed=args.seed,
                     window_k=SimConfig().window_k if args.full else args.window)
    for param in args.params.split(","):
        field_name, full_values = SWEEP_VALUES[param]
        values = full_values if args.full else DESK_VALUES[param]
        print(f"\n== {param} ({field_name}) ==")
        print(f"{'value':>7} {'method':>6} {'bytes':>12} {'mean L_sys (s)':>15} {'vs epus':>8}")
        for v in values:
            cfg = replace(base, **{field_name: v})
            rows = {}
            for kind in MethodKind:
                recs = run_simulation(replace(cfg, method=kind))
                export_csv(recs, outdir / f"{param}_{v}_{kind.value}.csv")
                rows[kind] = summarize(recs)
            ref = rows[MethodKind.EPUS]["mean_l_system_s"]
            for kind, s in rows.items():
                print(f"{v:>7} {kind.value:>6} {s['bytes_tx']:>12} {s['mean_l_system_s']:>15.6f} "
                      f"{s['mean_l_system_s'] / ref:>8.2f}")


if __name__ == "__main__":
    main()
