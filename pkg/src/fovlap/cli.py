"""Command-line entry point: ``fovlap {sweep,once,footprints}``.

Exit codes: 0 success, 2 configuration error, 3 runtime error.
"""
import argparse
import csv
import io
import json
import os
import sys

from .config import describe, load_config
from .errors import ConfigInvalid, ConfigParse, FovlapError
from .formation import build_scenario
from .graph import p_calib
from .montecarlo import reduce_records, run_records, run_sample
from .overlap import intersect_all
from .report import SCHEMA_VERSION, emit, fmt, round9
from .sweep import run_sweep

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def _common(p):
    p.add_argument("--config", help="INI config file; omitted keys take the defaults")
    p.add_argument("--seed", type=int, help="master seed (default: drawn and printed)")
    p.add_argument("--n-mc", dest="n_mc", help="Monte Carlo samples per ensemble")
    p.add_argument("--ape", help="pointing error std in degrees")
    p.add_argument("--threshold", help="pairwise RO threshold T")
    p.add_argument("--q", help="Q values for P_calib columns, e.g. 10 or 5..10")
    p.add_argument("--out", default="-", help="output path (default stdout)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: CPU count)")
    p.add_argument("--dry-run", action="store_true",
                   help="print the resolved config and exit")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fovlap",
        description="Monte Carlo FOV-overlap and self-calibration probability for noisy multi-view setups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="parameter sweep, one result row per value")
    _common(p)
    p.add_argument("--axis", choices=["ape", "fov", "q", "t"])
    p.add_argument("--values", help="a:b:step, a..b, comma list, or WxH,... for fov")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("once", help="single ensemble with a per-sample dump")
    _common(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("footprints", help="one sample's footprint polygons as JSON")
    _common(p)
    p.add_argument("--sample-index", type=int, default=0)
    return parser


def _overrides(args):
    o = {
        "ensemble.seed": args.seed,
        "ensemble.n_mc": args.n_mc,
        "ensemble.ape_deg": args.ape,
        "ensemble.t_threshold": args.threshold,
        "sweep.q": args.q,
    }
    if getattr(args, "axis", None):
        o["sweep.axis"] = args.axis
    if getattr(args, "values", None):
        o["sweep.values"] = args.values
    return o


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_sweep(args, formation, ensemble, sweep):
    rows = run_sweep(formation, ensemble, sweep, workers=args.threads)
    text = emit(rows, args.format, None, describe(formation, ensemble, sweep))
    _write(text, args.out)


def cmd_once(args, formation, ensemble, sweep):
    scenario = build_scenario(formation)
    records = sorted(run_records(scenario, ensemble, args.threads),
                     key=lambda r: r.sample_index)
    stats = reduce_records(records)
    hist = stats.select_histogram(ensemble.criteria)
    summary = {
        "mean_ao_km2": round9(stats.mean_ao), "mean_ro": round9(stats.mean_ro),
        "std_ro": round9(stats.std_ro),
        "p_calib": {str(q): round9(p_calib(hist, q)) for q in sweep.q_values},
        "histogram": {str(k): v for k, v in sorted(hist.counts.items())},
        "miss_count": stats.miss_count, "anchor_miss_count": stats.anchor_miss_count,
        "n_mc": stats.n_mc,
    }
    cols = ["sample_index", "ao_km2", "ro", "largest_component", "anchor_component",
            "missed_cameras", "anchor_miss"]
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION,
               "config": describe(formation, ensemble, sweep),
               "summary": summary,
               "samples": [dict(zip(cols, (r.sample_index, round9(r.ao), round9(r.ro),
                                           r.largest, r.anchor_component,
                                           r.missed_cameras, r.anchor_miss)))
                           for r in records]}
        _write(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in records:
            w.writerow([r.sample_index, fmt(r.ao), fmt(r.ro), r.largest,
                        r.anchor_component, r.missed_cameras, int(r.anchor_miss)])
        _write(buf.getvalue(), args.out)
        print(json.dumps(summary), file=sys.stderr)


def cmd_footprints(args, formation, ensemble, sweep):
    scenario = build_scenario(formation)
    sample = run_sample(scenario, ensemble, args.sample_index)
    inter = intersect_all(sample.footprints)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": describe(formation, ensemble, sweep),
        "sample_index": args.sample_index,
        "anchor_index": scenario.anchor_index,
        "surface_z_km": scenario.surface_height,
        "cameras": [{
            "camera": c,
            "position_km": [round9(x) for x in scenario.positions[c]],
            "valid": not fp.is_empty,
            "vertices_km": [[round9(x), round9(y)] for x, y in fp.vertices],
        } for c, fp in enumerate(sample.footprints)],
        "overlap": {
            "vertices_km": [[round9(x), round9(y)] for x, y in inter.vertices],
            "ao_km2": round9(sample.report.ao),
            "ro": round9(sample.report.ro),
        },
        "largest_component": sample.graph.largest_component_size,
    }
    _write(json.dumps(doc, indent=2) + "\n", args.out)


COMMANDS = {"sweep": cmd_sweep, "once": cmd_once, "footprints": cmd_footprints}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        formation, ensemble, sweep = load_config(args.config, _overrides(args))
    except (ConfigParse, ConfigInvalid) as exc:
        print(f"fovlap: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fovlap: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if sweep.seed_drawn:
        print(f"fovlap: seed = {ensemble.master_seed}", file=sys.stderr)
    if args.threads is None:
        args.threads = os.cpu_count() or 1
    if args.threads < 1:
        print("fovlap: config error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.dry_run:
        resolved = describe(formation, ensemble, sweep)
        sys.stdout.write("".join(f"{k} = {v}\n" for k, v in resolved.items()))
        return EXIT_OK
    try:
        COMMANDS[args.command](args, formation, ensemble, sweep)
    except (FovlapError, ValueError, OSError) as exc:
        print(f"fovlap: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
