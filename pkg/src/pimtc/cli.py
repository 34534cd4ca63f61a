"""Command-line entry points: ``pimtc`` runs the pipeline, ``pimtc-synth`` writes test graphs."""
from __future__ import annotations

import argparse
import json
import sys

from .graph_io import ParseError
from .harness import (SWEEP_AXES, RunConfig, csv_row, cumulative_time, load_graph, run_dynamic, run_static,
                      sweep, to_csv)
from .pim_core import DEFAULT_SCRATCH
from .synth import KINDS, synth_graph


def _capacity(text):
    if text == "auto":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if value < 3:
        raise argparse.ArgumentTypeError("capacity must be >= 3")
    return value


def _sweep(text):
    axis, sep, raw = text.partition("=")
    if not sep or not raw:
        raise argparse.ArgumentTypeError("expected AXIS=V1,V2,...")
    if axis not in SWEEP_AXES:
        raise argparse.ArgumentTypeError(f"unknown axis {axis!r}; choose from {', '.join(SWEEP_AXES)}")
    cast = int if axis in ("colors", "mg_K", "mg_top_t") else float
    try:
        values = [cast(v) for v in raw.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad value list {raw!r}") from None
    return axis, values


def build_parser():
    p = argparse.ArgumentParser(
        prog="pimtc",
        description="Color-partitioned triangle counting on simulated processing-in-memory cores.")
    p.add_argument("--input", required=True, help="COO edge list (two integers per line)")
    p.add_argument("--colors", type=int, default=5,
                   help="color count C; uses binom(C+2,3) cores (full 2560-core system: 23)")
    p.add_argument("--uniform-p", type=float, default=1.0, help="edge keep probability at ingest")
    p.add_argument("--capacity", type=_capacity, default="auto", help="reservoir capacity in edges, or 'auto'")
    p.add_argument("--capacity-fraction", type=float, default=None,
                   help="capacity as a fraction of the expected per-core load 6|E|/C^2")
    p.add_argument("--mg-k", type=int, default=64, help="Misra-Gries summary size K")
    p.add_argument("--mg-top", type=int, default=0, help="heavy nodes to remap (0 disables)")
    p.add_argument("--host-workers", type=int, default=32)
    p.add_argument("--core-threads", type=int, default=16)
    p.add_argument("--scratch", type=int, default=DEFAULT_SCRATCH, help="scratch window in edges")
    p.add_argument("--seed", type=int, default=0)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--dynamic", type=int, metavar="N", help="split into N updates and count after each")
    mode.add_argument("--sweep", type=_sweep, metavar="AXIS=V1,V2,...",
                      help=f"one run per value; axes: {', '.join(SWEEP_AXES)}")
    p.add_argument("--truth", type=int, default=None, help="true triangle count for relative error")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w") as fh:
            fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.dynamic is not None and args.dynamic < 1:
        parser.error("--dynamic must be >= 1")
    try:
        config = RunConfig(
            input=args.input, colors=args.colors, uniform_p=args.uniform_p, capacity=args.capacity,
            capacity_fraction=args.capacity_fraction, mg_k=args.mg_k, mg_top=args.mg_top,
            host_workers=args.host_workers, core_threads=args.core_threads, scratch_capacity=args.scratch,
            seed=args.seed)
    except ValueError as exc:
        parser.error(str(exc))

    try:
        graph = load_graph(config)
    except (OSError, ParseError) as exc:
        print(f"pimtc: cannot read {args.input}: {exc}", file=sys.stderr)
        return 1

    if args.sweep is not None:
        axis, values = args.sweep
        try:
            reports = sweep(config, axis, values, truth=args.truth, graph=graph)
        except ValueError as exc:
            parser.error(str(exc))
        if args.format == "csv":
            text = to_csv([csv_row(r, axis, v) for r, v in zip(reports, values)])
        else:
            text = json.dumps({"axis": axis, "values": values, "runs": [r.to_dict() for r in reports]}, indent=2)
    elif args.dynamic is not None:
        reports = run_dynamic(config, args.dynamic, graph=graph, truth=args.truth)
        if args.format == "csv":
            text = to_csv([csv_row(r) for r in reports])
        else:
            text = json.dumps({"updates": args.dynamic, "cumulative_time_ms": cumulative_time(reports),
                               "iterations": [r.to_dict() for r in reports]}, indent=2)
    else:
        report = run_static(config, graph=graph, truth=args.truth)
        text = to_csv([csv_row(report)]) if args.format == "csv" else json.dumps(report.to_dict(), indent=2)

    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"pimtc: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


def synth_main(argv=None):
    p = argparse.ArgumentParser(prog="pimtc-synth", description="Write a synthetic COO graph.")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--m", type=int, default=300)
    p.add_argument("--hub-count", type=int, default=2)
    p.add_argument("--hub-degree", type=int, default=20)
    p.add_argument("--scale", type=int, default=10)
    p.add_argument("--edge-factor", type=int, default=16)
    p.add_argument("--a", type=float, default=0.57)
    p.add_argument("--b", type=float, default=0.19)
    p.add_argument("--c", type=float, default=0.19)
    p.add_argument("--leaves", type=int, default=100)
    p.add_argument("--clique", type=int, default=5)
    args = p.parse_args(argv)
    params = {k: getattr(args, k) for k in ("n", "p", "m", "hub_count", "hub_degree", "scale", "edge_factor", "a", "b", "c", "leaves", "clique")}
    try:
        edges = synth_graph(args.kind, args.out, args.seed, **params)
    except ValueError as exc:
        p.error(str(exc))
    except OSError as exc:
        print(f"pimtc-synth: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(edges)} edges to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
