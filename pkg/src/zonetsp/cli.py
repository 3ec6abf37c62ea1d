"""Command-line entry point: ``zonetsp solve|verify|plot|bench``.

Exit status: 0 success, 1 usage error, 2 parse error, 3 infeasible plan.

The ``solve`` report on stdout is line-stable, one ``key: value`` per line
(instance, dimension, zones, candidates, evaluated, tour, length and, with
``--oracle-check``, oracle). Timings go to stderr so reports from repeated
runs compare byte for byte.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from .oracle import DEFAULT_BUDGET, held_karp
from .plot import render_svg
from .sweep import InfeasibleError, canonical_cycle, format_trace, run_sweep
from .tsplib import Instance, ParseError, parse_instance, parse_tour, tour_length
from .zoning import PlanError, auto_zone, load_zone_plan, rotate_instance, widen_plan

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _even_cap(text: str) -> int:
    n = int(text)
    if n < 2 or n % 2:
        raise argparse.ArgumentTypeError(f"must be an even integer >= 2, got {text}")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return n


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str) -> Instance:
    return parse_instance(_read(path))


def _plan(args, inst: Instance):
    if args.zones is not None:
        return load_zone_plan(_read(args.zones), inst)
    if args.auto_zones is not None:
        size = min(args.auto_zones, inst.dimension)
        return auto_zone(rotate_instance(inst, args.rotate), size, args.max_n)
    return None


def _write(dest: str, text: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _cpu() -> float:
    t = os.times()
    return t.user + t.system + t.children_user + t.children_system


def cmd_solve(args) -> int:
    if (args.zones is None) == (args.auto_zones is None):
        raise UsageError("solve needs exactly one of --zones or --auto-zones")
    inst = _load(args.instance)
    plan = _plan(args, inst)
    wall, cpu = time.perf_counter(), _cpu()
    tour = run_sweep(inst, plan, keep_ties=args.keep_ties, trace=args.trace is not None,
                     workers=args.threads)
    wall, cpu = time.perf_counter() - wall, _cpu() - cpu
    seq = canonical_cycle(tour.sequence)
    out = [
        f"instance: {inst.name}",
        f"dimension: {inst.dimension}",
        f"zones: {len(plan)}",
        " ".join(["candidates:", *map(str, tour.candidate_counts)]),
        f"evaluated: {tour.evaluated}",
        "tour: " + " ".join(map(str, seq)),
        f"length: {tour.length}",
    ]
    if args.oracle_check:
        if inst.dimension > DEFAULT_BUDGET.max_vertices_heldkarp:
            out.append(f"oracle: SKIPPED dimension above {DEFAULT_BUDGET.max_vertices_heldkarp}")
        else:
            _, best = held_karp(inst)
            out.append("oracle: MATCH" if best == tour.length else f"oracle: MISMATCH optimum {best}")
    if args.trace == "-":
        out.append(format_trace(tour.states, args.trace_style).rstrip("\n"))
    print("\n".join(out))
    if args.trace not in (None, "-"):
        _write(args.trace, format_trace(tour.states, args.trace_style))
    if args.svg:
        _write(args.svg, render_svg(inst, plan, seq))
    if args.tour_out:
        _write(args.tour_out, "\n".join(map(str, seq)) + "\n")
    print(f"elapsed: {wall:.3f} s  cpu: {cpu:.3f} s", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    tour = parse_tour(_read(args.tour))
    print(f"length: {tour_length(inst, tour)}")
    print("valid: yes")
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.zones is not None and args.auto_zones is not None:
        raise UsageError("plot takes at most one of --zones or --auto-zones")
    inst = _load(args.instance)
    plan = _plan(args, inst)
    tour = None
    if args.tour:
        tour = parse_tour(_read(args.tour))
        tour_length(inst, tour)  # validates
    _write(args.output, render_svg(inst, plan, tour))
    return EXIT_OK


def _timed(inst, plan, args):
    wall, cpu = time.perf_counter(), _cpu()
    tour = run_sweep(inst, plan, keep_ties=args.keep_ties, workers=args.threads)
    return tour, time.perf_counter() - wall, _cpu() - cpu


def cmd_bench(args) -> int:
    if (args.zones is None) == (args.auto_zones is None):
        raise UsageError("bench needs exactly one of --zones or --auto-zones")
    inst = _load(args.instance)
    plan = _plan(args, inst)
    runs = [_timed(inst, plan, args) for _ in range(args.repeat)]
    tour, wall, cpu = min(runs, key=lambda r: r[1])
    print(f"instance: {inst.name}")
    print(f"length: {tour.length}")
    print(f"evaluated: {tour.evaluated}")
    print(f"wall: {wall:.3f}")
    print(f"cpu: {cpu:.3f}")
    if args.full:
        wide = widen_plan(plan, inst, args.max_n)
        ftour, fwall, fcpu = _timed(inst, wide, args)
        print(f"full length: {ftour.length}")
        print(f"full evaluated: {ftour.evaluated}")
        print(f"full wall: {fwall:.3f}")
        print(f"full cpu: {fcpu:.3f}")
        print(f"evaluation ratio: {ftour.evaluated / max(tour.evaluated, 1):.1f}")
        print(f"time ratio: {fwall / max(wall, 1e-9):.1f}")
    return EXIT_OK


def _zone_args(p, required_note: str):
    p.add_argument("--zones", metavar="FILE", help=f"zone config file ({required_note})")
    p.add_argument("--auto-zones", type=_positive, metavar="K",
                   help="cut into x-sorted zones of about K vertices")
    p.add_argument("--max-n", type=_even_cap, default=4, metavar="N",
                   help="largest crossing count for automatic or widened pools (default 4)")
    p.add_argument("--rotate", type=float, default=0.0, metavar="DEG",
                   help="rotate points before automatic zoning; output is unrotated")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zonetsp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("instance")
    _zone_args(p, "or --auto-zones")
    p.add_argument("--keep-ties", action="store_true", help="retain all co-minimal candidates")
    p.add_argument("--trace", metavar="FILE", help="write per-zone candidates ('-' for stdout)")
    p.add_argument("--trace-style", choices=("contracted", "split"), default="contracted")
    p.add_argument("--svg", metavar="FILE", help="write an SVG plot of zones and tour")
    p.add_argument("--tour-out", metavar="FILE", help="write the tour, one id per line")
    p.add_argument("--oracle-check", action="store_true",
                   help="compare with the Held-Karp optimum (small instances)")
    p.add_argument("--threads", type=_positive, default=None,
                   help="worker processes (default: $ZONETSP_THREADS or 1)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a tour file and print its length")
    p.add_argument("instance")
    p.add_argument("tour")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render instance, zones and tour as SVG")
    p.add_argument("instance")
    _zone_args(p, "optional")
    p.add_argument("--tour", metavar="FILE")
    p.add_argument("-o", "--output", default="-", metavar="FILE")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("bench", help="time a solve; --full compares against widened pools")
    p.add_argument("instance")
    _zone_args(p, "or --auto-zones")
    p.add_argument("--keep-ties", action="store_true")
    p.add_argument("--threads", type=_positive, default=None)
    p.add_argument("--repeat", type=_positive, default=1)
    p.add_argument("--full", action="store_true",
                   help="also run with every pool widened to the whole next zone")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"zonetsp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, PlanError, ValueError) as exc:
        print(f"zonetsp: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InfeasibleError as exc:
        print(f"zonetsp: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
