"""Command-line entry point.

Exit codes: 0 ok, 1 the run finished but something did not hold (an
outbreak escaped, a closed form disagreed), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .census import MAX_ENUM_N, gap_census
from .config import ConfigError, ScenarioConfig, config_from_dict, parse_config
from .grid import TOPOLOGIES, get_topology
from .protocol import CP2_METRICS, DEFAULT_MAX_STEPS, ProtocolError, ProtocolOutcome, run
from .render import FORMATS, render_board, report_summary
from .strategies import (
    KpqParams,
    SizeCapExceeded,
    greedy,
    make_kpq,
    optimal_bruteforce,
    so_formula,
    su_formula,
    unburn,
)
from .tree import TreeError, parse_tree

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("firefighter")


class InputError(Exception):
    pass


def _parse_cells(text: str) -> list[list[int]]:
    """``"0,0;0,1"`` -> ``[[0, 0], [0, 1]]``."""
    cells = []
    for chunk in text.replace(" ", "").split(";"):
        if not chunk:
            continue
        parts = chunk.split(",")
        try:
            x, y = (int(v) for v in parts)
        except ValueError:
            raise InputError(f"malformed coordinate {chunk!r}; expected x,y") from None
        cells.append([x, y])
    return cells


def _grid_config(args: argparse.Namespace) -> ScenarioConfig:
    if args.config:
        try:
            cfg = parse_config(Path(args.config).read_text())
        except OSError as e:
            raise InputError(f"cannot read config: {e}") from None
        if cfg.mode != "grid":
            raise InputError(f"config mode is {cfg.mode!r}, expected 'grid'")
        return cfg
    if args.topology is None or args.initial is None or args.budget is None:
        raise InputError("give --config or all of --topology, --initial, --budget")
    raw = {
        "mode": "grid",
        "topology": args.topology,
        "initial": _parse_cells(args.initial),
        "budget": args.budget,
        "tie": args.tie,
        "seed": args.seed,
        "max_steps": args.max_steps,
        "cp2_metric": args.cp2_metric,
        "distance_rule": not args.no_distance_rule,
    }
    return config_from_dict(raw)


def _run_grid(cfg: ScenarioConfig) -> list[ProtocolOutcome]:
    return run(
        get_topology(cfg.topology),
        cfg.initial,
        cfg.budget,
        tie_policy=cfg.tie,
        seed=cfg.seed,
        max_steps=cfg.max_steps,
        cp2_metric=cfg.cp2_metric,
        distance_rule=cfg.distance_rule,
    )


def trace_records(outcomes: list[ProtocolOutcome]):
    for o in outcomes:
        for r in o.trace:
            yield {
                "branch": o.branch,
                "t": r.t,
                "cells": [list(c) for c in r.cells],
                "decided_by": r.decided_by,
                "counts": r.counts,
                "raw_counts": r.raw_counts,
                "iv1": len(r.iv1),
                "iv2": r.iv2_size,
            }


def cmd_tree_run(args: argparse.Namespace) -> int:
    try:
        tree = parse_tree(Path(args.tree).read_text())
    except OSError as e:
        raise InputError(f"cannot read tree: {e}") from None
    algo = {"greedy": greedy, "unburn": unburn, "optimal": optimal_bruteforce}[args.algo]
    res = algo(tree)
    seq = " ".join("-" if v is None else str(v) for v in res.seq)
    print(f"algo={args.algo} n={tree.n} saved={res.saved}")
    print(f"sequence: {seq}")
    print("weights: " + " ".join(map(str, res.per_step_weight)))
    return EXIT_OK


def cmd_tree_kpq(args: argparse.Namespace) -> int:
    params = KpqParams(args.k, args.p, args.q)
    tree = make_kpq(params)
    g, u = greedy(tree).saved, unburn(tree).saved
    o = optimal_bruteforce(tree, cap=max(tree.n, 60)).saved
    print(tree.to_text(), end="")
    print(f"greedy={g} unburn={u} optimal={o}")
    if not params.adversarial:
        print("closed forms: not applicable for these parameters")
        return EXIT_OK
    so, su = so_formula(params), su_formula(params)
    ok = o == so and u == su
    print(f"closed forms: optimal={so} unburn={su} {'match' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_gap_scan(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        raise InputError("--jobs must be ≥ 1")
    out = open(args.out, "a") if args.out else sys.stdout
    try:
        result = gap_census(
            args.n,
            with_c6=not args.without_c6,
            jobs=args.jobs,
            guard=max(args.n, 1),
            on_gap=lambda rep: print(json.dumps(rep.to_record()), file=out, flush=True),
        )
    finally:
        if out is not sys.stdout:
            out.close()
    print(result.summary())
    return EXIT_OK


def cmd_grid_run(args: argparse.Namespace) -> int:
    cfg = _grid_config(args)
    outcomes = _run_grid(cfg)
    if args.out:
        with open(args.out, "a") as fh:
            for rec in trace_records(outcomes):
                fh.write(json.dumps(rec) + "\n")
    print(report_summary(outcomes), end="")
    return EXIT_OK if all(o.contained for o in outcomes) else EXIT_MISMATCH


def cmd_grid_render(args: argparse.Namespace) -> int:
    cfg = _grid_config(args)
    outcomes = _run_grid(cfg)
    if not 0 <= args.branch < len(outcomes):
        raise InputError(f"--branch must be in 0..{len(outcomes) - 1}")
    doc = render_board(outcomes[args.branch], args.format)
    if args.out:
        Path(args.out).write_text(doc)
    else:
        sys.stdout.write(doc)
    return EXIT_OK


def _grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON scenario file (overrides the flags below)")
    p.add_argument("--topology", choices=TOPOLOGIES)
    p.add_argument("--initial", help='infected cells, e.g. "0,0;0,1"')
    p.add_argument("--budget", type=int, help="vaccines per step")
    p.add_argument("--tie", choices=("random", "branch-all"), default="branch-all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    p.add_argument("--cp2-metric", choices=CP2_METRICS, default="pairs")
    p.add_argument("--no-distance-rule", action="store_true", help="drop the distance-two placement rule")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="firefighter", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="group", required=True)

    tree = sub.add_parser("tree", help="strategies on rooted trees").add_subparsers(dest="cmd", required=True)
    p = tree.add_parser("run", help="run a strategy on a tree file")
    p.add_argument("tree", help="tree text file")
    p.add_argument("--algo", choices=("greedy", "unburn", "optimal"), default="greedy")
    p.set_defaults(func=cmd_tree_run)
    p = tree.add_parser("kpq", help="build the (k,p,q) tree and compare strategies")
    for name in ("k", "p", "q"):
        p.add_argument(name, type=int)
    p.set_defaults(func=cmd_tree_kpq)

    gap = sub.add_parser("gap", help="LP/IP integrality gaps").add_subparsers(dest="cmd", required=True)
    p = gap.add_parser("scan", help="census of all rooted trees on n vertices")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--without-c6", action="store_true", help="omit the strengthening cut rows")
    p.add_argument("--out", help="append gap trees as JSON lines here")
    p.set_defaults(func=cmd_gap_scan)

    grid = sub.add_parser("grid", help="containment protocol on grids").add_subparsers(dest="cmd", required=True)
    p = grid.add_parser("run", help="run the protocol and print a summary")
    _grid_args(p)
    p.add_argument("--out", help="append a JSON-lines trace here")
    p.set_defaults(func=cmd_grid_run)
    p = grid.add_parser("render", help="draw the final board of one branch")
    _grid_args(p)
    p.add_argument("--format", choices=FORMATS, default="ascii")
    p.add_argument("--branch", type=int, default=0, help="index into the outcome list")
    p.add_argument("--out", help="write the board here instead of stdout")
    p.set_defaults(func=cmd_grid_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "n", None) is not None and not 1 <= args.n <= MAX_ENUM_N:
        print(f"error: --n must be in 1..{MAX_ENUM_N}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except ConfigError as e:
        for msg in e.errors:
            print(f"error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except ProtocolError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (InputError, TreeError, SizeCapExceeded, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
