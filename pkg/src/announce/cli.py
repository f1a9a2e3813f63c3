"""Command-line front end.

Machine output is JSON on stdout; ``--pretty`` indents it.  Exit status is 0
for a true result (or a passing suite), 1 for a false one and 2 for any
error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import tiling as T
from .bisim import distinguishing_formula, nbisim
from .errors import AnnounceError, InvalidTiling
from .formula import to_text
from .kripke import dump_model, load_model
from .mcheck import run_check
from .parser import parse
from .suite import run_suite

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


def _dump(obj, pretty):
    print(json.dumps(obj, indent=2 if pretty else None, sort_keys=False))


def _csv(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _sizes(text):
    try:
        return [int(x) for x in _csv(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def cmd_check(args) -> int:
    m, point = load_model(args.model)
    point = args.point or point
    if point is None:
        raise AnnounceError("no --point given and the model file has none")
    report = run_check(m, point, parse(args.formula), budget=args.budget,
                       cal_literal=args.cal_literal)
    print(report.to_json(args.pretty))
    return EXIT_TRUE if report.value else EXIT_FALSE


def cmd_bisim(args) -> int:
    m, _ = load_model(args.model)
    atoms = _csv(args.atoms) if args.atoms is not None else None
    if args.n < 0:
        raise AnnounceError("-n must be a natural number")
    if args.distinguish:
        f = distinguishing_formula(m, atoms, args.n, args.distinguish)
        _dump({"state": args.distinguish, "n": args.n, "formula": to_text(f)}, args.pretty)
    else:
        part = nbisim(m, atoms, args.n)
        blocks = [m.ordered_states_of(b) for b in part.masks]
        _dump({"n": args.n, "atoms": sorted(part.atoms), "blocks": blocks}, args.pretty)
    return EXIT_TRUE


def _grid_for(args, ts):
    if args.grid:
        return T.load_grid(args.grid)
    if args.width is None or args.height is None:
        raise AnnounceError("--kind grid needs --grid or both --width and --height")
    g = T.search_tiling(ts, args.width, args.height)
    if g is None:
        raise InvalidTiling(f"no valid {args.width}x{args.height} tiling for this tile set")
    return g


def cmd_gen(args) -> int:
    kind = args.kind
    if kind in ("sat", "grid") and not args.tiles:
        raise AnnounceError(f"--kind {kind} needs --tiles")
    out = Path(args.out)
    if kind == "grid":
        ts = T.load_tileset(args.tiles)
        pm = T.gen_grid_model(ts, _grid_for(args, ts))
        dump_model(pm.model, out, pm.point)
        return EXIT_TRUE
    if kind == "sat":
        f = T.gen_sat(T.load_tileset(args.tiles))
    elif kind == "local":
        f = T.gen_local(guarded=args.guarded)
    else:
        f = T.gen_cb(kind.split("-", 1)[1], guarded=args.guarded)
    out.write_text(to_text(f) + "\n")
    return EXIT_TRUE


def cmd_tile_search(args) -> int:
    ts = T.load_tileset(args.tiles)
    g = T.search_tiling(ts, args.width, args.height)
    _dump({"found": g is not None, "grid": T.grid_to_dict(g) if g else None}, args.pretty)
    return EXIT_TRUE if g is not None else EXIT_FALSE


def cmd_suite(args) -> int:
    report = run_suite(args.seed, args.sizes, criteria=not args.properties_only)
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    _dump(report, args.pretty)
    return EXIT_TRUE if report["passed"] else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="announce", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--pretty", action="store_true", help="indent JSON output")
        return sp

    c = common(sub.add_parser("check", help="model-check a formula at a state"))
    c.add_argument("--model", required=True)
    c.add_argument("--point", help="state (default: the file's point)")
    c.add_argument("--formula", required=True)
    c.add_argument("--budget", type=_positive, default=None,
                   help="max candidates per quantifier (default: $ANNOUNCE_BUDGET or 2^22)")
    c.add_argument("--cal-literal", action="store_true",
                   help="read [C G] with counter-announcements allowed to be false")
    c.set_defaults(func=cmd_check)

    b = common(sub.add_parser("bisim", help="n-bisimulation partition or formula"))
    b.add_argument("--model", required=True)
    b.add_argument("-n", type=int, required=True)
    b.add_argument("--distinguish", metavar="STATE")
    b.add_argument("--atoms", help="comma-separated atoms (default: all)")
    b.set_defaults(func=cmd_bisim)

    g = common(sub.add_parser("gen", help="generate gadget formulas or grid models"))
    g.add_argument("--kind", required=True,
                   choices=["sat", "local", "cb-apal", "cb-gal", "cb-cal", "grid"])
    g.add_argument("--tiles")
    g.add_argument("--grid", help="grid file (grid kind; default: first tiling found)")
    g.add_argument("--width", type=_positive)
    g.add_argument("--height", type=_positive)
    g.add_argument("--guarded", action="store_true",
                   help="use the guarded edge constraint")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    t = common(sub.add_parser("tile-search", help="find a bounded tiling"))
    t.add_argument("--tiles", required=True)
    t.add_argument("--width", type=_positive, required=True)
    t.add_argument("--height", type=_positive, required=True)
    t.set_defaults(func=cmd_tile_search)

    s = common(sub.add_parser("suite", help="run property suites and acceptance criteria"))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sizes", type=_sizes, default=[2, 3, 4])
    s.add_argument("--properties-only", action="store_true",
                   help="skip the acceptance criteria")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (AnnounceError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
