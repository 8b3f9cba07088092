"""Command-line front end.

Subcommands: solve, enumerate, reduce, chains, penrose, render, validate,
formats. Reports go to standard output as structured text (or JSON with
--format json); files are written atomically. Exit codes: 0 verdict
delivered, 1 usage or input error, 2 budget exhausted.

Default reports never include wall-clock timing, so reruns with different
--jobs values are byte-identical; pass --stats/--timings to get search
counters (and elapsed seconds) on standard error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import io as rio
from .chains import ChainError, chain_indices, check_monotonicity_cone, \
    crossings, extract_chains
from .geometry import GeometryError, PlacementError, ShapeSet
from .patterns import SubshiftSpec, full_shift
from .penrose import PenroseError, penrose_wang4, penrose_wang20, \
    pentagrid_patch
from .reductions import ReductionError, fresh_color_report, phi_r_report
from .solver import BudgetExceeded, enumerate_locally_allowed, \
    refutation_search
from .svg import OVERLAY_NAMES, RenderStyle, render_svg
from .tiles import TilesetError, check_color_validity


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _point_str(pt) -> str:
    return "(" + ",".join(str(c) for c in pt.red.co) + ")"


def _emit_report(args, text_lines, json_data) -> None:
    if args.format == "json":
        sys.stdout.write(rio.emit(json_data))
    else:
        for line in text_lines:
            print(line)


def _print_stats(args, stats) -> None:
    if isinstance(stats, dict):
        pairs = sorted(stats.items())
    else:
        pairs = [
            ("nodes", stats.nodes), ("emitted", stats.emitted),
            ("kept", stats.kept), ("roots", stats.roots),
        ] + sorted(stats.pruned.items())
        if getattr(args, "timings", False):
            pairs.append(("elapsed", f"{stats.elapsed:.3f}s"))
    if getattr(args, "stats", False) or getattr(args, "timings", False):
        print("stats " + " ".join(f"{k}={v}" for k, v in pairs),
              file=sys.stderr)


def _load_spec(args, tileset) -> SubshiftSpec:
    shapeset = tileset.shapeset
    if getattr(args, "shapeset", None):
        shapeset = rio.load_shapeset(args.shapeset)
    if getattr(args, "forbidden", None):
        forbidden = rio.load_patterns(args.forbidden, allow_reserved=True)
        return SubshiftSpec(
            shapeset, forbidden, name=args.forbidden,
            complete=not args.prefix_only,
        )
    return full_shift(shapeset)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_solve(args) -> int:
    ts = rio.load_tileset(args.tileset, allow_reserved=args.allow_reserved)
    spec = _load_spec(args, ts)
    verdict = refutation_search(
        ts, spec, args.rank, budget_nodes=args.budget_nodes,
        budget_seconds=args.budget_seconds, max_period=args.max_period,
    )
    head = verdict.kind
    if verdict.kind == "PERIODIC_CERTIFICATE":
        pa, pb = verdict.periods
        head = f"PERIODIC_CERTIFICATE period {_point_str(pa)},{_point_str(pb)}"
    elif verdict.n is not None:
        head = f"{verdict.kind} {verdict.n}"
    lines = [head]
    if verdict.kind == "PERIODIC_CERTIFICATE":
        lines.append(f"domain {len(verdict.patch)} tiles, "
                     f"sound {str(bool(verdict.certificate_sound)).lower()}")
    if verdict.note:
        lines.append(f"note {verdict.note}")
    data = {
        "verdict": verdict.kind,
        "n": verdict.n,
        "periods": None if verdict.periods is None else [
            list(p.red.co) for p in verdict.periods
        ],
        "certificate_sound": verdict.certificate_sound,
        "note": verdict.note,
    }
    _emit_report(args, lines, data)
    _print_stats(args, verdict.stats)
    if args.out and verdict.patch is not None:
        rio.save_patch(args.out, verdict.patch)
    return 2 if verdict.kind == "BUDGET_EXHAUSTED" else 0


def _cmd_enumerate(args) -> int:
    ts = rio.load_tileset(args.tileset, allow_reserved=args.allow_reserved)
    spec = _load_spec(args, ts)
    forbidden = spec.forbidden_prefix(args.rank)
    result = enumerate_locally_allowed(
        args.rank, forbidden, ts, budget_nodes=args.budget_nodes,
        budget_seconds=args.budget_seconds, jobs=args.jobs,
    )
    status = "complete" if result.complete else "incomplete"
    _emit_report(
        args,
        [f"A_{args.rank} {len(result)} patterns {status}"],
        {"rank": args.rank, "count": len(result),
         "complete": result.complete},
    )
    _print_stats(args, result.stats)
    if args.out:
        rio.save_patterns(args.out, result.patterns)
    return 0 if result.complete else 2


def _cmd_reduce(args) -> int:
    if args.mode == "wang-to-rhombus":
        if not args.wang or not args.shapeset or args.shape is None:
            raise _UsageError(
                "reduce wang-to-rhombus needs --wang, --shapeset and --shape"
            )
        wang = rio.load_wang(args.wang)
        ss = rio.load_shapeset(args.shapeset)
        c1, c2 = (int(x) for x in args.shape.split(","))
        report = phi_r_report(wang, ss, ss.get(c1, c2))
    else:
        if not args.tileset or not args.shapeset:
            raise _UsageError("reduce fresh needs --tileset and --shapeset")
        ts = rio.load_tileset(args.tileset, allow_reserved=args.allow_reserved)
        ss = rio.load_shapeset(args.shapeset)
        report = fresh_color_report(ts, ss)
    report.check()
    data = {
        "kind": report.kind,
        "size": len(report.tileset),
        "counts": dict(sorted(report.counts.items())),
        "input_sizes": dict(sorted(report.input_sizes.items())),
        "chosen": list(report.chosen),
    }
    _emit_report(args, report.lines(), data)
    if args.out:
        rio.save_tileset(args.out, report.tileset)
    return 0


def _cmd_chains(args) -> int:
    patch = rio.load_patch(args.patch, allow_reserved=True)
    try:
        chains = chain_indices(patch)
        indexed = True
    except GeometryError:
        chains = extract_chains(patch)
        indexed = False
    max_cross = 0
    for i in range(len(chains)):
        for j in range(i + 1, len(chains)):
            max_cross = max(max_cross, crossings(chains[i], chains[j]))
    violations = sum(
        0 if check_monotonicity_cone(patch, c, m) else 1
        for c in chains for m in c.members
    )
    lines = [f"chains {len(chains)}" + ("" if indexed else " (unindexed)")]
    entries = []
    for k, c in enumerate(chains):
        idx = c.index if indexed else None
        lines.append(
            f"chain {k} normal {c.normal} "
            + (f"index {idx} " if indexed else "")
            + f"length {len(c)}"
        )
        entries.append({"normal": c.normal, "index": idx, "length": len(c)})
    lines.append(f"max-crossings {max_cross}")
    lines.append(
        "monotonicity-cone ok" if violations == 0
        else f"monotonicity-cone violations {violations}"
    )
    _emit_report(args, lines, {
        "chains": entries, "indexed": indexed, "max_crossings": max_cross,
        "monotonicity_violations": violations,
    })
    return 0


def _cmd_penrose(args) -> int:
    if args.mode == "tileset":
        ts = penrose_wang20() if args.which == "20" else penrose_wang4()
        _emit_report(
            args,
            [f"{ts.name} {len(ts.tiles)} tiles on {len(ts.shapeset)} shapes"],
            {"name": ts.name, "tiles": len(ts.tiles),
             "shapes": len(ts.shapeset)},
        )
        if args.out:
            rio.save_tileset(args.out, ts)
        return 0
    offsets = tuple(Fraction(x) for x in args.offsets.split(","))
    patch = pentagrid_patch(args.window, offsets, colored=args.colored)
    _emit_report(
        args,
        [f"pentagrid window {args.window}: {len(patch)} tiles"
         + (" (colored)" if args.colored else "")],
        {"window": args.window, "tiles": len(patch),
         "colored": args.colored},
    )
    if args.out:
        rio.save_patch(args.out, patch)
    if args.svg:
        rio.write_text(args.svg, render_svg(patch, _style_from(args)))
    return 0


def _style_from(args) -> RenderStyle:
    overlays = frozenset(
        s for s in (args.overlays or "").split(",") if s
    )
    return RenderStyle(scale=args.scale, overlays=overlays)


def _cmd_render(args) -> int:
    patch = rio.load_patch(args.patch, allow_reserved=True)
    rio.write_text(args.svg, render_svg(patch, _style_from(args)))
    print(f"wrote {args.svg}")
    return 0


def _cmd_validate(args) -> int:
    kind, obj = rio.load_any(args.file, allow_reserved=args.allow_reserved)
    if kind == "shapeset":
        summary = f"order {obj.basis.order}, {len(obj)} shapes"
    elif kind == "tileset":
        summary = f"{len(obj.tiles)} tiles on {len(obj.shapeset)} shapes"
    elif kind in ("patch", "pattern"):
        patch = obj if kind == "patch" else obj.patch
        note = ""
        try:
            patch.validate()
        except PlacementError as e:
            # a scattered sample (e.g. a pentagrid dual) is a fine document
            if e.code not in ("DISCONNECTED", "HOLE"):
                raise
            note = f" ({e.code.lower()} support)"
        colored = any(rh.colors is not None for rh in patch)
        if colored and not check_color_validity(patch):
            print(f"error: {args.file}: edge colors do not match",
                  file=sys.stderr)
            return 1
        summary = (f"{len(patch)} placements"
                   + (" colored" if colored else "") + note)
    elif kind == "patterns":
        summary = f"{len(obj)} patterns"
    else:
        summary = f"{len(obj.tiles)} tiles, {len(obj.colors)} colors"
    _emit_report(args, [f"ok {kind}: {summary}"],
                 {"ok": True, "kind": kind, "summary": summary})
    return 0


def _cmd_formats(args) -> int:
    print(rio.__doc__.strip())
    return 0


# ---------------------------------------------------------------------------
# parser


def _common(sub, budget=False, jobs=False):
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--out", help="write the result document here")
    sub.add_argument("--allow-reserved", action="store_true",
                     help="accept '!'-reserved colors in input files")
    sub.add_argument("--stats", action="store_true",
                     help="print search counters to stderr")
    sub.add_argument("--timings", action="store_true",
                     help="include elapsed wall time in stderr stats")
    if budget:
        sub.add_argument("--rank", "-n", type=int, required=True,
                         help="pattern rank / search depth")
        sub.add_argument("--budget-nodes", type=int, default=None)
        sub.add_argument("--budget-seconds", type=float, default=None)
        sub.add_argument("--forbidden",
                         help="patterns file with the forbidden list")
        sub.add_argument("--prefix-only", action="store_true",
                         help="treat the forbidden file as a prefix, not the "
                              "whole list")
        sub.add_argument("--shapeset",
                         help="shapeset file for the ambient subshift "
                              "(default: the tileset's shapes)")
    if jobs:
        sub.add_argument("--jobs", type=int, default=1)


def build_parser() -> _Parser:
    p = _Parser(prog="rhombwang", description=__doc__.splitlines()[0])
    subs = p.add_subparsers(dest="command", required=True)

    s = subs.add_parser("solve", parents=[], help="refutation search verdict")
    s.add_argument("--tileset", required=True)
    _common(s, budget=True)
    s.add_argument("--max-period", type=int, default=3)
    s.set_defaults(func=_cmd_solve)

    s = subs.add_parser("enumerate", help="enumerate locally allowed patterns")
    s.add_argument("--tileset", required=True)
    _common(s, budget=True, jobs=True)
    s.set_defaults(func=_cmd_enumerate)

    s = subs.add_parser("reduce", help="compute a reduction tileset")
    s.add_argument("mode", choices=("wang-to-rhombus", "fresh"))
    s.add_argument("--wang", help="square Wang tileset file")
    s.add_argument("--shapeset", help="target shapeset file")
    s.add_argument("--shape", help="coding shape as 'c1,c2'")
    s.add_argument("--tileset", help="tileset on the shape subset (fresh)")
    _common(s)
    s.set_defaults(func=_cmd_reduce)

    s = subs.add_parser("chains", help="chain report for a patch")
    s.add_argument("--patch", required=True)
    _common(s)
    s.set_defaults(func=_cmd_chains)

    s = subs.add_parser("penrose", help="Penrose tilesets and pentagrid patches")
    s.add_argument("mode", choices=("gen", "tileset"))
    s.add_argument("--window", type=int, default=1,
                   help="pentagrid line indices run over [-window, window]")
    s.add_argument("--offsets",
                   default="1/7,2/7,3/7,-6/7,0",
                   help="five grid offsets as comma-separated fractions")
    s.add_argument("--colored", action="store_true",
                   help="decorate the patch with the 20-tile colors")
    s.add_argument("--which", choices=("20", "4"), default="20",
                   help="tileset variant (penrose tileset)")
    s.add_argument("--svg", help="also render the patch here")
    s.add_argument("--scale", type=float, default=48.0)
    s.add_argument("--overlays",
                   help=f"comma-separated subset of {','.join(OVERLAY_NAMES)}")
    _common(s)
    s.set_defaults(func=_cmd_penrose)

    s = subs.add_parser("render", help="render a patch file to SVG")
    s.add_argument("--patch", required=True)
    s.add_argument("--svg", required=True)
    s.add_argument("--scale", type=float, default=48.0)
    s.add_argument("--overlays",
                   help=f"comma-separated subset of {','.join(OVERLAY_NAMES)}")
    _common(s)
    s.set_defaults(func=_cmd_render)

    s = subs.add_parser("validate", help="parse and check any document")
    s.add_argument("file")
    _common(s)
    s.set_defaults(func=_cmd_validate)

    s = subs.add_parser("formats", help="print the document schemas")
    s.set_defaults(func=_cmd_formats, format="text")
    return p


def run(argv=None) -> int:
    """Dispatch a CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except rio.IOFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        print("run 'rhombwang formats' for the document schemas",
              file=sys.stderr)
        return 1
    except (GeometryError, PlacementError, TilesetError, ReductionError,
            ChainError, PenroseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
