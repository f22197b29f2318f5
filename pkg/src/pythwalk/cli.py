"""Command line entry point: ``pythwalk <subcommand> ...``.

Exit codes: 0 success, 1 nothing found within the limit, 2 usage error,
3 verification failure, 4 range error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from .arithmetic import PythTriple, RangeError, triples_from_params, triples_up_to_leg
from .families import DomainError, SIGN_PAIRS, gh_enumerate, n0_witness, n2n_witness
from .graph import LatticePoint, PathError, WalkPath, check_path, path_from_json
from .oracle import DEFAULT_BOUND, classify, shortest_two_step
from .sweep import CorruptSweep, FingerprintMismatch, SweepConfig, report, run_sweep

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_RANGE = 4
EXIT_IO = 5


class _Out:
    def __init__(self, as_json: bool):
        self.json = as_json

    def doc(self, obj) -> None:
        print(json.dumps(obj))

    def line(self, text: str = "") -> None:
        print(text)


def _num(n: int) -> str:
    return f"{n:,}"


def _checked(path: WalkPath, end) -> WalkPath:
    check_path(path, end)
    return path


def _render_walk(path: WalkPath) -> str:
    parts = [str(tuple(path.start))]
    at = path.start
    for s in path.steps:
        at = at + s.vec
        parts.append(f"-({s.dx},{s.dy})-> {tuple(at)}")
    return " ".join(parts)


def cmd_dist(args, out: _Out) -> int:
    v = classify((args.g, args.h), args.bound)
    if v.witness is not None:
        _checked(v.witness, v.target)
    if out.json:
        out.doc(v.to_json())
        return EXIT_OK
    out.line(f"target {tuple(v.target)}: {v.cls.value}")
    if v.witness is not None and v.witness.steps:
        out.line(f"  walk: {_render_walk(v.witness)}")
        out.line(f"  step lengths: {', '.join(_num(n) for n in v.witness.lengths)}")
    if v.certificate is not None:
        c = v.certificate
        out.line(f"  certificate: {c.kind} (reference {tuple(c.reference)})")
        for case in c.cases:
            out.line(f"    gap {case.gap}: {case.rule}")
    if v.bound_used is not None:
        out.line(f"  bound used: {v.bound_used} ({v.source})")
    if v.cls.value == "UNRESOLVED":
        out.line("  no two-step walk within the bound; raise --bound to search further")
    return EXIT_OK


def cmd_path(args, out: _Out) -> int:
    target = LatticePoint(args.g, args.h)
    if args.shortest:
        path = shortest_two_step(target, args.limit)
        if path is None:
            if out.json:
                out.doc(None)
            else:
                out.line(f"no two-step walk to {tuple(target)} with steps <= {args.limit}")
            return EXIT_NOT_FOUND
    else:
        path = classify(target, args.bound).witness
    _checked(path, target)
    if out.json:
        out.doc(path.to_json())
    else:
        out.line(_render_walk(path))
        out.line(f"step lengths: {', '.join(_num(n) for n in path.lengths)}")
    return EXIT_OK


def cmd_families(args, out: _Out) -> int:
    if args.kind == "gh":
        if args.triple is None:
            raise DomainError("gh needs --triple A B C")
        tri = PythTriple(*args.triple)
        signs = None if args.all_signs else tuple(args.signs)
        sols = gh_enumerate(tri, args.count, signs=signs)
    else:
        if args.n is None:
            raise DomainError(f"{args.kind} needs --n N")
        make = n0_witness if args.kind == "n0" else n2n_witness
        sols = (make(n) for n in range(args.n, args.n + args.count))
    for sol in sols:
        _checked(sol.path, sol.target)
        if out.json:
            out.doc(sol.to_json())
        else:
            steps = ", ".join(f"({s.dx},{s.dy})" for s in sol.path.steps)
            lens = ", ".join(_num(n) for n in sol.path.lengths)
            out.line(f"{tuple(sol.target)}: {steps}  lengths {lens}  [{sol.describe()}]")
    return EXIT_OK


def cmd_triples(args, out: _Out) -> int:
    if args.leg_max is not None:
        it = triples_up_to_leg(args.leg_max)
    elif None not in (args.mmax, args.nmax, args.dmax):
        it = triples_from_params(args.mmax, args.nmax, args.dmax)
    else:
        raise DomainError("give --leg-max L or all of --mmax --nmax --dmax")
    for t in it:
        if out.json:
            out.doc({"triple": list(t.legs), "params": list(t.params) if t.params else None})
        else:
            out.line(f"{t.a} {t.b} {t.c}")
    return EXIT_OK


def cmd_sweep(args, out: _Out) -> int:
    config = SweepConfig(
        g_max=args.gmax, h_max=args.hmax, leg_bound=args.bound, output_path=args.out,
        escalation=tuple(args.escalation) if args.escalation else None,
        chunk=args.chunk, resume=args.resume, workers=args.workers,
        use_families=not args.no_families,
        params=tuple(args.params) if args.params else None,
    )
    summary = run_sweep(config)
    if out.json:
        out.doc(summary.to_json())
    else:
        out.line(f"{summary.path}: {summary.total} nodes ({summary.written} new)")
        for cls, n in sorted(summary.counts.items()):
            out.line(f"  {cls}: {n}")
        out.line(f"  beyond two steps: {[tuple(p) for p in summary.beyond_two]}")
    return EXIT_OK


def cmd_report(args, out: _Out) -> int:
    rep = report(args.file, long_ratio=args.long_ratio)
    if out.json:
        out.doc(rep.to_json())
    else:
        out.line(f"{args.file}: {rep.total} records")
        for cls, n in sorted(rep.histogram.items()):
            out.line(f"  {cls}: {n}")
        out.line(f"  without a walk of length <= 2: {[tuple(p) for p in rep.unresolved]}")
        if rep.max_step_node is not None:
            out.line(f"  longest witness step: {_num(rep.max_step_length)} at {tuple(rep.max_step_node)}")
        out.line(f"  witnesses with steps >= {rep.long_ratio:g}x distance: {len(rep.long_steps)}")
        out.line(f"  consistent with the distance-3 conjecture: {rep.conjecture_consistent}")
        for c in rep.corrupt:
            out.line(f"  CORRUPT line {c['line']}: {c['reason']}")
    return EXIT_VERIFY if rep.corrupt else EXIT_OK


def cmd_verify(args, out: _Out) -> int:
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    try:
        try:
            path, stated = path_from_json(json.loads(text))
        except PathError:
            raise
        except ValueError as exc:
            raise PathError(None, f"unreadable path file: {exc}") from exc
        if args.end is not None and stated is not None and tuple(args.end) != tuple(stated):
            raise PathError(None, f"file states end {tuple(stated)} but {tuple(args.end)} was expected")
        end = LatticePoint(*args.end) if args.end is not None else stated
        if end is None:
            end = path.end
        check_path(path, end)
    except PathError as exc:
        if out.json:
            out.doc({"ok": False, "step": exc.index, "reason": exc.reason})
        else:
            out.line(f"FAIL {exc}")
        return EXIT_VERIFY
    if out.json:
        out.doc({"ok": True, "end": list(end), "step_lengths": list(path.lengths)})
    else:
        out.line(f"OK {len(path)}-step walk to {tuple(end)}")
        out.line(f"step lengths: {', '.join(_num(n) for n in path.lengths)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pythwalk", description="Exact distances in the Pythagorean walk graph on Z^2.")
    p.add_argument("--json", action="store_true", help="machine-readable output (one JSON document or JSONL)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", help="classify the distance from the origin to (G, H)")
    d.add_argument("g", type=int)
    d.add_argument("h", type=int)
    d.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                   help="leg bound for the two-step search; UNRESOLVED means none found within it")
    d.set_defaults(func=cmd_dist)

    pa = sub.add_parser("path", help="print a shortest known walk to (G, H)")
    pa.add_argument("g", type=int)
    pa.add_argument("h", type=int)
    pa.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    pa.add_argument("--shortest", action="store_true", help="globally minimal two-step walk")
    pa.add_argument("--limit", type=int, default=4096, help="step length limit for --shortest")
    pa.set_defaults(func=cmd_path)

    f = sub.add_parser("families", help="closed-form two-step walks")
    f.add_argument("kind", choices=["gh", "n0", "n2n"])
    f.add_argument("--triple", type=int, nargs=3, metavar=("A", "B", "C"))
    f.add_argument("--signs", type=int, nargs=2, default=list(SIGN_PAIRS[0]), metavar=("SA", "SB"))
    f.add_argument("--all-signs", action="store_true")
    f.add_argument("--n", type=int)
    f.add_argument("--count", type=int, default=1)
    f.set_defaults(func=cmd_families)

    s = sub.add_parser("sweep", help="classify every node of a grid")
    s.add_argument("--gmax", type=int, required=True)
    s.add_argument("--hmax", type=int, required=True)
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--escalation", type=int, nargs="+")
    s.add_argument("--chunk", type=int, default=8)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--resume", action="store_true")
    s.add_argument("--no-families", action="store_true")
    s.add_argument("--params", type=int, nargs=3, metavar=("M", "N", "D"))
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sweep)

    r = sub.add_parser("report", help="re-verify and aggregate a sweep file")
    r.add_argument("file")
    r.add_argument("--long-ratio", type=float, default=10.0)
    r.set_defaults(func=cmd_report)

    v = sub.add_parser("verify", help="check a path file")
    v.add_argument("file")
    v.add_argument("--end", type=int, nargs=2, metavar=("G", "H"))
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("triples", help="list Pythagorean triples")
    t.add_argument("--leg-max", type=int)
    t.add_argument("--mmax", type=int)
    t.add_argument("--nmax", type=int)
    t.add_argument("--dmax", type=int)
    t.set_defaults(func=cmd_triples)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    out = _Out(args.json)
    try:
        return args.func(args, out)
    except RangeError as exc:
        print(f"range error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (PathError, CorruptSweep) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (FingerprintMismatch, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
