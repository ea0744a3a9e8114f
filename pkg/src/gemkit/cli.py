"""Command-line driver.

Commands read a stream of text blocks (a file argument or standard input)
and write blocks to standard output, so they can be piped::

    gemkit gen j2 --n 10 --seed 3 | gemkit resolve --axis 1 | gemkit twist-all | gemkit sequence

Exit codes: 0 success, 1 input error, 2 property failure, 3 search failure.
Errors go to standard error as ``error[<reason-code>]: <message>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import TextIO

from . import generators
from .core import ColoredGraph, gem_report, state_hash
from .errors import GemError, GemSyntaxError, SemanticError
from .formats import (
    Block,
    ResolutionRecord,
    export_dot,
    normalize_0consecutive,
    parse_stream,
    serialize_diagram,
    serialize_gem,
    serialize_resolution,
    serialize_sequence,
    serialize_trace,
    trace_final,
)
from .gray import build_gray_graph
from .jordan import (
    ChordDiagram,
    j2_from_chords,
    j2_obstruction,
    make_bloboid,
    random_chord_diagram,
    recognize_j2,
    thickening_sequence,
    twist_all,
)
from .moves import Move, MoveTrace, find_dipoles, replay
from .resolve import search_resolution
from .twistors import enumerate_antipoles, enumerate_twistors

EXIT_OK, EXIT_INPUT, EXIT_PROPERTY, EXIT_SEARCH = 0, 1, 2, 3


class CliFailure(Exception):
    def __init__(self, code: int, reason: str, message: str):
        super().__init__(message)
        self.code = code
        self.reason = reason


def _read(path: str | None, stdin: TextIO) -> list[Block]:
    if path in (None, "-"):
        text = stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CliFailure(EXIT_INPUT, "io-error", str(exc)) from exc
    return parse_stream(text)


def _last(blocks: list[Block], kind: str, required: bool = True) -> Block | None:
    found = [b for b in blocks if b.kind == kind]
    if not found:
        if required:
            raise CliFailure(EXIT_INPUT, f"missing-{kind}", f"the input holds no {kind} block")
        return None
    return found[-1]


def _gem_before(blocks: list[Block], block: Block) -> ColoredGraph:
    gems = [b for b in blocks if b.kind == "gem" and b.line < block.line]
    if not gems:
        raise CliFailure(EXIT_INPUT, "missing-gem", f"no gem precedes the {block.kind} block")
    return gems[-1].value


def _trace_for(blocks: list[Block], G: ColoredGraph) -> MoveTrace:
    """The incoming trace if it ends at ``G``, else a fresh trace from ``G``."""
    tb = _last(blocks, "trace", required=False)
    if tb is not None and trace_final(tb.value).pairing == G.pairing:
        trace = tb.value
        trace.current = G
        return trace
    return MoveTrace(G)


# ----------------------------------------------------------------------------
# commands


def cmd_check(args, out: TextIO) -> int:
    status = EXIT_OK
    for b in _read(args.file, sys.stdin):
        if b.kind != "gem":
            continue
        rep = gem_report(b.value)
        if args.json:
            row = {"name": b.value.name, **rep.as_dict()}
            out.write(json.dumps(row, sort_keys=True) + "\n")
        else:
            out.write(f"{b.value.name}: {rep.summary()}\n")
        if not rep.is_gem:
            status = EXIT_PROPERTY
    return status


def cmd_info(args, out: TextIO) -> int:
    G = _last(_read(args.file, sys.stdin), "gem").value
    rep = gem_report(G)
    out.write(f"name {G.name}\nhash {state_hash(G)}\n{rep.summary()}\n")
    for size in (1, 2, 3):
        out.write(f"{size}-dipoles {len(find_dipoles(G, size))}\n")
    if rep.is_gem and rep.is_bipartite:
        for axis in (1, 2, 3):
            out.write(f"axis {axis}: twistors {len(enumerate_twistors(G, axis))} "
                      f"antipoles {len(enumerate_antipoles(G, axis))}\n")
    return EXIT_OK if rep.is_gem else EXIT_PROPERTY


def cmd_twistors(args, out: TextIO) -> int:
    G = _last(_read(args.file, sys.stdin), "gem").value
    axes = [args.axis] if args.axis else [1, 2, 3]
    for axis in axes:
        for t in enumerate_twistors(G, axis):
            out.write(f"axis={axis} twistor {t.label}\n")
        for a in enumerate_antipoles(G, axis):
            out.write(f"axis={axis} antipole {a.label}\n")
    return EXIT_OK


def cmd_gray(args, out: TextIO) -> int:
    G = _last(_read(args.file, sys.stdin), "gem").value
    gray = build_gray_graph(G, args.axis)
    out.write(f"gray axis={args.axis} nodes={len(gray.nodes)} edges={len(gray.edges)} "
              f"connected={'yes' if gray.is_connected() else 'no'}\n")
    for idx, node in enumerate(gray.nodes):
        out.write(f"node {idx}: " + " ".join(map(str, node.vertices)) + "\n")
    for e in gray.edges:
        (a, b), (c, d) = e.e_pair
        out.write(f"edge {e.label} {e.origin} {e.source}->{e.target} e-pair {a}-{b} {c}-{d}\n")
    return EXIT_OK


def cmd_resolve(args, out: TextIO) -> int:
    G = _last(_read(args.file, sys.stdin), "gem").value
    outcome = search_resolution(G, args.axis, args.budget)
    if outcome.resolution is None:
        raise CliFailure(EXIT_SEARCH, outcome.reason or "no-resolution",
                         f"no {args.axis}-resolution found ({outcome.expanded} nodes expanded)")
    text = serialize_gem(G) + serialize_resolution(outcome.resolution)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_twist_all(args, out: TextIO) -> int:
    blocks = _read(args.file, sys.stdin)
    rb = _last(blocks, "resolution")
    rec: ResolutionRecord = rb.value
    G = _gem_before(blocks, rb)
    r = rec.bind(G)
    trace = _trace_for(blocks, G)
    twist_all(G, r, trace=trace)
    if args.keep_blobs:
        H = trace.current
    else:
        H = trace.apply(Move("BlobCancelAll"))
    out.write(serialize_trace(trace))
    out.write(serialize_gem(H.renamed(G.name)))
    return EXIT_OK


def cmd_j2(args, out: TextIO) -> int:
    blocks = _read(args.file, sys.stdin)
    last = blocks[-1] if blocks else None
    if last is None:
        raise CliFailure(EXIT_INPUT, "empty-input", "nothing to read")
    if last.kind == "jordan":
        d: ChordDiagram = last.value
        d.validate()
        out.write(serialize_gem(j2_from_chords(d, args.axis)))
        return EXIT_OK
    G = _last(blocks, "gem").value
    d = recognize_j2(G, args.axis)
    if d is None:
        raise CliFailure(EXIT_PROPERTY, "not-j2", f"not a J²-gem: {j2_obstruction(G, args.axis)}")
    out.write(serialize_diagram(d))
    return EXIT_OK


def cmd_sequence(args, out: TextIO) -> int:
    blocks = _read(args.file, sys.stdin)
    G = _last(blocks, "gem").value
    trace = _trace_for(blocks, G)
    seq = thickening_sequence(G, args.axis)
    trace.extend(seq.trace)
    out.write(serialize_sequence(seq))
    out.write(serialize_trace(trace))
    out.write(serialize_gem(seq.terminal.renamed(f"{G.name}-bloboid")))
    return EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    if args.what == "bloboid":
        G = make_bloboid(args.n)
    elif args.what == "j2":
        d = random_chord_diagram(args.n, args.seed)
        G = j2_from_chords(d, args.axis).renamed(f"j2-{args.n}-{args.seed}")
    elif args.what == "random-walk":
        G = generators.random_dipole_walk(args.steps, args.seed)
    elif args.what == "crystallization":
        G = generators.random_crystallization(args.steps, args.seed, twists=args.twists)
    else:
        G = generators.NAMED[args.what]()
    if args.normalize:
        G = normalize_0consecutive(G)
    out.write(serialize_gem(G))
    return EXIT_OK


def cmd_dot(args, out: TextIO) -> int:
    blocks = _read(args.file, sys.stdin)
    G = _last(blocks, "gem").value
    rb = _last(blocks, "resolution", required=False)
    highlight = rb.value.bind(_gem_before(blocks, rb)) if rb is not None else None
    axis = args.axis or (highlight.axis if highlight is not None else None)
    gray = build_gray_graph(G, axis) if axis else None
    if highlight is not None and _gem_before(blocks, rb).pairing != G.pairing:
        highlight = None
    out.write(export_dot(G, gray, highlight))
    return EXIT_OK


def cmd_replay(args, out: TextIO) -> int:
    traces = [b for b in _read(args.file, sys.stdin) if b.kind == "trace"]
    if not traces:
        raise CliFailure(EXIT_INPUT, "missing-trace", "the input holds no trace block")
    for b in traces:
        try:
            H = replay(b.value)
        except GemError as exc:
            raise CliFailure(EXIT_PROPERTY, "replay-mismatch", f"trace at line {b.line}: {exc}") from exc
        out.write(f"trace line {b.line}: {len(b.value)} moves ok, final {state_hash(H)}\n")
    return EXIT_OK


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gemkit", description="Gem verification, moves, gray graphs and J²-gems.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(sp: argparse.ArgumentParser) -> argparse.ArgumentParser:
        sp.add_argument("file", nargs="?", help="input stream (default: standard input)")
        return sp

    s = with_file(sub.add_parser("check", help="report v, t, b and the gem condition"))
    s.add_argument("--json", action="store_true", help="one JSON object per gem")
    s.set_defaults(func=cmd_check)

    with_file(sub.add_parser("info", help="summary of a gem")).set_defaults(func=cmd_info)

    s = with_file(sub.add_parser("twistors", help="list twistors and antipoles"))
    s.add_argument("--axis", type=int, choices=(1, 2, 3))
    s.set_defaults(func=cmd_twistors)

    s = with_file(sub.add_parser("gray", help="print the gray graph for an axis"))
    s.add_argument("--axis", type=int, choices=(1, 2, 3), default=1)
    s.set_defaults(func=cmd_gray)

    s = with_file(sub.add_parser("resolve", help="search for a resolution"))
    s.add_argument("--axis", type=int, choices=(1, 2, 3), default=1)
    s.add_argument("--budget", type=int, default=100_000, help="node-expansion limit")
    s.add_argument("-o", "--output", help="write gem and resolution here instead of stdout")
    s.set_defaults(func=cmd_resolve)

    s = with_file(sub.add_parser("twist-all", help="twist every edge of a resolution"))
    s.add_argument("--keep-blobs", action="store_true", help="skip the final blob cancellation")
    s.set_defaults(func=cmd_twist_all)

    s = with_file(sub.add_parser("j2", help="build a J²-gem from a diagram, or recognize one"))
    s.add_argument("--axis", type=int, choices=(1, 2, 3), default=1)
    s.set_defaults(func=cmd_j2)

    s = with_file(sub.add_parser("sequence", help="thickening sequence of a J²-gem"))
    s.add_argument("--axis", type=int, choices=(1, 2, 3), default=1)
    s.set_defaults(func=cmd_sequence)

    s = sub.add_parser("gen", help="generate a gem")
    s.add_argument("what", choices=["bloboid", "j2", "random-walk", "crystallization", *generators.NAMED])
    s.add_argument("--n", type=int, default=4, help="blobs or chords")
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--twists", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--axis", type=int, choices=(1, 2, 3), default=1)
    s.add_argument("--normalize", action="store_true", help="relabel so 0-edges are 1-2, 3-4, ...")
    s.set_defaults(func=cmd_gen)

    s = with_file(sub.add_parser("dot", help="Graphviz export"))
    s.add_argument("--axis", type=int, choices=(1, 2, 3), help="overlay this axis's gray graph")
    s.set_defaults(func=cmd_dot)

    with_file(sub.add_parser("replay", help="verify every hash of the traces in a stream")).set_defaults(
        func=cmd_replay
    )
    return p


def _report(reason: str, message: str, err: TextIO) -> None:
    label = "error"
    if not os.environ.get("NO_COLOR") and getattr(err, "isatty", lambda: False)():
        label = "\033[31merror\033[0m"
    err.write(f"{label}[{reason}]: {message}\n")


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; that code means "property failure" here
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return args.func(args, out)
    except CliFailure as exc:
        _report(exc.reason, str(exc), err)
        return exc.code
    except (GemSyntaxError, SemanticError) as exc:
        _report(exc.code, str(exc), err)
        return EXIT_INPUT
    except GemError as exc:
        _report(exc.code, str(exc), err)
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())
