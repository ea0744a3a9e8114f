"""Text formats: gem files, chord diagrams, resolutions, move traces and sequence dumps.

All formats are line based with ``#`` comments.  Several blocks may follow
each other in one stream, which is how the command-line tools pass results
down a pipe.

Gem::

    gem J4
    vertices 4
    color 0: 1-2 3-4
    color 1: 1-4 2-3
    color 2: 1-2 3-4
    color 3: 1-4 2-3

Chord diagram (``2n`` crossing points)::

    jordan 4
    inner: 1-2 3-4
    outer: 1-4 2-3

Resolution (tree edges of the gray graph of the preceding gem, the moves that
convert its antipoles, and the twistors actually twisted)::

    resolution axis=1
    3:4-6
    pre DipoleCreate colors=02 attach=1:4>1,3:4>1
    twistor 3:6-7
    end

Trace (the initial gem is embedded)::

    trace
    gem ...
    move TwistViaFlip axis=1 kind=3 u=6 v=7 pre=<hash> post=<hash>
    end trace

Sequence dump::

    sequence axis=1 steps=1
    step 1 dipole=02:1-2 flip=1 tag=1 before=<hash> after=<hash>
    terminal <hash>
    end sequence
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import COLORS, ColoredGraph, from_pairing, relabel, state_hash
from .errors import Disconnected, FixedPoint, GemSyntaxError, MismatchedGray, NotAMatching, SemanticError
from .gray import GrayGraph, build_gray_graph
from .jordan import ChordDiagram, ThickeningSequence
from .moves import DipoleSpec, Move, MoveTrace, TraceEntry
from .resolve import Resolution
from .twistors import Twistor

_PAIR = re.compile(r"(\d+)-(\d+)$")
_EDGE = re.compile(r"(\d):(\d+)-(\d+)$")


@dataclass
class _Line:
    number: int
    text: str  # comment-free, stripped
    raw: str

    def column(self, token: str) -> int:
        at = self.raw.find(token)
        return at + 1 if at >= 0 else 1


def _lines(text: str, first: int = 1) -> list[_Line]:
    out = []
    for number, raw in enumerate(text.split("\n"), first):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append(_Line(number, body, raw))
    return out


def _pair(line: _Line, tok: str) -> tuple[int, int]:
    m = _PAIR.match(tok)
    if not m:
        raise GemSyntaxError(f"expected a pair u-v, got {tok!r}", line.number, line.column(tok))
    return int(m.group(1)), int(m.group(2))


def _expect(lines: list[_Line], pos: int, keyword: str) -> _Line:
    if pos >= len(lines):
        last = lines[-1].number if lines else 1
        raise GemSyntaxError(f"unexpected end of input, expected {keyword!r}", last + 1)
    line = lines[pos]
    if line.text.split()[0].rstrip(":") != keyword:
        raise GemSyntaxError(f"expected {keyword!r}", line.number, 1)
    return line


# ----------------------------------------------------------------------------
# gems


def _gem_block(lines: list[_Line], pos: int) -> tuple[ColoredGraph, int]:
    head = _expect(lines, pos, "gem")
    name = head.text[3:].strip()
    vline = _expect(lines, pos + 1, "vertices")
    parts = vline.text.split()
    if len(parts) != 2 or not parts[1].isdigit():
        raise GemSyntaxError("expected 'vertices <N>'", vline.number, len(parts[0]) + 2)
    n = int(parts[1])
    if n <= 0 or n % 2:
        raise SemanticError(f"vertex count must be even and positive, got {n}", vline.number,
                            NotAMatching("odd or empty vertex set"))
    rows: list[list[int] | None] = [None] * 4
    for offset in range(4):
        line = _expect(lines, pos + 2 + offset, "color")
        m = re.match(r"color\s+(\d+)\s*:(.*)$", line.text)
        if not m:
            raise GemSyntaxError("expected 'color <c>: u-v ...'", line.number, 1)
        c = int(m.group(1))
        if c not in COLORS:
            raise SemanticError(f"no color {c}", line.number)
        if rows[c] is not None:
            raise SemanticError(f"color {c} given twice", line.number)
        row = [0] * (n + 1)
        for tok in m.group(2).split():
            u, v = _pair(line, tok)
            if u == v:
                raise SemanticError(f"color {c}: {tok} is a fixed point", line.number, FixedPoint(tok))
            for x in (u, v):
                if not 1 <= x <= n:
                    raise SemanticError(f"color {c}: vertex {x} outside 1..{n}", line.number,
                                        NotAMatching(f"vertex {x} out of range"))
                if row[x]:
                    raise SemanticError(f"color {c}: vertex {x} repeated", line.number,
                                        NotAMatching(f"vertex {x} repeated"))
            row[u], row[v] = v, u
        missing = [v for v in range(1, n + 1) if not row[v]]
        if missing:
            raise SemanticError(f"color {c}: vertices {missing} not covered", line.number,
                                NotAMatching(f"vertices {missing} not covered"))
        rows[c] = row
    try:
        G = from_pairing(rows, name)
    except Disconnected as exc:
        raise SemanticError(str(exc), head.number, exc) from exc
    return G, pos + 6


def parse_gem(text: str) -> ColoredGraph:
    lines = _lines(text)
    G, pos = _gem_block(lines, 0)
    if pos != len(lines):
        raise GemSyntaxError("trailing content after the gem", lines[pos].number, 1)
    return G


def serialize_gem(G: ColoredGraph) -> str:
    out = [f"gem {G.name or 'unnamed'}", f"vertices {G.n}"]
    for c in COLORS:
        out.append(f"color {c}: " + " ".join(f"{u}-{v}" for u, v in G.edges(c)))
    return "\n".join(out) + "\n"


def normalize_0consecutive(G: ColoredGraph) -> ColoredGraph:
    """Relabel so the 0-edges are ``1-2, 3-4, ...``, keeping the order of their smaller ends."""
    perm = [0] * (G.n + 1)
    for idx, (u, v) in enumerate(G.edges(0)):
        perm[u], perm[v] = 2 * idx + 1, 2 * idx + 2
    return relabel(G, perm)


# ----------------------------------------------------------------------------
# chord diagrams


def _jordan_block(lines: list[_Line], pos: int) -> tuple[ChordDiagram, int]:
    head = _expect(lines, pos, "jordan")
    parts = head.text.split()
    if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) % 2:
        raise GemSyntaxError("expected 'jordan <2n>'", head.number, 1)
    chords = []
    for offset, key in enumerate(("inner", "outer"), 1):
        line = _expect(lines, pos + offset, key)
        body = line.text.split(":", 1)[1] if ":" in line.text else ""
        chords.append(tuple(_pair(line, tok) for tok in body.split()))
    d = ChordDiagram(int(parts[1]) // 2, chords[0], chords[1])
    msg = d.problem()
    if msg:
        raise SemanticError(msg, head.number)
    return d, pos + 3


def parse_diagram(text: str) -> ChordDiagram:
    d, _ = _jordan_block(_lines(text), 0)
    return d


def serialize_diagram(d: ChordDiagram) -> str:
    inner = " ".join(f"{a}-{b}" for a, b in sorted(d.inner))
    outer = " ".join(f"{a}-{b}" for a, b in sorted(d.outer))
    return f"jordan {2 * d.n}\ninner: {inner}\nouter: {outer}\n"


# ----------------------------------------------------------------------------
# resolutions


@dataclass
class ResolutionRecord:
    """A parsed resolution, before its edges are matched against a gem."""

    axis: int
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    preprocessing: list[Move] = field(default_factory=list)
    twistors: list[tuple[int, int, int]] = field(default_factory=list)
    line: int = 1

    def bind(self, G: ColoredGraph) -> Resolution:
        """The resolution of ``G`` this record describes."""
        gray = build_gray_graph(G, self.axis)
        edges = []
        for kind, u, v in self.edges:
            e = gray.find(kind, u, v)
            if e is None:
                raise SemanticError(f"{kind}:{u}-{v} is not an edge of T_{self.axis}", self.line)
            edges.append(e)
        if self.twistors or self.preprocessing:
            tws = tuple(Twistor(self.axis, k, u, v) for k, u, v in self.twistors)
        else:
            tws = tuple(Twistor(self.axis, e.kind, e.u, e.v) for e in edges)
        return Resolution(self.axis, tws, tuple(self.preprocessing), tuple(edges))


def _edge_token(line: _Line, tok: str) -> tuple[int, int, int]:
    m = _EDGE.match(tok)
    if not m:
        raise GemSyntaxError(f"expected kind:u-v, got {tok!r}", line.number, line.column(tok))
    return int(m.group(1)), int(m.group(2)), int(m.group(3))


def _resolution_block(lines: list[_Line], pos: int) -> tuple[ResolutionRecord, int]:
    head = _expect(lines, pos, "resolution")
    m = re.match(r"resolution\s+axis=([123])$", head.text)
    if not m:
        raise GemSyntaxError("expected 'resolution axis=<i>'", head.number, 1)
    rec = ResolutionRecord(int(m.group(1)), line=head.number)
    pos += 1
    while True:
        if pos >= len(lines):
            raise GemSyntaxError("unterminated resolution (missing 'end')", head.number)
        line = lines[pos]
        pos += 1
        word = line.text.split()[0]
        if line.text == "end":
            return rec, pos
        if word == "pre":
            try:
                rec.preprocessing.append(Move.parse(line.text[3:].strip()))
            except ValueError as exc:
                raise GemSyntaxError(str(exc), line.number, 5) from exc
        elif word == "twistor":
            rec.twistors.append(_edge_token(line, line.text.split(None, 1)[1]))
        else:
            rec.edges.append(_edge_token(line, line.text))


def serialize_resolution(r: Resolution) -> str:
    out = [f"resolution axis={r.axis}"]
    out += [e.label for e in sorted(r.edges, key=lambda e: (e.u, e.v, e.kind))]
    out += [f"pre {m}" for m in r.preprocessing]
    out += [f"twistor {t.label}" for t in r.twistors]
    out.append("end")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------------
# traces


def _trace_block(lines: list[_Line], pos: int) -> tuple[MoveTrace, int]:
    head = _expect(lines, pos, "trace")
    G, pos = _gem_block(lines, pos + 1)
    trace = MoveTrace(G)
    while True:
        if pos >= len(lines):
            raise GemSyntaxError("unterminated trace (missing 'end trace')", head.number)
        line = lines[pos]
        pos += 1
        if line.text == "end trace":
            return trace, pos
        parts = line.text.split()
        if parts[0] != "move" or len(parts) < 4:
            raise GemSyntaxError("expected 'move <Move> pre=<hash> post=<hash>'", line.number, 1)
        pre, post = parts[-2], parts[-1]
        if not (pre.startswith("pre=") and post.startswith("post=")):
            raise GemSyntaxError("move line must end with pre=<hash> post=<hash>", line.number,
                                 line.column(pre))
        try:
            move = Move.parse(" ".join(parts[1:-2]))
        except ValueError as exc:
            raise GemSyntaxError(str(exc), line.number, 6) from exc
        trace.entries.append(TraceEntry(move, pre[4:], post[5:]))


def serialize_trace(trace: MoveTrace) -> str:
    out = ["trace", serialize_gem(trace.initial).rstrip("\n")]
    out += [f"move {e.move} pre={e.pre} post={e.post}" for e in trace.entries]
    out.append("end trace")
    return "\n".join(out) + "\n"


def trace_final(trace: MoveTrace) -> ColoredGraph:
    """The state a parsed trace ends in (replaying without checks)."""
    from .moves import apply_move

    G = trace.initial
    for e in trace.entries:
        G = apply_move(G, e.move)
    return G


# ----------------------------------------------------------------------------
# thickening sequences


@dataclass
class SequenceRecord:
    axis: int
    steps: list[tuple[DipoleSpec, int, int, str, str]]
    terminal: str


def serialize_sequence(seq: ThickeningSequence) -> str:
    out = [f"sequence axis={seq.axis} steps={len(seq.steps)}"]
    for idx, s in enumerate(seq.steps, 1):
        d = s.dipole
        cols = "".join(map(str, d.colors))
        out.append(f"step {idx} dipole={cols}:{d.u}-{d.v} flip={s.flip_color} tag={s.tag} "
                   f"before={s.before} after={s.after}")
    terminal = seq.terminal if seq.terminal is not None else seq.initial
    out.append(f"terminal {state_hash(terminal)}")
    out.append("end sequence")
    return "\n".join(out) + "\n"


def _sequence_block(lines: list[_Line], pos: int) -> tuple[SequenceRecord, int]:
    head = _expect(lines, pos, "sequence")
    m = re.match(r"sequence\s+axis=([123])\s+steps=(\d+)$", head.text)
    if not m:
        raise GemSyntaxError("expected 'sequence axis=<i> steps=<m>'", head.number, 1)
    rec = SequenceRecord(int(m.group(1)), [], "")
    pos += 1
    step = re.compile(r"step (\d+) dipole=(\d+):(\d+)-(\d+) flip=(\d) tag=([01]) before=(\w+) after=(\w+)$")
    while True:
        if pos >= len(lines):
            raise GemSyntaxError("unterminated sequence (missing 'end sequence')", head.number)
        line = lines[pos]
        pos += 1
        if line.text == "end sequence":
            if len(rec.steps) != int(m.group(2)):
                raise SemanticError("step count does not match the header", head.number)
            return rec, pos
        if line.text.startswith("terminal "):
            rec.terminal = line.text.split()[1]
            continue
        s = step.match(line.text)
        if not s:
            raise GemSyntaxError("malformed step line", line.number, 1)
        cols = tuple(int(ch) for ch in s.group(2))
        d = DipoleSpec(cols, int(s.group(3)), int(s.group(4)))
        rec.steps.append((d, int(s.group(5)), int(s.group(6)), s.group(7), s.group(8)))


# ----------------------------------------------------------------------------
# streams

_BLOCKS = {
    "gem": _gem_block,
    "jordan": _jordan_block,
    "resolution": _resolution_block,
    "trace": _trace_block,
    "sequence": _sequence_block,
}


@dataclass
class Block:
    kind: str
    value: object
    line: int


def parse_stream(text: str) -> list[Block]:
    """Split a stream into its blocks, in order."""
    lines = _lines(text)
    pos = 0
    out = []
    while pos < len(lines):
        line = lines[pos]
        word = line.text.split()[0]
        parser = _BLOCKS.get(word)
        if parser is None:
            raise GemSyntaxError(f"unexpected {word!r}, expected the start of a block", line.number, 1)
        value, pos = parser(lines, pos)
        out.append(Block(word, value, line.number))
    return out


# ----------------------------------------------------------------------------
# DOT

_PALETTE = ("black", "red", "blue", "darkgreen")


def export_dot(G: ColoredGraph, gray: GrayGraph | None = None, highlight: Resolution | None = None) -> str:
    """Graphviz text for the gem, optionally overlaid with gray edges.

    Gray edges are dashed and join the two vertices of the twistor or
    antipole; edges of ``highlight`` are drawn bold.
    """
    if gray is not None and gray != build_gray_graph(G, gray.axis):
        raise MismatchedGray("the gray graph was not built from this gem")
    if highlight is not None and gray is None:
        gray = build_gray_graph(G, highlight.axis)
    chosen = {e.key for e in highlight.edges} if highlight is not None else set()
    name = (G.name or "gem").replace('"', "'")
    out = [f'graph "{name}" {{', "  node [shape=circle];"]
    out += [f"  {v};" for v in G.vertices]
    for c in COLORS:
        for u, v in G.edges(c):
            out.append(f'  {u} -- {v} [color={_PALETTE[c]}, label="{c}"];')
    if gray is not None:
        for e in gray.edges:
            style = "dashed,bold" if e.key in chosen else "dashed"
            out.append(f'  {e.u} -- {e.v} [style="{style}", color=gray, label="{e.label}", constraint=false];')
    out.append("}")
    return "\n".join(out) + "\n"

