"""Dipoles, flips, twistings, fus, thickening and a replayable move journal.

Every move is a pure function returning a new graph.  ``Move`` values carry a
textual payload so that a :class:`MoveTrace` can be written to disk and
replayed against the initial gem.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations

from .core import (
    COLORS,
    ColoredGraph,
    complement,
    from_pairing,
    is_bipartite,
    is_gem,
    parity,
    residue_labels,
    same_residue,
    state_hash,
)
from .errors import (
    BadAttachment,
    GemError,
    NotA2Dipole,
    NotADipole,
    NotATwistor,
    NotBipartite,
    NotBlobAfterFlip,
    NotDipoleAfterInsertion,
    NotTwoEdges,
    SameEdge,
)
from .twistors import Twistor, is_twistor

Edge = tuple[int, int]


@dataclass(frozen=True, order=True)
class DipoleSpec:
    colors: tuple[int, ...]
    u: int
    v: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "colors", tuple(sorted(set(self.colors))))
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @property
    def size(self) -> int:
        return len(self.colors)

    @property
    def vertices(self) -> tuple[int, int]:
        return (self.u, self.v)


def _rows(G: ColoredGraph) -> list[list[int]]:
    return [list(r) for r in G.pairing]


def _freeze(rows: list[list[int]], name: str, connected: bool = True) -> ColoredGraph:
    return from_pairing(rows, name, connected=connected)


# ----------------------------------------------------------------------------
# dipoles


def is_dipole(G: ColoredGraph, colors: Iterable[int], u: int, v: int) -> bool:
    """True when ``{u, v}`` is a 2-vertex ``colors``-residue with ends in distinct complementary residues."""
    cols = tuple(sorted(set(colors)))
    if not 1 <= len(cols) <= 3 or u == v:
        return False
    if not all(G.pairing[c][u] == v for c in cols):
        return False
    return not same_residue(G, complement(cols), u, v)


def find_dipoles(G: ColoredGraph, size: int) -> list[DipoleSpec]:
    """Every dipole whose color set has ``size`` colors, sorted."""
    if size not in (1, 2, 3):
        raise ValueError(f"dipole size must be 1, 2 or 3, got {size}")
    out = []
    for cols in combinations(COLORS, size):
        first = G.pairing[cols[0]]
        hat = residue_labels(G, complement(cols))
        for u in G.vertices:
            v = first[u]
            if u < v and all(G.pairing[c][u] == v for c in cols[1:]) and hat[u] != hat[v]:
                out.append(DipoleSpec(cols, u, v))
    out.sort()
    return out


def _remove_pair(G: ColoredGraph, u: int, v: int, weld: Iterable[int]) -> list[list[int]]:
    """Delete ``u``, ``v`` and weld their pendant ends in each ``weld`` color; ids compacted."""
    rows = _rows(G)
    for c in weld:
        a, b = rows[c][u], rows[c][v]
        rows[c][a], rows[c][b] = b, a
    n = G.n
    shift = [0] * (n + 1)
    removed = 0
    for w in range(1, n + 1):
        if w in (u, v):
            removed += 1
        shift[w] = w - removed
    out = []
    for c in COLORS:
        row = [0]
        for w in range(1, n + 1):
            if w not in (u, v):
                row.append(shift[rows[c][w]])
        out.append(row)
    return out


def cancel_dipole(G: ColoredGraph, d: DipoleSpec) -> ColoredGraph:
    if not is_dipole(G, d.colors, d.u, d.v):
        raise NotADipole(f"{d} is not a dipole")
    rows = _remove_pair(G, d.u, d.v, complement(d.colors))
    # a genuine dipole never disconnects; from_pairing would raise otherwise
    return _freeze(rows, G.name)


def create_dipole(
    G: ColoredGraph, colors: Iterable[int], attachment: Mapping[int, Edge]
) -> tuple[ColoredGraph, DipoleSpec]:
    """Insert a dipole on ``colors``.

    ``attachment[c] = (a, b)`` names the ``c``-edge ``a-b`` for each color
    outside ``colors``; it is replaced by ``a-u`` and ``v-b`` where ``u, v``
    are the new vertices ``n+1, n+2``.
    """
    cols = tuple(sorted(set(colors)))
    hat = complement(cols)
    if not 1 <= len(cols) <= 3:
        raise BadAttachment(f"bad dipole color set {cols}")
    if set(attachment) != set(hat):
        raise BadAttachment(f"need one attachment edge for each color in {hat}, got {sorted(attachment)}")
    n = G.n
    u, v = n + 1, n + 2
    rows = [list(r) + [0, 0] for r in G.pairing]
    for c in cols:
        rows[c][u], rows[c][v] = v, u
    for c in hat:
        a, b = attachment[c]
        if not G.has_edge(c, a, b):
            raise BadAttachment(f"{a}-{b} is not a {c}-edge")
        rows[c][a], rows[c][u] = u, a
        rows[c][b], rows[c][v] = v, b
    H = _freeze(rows, G.name)
    spec = DipoleSpec(cols, u, v)
    if not is_dipole(H, cols, u, v):
        raise NotDipoleAfterInsertion(f"inserted pair {u},{v} on {cols} is not a dipole")
    return H, spec


def cancel_blobs(G: ColoredGraph, rng: random.Random | None = None) -> ColoredGraph:
    """Cancel 3-dipoles until none remain; ``rng`` picks among candidates."""
    H, _ = cancel_blobs_tracked(G, rng)
    return H


def cancel_blobs_tracked(
    G: ColoredGraph, rng: random.Random | None = None
) -> tuple[ColoredGraph, list[int]]:
    """As :func:`cancel_blobs`, also returning the original id of each survivor."""
    alive = list(G.vertices)
    H = G
    while True:
        ds = find_dipoles(H, 3)
        if not ds:
            return H, alive
        d = rng.choice(ds) if rng is not None else ds[0]
        H = cancel_dipole(H, d)
        del alive[d.v - 1]
        del alive[d.u - 1]


# ----------------------------------------------------------------------------
# flips


def _flip_rows(G: ColoredGraph, c: int, e: Edge, f: Edge) -> list[list[int]]:
    a, b = e
    x, y = f
    if not G.has_edge(c, a, b) or not G.has_edge(c, x, y):
        raise BadAttachment(f"{e} or {f} is not a {c}-edge")
    if {a, b} == {x, y}:
        raise SameEdge(f"flip needs two distinct {c}-edges")
    rows = _rows(G)
    row = rows[c]
    row[a], row[y] = y, a
    row[x], row[b] = b, x
    return rows


def c_flip(G: ColoredGraph, c: int, e: Edge, f: Edge, side: str | None = None) -> ColoredGraph:
    """Swap ends between the ``c``-edges ``e = a-b`` and ``f = x-y``, giving ``a-y`` and ``x-b``.

    With ``side`` ("even"/"odd") each edge is first oriented so that its
    first end has that parity, which needs a bipartite graph.  The result is
    not necessarily a gem; a disconnected result raises ``Disconnected``.
    """
    if side is not None:
        par = parity(G)
        if par is None:
            raise NotBipartite("parity-based flip side needs a bipartite graph")
        want = {"even": 0, "odd": 1}[side]
        e = e if par[e[0]] == want else (e[1], e[0])
        f = f if par[f[0]] == want else (f[1], f[0])
    return _freeze(_flip_rows(G, c, e, f), G.name)


# ----------------------------------------------------------------------------
# twistings


def _require_twistor(G: ColoredGraph, t: Twistor) -> None:
    if not is_twistor(G, t):
        raise NotATwistor(f"{t.label} (axis {t.axis}) is not a twistor")


def _conjugate(rows: list[list[int]], colors: Iterable[int], u: int, v: int) -> None:
    """Exchange the roles of ``u`` and ``v`` in the given colors, in place."""

    def tau(w: int) -> int:
        return v if w == u else u if w == v else w

    for c in colors:
        old = rows[c][:]
        for w in range(1, len(old)):
            rows[c][w] = tau(old[tau(w)])


def twist_direct(G: ColoredGraph, t: Twistor, check: bool = True) -> ColoredGraph:
    """Twist a kind-``t.kind`` twistor towards its axis by exchanging the axis- and kind-neighbours of ``u`` and ``v``.

    ``check=False`` skips the twistor precondition and the gem postcondition;
    :func:`gemkit.jordan.twist_all` uses it once the whole set is vetted.
    """
    if check:
        _require_twistor(G, t)
    rows = _rows(G)
    _conjugate(rows, (t.axis, t.kind), t.u, t.v)
    H = _freeze(rows, G.name)
    if check and not (is_bipartite(H) and is_gem(H)):
        raise AssertionError(f"twisting {t.label} left the class of bipartite gems")
    return H


def e_pair(G: ColoredGraph, t: Twistor) -> tuple[Edge, Edge]:
    """The two edges of color ``t.other`` at ``u`` and at ``v``."""
    s = t.other
    return (t.u, G.pairing[s][t.u]), (t.v, G.pairing[s][t.v])


def twist_via_flip(G: ColoredGraph, t: Twistor, check: bool = True) -> ColoredGraph:
    """The same twisting, done as a flip of the e-pair followed by the ``u``/``v`` label interchange.

    The interchange relabels ``u`` and ``v`` in colors 1, 2, 3 only; color-0
    pairs stay attached to the labels, which is what keeps a 0-consecutive
    labelling intact.
    """
    if check:
        _require_twistor(G, t)
    e, f = e_pair(G, t)
    rows = _flip_rows(G, t.other, e, f)
    _conjugate(rows, (1, 2, 3), t.u, t.v)
    H = _freeze(rows, G.name)
    if check and not (is_bipartite(H) and is_gem(H)):
        raise AssertionError(f"twisting {t.label} left the class of bipartite gems")
    return H


def inverse_twistor(G: ColoredGraph, t: Twistor) -> Twistor:
    """The pair seen as a twistor of the twisted graph (the twisting undoes with it).

    After twisting a kind-``kind`` pair towards the axis, the same pair is an
    axis-kind twistor; viewed with ``kind`` as the axis it twists back.
    """
    return Twistor(t.kind, t.axis, t.u, t.v)


# ----------------------------------------------------------------------------
# fus and thickening


def fus(G: ColoredGraph, p: int, q: int) -> ColoredGraph:
    shared = G.colors_between(p, q)
    if len(shared) != 2:
        raise NotTwoEdges(f"{p},{q} are joined by {len(shared)} edges, not 2")
    rows = _remove_pair(G, p, q, complement(shared))
    return _freeze(rows, G.name)


def thicken(G: ColoredGraph, d: DipoleSpec, flip_color: int) -> tuple[ColoredGraph, DipoleSpec]:
    """Flip the two ``flip_color`` edges at a 2-dipole so its ends become a blob."""
    if d.size != 2 or not is_dipole(G, d.colors, d.u, d.v):
        raise NotA2Dipole(f"{d} is not a 2-dipole")
    if flip_color in d.colors:
        raise ValueError(f"flip color {flip_color} already joins the dipole")
    u, v = d.u, d.v
    uu, vv = G.pairing[flip_color][u], G.pairing[flip_color][v]
    if uu == v:
        raise NotA2Dipole(f"{u},{v} already joined in color {flip_color}")
    H = _freeze(_flip_rows(G, flip_color, (u, uu), (vv, v)), G.name)
    spec = DipoleSpec(d.colors + (flip_color,), u, v)
    if not is_dipole(H, spec.colors, u, v):
        raise NotBlobAfterFlip(f"{u},{v} is not a 3-dipole after the flip")
    if not is_gem(H):
        raise AssertionError("thickening produced a non-gem")
    return H, spec


# ----------------------------------------------------------------------------
# journal


@dataclass(frozen=True)
class Move:
    kind: str
    params: tuple[tuple[str, str], ...] = ()

    KINDS = (
        "DipoleCancel",
        "DipoleCreate",
        "Flip",
        "TwistDirect",
        "TwistViaFlip",
        "Thicken",
        "Fus",
        "BlobCancelAll",
    )

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")

    def get(self, key: str, default: str | None = None) -> str:
        for k, v in self.params:
            if k == key:
                return v
        if default is not None:
            return default
        raise KeyError(key)

    def __str__(self) -> str:
        return " ".join([self.kind] + [f"{k}={v}" for k, v in self.params])

    @classmethod
    def parse(cls, text: str) -> Move:
        head, *rest = text.split()
        params = []
        for tok in rest:
            key, sep, val = tok.partition("=")
            if not sep:
                raise ValueError(f"bad move parameter {tok!r}")
            params.append((key, val))
        return cls(head, tuple(params))


def _cols(s: str) -> tuple[int, ...]:
    return tuple(int(ch) for ch in s)


def _edge(s: str) -> Edge:
    a, b = s.split(">")
    return int(a), int(b)


def dipole_cancel_move(d: DipoleSpec) -> Move:
    return Move("DipoleCancel", (("colors", "".join(map(str, d.colors))), ("u", str(d.u)), ("v", str(d.v))))


def dipole_create_move(colors: Iterable[int], attachment: Mapping[int, Edge]) -> Move:
    cols = tuple(sorted(set(colors)))
    att = ",".join(f"{c}:{a}>{b}" for c, (a, b) in sorted(attachment.items()))
    return Move("DipoleCreate", (("colors", "".join(map(str, cols))), ("attach", att)))


def flip_move(c: int, e: Edge, f: Edge) -> Move:
    return Move("Flip", (("color", str(c)), ("e", f"{e[0]}>{e[1]}"), ("f", f"{f[0]}>{f[1]}")))


def twist_move(t: Twistor, via_flip: bool = True, check: bool = True) -> Move:
    kind = "TwistViaFlip" if via_flip else "TwistDirect"
    params = (("axis", str(t.axis)), ("kind", str(t.kind)), ("u", str(t.u)), ("v", str(t.v)))
    if not check:
        params += (("check", "0"),)
    return Move(kind, params)


def thicken_move(d: DipoleSpec, flip_color: int) -> Move:
    return Move(
        "Thicken",
        (("colors", "".join(map(str, d.colors))), ("u", str(d.u)), ("v", str(d.v)), ("flip", str(flip_color))),
    )


def fus_move(p: int, q: int) -> Move:
    return Move("Fus", (("p", str(p)), ("q", str(q))))


def apply_move(G: ColoredGraph, m: Move) -> ColoredGraph:
    k = m.kind
    if k == "DipoleCancel":
        return cancel_dipole(G, DipoleSpec(_cols(m.get("colors")), int(m.get("u")), int(m.get("v"))))
    if k == "DipoleCreate":
        att = {}
        for item in m.get("attach").split(","):
            c, e = item.split(":")
            att[int(c)] = _edge(e)
        return create_dipole(G, _cols(m.get("colors")), att)[0]
    if k == "Flip":
        return c_flip(G, int(m.get("color")), _edge(m.get("e")), _edge(m.get("f")))
    if k in ("TwistDirect", "TwistViaFlip"):
        t = Twistor(int(m.get("axis")), int(m.get("kind")), int(m.get("u")), int(m.get("v")))
        check = m.get("check", "1") != "0"
        return twist_direct(G, t, check) if k == "TwistDirect" else twist_via_flip(G, t, check)
    if k == "Thicken":
        d = DipoleSpec(_cols(m.get("colors")), int(m.get("u")), int(m.get("v")))
        return thicken(G, d, int(m.get("flip")))[0]
    if k == "Fus":
        return fus(G, int(m.get("p")), int(m.get("q")))
    if k == "BlobCancelAll":
        return cancel_blobs(G)
    raise ValueError(f"unknown move {k}")  # pragma: no cover


@dataclass(frozen=True)
class TraceEntry:
    move: Move
    pre: str
    post: str


@dataclass
class MoveTrace:
    initial: ColoredGraph
    entries: list[TraceEntry] = field(default_factory=list)
    current: ColoredGraph | None = None

    def __post_init__(self) -> None:
        if self.current is None:
            self.current = self.initial

    def apply(self, m: Move) -> ColoredGraph:
        pre = state_hash(self.current)
        H = apply_move(self.current, m)
        self.entries.append(TraceEntry(m, pre, state_hash(H)))
        self.current = H
        return H

    def extend(self, other: MoveTrace) -> None:
        # moves address vertex labels, so an isomorphic start is not enough
        if other.initial.pairing != self.current.pairing:
            raise GemError("trace does not continue from the current state")
        for entry in other.entries:
            self.apply(entry.move)

    def __len__(self) -> int:
        return len(self.entries)


def replay(trace: MoveTrace) -> ColoredGraph:
    """Re-apply every move from the initial gem, checking each recorded hash."""
    G = trace.initial
    for idx, entry in enumerate(trace.entries, 1):
        if state_hash(G) != entry.pre:
            raise GemError(f"trace step {idx}: pre-state hash mismatch")
        G = apply_move(G, entry.move)
        if state_hash(G) != entry.post:
            raise GemError(f"trace step {idx}: post-state hash mismatch")
    return G
