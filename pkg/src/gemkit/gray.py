"""Gray graphs: jk-gons joined by twistors and antipoles.

For axis ``i`` the gray graph has one node per ``jk``-gon and one edge per
j-/k-twistor or antipole.  A kind-``t`` edge joins the jk-gons of ``u`` and
``v``; its e-pair is the two ``s``-edges at ``u`` and ``v`` (``s`` the other
non-axis color), which bound the ``is``-gon that ``u`` and ``v`` share.

Besides that ``is``-gon, ``u`` and ``v`` also share their ``0t``-gon.  Each
gray edge is recorded as a chord of both shared bigons, by the positions of
``u`` and ``v`` along them.  Two gray edges cross when they are chords of a
common bigon whose endpoints interleave; edges of distinct kinds never share
either bigon type, so only same-kind edges can cross.  Twisting a set of
vertex-disjoint twistors keeps a gem whose jk-gons merge along the tree
exactly when no two of them cross in this sense.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from itertools import combinations

from .core import ColoredGraph, Residue, axis_colors, is_crystallization, residue_labels, residues
from .errors import EdgeNotInGrayGraph, GemError, NoAdequateSiteFound, NotACrystallization
from .moves import Edge, Move, create_dipole, dipole_create_move
from .twistors import Antipole, Twistor, enumerate_antipoles, enumerate_twistors, is_antipole, is_twistor


@dataclass(frozen=True)
class GrayEdge:
    kind: int
    u: int
    v: int
    origin: str  # "twistor" or "antipole"
    source: int  # node index of u's jk-gon
    target: int
    e_pair: tuple[Edge, Edge]
    # (bigon id, (position of u, position of v)) for the shared is-gon and 0t-gon
    chords: tuple[tuple[tuple[int, int, int], tuple[int, int]], ...]

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.u}-{self.v}"

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.kind, self.u, self.v)

    def pair(self, axis: int) -> Twistor:
        cls = Twistor if self.origin == "twistor" else Antipole
        return cls(axis, self.kind, self.u, self.v)


@dataclass(frozen=True)
class GrayGraph:
    axis: int
    nodes: tuple[Residue, ...]
    edges: tuple[GrayEdge, ...]
    node_of: tuple[int, ...]  # vertex -> node index (index 0 unused)

    def degree(self, node: int) -> int:
        return sum((e.source == node) + (e.target == node) for e in self.edges)

    def find(self, kind: int, u: int, v: int) -> GrayEdge | None:
        a, b = min(u, v), max(u, v)
        for e in self.edges:
            if e.key == (kind, a, b):
                return e
        return None

    def is_connected(self) -> bool:
        if len(self.nodes) <= 1:
            return True
        seen = {0}
        stack = [0]
        adj: dict[int, list[int]] = {}
        for e in self.edges:
            adj.setdefault(e.source, []).append(e.target)
            adj.setdefault(e.target, []).append(e.source)
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.nodes)


def _positions(G: ColoredGraph, colors: tuple[int, int]) -> tuple[tuple[int, ...], dict[int, int]]:
    """Bigon index per vertex and each vertex's position along its bigon."""
    lab = residue_labels(G, colors)
    pos: dict[int, int] = {}
    for r in residues(G, colors):
        for idx, (_, a, _) in enumerate(r.cycle):
            pos[a] = idx
    return lab, pos


def build_gray_graph(G: ColoredGraph, axis: int) -> GrayGraph:
    if not is_crystallization(G):
        raise NotACrystallization("gray graphs are built for crystallizations")
    i, j, k = axis_colors(axis)
    gons = residues(G, (j, k))
    node_of = residue_labels(G, (j, k))
    # the two bigons a kind-t pair shares: its is-gon and its 0t-gon
    shared = {j: (tuple(sorted((i, k))), (0, j)), k: ((i, j), (0, k))}
    bigons = {t: [(cols, _positions(G, cols)) for cols in shared[t]] for t in (j, k)}
    pairs: list[Twistor] = list(enumerate_twistors(G, axis)) + list(enumerate_antipoles(G, axis))
    edges = []
    for t in pairs:
        s = t.other
        ea = (t.u, G.pairing[s][t.u])
        eb = (t.v, G.pairing[s][t.v])
        chords = tuple(
            ((cols[0], cols[1], lab[t.u]), (pos[t.u], pos[t.v])) for cols, (lab, pos) in bigons[t.kind]
        )
        edges.append(
            GrayEdge(
                kind=t.kind,
                u=t.u,
                v=t.v,
                origin="antipole" if isinstance(t, Antipole) else "twistor",
                source=node_of[t.u],
                target=node_of[t.v],
                e_pair=(ea, eb),
                chords=chords,
            )
        )
    edges.sort(key=lambda e: (e.u, e.v, e.kind))
    return GrayGraph(axis, tuple(gons), tuple(edges), node_of)


def chords_cross(p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Whether two chords of one cycle, given by endpoint positions, interleave."""
    a, b = sorted(p)
    c, d = sorted(q)
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def edges_cross(e: GrayEdge, f: GrayEdge) -> bool:
    other = dict(f.chords)
    return any(b in other and chords_cross(p, other[b]) for b, p in e.chords)


def crossing_free(G: ColoredGraph, axis: int, S, gray: GrayGraph | None = None) -> bool:
    """Whether the gray edges ``S`` can be drawn together without crossings.

    ``S`` holds gray edges or ``(kind, u, v)`` keys of edges of the gray graph.
    """
    gray = gray or build_gray_graph(G, axis)
    chosen = []
    for item in S:
        key = item.key if isinstance(item, GrayEdge) else (item[0], min(item[1:]), max(item[1:]))
        e = gray.find(*key)
        if e is None:
            raise EdgeNotInGrayGraph(f"{key[0]}:{key[1]}-{key[2]} is not an edge of T_{axis}")
        chosen.append(e)
    return not any(edges_cross(e, f) for e, f in combinations(chosen, 2))


# ----------------------------------------------------------------------------
# antipole conversion


def _conversion_sites(G: ColoredGraph, a: Twistor):
    """Candidate 2-dipole insertions, most direct first.

    The direct site puts the dipole on colors ``{0, s}`` and threads it through
    the axis- and kind-edges at one end of the antipole; the new vertex next to
    that end then replaces it as a same-parity partner of the other end.
    """
    i, j, k = axis_colors(a.axis)
    t, s = a.kind, a.other
    for base in (a.u, a.v):
        att = {i: (base, G.pairing[i][base]), t: (base, G.pairing[t][base])}
        yield (0, s), att
    # wider search: dipoles on mixed color sets threaded through edges at
    # vertices of the shared 0t-gon
    lab = residue_labels(G, (0, t))
    gon = [w for w in G.vertices if lab[w] == lab[a.u]]
    for cols in ((0, s), (i, t), (0, t), (i, s)):
        hat = [c for c in (0, 1, 2, 3) if c not in cols]
        edges = {c: sorted({(w, G.pairing[c][w]) for w in gon}) for c in hat}
        for e1 in edges[hat[0]]:
            for e2 in edges[hat[1]]:
                yield cols, {hat[0]: e1, hat[1]: e2}


def antipole_conversions(G: ColoredGraph, a: Twistor) -> Iterator[tuple[ColoredGraph, Twistor, Move]]:
    """Every candidate 2-dipole creation that turns the antipole into a same-kind twistor.

    Each yield is the enlarged gem, the new twistor and the creation move;
    the twistor joins the same two jk-gons as the antipole did.
    """
    if not is_antipole(G, a):
        raise NoAdequateSiteFound(f"{a.label} is not an antipole of axis {a.axis}")
    _, j, k = axis_colors(a.axis)
    n = G.n
    seen = set()
    for cols, att in _conversion_sites(G, a):
        try:
            H, _ = create_dipole(G, cols, att)
        except GemError:
            continue
        hgon = residue_labels(H, (j, k))
        if hgon[a.u] == hgon[a.v]:
            continue
        for w in (n + 1, n + 2):
            for z in (a.u, a.v):
                cand = Twistor(a.axis, a.kind, w, z)
                # the new end must stand in the jk-gon of the end it replaces
                stand_in = a.v if z == a.u else a.u
                if hgon[w] != hgon[stand_in] or not is_twistor(H, cand):
                    continue
                if (H.pairing, cand) in seen:
                    continue
                seen.add((H.pairing, cand))
                yield H, cand, dipole_create_move(cols, att)


def convert_antipole(G: ColoredGraph, a: Twistor) -> tuple[ColoredGraph, Twistor, Move]:
    """Create a 2-dipole so that the antipole becomes a twistor with the same gray-edge ends.

    Returns the enlarged gem, the new twistor and the creation move of the
    first (most direct) site that works.
    """
    for found in antipole_conversions(G, a):
        return found
    raise NoAdequateSiteFound(f"no 2-dipole site converts {a.label}")
