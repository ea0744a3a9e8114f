"""Edge-colored graph model for 3-gems.

A graph on vertices ``1..n`` is stored as four fixed-point-free involutions,
one per color ``0..3``.  ``pairing[c][v]`` is the ``c``-neighbour of ``v``;
index 0 of each row is an unused placeholder so vertex ids can be used
directly.  Edges have no identity of their own: an edge is named by its
color and its two ends.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

from .errors import Disconnected, FixedPoint, NotACrystallization, NotAGem, NotAMatching

COLORS = (0, 1, 2, 3)
COLOR_PAIRS = tuple(combinations(COLORS, 2))
COLOR_TRIPLES = tuple(combinations(COLORS, 3))

Pair = tuple[int, int]


def complement(colors: Iterable[int]) -> tuple[int, ...]:
    s = set(colors)
    return tuple(c for c in COLORS if c not in s)


def axis_colors(axis: int) -> tuple[int, int, int]:
    """Return ``(i, j, k)`` for an axis ``i`` in {1,2,3}; j < k are the others."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis!r}")
    j, k = (c for c in (1, 2, 3) if c != axis)
    return axis, j, k


@dataclass(frozen=True)
class ColoredGraph:
    pairing: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def n(self) -> int:
        return len(self.pairing[0]) - 1

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def nbr(self, v: int, c: int) -> int:
        return self.pairing[c][v]

    def edges(self, c: int) -> list[Pair]:
        row = self.pairing[c]
        return [(v, row[v]) for v in self.vertices if v < row[v]]

    def colors_between(self, u: int, v: int) -> tuple[int, ...]:
        return tuple(c for c in COLORS if self.pairing[c][u] == v)

    def has_edge(self, c: int, u: int, v: int) -> bool:
        return 1 <= u <= self.n and self.pairing[c][u] == v

    def matchings(self) -> list[list[Pair]]:
        return [self.edges(c) for c in COLORS]

    def renamed(self, name: str) -> ColoredGraph:
        return ColoredGraph(self.pairing, name)

    def __str__(self) -> str:
        parts = ["  ".join(f"{u}-{v}" for u, v in self.edges(c)) for c in COLORS]
        return f"ColoredGraph({self.name or '?'}, n={self.n}; " + " | ".join(parts) + ")"


def _components(n: int, rows: Sequence[Sequence[int]], colors: Iterable[int]) -> list[int]:
    """Component index per vertex (index 0 unused) of the subgraph on ``colors``."""
    cols = tuple(colors)
    label = [-1] * (n + 1)
    count = 0
    for s in range(1, n + 1):
        if label[s] >= 0:
            continue
        label[s] = count
        stack = [s]
        while stack:
            v = stack.pop()
            for c in cols:
                w = rows[c][v]
                if label[w] < 0:
                    label[w] = count
                    stack.append(w)
        count += 1
    return label


def from_pairing(rows: Sequence[Sequence[int]], name: str = "", *, connected: bool = True) -> ColoredGraph:
    """Wrap raw pairing rows (index 0 ignored) after checking involution and connectivity."""
    n = len(rows[0]) - 1
    if n <= 0 or n % 2:
        raise NotAMatching(f"vertex count must be even and positive, got {n}")
    fixed = []
    for c in COLORS:
        row = rows[c]
        if len(row) != n + 1:
            raise NotAMatching(f"color {c}: row length {len(row) - 1} != {n}")
        for v in range(1, n + 1):
            w = row[v]
            if not 1 <= w <= n:
                raise NotAMatching(f"color {c}: vertex {v} paired with out-of-range {w}")
            if w == v:
                raise FixedPoint(f"color {c}: vertex {v} paired with itself")
            if row[w] != v:
                raise NotAMatching(f"color {c}: pairing is not an involution at {v}")
        fixed.append((0,) + tuple(row[1:]))
    if connected:
        label = _components(n, fixed, COLORS)
        if max(label[1:]) > 0:
            comps: dict[int, list[int]] = {}
            for v in range(1, n + 1):
                comps.setdefault(label[v], []).append(v)
            raise Disconnected(f"graph has {len(comps)} components", list(comps.values()))
    return ColoredGraph(tuple(fixed), name)


def build_graph(n: int, matchings: Sequence[Iterable[Pair]], name: str = "") -> ColoredGraph:
    """Build a validated graph from four lists of vertex pairs, one per color."""
    if len(matchings) != 4:
        raise NotAMatching(f"expected 4 color classes, got {len(matchings)}")
    if n <= 0 or n % 2:
        raise NotAMatching(f"vertex count must be even and positive, got {n}")
    rows = []
    for c, pairs in enumerate(matchings):
        row = [0] * (n + 1)
        for u, v in pairs:
            if u == v:
                raise FixedPoint(f"color {c}: pair ({u},{v}) is a fixed point")
            for x in (u, v):
                if not 1 <= x <= n:
                    raise NotAMatching(f"color {c}: vertex {x} outside 1..{n}")
                if row[x]:
                    raise NotAMatching(f"color {c}: vertex {x} repeated")
            row[u], row[v] = v, u
        missing = [v for v in range(1, n + 1) if not row[v]]
        if missing:
            raise NotAMatching(f"color {c}: vertices {missing} not covered")
        rows.append(row)
    return from_pairing(rows, name)


def relabel(G: ColoredGraph, perm: Sequence[int] | dict[int, int]) -> ColoredGraph:
    """Return the graph with vertex ``v`` renamed ``perm[v]``."""
    n = G.n
    rows = []
    for c in COLORS:
        row = [0] * (n + 1)
        for v in G.vertices:
            row[perm[v]] = perm[G.pairing[c][v]]
        rows.append(row)
    return ColoredGraph(tuple(tuple(r) for r in rows), G.name)


# ----------------------------------------------------------------------------
# residues


@dataclass(frozen=True)
class Residue:
    colors: tuple[int, ...]
    vertices: tuple[int, ...]
    # (color, u, v) along the cycle, only for 2-color residues
    cycle: tuple[tuple[int, int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices


def residue_labels(G: ColoredGraph, colors: Iterable[int]) -> tuple[int, ...]:
    """Residue index of each vertex (index 0 unused), numbered by least vertex."""
    key = ("labels", tuple(sorted(set(colors))))
    cached = G._cache.get(key)
    if cached is None:
        cached = tuple(_components(G.n, G.pairing, key[1]))
        G._cache[key] = cached
    return cached


def residue_count(G: ColoredGraph, colors: Iterable[int]) -> int:
    return max(residue_labels(G, colors)[1:]) + 1


def same_residue(G: ColoredGraph, colors: Iterable[int], u: int, v: int) -> bool:
    lab = residue_labels(G, colors)
    return lab[u] == lab[v]


def _bigon_walk(G: ColoredGraph, a: int, b: int, start: int) -> tuple[list[int], list[tuple[int, int, int]]]:
    verts, cyc = [start], []
    v, c = start, a
    while True:
        w = G.pairing[c][v]
        cyc.append((c, v, w))
        v, c = w, (b if c == a else a)
        if v == start and c == a:
            break
        verts.append(v)
    return verts, cyc


def residues(G: ColoredGraph, colors: Iterable[int]) -> list[Residue]:
    """All residues on the given colors, ordered by their least vertex.

    Bigons are returned as alternating walks starting at the least vertex with
    the smaller color first.
    """
    cols = tuple(sorted(set(colors)))
    if not cols or len(cols) > 4 or any(c not in COLORS for c in cols):
        raise ValueError(f"bad color set {colors!r}")
    lab = residue_labels(G, cols)
    groups: dict[int, list[int]] = {}
    for v in G.vertices:
        groups.setdefault(lab[v], []).append(v)
    out = []
    for idx in sorted(groups):
        members = groups[idx]
        if len(cols) == 2:
            verts, cyc = _bigon_walk(G, cols[0], cols[1], members[0])
            out.append(Residue(cols, tuple(verts), tuple(cyc)))
        else:
            out.append(Residue(cols, tuple(members)))
    return out


def bigon_counts(G: ColoredGraph) -> dict[tuple[int, int], int]:
    return {p: residue_count(G, p) for p in COLOR_PAIRS}


# ----------------------------------------------------------------------------
# predicates


def parity(G: ColoredGraph) -> tuple[int, ...] | None:
    """Two-coloring (0 = even, 1 = odd, vertex 1 even) or None if not bipartite."""
    if "parity" in G._cache:
        return G._cache["parity"]
    side = [-1] * (G.n + 1)
    side[1] = 0
    stack = [1]
    ok = True
    while stack and ok:
        v = stack.pop()
        for c in COLORS:
            w = G.pairing[c][v]
            if side[w] < 0:
                side[w] = 1 - side[v]
                stack.append(w)
            elif side[w] == side[v]:
                ok = False
                break
    result = tuple(side) if ok else None
    G._cache["parity"] = result
    return result


def is_bipartite(G: ColoredGraph) -> bool:
    return parity(G) is not None


def is_gem(G: ColoredGraph) -> bool:
    t = sum(residue_count(G, tr) for tr in COLOR_TRIPLES)
    b = sum(residue_count(G, p) for p in COLOR_PAIRS)
    return G.n + t == b


def is_crystallization(G: ColoredGraph) -> bool:
    from .moves import find_dipoles

    return is_gem(G) and not find_dipoles(G, 1)


@dataclass(frozen=True)
class GemReport:
    v: int
    t: int
    b: int
    bigons: dict[tuple[int, int], int]
    is_gem: bool
    is_bipartite: bool
    parity: dict[int, str] | None
    is_crystallization: bool

    def summary(self) -> str:
        yes = lambda x: "yes" if x else "no"  # noqa: E731
        bij = " ".join(f"b{i}{j}={self.bigons[(i, j)]}" for i, j in COLOR_PAIRS)
        return (
            f"v={self.v} t={self.t} b={self.b} gem={yes(self.is_gem)} "
            f"bipartite={yes(self.is_bipartite)} crystallization={yes(self.is_crystallization)} {bij}"
        )

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "t": self.t,
            "b": self.b,
            "bigons": {f"{i}{j}": n for (i, j), n in self.bigons.items()},
            "is_gem": self.is_gem,
            "is_bipartite": self.is_bipartite,
            "is_crystallization": self.is_crystallization,
        }


def gem_report(G: ColoredGraph) -> GemReport:
    bigons = bigon_counts(G)
    t = sum(residue_count(G, tr) for tr in COLOR_TRIPLES)
    b = sum(bigons.values())
    side = parity(G)
    par = None if side is None else {v: ("even", "odd")[side[v]] for v in G.vertices}
    gem = G.n + t == b
    return GemReport(
        v=G.n,
        t=t,
        b=b,
        bigons=bigons,
        is_gem=gem,
        is_bipartite=side is not None,
        parity=par,
        is_crystallization=gem and is_crystallization(G),
    )


def check_complementary(G: ColoredGraph) -> bool:
    """Whether complementary bigon counts agree (b01=b23, b02=b13, b03=b12)."""
    if not is_crystallization(G):
        raise NotACrystallization("complementary bigon check requires a crystallization")
    bc = bigon_counts(G)
    return bc[(0, 1)] == bc[(2, 3)] and bc[(0, 2)] == bc[(1, 3)] and bc[(0, 3)] == bc[(1, 2)]


def generator_count(G: ColoredGraph, axis: int) -> int:
    """Number of generators, ``b_0i - 1``, of the fundamental-group presentation."""
    i, _, _ = axis_colors(axis)
    if not is_gem(G):
        raise NotAGem("generator count is defined for gems only")
    return residue_count(G, (0, i)) - 1


# ----------------------------------------------------------------------------
# canonical form


def _code_from(G: ColoredGraph, start: int, bound: tuple[int, ...] | None) -> tuple[int, ...] | None:
    n = G.n
    rows = G.pairing
    new = [0] * (n + 1)
    order = [start]
    new[start] = 1
    code: list[int] = []
    pos = 0
    nxt = 2
    while pos < len(order):
        v = order[pos]
        pos += 1
        for c in COLORS:
            w = rows[c][v]
            if not new[w]:
                new[w] = nxt
                nxt += 1
                order.append(w)
            x = new[w]
            if bound is not None:
                ref = bound[len(code)]
                if x > ref:
                    return None
                if x < ref:
                    bound = None
            code.append(x)
    return tuple(code)


def canonical_code(G: ColoredGraph) -> tuple[int, ...]:
    """Least breadth-first relabelling code over all start vertices.

    Colors are fixed, so a start vertex determines the whole relabelling; two
    graphs are color-isomorphic exactly when their codes coincide.
    """
    cached = G._cache.get("code")
    if cached is not None:
        return cached
    best: tuple[int, ...] | None = None
    for s in G.vertices:
        code = _code_from(G, s, best)
        if code is not None and (best is None or code < best):
            best = code
    assert best is not None
    result = (G.n,) + best
    G._cache["code"] = result
    return result


def canonical_graph(G: ColoredGraph) -> ColoredGraph:
    code = canonical_code(G)
    n = code[0]
    rows = [[0] * (n + 1) for _ in COLORS]
    for idx in range(n):
        for c in COLORS:
            rows[c][idx + 1] = code[1 + 4 * idx + c]
    return ColoredGraph(tuple(tuple(r) for r in rows), G.name)


def color_isomorphic(G: ColoredGraph, H: ColoredGraph) -> bool:
    if G.n != H.n:
        return False
    return canonical_code(G) == canonical_code(H)


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def state_hash(G: ColoredGraph) -> str:
    """64-bit FNV-1a of the canonical code (decimal ints, space separated), hex."""
    text = " ".join(map(str, canonical_code(G))).encode("ascii")
    return f"{fnv1a64(text):016x}"
