"""Search for i-resolutions: crossing-free, vertex-disjoint spanning trees of the gray graph.

Candidate trees are enumerated by backtracking over the gray edges; every
complete tree is then checked by actually twisting it (after converting any
antipoles) and recognising a J²-gem in the blob-free result.  That last check
is authoritative: trees that pass the geometric test but fail it are
rejected and recorded as discrepancies.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field

from .core import ColoredGraph, axis_colors, is_crystallization, residue_count
from .errors import GemError, NoAdequateSiteFound, NotACrystallization
from .gray import GrayEdge, GrayGraph, antipole_conversions, build_gray_graph, edges_cross
from .jordan import recognize_j2, twist_all
from .moves import Move, cancel_blobs
from .twistors import Antipole, Twistor, is_antipole

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Resolution:
    axis: int
    twistors: tuple[Twistor, ...]
    preprocessing: tuple[Move, ...] = ()
    # gray edges of the original gem the tree was chosen from
    edges: tuple[GrayEdge, ...] = ()

    def __len__(self) -> int:
        return len(self.twistors)


@dataclass
class SearchOutcome:
    axis: int
    resolution: Resolution | None
    reason: str | None  # "disconnected", "budget-exhausted", "all-trees-rejected"
    expanded: int = 0
    discrepancies: list[tuple[str, ...]] = field(default_factory=list)


def preparations(G: ColoredGraph, axis: int, edges: list[GrayEdge]) -> Iterator[Resolution]:
    """Every way of turning a tree of gray edges into a twistable resolution.

    Antipoles are converted one after another, in vertex order, trying each
    conversion site in turn; plain twistor edges pass through unchanged.
    """
    ordered = sorted(edges, key=lambda e: (e.u, e.v, e.kind))

    def rec(idx: int, working: ColoredGraph, pre: tuple[Move, ...], tws: tuple[Twistor, ...]):
        if idx == len(ordered):
            yield Resolution(axis, tws, pre, tuple(edges))
            return
        e = ordered[idx]
        if e.origin == "twistor":
            yield from rec(idx + 1, working, pre, tws + (Twistor(axis, e.kind, e.u, e.v),))
            return
        a = Antipole(axis, e.kind, e.u, e.v)
        if not is_antipole(working, a):
            return
        for H, t, move in antipole_conversions(working, a):
            yield from rec(idx + 1, H, pre + (move,), tws + (t,))

    yield from rec(0, G, (), ())


def prepare(G: ColoredGraph, axis: int, edges: list[GrayEdge]) -> Resolution:
    """The first preparation of a tree (most direct conversion sites)."""
    for r in preparations(G, axis, edges):
        return r
    raise NoAdequateSiteFound("the antipoles of this tree cannot all be converted")


def validate(G: ColoredGraph, r: Resolution) -> str | None:
    """Run the twist-all pipeline; None on success, else what went wrong."""
    _, j, k = axis_colors(r.axis)
    try:
        H = twist_all(G, r)
    except GemError as exc:
        return f"twist failed: {exc}"
    except AssertionError as exc:
        return f"twist left the gem class: {exc}"
    if residue_count(H, (j, k)) != 1:
        return f"{residue_count(H, (j, k))} {j}{k}-gons remain"
    core = cancel_blobs(H)
    if recognize_j2(core, r.axis) is None:
        return "blob-free result is not a J²-gem"
    return None


def _edge_order(gray: GrayGraph) -> list[GrayEdge]:
    deg = [gray.degree(x) for x in range(len(gray.nodes))]
    return sorted(gray.edges, key=lambda e: (deg[e.source] + deg[e.target], e.u, e.v, e.kind))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x


def search_resolution(
    G: ColoredGraph, axis: int, budget: int = 100_000, max_preparations: int = 32
) -> SearchOutcome:
    """Backtracking search for an i-resolution.

    Each complete tree is tried with up to ``max_preparations`` choices of
    antipole conversion sites; the first one that passes :func:`validate` wins.
    """
    if not is_crystallization(G):
        raise NotACrystallization("resolutions are searched in crystallizations")
    gray = build_gray_graph(G, axis)
    out = SearchOutcome(axis, None, None)
    m = len(gray.nodes)
    if m == 1:
        r = Resolution(axis, ())
        problem = validate(G, r)
        if problem is None:
            out.resolution = r
        else:
            out.reason = "all-trees-rejected"
            out.discrepancies.append(("empty", problem))
        return out
    if not gray.is_connected():
        out.reason = "disconnected"
        return out

    order = _edge_order(gray)
    convertible: dict[tuple[int, int, int], bool] = {}

    def admissible(e: GrayEdge) -> bool:
        if e.origin == "twistor":
            return True
        if e.key not in convertible:
            convertible[e.key] = next(antipole_conversions(G, e.pair(axis)), None) is not None
        return convertible[e.key]

    order = [e for e in order if admissible(e)]
    chosen: list[GrayEdge] = []
    used: set[int] = set()
    exhausted = False

    def reachable(start: int) -> bool:
        # can the chosen edges plus the remaining ones still span every node?
        uf = _UnionFind(m)
        for e in chosen:
            uf.parent[uf.find(e.source)] = uf.find(e.target)
        for e in order[start:]:
            if e.u in used or e.v in used:
                continue
            uf.parent[uf.find(e.source)] = uf.find(e.target)
        root = uf.find(0)
        return all(uf.find(x) == root for x in range(m))

    def components_joined(e: GrayEdge) -> bool:
        uf = _UnionFind(m)
        for f in chosen:
            uf.parent[uf.find(f.source)] = uf.find(f.target)
        return uf.find(e.source) != uf.find(e.target)

    def rec(start: int) -> Resolution | None:
        nonlocal exhausted
        if out.expanded >= budget:
            exhausted = True
            return None
        out.expanded += 1
        if len(chosen) == m - 1:
            problem = "the antipoles of this tree cannot all be converted"
            for tries, r in enumerate(preparations(G, axis, chosen)):
                if tries >= max_preparations:
                    break
                problem = validate(G, r)
                if problem is None:
                    return r
            log.warning("crossing-free tree rejected by twist pipeline: %s (%s)",
                        " ".join(e.label for e in chosen), problem)
            out.discrepancies.append(tuple(e.label for e in chosen) + (problem,))
            return None
        if not reachable(start):
            return None
        for idx in range(start, len(order)):
            e = order[idx]
            if e.u in used or e.v in used:
                continue
            if not components_joined(e) or any(edges_cross(e, f) for f in chosen):
                continue
            chosen.append(e)
            used.update((e.u, e.v))
            found = rec(idx + 1)
            chosen.pop()
            used.difference_update((e.u, e.v))
            if found is not None or exhausted:
                return found
        return None

    out.resolution = rec(0)
    if out.resolution is None:
        out.reason = "budget-exhausted" if exhausted else "all-trees-rejected"
    return out


def find_resolution(G: ColoredGraph, axis: int, budget: int = 100_000) -> Resolution | None:
    return search_resolution(G, axis, budget).resolution


def is_resoluble(G: ColoredGraph, budget: int = 100_000) -> list[int]:
    """Axes for which a resolution was found within the budget (an empirical probe)."""
    return [axis for axis in (1, 2, 3) if find_resolution(G, axis, budget) is not None]
