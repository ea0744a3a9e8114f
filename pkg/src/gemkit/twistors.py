"""Twistor and antipole predicates for bipartite gems.

For an axis ``i`` with ``(i, j, k)`` a permutation of ``(1, 2, 3)``, a pair
``{u, v}`` has *kind* ``t`` in {j, k} when it lies in one ``0t``-gon and one
``is``-gon (``s`` the remaining non-axis color) while being separated by the
other four bigons.  Same parity makes it a twistor, opposite parity an
antipole.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ColoredGraph, axis_colors, is_gem, parity, residue_labels, same_residue
from .errors import NotBipartite


@dataclass(frozen=True, order=True)
class Twistor:
    axis: int
    kind: int
    u: int
    v: int

    def __post_init__(self) -> None:
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @property
    def other(self) -> int:
        """The non-axis color that is not the kind (the e-pair color)."""
        _, j, k = axis_colors(self.axis)
        return k if self.kind == j else j

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.u}-{self.v}"


class Antipole(Twistor):
    pass


def shared_and_split(axis: int, kind: int) -> tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]:
    """Bigons a kind-``kind`` pair must share, and those it must be split by."""
    i, j, k = axis_colors(axis)
    if kind not in (j, k):
        raise ValueError(f"kind {kind} is not a non-axis color for axis {axis}")
    s = k if kind == j else j
    share = ((0, kind), tuple(sorted((i, s))))
    split = ((0, i), (0, s), tuple(sorted((kind, i))), tuple(sorted((kind, s))))
    return share, split


def pair_role(G: ColoredGraph, axis: int, kind: int, u: int, v: int) -> str | None:
    """``"twistor"``, ``"antipole"`` or None for the pair ``{u, v}``."""
    side = parity(G)
    if side is None:
        raise NotBipartite("twistors are defined in bipartite gems")
    if u == v:
        return None
    share, split = shared_and_split(axis, kind)
    if not all(same_residue(G, p, u, v) for p in share):
        return None
    if any(same_residue(G, p, u, v) for p in split):
        return None
    return "twistor" if side[u] == side[v] else "antipole"


def is_twistor(G: ColoredGraph, t: Twistor) -> bool:
    if isinstance(t, Antipole):
        return False
    try:
        return pair_role(G, t.axis, t.kind, t.u, t.v) == "twistor"
    except NotBipartite:
        return False


def is_antipole(G: ColoredGraph, a: Twistor) -> bool:
    try:
        return pair_role(G, a.axis, a.kind, a.u, a.v) == "antipole"
    except NotBipartite:
        return False


def _enumerate(G: ColoredGraph, axis: int, role: str) -> list[Twistor]:
    if parity(G) is None:
        raise NotBipartite("twistors are defined in bipartite gems")
    if not is_gem(G):
        raise ValueError("twistor enumeration expects a gem")
    _, j, k = axis_colors(axis)
    cls = Twistor if role == "twistor" else Antipole
    out = []
    for kind in (j, k):
        share, _ = shared_and_split(axis, kind)
        # candidates must share the 0t-gon: group by it first
        groups: dict[int, list[int]] = {}
        lab = residue_labels(G, share[0])
        for v in G.vertices:
            groups.setdefault(lab[v], []).append(v)
        for members in groups.values():
            for a_idx, u in enumerate(members):
                for v in members[a_idx + 1:]:
                    if pair_role(G, axis, kind, u, v) == role:
                        out.append(cls(axis, kind, u, v))
    out.sort()
    return out


def enumerate_twistors(G: ColoredGraph, axis: int) -> list[Twistor]:
    """All j- and k-twistors of a bipartite gem for the given axis, sorted."""
    return _enumerate(G, axis, "twistor")


def enumerate_antipoles(G: ColoredGraph, axis: int) -> list[Antipole]:
    return _enumerate(G, axis, "antipole")
