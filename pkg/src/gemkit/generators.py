"""Named small gems and seeded random gem generators."""

from __future__ import annotations

import random
from itertools import combinations

from .core import COLORS, ColoredGraph, build_graph, complement, parity
from .errors import GemError
from .moves import DipoleSpec, cancel_dipole, create_dipole, find_dipoles, twist_via_flip
from .twistors import enumerate_twistors


def g2() -> ColoredGraph:
    return build_graph(2, [[(1, 2)]] * 4, "G2")


def j4() -> ColoredGraph:
    a, b = [(1, 2), (3, 4)], [(2, 3), (4, 1)]
    return build_graph(4, [a, b, a, b], "J4")


def b2() -> ColoredGraph:
    a, b = [(1, 2), (3, 4)], [(2, 3), (4, 1)]
    return build_graph(4, [a, a, a, b], "B2")


def k4neg() -> ColoredGraph:
    """A 4-vertex (3+1)-graph that is not a gem (v + t = 8, b = 7)."""
    return build_graph(4, [[(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)], [(1, 2), (3, 4)]], "K4NEG")


def j6() -> ColoredGraph:
    """J4 with a {2,3}-dipole threaded through the 0-edge 1-2 and the 1-edge 3-2."""
    G, _ = create_dipole(j4(), (2, 3), {0: (1, 2), 1: (3, 2)})
    return G.renamed("J6")


NAMED = {"g2": g2, "j4": j4, "b2": b2, "k4neg": k4neg, "j6": j6}


def random_dipole_creation(
    G: ColoredGraph, size: int, rng: random.Random, tries: int = 50
) -> tuple[ColoredGraph, DipoleSpec, dict[int, tuple[int, int]]] | None:
    """Create a random dipole with ``size`` colors, keeping bipartite graphs bipartite."""
    side = parity(G)
    for _ in range(tries):
        cols = rng.choice(list(combinations(COLORS, size)))
        want = rng.randint(0, 1)
        att = {}
        for c in complement(cols):
            a, b = rng.choice(G.edges(c))
            if side is not None:
                # every a-end must share a parity so the new vertex can take the other
                if side[a] != want:
                    a, b = b, a
            elif rng.random() < 0.5:
                a, b = b, a
            att[c] = (a, b)
        try:
            H, spec = create_dipole(G, cols, att)
        except GemError:
            continue
        return H, spec, att
    return None


def random_dipole_walk(
    steps: int, seed: int | None = None, sizes: tuple[int, ...] = (1, 2, 3), cancel_rate: float = 0.25
) -> ColoredGraph:
    """Gem reached from G2 by ``steps`` random dipole creations and cancellations."""
    rng = random.Random(seed)
    G = g2()
    for _ in range(steps):
        if rng.random() < cancel_rate:
            ds = [d for s in sizes for d in find_dipoles(G, s)]
            if ds:
                G = cancel_dipole(G, rng.choice(ds))
                continue
        made = random_dipole_creation(G, rng.choice(sizes), rng)
        if made is not None:
            G = made[0]
    return G.renamed(f"walk-{seed}")


def random_crystallization(steps: int, seed: int | None = None, twists: int = 0) -> ColoredGraph:
    """Bipartite crystallization from 2-dipole creations on G2 and random twistings.

    2-dipole creations keep one 3-residue per color triple, and twistings do
    not touch 3-residue counts, so the result stays a crystallization.
    """
    rng = random.Random(seed)
    G = g2()
    for _ in range(steps):
        made = random_dipole_creation(G, 2, rng)
        if made is not None:
            G = made[0]
    for _ in range(twists):
        axis = rng.randint(1, 3)
        ts = enumerate_twistors(G, axis)
        if ts:
            G = twist_via_flip(G, rng.choice(ts))
    return G.renamed(f"cryst-{seed}")
