"""J²-gems from two Jordan curves, bloboids and the thickening sequence.

Points ``1..2n`` are the crossings of the curves, numbered along ``X``.  The
segment ``p -> p+1`` of ``X`` gets color ``j`` for odd ``p`` and ``k`` for
even ``p``; chords of ``Y`` inside ``X`` get color 0 and chords outside get
the axis color ``i``.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .core import (
    ColoredGraph,
    axis_colors,
    complement,
    from_pairing,
    is_bipartite,
    is_crystallization,
    is_gem,
    residue_count,
    residues,
    state_hash,
)
from .errors import GenerationFailed, InvalidDiagram, No2DipoleFound, NotAGem, NotATwistor
from .moves import (
    DipoleSpec,
    MoveTrace,
    cancel_blobs,
    cancel_blobs_tracked,
    is_dipole,
    thicken_move,
    twist_move,
)

if TYPE_CHECKING:
    from .resolve import Resolution

Chord = tuple[int, int]


def _interleave(p: Chord, q: Chord) -> bool:
    a, b = sorted(p)
    c, d = sorted(q)
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def noncrossing(chords: Iterable[Chord]) -> bool:
    cs = list(chords)
    return not any(_interleave(cs[x], cs[y]) for x in range(len(cs)) for y in range(x + 1, len(cs)))


def _norm(chords: Iterable[Chord]) -> tuple[Chord, ...]:
    return tuple(sorted((min(a, b), max(a, b)) for a, b in chords))


@dataclass(frozen=True)
class ChordDiagram:
    n: int
    inner: tuple[Chord, ...]
    outer: tuple[Chord, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inner", _norm(self.inner))
        object.__setattr__(self, "outer", _norm(self.outer))

    @property
    def points(self) -> int:
        return 2 * self.n

    def problem(self) -> str | None:
        """First violated invariant, or None for a valid diagram."""
        m = self.points
        if self.n < 1:
            return "n must be at least 1"
        for name, chords in (("inner", self.inner), ("outer", self.outer)):
            ends = [p for c in chords for p in c]
            if len(chords) != self.n or sorted(ends) != list(range(1, m + 1)):
                return f"{name} chords are not a perfect matching of 1..{m}"
            if any(a == b for a, b in chords):
                return f"{name} chord with equal ends"
            if not noncrossing(chords):
                return f"{name} chords interleave"
        if self.cycle_count() != 1:
            return "Y is not a single closed curve"
        return None

    def validate(self) -> None:
        msg = self.problem()
        if msg:
            raise InvalidDiagram(msg)

    def cycle_count(self) -> int:
        m = self.points
        inn = [0] * (m + 1)
        out = [0] * (m + 1)
        for a, b in self.inner:
            inn[a], inn[b] = b, a
        for a, b in self.outer:
            out[a], out[b] = b, a
        seen = [False] * (m + 1)
        cycles = 0
        for s in range(1, m + 1):
            if seen[s]:
                continue
            cycles += 1
            p = s
            while not seen[p]:
                seen[p] = True
                q = inn[p]
                seen[q] = True
                p = out[q]
        return cycles

    def _mapped(self, f) -> tuple[tuple[Chord, ...], tuple[Chord, ...]]:
        return _norm((f(a), f(b)) for a, b in self.inner), _norm((f(a), f(b)) for a, b in self.outer)

    def canonical(self) -> ChordDiagram:
        """Least encoding over the relabellings that keep segment colors.

        Those are the even rotations and the reflection ``p -> 2n+1-p``.
        """
        m = self.points
        best = None
        for r in range(0, m, 2):
            for refl in (False, True):

                def f(p: int, r: int = r, refl: bool = refl) -> int:
                    q = (m + 1 - p) if refl else p
                    return (q - 1 + r) % m + 1

                enc = self._mapped(f)
                if best is None or enc < best:
                    best = enc
        assert best is not None
        return ChordDiagram(self.n, best[0], best[1])


def j2_from_chords(d: ChordDiagram, axis: int = 1) -> ColoredGraph:
    d.validate()
    i, j, k = axis_colors(axis)
    m = d.points
    rows = [[0] * (m + 1) for _ in range(4)]
    for p in range(1, m + 1):
        q = p % m + 1
        c = j if p % 2 else k
        rows[c][p], rows[c][q] = q, p
    for a, b in d.inner:
        rows[0][a], rows[0][b] = b, a
    for a, b in d.outer:
        rows[i][a], rows[i][b] = b, a
    return from_pairing(rows, f"j2-{d.n}")


def _recognize(G: ColoredGraph, axis: int) -> tuple[ChordDiagram | None, str | None]:
    i, j, k = axis_colors(axis)
    if not is_gem(G):
        return None, "not a gem"
    if not is_crystallization(G):
        return None, "not a crystallization"
    if residue_count(G, (j, k)) != 1:
        return None, f"b{j}{k} != 1"
    if residue_count(G, (0, i)) != 1:
        return None, f"b0{i} != 1"
    walk = residues(G, (j, k))[0]
    # walk starts at vertex 1 along color j, so positions 1,2 share a j-segment
    pos = {v: idx + 1 for idx, v in enumerate(walk.vertices)}
    inner = [(pos[a], pos[b]) for a, b in G.edges(0)]
    outer = [(pos[a], pos[b]) for a, b in G.edges(i)]
    d = ChordDiagram(G.n // 2, tuple(inner), tuple(outer))
    if not noncrossing(d.inner):
        return None, "0-edges interleave along the jk-gon"
    if not noncrossing(d.outer):
        return None, f"{i}-edges interleave along the jk-gon"
    msg = d.problem()
    if msg:
        return None, msg
    return d, None


def recognize_j2(G: ColoredGraph, axis: int = 1) -> ChordDiagram | None:
    """The chord diagram of a J²-gem, or None when ``G`` is not one."""
    return _recognize(G, axis)[0]


def j2_obstruction(G: ColoredGraph, axis: int = 1) -> str | None:
    """Why ``G`` is not a J²-gem for this axis (None if it is)."""
    return _recognize(G, axis)[1]


def is_j2(G: ColoredGraph, axis: int = 1) -> bool:
    return recognize_j2(G, axis) is not None


def is_j2b(G: ColoredGraph, axis: int = 1) -> bool:
    """True when cancelling every blob of ``G`` leaves a J²-gem."""
    return is_j2(cancel_blobs(G), axis)


# ----------------------------------------------------------------------------
# random diagrams


def random_noncrossing_matching(n: int, rng: random.Random) -> tuple[Chord, ...]:
    """Uniform non-crossing perfect matching of ``1..2n`` (cycle lemma on Dyck words)."""
    steps = [1] * (n + 1) + [-1] * n
    rng.shuffle(steps)
    # the rotation starting right after the last minimum of the prefix sums
    # has all partial sums positive
    total, low, at = 0, 0, 0
    for idx, s in enumerate(steps):
        total += s
        if total <= low:
            low, at = total, idx + 1
    word = (steps[at:] + steps[:at])[1:]
    stack: list[int] = []
    chords = []
    for p, s in enumerate(word, 1):
        if s == 1:
            stack.append(p)
        else:
            chords.append((stack.pop(), p))
    return tuple(chords)


def random_chord_diagram(n: int, seed: int | None = None, *, max_tries: int = 2_000_000) -> ChordDiagram:
    """A valid diagram with ``n`` inner chords, deterministic per seed.

    Inner and outer matchings are drawn independently and uniformly; pairs
    whose ``Y`` splits into several curves are rejected.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    for _ in range(max_tries):
        d = ChordDiagram(n, random_noncrossing_matching(n, rng), random_noncrossing_matching(n, rng))
        if d.cycle_count() == 1:
            return d
    raise GenerationFailed(f"no single-curve diagram with n={n} after {max_tries} tries")


# ----------------------------------------------------------------------------
# twisting a resolution


def twist_all(G: ColoredGraph, r: Resolution, order: Sequence[int] | None = None,
              trace: MoveTrace | None = None) -> ColoredGraph:
    """Apply the resolution's preprocessing, then twist all its twistors.

    Every pair must be a twistor of the preprocessed gem; the twistings are
    then applied one after another without re-checking, since twisting one
    pair can spoil the twistor conditions of another while the combined
    result is still order-independent.  ``order`` permutes the twistors; with
    ``trace`` every move is journaled (the trace must start at ``G``).
    """
    from .moves import apply_move, twist_via_flip
    from .twistors import is_twistor

    H = G
    for m in r.preprocessing:
        H = trace.apply(m) if trace is not None else apply_move(H, m)
    for t in r.twistors:
        if not is_twistor(H, t):
            raise NotATwistor(f"{t.label} (axis {t.axis}) is not a twistor")
    idx = range(len(r.twistors)) if order is None else order
    for x in idx:
        t = r.twistors[x]
        if trace is not None:
            H = trace.apply(twist_move(t, check=False))
        else:
            H = twist_via_flip(H, t, check=False)
    if not (is_gem(H) and is_bipartite(H)):
        raise NotAGem("twisting the resolution left the class of bipartite gems")
    return H


# ----------------------------------------------------------------------------
# bloboids


def make_bloboid(n: int) -> ColoredGraph:
    """``n`` blobs over 3-edges arranged in a cycle (2n vertices)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    m = 2 * n
    rows = [[0] * (m + 1) for _ in range(4)]
    for t in range(1, n + 1):
        a, b = 2 * t - 1, 2 * t
        for c in (0, 1, 2):
            rows[c][a], rows[c][b] = b, a
        nxt = b % m + 1
        rows[3][b], rows[3][nxt] = nxt, b
    return from_pairing(rows, f"bloboid-{n}")


def bloboid_color(G: ColoredGraph, over: Iterable[int] = (2, 3)) -> int | None:
    """The color ``h`` in ``over`` such that every complementary 3-residue is a blob."""
    for h in over:
        rs = residues(G, complement((h,)))
        if all(len(r) == 2 for r in rs):
            return h
    return None


def is_bloboid(G: ColoredGraph, over: Iterable[int] = (2, 3)) -> bool:
    """Every vertex lies in a blob over one color ``h`` in ``over``.

    The blobs are then chained by ``h``-edges into a single cycle because the
    graph is connected.  ``over=(3,)`` is the strict form.
    """
    return bloboid_color(G, over) is not None


# ----------------------------------------------------------------------------
# thickening sequence


@dataclass(frozen=True)
class ThickeningStep:
    before: str  # state hash of H_l
    dipole: DipoleSpec
    flip_color: int
    tag: int  # 0 when 0-edges are flipped, 1 for axis-colored edges
    after: str


@dataclass
class ThickeningSequence:
    axis: int
    initial: ColoredGraph
    steps: list[ThickeningStep] = field(default_factory=list)
    terminal: ColoredGraph | None = None
    trace: MoveTrace | None = None

    def __len__(self) -> int:
        return len(self.steps)


def _two_edge_pairs(G: ColoredGraph) -> list[tuple[int, int, tuple[int, ...]]]:
    out = []
    for u in G.vertices:
        for c in range(4):
            v = G.pairing[c][u]
            if u < v:
                cols = G.colors_between(u, v)
                if len(cols) == 2 and cols[0] == c:
                    out.append((u, v, cols))
    return out


def two_edge_pairs_are_dipoles(G: ColoredGraph) -> bool:
    """Every vertex pair joined by exactly two edges is a 2-dipole."""
    return all(is_dipole(G, cols, u, v) for u, v, cols in _two_edge_pairs(G))


def thickening_sequence(G: ColoredGraph, axis: int = 1, *, blob_color: int | None = None) -> ThickeningSequence:
    """Thicken 2-dipoles of a J²-gem one at a time until a bloboid remains.

    Every 2-dipole of a J²-gem with more than two vertices joins two
    consecutive crossings by a chord of ``Y`` and a segment of ``X``, so it
    mixes one ``Y`` color with one ``X`` color; flipping the other ``Y`` color
    turns it into a blob over the other ``X`` color.  All blobs must sit over
    the same color for the end result to be a bloboid, so the dipoles used
    all carry the same ``X`` color (``j`` by default, giving blobs over ``k``).
    """
    i, j, k = axis_colors(axis)
    if recognize_j2(G, axis) is None:
        raise InvalidDiagram(f"not a J²-gem: {j2_obstruction(G, axis)}")
    targets = [blob_color] if blob_color is not None else [k, j]
    failure = None
    for h in targets:
        try:
            return _thicken_all(G, axis, h)
        except No2DipoleFound as exc:
            failure = exc
    assert failure is not None
    raise failure


def _thicken_all(G: ColoredGraph, axis: int, h: int) -> ThickeningSequence:
    i, j, k = axis_colors(axis)
    x_color = k if h == j else j
    n = G.n // 2
    trace = MoveTrace(G)
    seq = ThickeningSequence(axis, G, trace=trace)
    H = G
    for _ in range(n - 1):
        core, alive = cancel_blobs_tracked(H)
        if recognize_j2(core, axis) is None:
            raise No2DipoleFound(f"intermediate is not J²B: {j2_obstruction(core, axis)}")
        if not two_edge_pairs_are_dipoles(core):
            raise No2DipoleFound("a two-edge pair of the J² core is not a 2-dipole")
        candidates = []
        for u, v, cols in _two_edge_pairs(core):
            if x_color not in cols or not set(cols) & {0, i}:
                continue
            d = DipoleSpec(cols, alive[u - 1], alive[v - 1])
            if is_dipole(H, d.colors, d.u, d.v):
                candidates.append(d)
        if not candidates:
            raise No2DipoleFound(f"no 2-dipole with X-color {x_color} in the J² core")
        d = min(candidates, key=lambda s: (s.u, s.v))
        y = d.colors[0] if d.colors[0] in (0, i) else d.colors[1]
        flip = i if y == 0 else 0
        before = state_hash(H)
        H = trace.apply(thicken_move(d, flip))
        seq.steps.append(ThickeningStep(before, d, flip, 0 if flip == 0 else 1, state_hash(H)))
    core = cancel_blobs(H)
    if recognize_j2(core, axis) is None:
        raise No2DipoleFound("terminal is not J²B")
    if not is_bloboid(H, (h,)):
        raise No2DipoleFound(f"terminal is not a bloboid over {h}")
    seq.terminal = H
    return seq

