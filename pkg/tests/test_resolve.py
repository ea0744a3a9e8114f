from __future__ import annotations

import pytest

from gemkit.core import axis_colors, residue_count
from gemkit.errors import NotACrystallization
from gemkit.generators import b2, j4, j6, random_crystallization
from gemkit.gray import build_gray_graph, crossing_free
from gemkit.jordan import recognize_j2, twist_all
from gemkit.moves import cancel_blobs
from gemkit.resolve import find_resolution, is_resoluble, search_resolution, validate


def test_single_gon_axis_needs_nothing():
    out = search_resolution(j4(), 1)
    assert out.resolution is not None and len(out.resolution) == 0
    assert out.reason is None and out.expanded == 0


def test_j6_resolution_uses_a_converted_antipole():
    r = find_resolution(j6(), 1)
    assert r is not None and len(r) == 1
    assert [e.label for e in r.edges] == ["3:4-6"]
    assert len(r.preprocessing) == 1
    assert str(r.preprocessing[0]).startswith("DipoleCreate colors=02")
    assert validate(j6(), r) is None


def test_disconnected_reason():
    out = search_resolution(j4(), 2)
    assert out.resolution is None and out.reason == "disconnected"
    assert is_resoluble(j4()) == [1, 3]


def test_budget_exhaustion():
    out = search_resolution(j6(), 1, budget=1)
    assert out.resolution is None and out.reason == "budget-exhausted"
    assert out.expanded == 1


def test_requires_crystallization():
    with pytest.raises(NotACrystallization):
        search_resolution(b2(), 1)


def _found(limit=40):
    for seed in range(limit):
        G = random_crystallization(4 + seed % 6, seed, twists=seed % 4)
        for axis in (1, 2, 3):
            out = search_resolution(G, axis, budget=3000)
            if out.resolution is not None:
                yield G, axis, out.resolution


def test_resolution_invariants():
    count = 0
    for G, axis, r in _found():
        _, j, k = axis_colors(axis)
        gray = build_gray_graph(G, axis)
        m = len(gray.nodes)
        # a spanning tree on the jk-gons with pairwise disjoint ends
        assert len(r.edges) == m - 1 == residue_count(G, (j, k)) - 1
        ends = [x for e in r.edges for x in (e.u, e.v)]
        assert len(set(ends)) == 2 * len(r.edges)
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for e in r.edges:
            a, b = find(e.source), find(e.target)
            assert a != b
            parent[a] = b
        assert len({find(x) for x in range(m)}) == 1
        assert crossing_free(G, axis, list(r.edges), gray=gray)
        H = twist_all(G, r)
        assert residue_count(H, (j, k)) == 1
        assert recognize_j2(cancel_blobs(H), axis) is not None
        count += 1
    assert count > 30


def test_search_is_deterministic():
    G = random_crystallization(7, 11, twists=2)
    for axis in (1, 2, 3):
        a = search_resolution(G, axis)
        b = search_resolution(G, axis)
        assert a.reason == b.reason and a.expanded == b.expanded
        assert a.resolution == b.resolution
