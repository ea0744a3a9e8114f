"""Acceptance criteria, one test per criterion, each with its time bound.

Every test prints a single ``PASS``/``FAIL`` line; the lines are repeated in
the terminal summary by ``conftest.py``.
"""

from __future__ import annotations

import io
import random
import sys
import time

from gemkit.cli import main
from gemkit.core import (
    axis_colors,
    check_complementary,
    gem_report,
    generator_count,
    is_bipartite,
    is_gem,
    residue_count,
)
from gemkit.errors import Disconnected
from gemkit.formats import parse_stream
from gemkit.generators import (
    b2,
    j4,
    j6,
    k4neg,
    random_crystallization,
    random_dipole_creation,
    random_dipole_walk,
)
from gemkit.jordan import (
    is_bloboid,
    is_j2b,
    j2_from_chords,
    random_chord_diagram,
    recognize_j2,
    thickening_sequence,
    twist_all,
    two_edge_pairs_are_dipoles,
)
from gemkit.moves import (
    apply_move,
    c_flip,
    cancel_blobs,
    cancel_dipole,
    replay,
    twist_direct,
    twist_via_flip,
)
from gemkit.resolve import find_resolution, search_resolution
from gemkit.twistors import enumerate_twistors

RESULTS: list[str] = []


def _report(num: int, title: str, failures: list[str], elapsed: float, limit: float | None, note: str = ""):
    timing = f"{elapsed:.2f}s < {limit:g}s" if limit is not None else f"{elapsed:.2f}s, timed with its parent"
    ok = not failures and (limit is None or elapsed < limit)
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {title} [{timing}]"
    if note:
        line += f" {note}"
    if failures:
        line += f" first failure: {failures[0]}"
    RESULTS.append(line)
    print(line)
    return ok


def _check(num, title, failures, elapsed, limit, note=""):
    ok = _report(num, title, failures, elapsed, limit, note)
    assert not failures, failures[:5]
    assert ok, f"criterion {num} exceeded {limit}s ({elapsed:.2f}s)"


def test_criterion_01_gem_condition():
    start = time.perf_counter()
    failures = []
    for seed in range(500):
        G = random_dipole_walk(5 + seed % 30, seed)
        rep = gem_report(G)
        if rep.v + rep.t != rep.b:
            failures.append(f"walk seed {seed}: v={rep.v} t={rep.t} b={rep.b}")
    rep = gem_report(k4neg())
    if (rep.v + rep.t, rep.b, rep.is_gem) != (8, 7, False):
        failures.append(f"K4NEG: v+t={rep.v + rep.t} b={rep.b}")
    _check(1, "v + t = b on 500 dipole walks; K4NEG has v+t=8, b=7", failures,
           time.perf_counter() - start, 10)


def test_criterion_02_complementary_bigons():
    start = time.perf_counter()
    failures = []
    suite = [random_crystallization(3 + s % 10, s, twists=s % 4) for s in range(150)]
    suite += [j2_from_chords(random_chord_diagram(1 + s % 15, s), 1 + s % 3) for s in range(50)]
    suite += [j4(), j6()]
    for G in suite:
        if not gem_report(G).is_crystallization:
            failures.append(f"{G.name} is not a crystallization")
        elif not check_complementary(G):
            failures.append(f"{G.name}: complementary bigon counts differ")
    _check(2, "complementary bigon equalities", failures, time.perf_counter() - start, 10,
           f"({len(suite)} crystallizations)")


def test_criterion_03_04_twist_equivalence():
    start = time.perf_counter()
    differ, left = [], []
    count = 0
    gems = [j6()] + [random_crystallization(3 + s % 8, s, twists=s % 4) for s in range(100)]
    for G in gems:
        for axis in (1, 2, 3):
            for t in enumerate_twistors(G, axis):
                H = twist_direct(G, t)
                if H != twist_via_flip(G, t):
                    differ.append(f"{G.name} {t}")
                if not (is_gem(H) and is_bipartite(H)):
                    left.append(f"{G.name} {t}")
                count += 1
    if count == 0:
        differ.append("no twistors in the suite")
    elapsed = time.perf_counter() - start
    ok3 = _report(3, "twist_direct equals twist_via_flip", differ, elapsed, 30,
                  f"({count} twistors over J6 and 100 random gems; J6 itself has none)")
    ok4 = _report(4, "every twist result is a bipartite gem", left, elapsed, None)
    assert not differ and not left, (differ[:3], left[:3])
    assert ok3 and ok4


def test_criterion_05_twist_all_order_independence():
    start = time.perf_counter()
    failures = []
    cases = [(j6(), 1)]
    cases += [(random_crystallization(3 + s % 8, s, twists=s % 4), axis) for s in range(60) for axis in (1, 2, 3)]
    resolved = multi = 0
    for G, axis in cases:
        r = search_resolution(G, axis, budget=5000).resolution
        if r is None:
            continue
        resolved += 1
        _, j, k = axis_colors(axis)
        ref = twist_all(G, r)
        expected = residue_count(G, (j, k)) - len(r.edges)
        got = residue_count(ref, (j, k))
        if got != expected or got != 1:
            failures.append(f"{G.name} axis {axis}: {got} jk-gons, expected {expected}")
        if len(r) > 1:
            multi += 1
        rng = random.Random(resolved)
        for _ in range(20):
            order = list(range(len(r)))
            rng.shuffle(order)
            if twist_all(G, r, order) != ref:
                failures.append(f"{G.name} axis {axis}: order {order} differs")
                break
    if multi == 0:
        failures.append("no resolution with two or more edges")
    _check(5, "twist_all is order independent and leaves one jk-gon", failures,
           time.perf_counter() - start, 30, f"({resolved} resolutions, {multi} with several edges)")


def test_criterion_06_j2_identities():
    start = time.perf_counter()
    failures = []
    for seed in range(200):
        n = 1 + seed % 20
        axis = 1 + seed % 3
        _, j, k = axis_colors(axis)
        G = j2_from_chords(random_chord_diagram(n, seed), axis)
        rep = gem_report(G)
        checks = (
            rep.is_crystallization,
            residue_count(G, (j, k)) == 1,
            residue_count(G, (0, axis)) == 1,
            rep.v + 4 == rep.b,
            generator_count(G, axis) == 0,
        )
        if not all(checks):
            failures.append(f"seed {seed} n={n}: {checks}")
    _check(6, "J²-gem identities on 200 diagrams", failures, time.perf_counter() - start, 10)


def test_criterion_07_roundtrips():
    start = time.perf_counter()
    failures = []
    for seed in range(200):
        d = random_chord_diagram(1 + seed % 20, seed)
        back = recognize_j2(j2_from_chords(d))
        if back is None or back.canonical() != d.canonical():
            failures.append(f"diagram seed {seed}")
    rng = random.Random(7)
    created = 0
    while created < 500:
        G = random_dipole_walk(rng.randrange(0, 20), rng.randrange(10**6))
        made = random_dipole_creation(G, rng.choice((1, 2, 3)), rng)
        if made is None:
            continue
        H, spec, _ = made
        if cancel_dipole(H, spec) != G:
            failures.append(f"create/cancel {spec} on {G.name}")
        created += 1
    flipped = attempts = 0
    while flipped < 500 and attempts < 5000:
        attempts += 1
        G = random_dipole_walk(rng.randrange(2, 20), rng.randrange(10**6), cancel_rate=0.0)
        c = rng.randrange(4)
        e, f = rng.sample(G.edges(c), 2)
        try:
            H = c_flip(G, c, e, f)
        except Disconnected:
            continue
        (a, b), (x, y) = e, f
        if c_flip(H, c, (a, y), (x, b)) != G:
            failures.append(f"flip {c} {e} {f} on {G.name}")
        flipped += 1
    if flipped < 500:
        failures.append(f"only {flipped} connected flip sites found")
    _check(7, "recognize/construct, create/cancel and flip roundtrips", failures,
           time.perf_counter() - start, 30, f"(200 diagrams, {created} dipoles, {flipped} flips)")


def test_criterion_08_09_thickening():
    start = time.perf_counter()
    seq_fail, pair_fail = [], []
    pairs = 0
    seq = thickening_sequence(j4())
    if len(seq) != 1 or seq.terminal != b2():
        seq_fail.append("J4 does not thicken to B2 in one step")
    for seed in range(100):
        n = 2 + seed % 19
        G = j2_from_chords(random_chord_diagram(n, 5000 + seed))
        seq = thickening_sequence(G)
        if len(seq) != n - 1:
            seq_fail.append(f"seed {seed}: length {len(seq)} for n={n}")
        H = G
        states = [G]
        for entry in seq.trace.entries:
            H = apply_move(H, entry.move)
            states.append(H)
        for idx, S in enumerate(states):
            if not is_j2b(S):
                seq_fail.append(f"seed {seed}: step {idx} is not J²B")
            core = cancel_blobs(S)
            if not two_edge_pairs_are_dipoles(core):
                pair_fail.append(f"seed {seed}: step {idx}")
            pairs += 1
        if not is_bloboid(seq.terminal):
            seq_fail.append(f"seed {seed}: terminal is not a bloboid")
    elapsed = time.perf_counter() - start
    ok8 = _report(8, "thickening sequences of length n - 1 ending in bloboids", seq_fail, elapsed, 60,
                  "(100 J²-gems, n <= 20)")
    ok9 = _report(9, "two-edge pairs of every J² core are 2-dipoles", pair_fail, elapsed, None,
                  f"({pairs} cores)")
    assert not seq_fail and not pair_fail, (seq_fail[:3], pair_fail[:3])
    assert ok8 and ok9


def test_criterion_10_resolution_pipeline():
    start = time.perf_counter()
    failures = []
    r = find_resolution(j6(), 1)
    if r is None or len(r.edges) != 1:
        failures.append(f"J6: {r}")
    elif recognize_j2(cancel_blobs(twist_all(j6(), r)), 1) is None:
        failures.append("J6: twisted core is not a J²-gem")
    r = find_resolution(j4(), 1)
    if r is None or len(r) != 0:
        failures.append(f"J4: {r}")
    _check(10, "J6 resolves with one edge, J4 with none", failures, time.perf_counter() - start, 5)


def _cli(argv, stdin, monkeypatch):
    out, err = io.StringIO(), io.StringIO()
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    return main(argv, out, err), out.getvalue(), err.getvalue()


def test_criterion_11_cli_end_to_end(monkeypatch):
    start = time.perf_counter()
    failures = []
    for seed in range(20):
        code, text, err = _cli(["gen", "j2", "--n", "10", "--seed", str(seed)], "", monkeypatch)
        for argv in (["resolve", "--axis", "1"], ["twist-all"], ["sequence"]):
            if code != 0:
                break
            code, text, err = _cli(argv, text, monkeypatch)
        if code != 0:
            failures.append(f"seed {seed}: exit {code} {err.strip()}")
            continue
        traces = [b.value for b in parse_stream(text) if b.kind == "trace"]
        try:
            ok = len(traces) == 1 and replay(traces[0]) is not None
        except Exception as exc:  # replay raises on any hash mismatch
            ok = False
            failures.append(f"seed {seed}: {exc}")
        code, _, err = _cli(["replay"], text, monkeypatch)
        if not ok or code != 0:
            failures.append(f"seed {seed}: replay failed {err.strip()}")
    _check(11, "gen j2 | resolve | twist-all | sequence on 20 seeds", failures,
           time.perf_counter() - start, 60)
