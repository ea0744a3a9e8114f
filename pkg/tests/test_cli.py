from __future__ import annotations

import io
import json
import sys

import pytest

from gemkit.cli import main
from gemkit.formats import parse_stream, serialize_gem
from gemkit.generators import g2, j4, j6, k4neg
from gemkit.jordan import is_bloboid, recognize_j2
from gemkit.moves import replay


class Tty(io.StringIO):
    def isatty(self):
        return True


def run(argv, stdin="", monkeypatch=None, err=None):
    out, err = io.StringIO(), err if err is not None else io.StringIO()
    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, G in {"g2": g2(), "j4": j4(), "j6": j6(), "k4neg": k4neg()}.items():
        p = tmp_path / f"{name}.gem"
        p.write_text(serialize_gem(G))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_check_g2(files, monkeypatch):
    code, out, _ = run(["check", files["g2"]], monkeypatch=monkeypatch)
    assert code == 0
    assert "v=2 t=4 b=6 gem=yes" in out


def test_check_k4neg_is_property_failure(files, monkeypatch):
    code, out, _ = run(["check", files["k4neg"]], monkeypatch=monkeypatch)
    assert code == 2 and "gem=no" in out


def test_check_json(files, monkeypatch):
    code, out, _ = run(["check", "--json", files["j6"]], monkeypatch=monkeypatch)
    row = json.loads(out)
    assert code == 0 and row["name"] == "J6" and (row["v"], row["t"], row["b"]) == (6, 4, 10)


def test_resolve_to_file(files, monkeypatch):
    target = files["dir"] / "j6.res"
    code, out, _ = run(["resolve", "--axis", "1", "--budget", "100000", files["j6"], "-o", str(target)],
                       monkeypatch=monkeypatch)
    assert code == 0 and out == ""
    blocks = parse_stream(target.read_text())
    assert [b.kind for b in blocks] == ["gem", "resolution"]
    assert blocks[1].value.edges == [(3, 4, 6)]


def test_resolve_failure_codes(files, monkeypatch):
    code, _, err = run(["resolve", "--axis", "2", files["j4"]], monkeypatch=monkeypatch)
    assert code == 3 and "error[disconnected]" in err
    code, _, err = run(["resolve", "--axis", "1", "--budget", "1", files["j6"]], monkeypatch=monkeypatch)
    assert code == 3 and "error[budget-exhausted]" in err


def test_input_errors(files, monkeypatch):
    code, _, err = run(["check"], stdin="gem X\nvertices 3\n", monkeypatch=monkeypatch)
    assert code == 1 and "error[semantic-error]" in err
    code, _, err = run(["check"], stdin="gem X\nvertices x\n", monkeypatch=monkeypatch)
    assert code == 1 and "error[syntax-error]" in err and "line 2" in err
    code, _, err = run(["check", str(files["dir"] / "missing.gem")], monkeypatch=monkeypatch)
    assert code == 1 and "error[io-error]" in err
    code, _, _ = run(["twist-all"], stdin=serialize_gem(j6()), monkeypatch=monkeypatch)
    assert code == 1
    assert run(["frobnicate"], monkeypatch=monkeypatch)[0] == 1


def test_error_colour(files, monkeypatch):
    monkeypatch.delenv("NO_COLOR", raising=False)
    code, _, err = run(["check", "nope.gem"], monkeypatch=monkeypatch, err=Tty())
    assert code == 1 and err.startswith("\033[31merror")
    monkeypatch.setenv("NO_COLOR", "1")
    _, _, err = run(["check", "nope.gem"], monkeypatch=monkeypatch, err=Tty())
    assert err.startswith("error[io-error]")
    _, _, err = run(["check", "nope.gem"], monkeypatch=monkeypatch)
    assert err.startswith("error[io-error]")


def test_info_twistors_gray(files, monkeypatch):
    code, out, _ = run(["info", files["j6"]], monkeypatch=monkeypatch)
    assert code == 0 and "axis 1: twistors 0 antipoles 1" in out
    code, out, _ = run(["twistors", "--axis", "1", files["j6"]], monkeypatch=monkeypatch)
    assert out == "axis=1 antipole 3:4-6\n"
    code, out, _ = run(["gray", "--axis", "1", files["j6"]], monkeypatch=monkeypatch)
    assert out.startswith("gray axis=1 nodes=2 edges=1 connected=yes")


def test_gen_is_deterministic(monkeypatch):
    a = run(["gen", "crystallization", "--steps", "6", "--seed", "3"], monkeypatch=monkeypatch)[1]
    b = run(["gen", "crystallization", "--steps", "6", "--seed", "3"], monkeypatch=monkeypatch)[1]
    assert a == b and a.startswith("gem cryst-3")
    code, out, _ = run(["gen", "bloboid", "--n", "3"], monkeypatch=monkeypatch)
    (block,) = parse_stream(out)
    assert code == 0 and is_bloboid(block.value)
    code, out, _ = run(["gen", "random-walk", "--steps", "8", "--normalize"], monkeypatch=monkeypatch)
    assert "color 0: 1-2 3-4" in out


def test_j2_construct_and_recognize(monkeypatch):
    code, out, _ = run(["j2"], stdin="jordan 4\ninner: 1-2 3-4\nouter: 1-4 2-3\n", monkeypatch=monkeypatch)
    (block,) = parse_stream(out)
    assert code == 0 and block.value.pairing == j4().pairing
    code, out, _ = run(["j2"], stdin=serialize_gem(j4()), monkeypatch=monkeypatch)
    assert code == 0 and out.startswith("jordan 4")
    code, _, err = run(["j2"], stdin=serialize_gem(j6()), monkeypatch=monkeypatch)
    assert code == 2 and "error[not-j2]" in err


def test_dot(files, monkeypatch):
    code, out, _ = run(["dot", files["g2"]], monkeypatch=monkeypatch)
    assert code == 0 and sum("--" in ln for ln in out.splitlines()) == 4
    code, out, _ = run(["dot", "--axis", "1", files["j6"]], monkeypatch=monkeypatch)
    assert 'label="3:4-6"' in out


def test_j6_pipeline(files, monkeypatch):
    _, res, _ = run(["resolve", "--axis", "1", files["j6"]], monkeypatch=monkeypatch)
    code, twisted, _ = run(["twist-all"], stdin=res, monkeypatch=monkeypatch)
    assert code == 0
    blocks = parse_stream(twisted)
    assert [b.kind for b in blocks] == ["trace", "gem"]
    assert recognize_j2(blocks[-1].value) is not None
    code, diagram, _ = run(["j2"], stdin=twisted, monkeypatch=monkeypatch)
    assert code == 0 and diagram.startswith("jordan 8")


@pytest.mark.parametrize("seed", range(3))
def test_full_pipeline_replays(seed, monkeypatch):
    text = run(["gen", "j2", "--n", "10", "--seed", str(seed)], monkeypatch=monkeypatch)[1]
    for argv in (["resolve", "--axis", "1"], ["twist-all"], ["sequence"]):
        code, text, err = run(argv, stdin=text, monkeypatch=monkeypatch)
        assert code == 0, err
    blocks = parse_stream(text)
    assert [b.kind for b in blocks] == ["sequence", "trace", "gem"]
    assert replay(blocks[1].value).pairing == blocks[2].value.pairing
    assert is_bloboid(blocks[2].value)
    code, out, _ = run(["replay"], stdin=text, monkeypatch=monkeypatch)
    assert code == 0 and "moves ok" in out
