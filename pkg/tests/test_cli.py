import json
import shlex

import pytest

from ssetlab.cli import run
from ssetlab.formats import serialize_smap, serialize_sset, write_text
from ssetlab.report import validate_report
from ssetlab.sset import terminal_map
from ssetlab.standard import horn, horn_inclusion, point, simplex


@pytest.fixture(scope="module")
def work(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert run(["corpus", "--dim", "2", "--size", "20", "--workdir", str(d)]) == 0
    return d


def _json(capsys):
    data = json.loads(capsys.readouterr().out)
    validate_report(data)
    return data


def test_corpus_manifest(work):
    m = json.loads((work / "corpus" / "manifest.json").read_text(encoding="utf-8"))
    assert m["seed"] == 7 and len(m["digest"]) == 64
    assert (work / "corpus" / "Δ1.sset").exists()


def test_check_files(work, capsys):
    code = run(["check", "corpus/Δ2.sset", "corpus/λ2_1.smap", "--workdir", str(work), "--format", "json"])
    data = _json(capsys)
    assert code == 0
    assert len(data["input_digests"]) >= 2


def test_kan_failure_writes_replayable_witness(work, capsys):
    code = run(["kan", "corpus/Δ1.sset", "--dim", "2", "--workdir", str(work), "--format", "json"])
    data = _json(capsys)
    assert code == 1
    row = data["checks"][0]
    replay = row["witness"]["replay"]
    assert replay.startswith("ssetlab lift")
    argv = shlex.split(replay)[1:]
    assert run(argv) == 1
    capsys.readouterr()


def test_kan_holds_for_point(work, capsys):
    assert run(["kan", "corpus/Δ0.sset", "--dim", "3", "--workdir", str(work)]) == 0
    assert "holds" in capsys.readouterr().out


def test_lift_inner_horn(tmp_path, capsys):
    write_text(tmp_path / "h.sset", serialize_sset(horn(2, 1)))
    write_text(tmp_path / "d.sset", serialize_sset(simplex(2)))
    write_text(tmp_path / "pt.sset", serialize_sset(point()))
    write_text(tmp_path / "j.smap", serialize_smap(horn_inclusion(2, 1), "j"))
    write_text(tmp_path / "c.smap", serialize_smap(terminal_map(simplex(2), point()), "c"))
    # Δ2 is the nerve of a poset, so inner horns fill
    assert run(["lift", "j.smap", "c.smap", "--workdir", str(tmp_path)]) == 0
    # against itself some square sends the missing face outside the horn
    assert run(["lift", "j.smap", "j.smap", "--workdir", str(tmp_path)]) == 1
    assert list((tmp_path / "witness" / "lift").glob("*.smap"))
    capsys.readouterr()


def test_factor_writes_artifacts(work, capsys):
    code = run(["factor", "corpus/!Δ0.smap", "--stages", "1", "--dim", "1", "--workdir", str(work)])
    capsys.readouterr()
    assert code in (0, 2)
    out = work / "factor"
    assert (out / "G1.sset").exists() and (out / "left.trace").exists()
    assert run(["check", "factor/left.trace", "--workdir", str(work)]) == 0
    capsys.readouterr()


def test_minimalize_and_bundle(work, capsys):
    assert run(["minimalize", "corpus/pr1~3a~Δ1×D2.smap", "--workdir", str(work)]) == 0
    assert run(["bundle", "corpus/cover.smap", "--workdir", str(work)]) == 0
    capsys.readouterr()


def test_homset(work, capsys):
    code = run(["homset", "corpus/Δ1.sset", "corpus/D2.sset", "--workdir", str(work), "--format", "json"])
    data = _json(capsys)
    assert code == 0
    assert data["checks"][0]["stats"]["classes"] == 2


def test_error_exit_codes(tmp_path, capsys):
    (tmp_path / "bad.sset").write_text("sset X\nsimplex a 0\nface a 0 = a\n", encoding="utf-8")
    assert run(["check", "bad.sset", "--workdir", str(tmp_path)]) == 65
    err = capsys.readouterr().err
    assert "bad.sset:3:" in err and "index-out-of-range" in err
    assert run(["check", "missing.sset", "--workdir", str(tmp_path)]) == 66
    assert run(["frobnicate"]) == 64
    assert run(["kan"]) == 64
    capsys.readouterr()


def test_verify_axioms_only(work, capsys):
    code = run(["verify-axioms", "--only", "MC1/terminal-initial", "--workdir", str(work),
                "--format", "json", "--report", "r.json"])
    data = _json(capsys)
    assert code in (0, 2)
    assert json.loads((work / "r.json").read_text(encoding="utf-8")) == data
    assert [r["id"] for r in data["checks"]] == ["MC1/terminal-initial"]
