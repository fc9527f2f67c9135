import json

import jsonschema
import pytest

from ssetlab.report import INVALID, CheckRow, Report, jsonable, validate_report
from ssetlab.standard import horn_inclusion, simplex
from ssetlab.verdict import Verdict


def _report():
    rep = Report("unit", {"dim": 2})
    rep.add(CheckRow.of("a", "G", Verdict.ok(bound=2, squares=3)))
    rep.add(CheckRow.of("b", "G", Verdict.unknown(bound=2, detail="budget exhausted")))
    return rep


def test_summary_and_exit_codes():
    rep = _report()
    assert rep.summary() == {"holds": 1, "fails": 0, "inconclusive": 1, INVALID: 0}
    assert rep.exit_code() == 2
    rep.add(CheckRow.of("c", "G", Verdict.fail({"x": 1}), replay="ssetlab lift ..."))
    assert rep.exit_code() == 1
    assert "replay: ssetlab lift" in rep.text()
    only_ok = Report("unit")
    only_ok.add(CheckRow.of("a", "G", Verdict.ok()))
    assert only_ok.exit_code() == 0
    only_ok.add(CheckRow.invalid("bad", "G", "square does not commute"))
    assert only_ok.exit_code() == 0


def test_dumps_validates_and_is_stable():
    rep = _report()
    rep.digests["x"] = "0" * 64
    data = json.loads(rep.dumps())
    validate_report(data)
    assert data["schema"] == 1
    assert list(data) == ["schema", "suite", "tool_version", "config", "input_digests", "checks",
                          "summary", "timings"]
    assert "total" in data["timings"]


def test_fail_requires_witness():
    data = _report().as_json()
    data["checks"][0]["status"] = "fails"
    with pytest.raises(jsonschema.ValidationError):
        validate_report(data)
    data["checks"][0]["witness"] = {"data": None, "replay": None}
    validate_report(data)


def test_bad_digest_rejected():
    data = _report().as_json()
    data["input_digests"] = {"f": "xyz"}
    with pytest.raises(jsonschema.ValidationError):
        validate_report(data)


def test_jsonable():
    m = horn_inclusion(2, 1)
    out = jsonable({"map": m, "set": simplex(1), "v": Verdict.ok(bound=1), "s": {3, 1}})
    assert out["map"]["source"] == "Λ2_1"
    assert out["set"] == {"sset": "Δ1", "counts": [2, 1]}
    assert out["v"]["status"] == "holds"
    assert out["s"] == [1, 3]
    json.dumps(out)
