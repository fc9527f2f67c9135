"""JSON reports: one row per check, versioned schema, deterministic layout."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from . import __version__
from .sset import NormalSimplex, SimplexId, SimplicialMap, SimplicialSet
from .verdict import Status, Verdict

SCHEMA_VERSION = 1
INVALID = "invalid-input"

REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "suite", "tool_version", "config", "input_digests", "checks",
                 "summary", "timings"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "suite": {"type": "string"},
        "tool_version": {"type": "string"},
        "config": {"type": "object"},
        "input_digests": {"type": "object", "additionalProperties": {"type": "string",
                                                                     "pattern": "^[0-9a-f]{64}$"}},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "group", "status", "bound", "detail", "stats"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "group": {"type": "string"},
                    "status": {"enum": [s.value for s in Status] + [INVALID]},
                    "bound": {},
                    "detail": {"type": "string"},
                    "stats": {"type": "object"},
                    "witness": {
                        "type": "object",
                        "required": ["data", "replay"],
                        "properties": {"data": {}, "replay": {"type": ["string", "null"]}},
                    },
                },
                "allOf": [{
                    "if": {"properties": {"status": {"const": "fails"}}},
                    "then": {"required": ["witness"]},
                }],
            },
        },
        "summary": {
            "type": "object",
            "required": ["holds", "fails", "inconclusive", INVALID],
            "additionalProperties": {"type": "integer", "minimum": 0},
        },
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}


def jsonable(obj: Any) -> Any:
    """Plain-JSON rendering of verdict payloads (maps, squares, simplices)."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Status):
        return obj.value
    if isinstance(obj, NormalSimplex):
        return str(obj)
    if isinstance(obj, SimplexId):
        return obj.name
    if isinstance(obj, SimplicialSet):
        return {"sset": obj.name, "counts": list(obj.counts())}
    if isinstance(obj, SimplicialMap):
        return {"smap": obj.name, "source": obj.source.name, "target": obj.target.name,
                "images": {g.name: str(y) for g, y in obj.images.items()}}
    if isinstance(obj, Verdict):
        return {"status": obj.status.value, "bound": jsonable(obj.bound), "detail": obj.detail}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    if hasattr(obj, "__dataclass_fields__"):
        return {k: jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__
                if not k.startswith("_") and k not in ("view_E", "view_Y")}
    return str(obj)


@dataclass
class CheckRow:
    id: str
    group: str
    status: str
    bound: Any = None
    detail: str = ""
    stats: dict = field(default_factory=dict)
    witness: Any = None
    replay: str | None = None
    seconds: float = 0.0

    @classmethod
    def of(cls, id: str, group: str, v: Verdict, seconds: float = 0.0,
           replay: str | None = None) -> "CheckRow":
        return cls(id, group, v.status.value, v.bound, v.detail, dict(v.stats), v.witness,
                   replay, seconds)

    @classmethod
    def invalid(cls, id: str, group: str, reason: str) -> "CheckRow":
        return cls(id, group, INVALID, None, reason)

    def as_json(self) -> dict:
        out = {"id": self.id, "group": self.group, "status": self.status,
               "bound": jsonable(self.bound), "detail": self.detail, "stats": jsonable(self.stats)}
        if self.status == Status.FAILS.value or self.witness is not None:
            out["witness"] = {"data": jsonable(self.witness), "replay": self.replay}
        return out


class Report:
    def __init__(self, suite: str, config: dict | None = None):
        self.suite = suite
        self.config = dict(config or {})
        self.digests: dict[str, str] = {}
        self.rows: list[CheckRow] = []
        self._t0 = time.perf_counter()

    def add(self, row: CheckRow) -> CheckRow:
        self.rows.append(row)
        return row

    def summary(self) -> dict[str, int]:
        out = {s.value: 0 for s in Status}
        out[INVALID] = 0
        for r in self.rows:
            out[r.status] += 1
        return out

    @property
    def status(self) -> Status:
        s = self.summary()
        if s["fails"]:
            return Status.FAILS
        if s["inconclusive"]:
            return Status.INCONCLUSIVE
        return Status.HOLDS

    def exit_code(self) -> int:
        return {Status.HOLDS: 0, Status.FAILS: 1, Status.INCONCLUSIVE: 2}[self.status]

    def as_json(self) -> dict:
        timings = {r.id: round(r.seconds, 6) for r in self.rows}
        timings["total"] = round(time.perf_counter() - self._t0, 6)
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "tool_version": __version__,
            "config": jsonable(self.config),
            "input_digests": dict(sorted(self.digests.items())),
            "checks": [r.as_json() for r in self.rows],
            "summary": self.summary(),
            "timings": timings,
        }

    def dumps(self) -> str:
        data = self.as_json()
        validate_report(data)
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"

    def text(self) -> str:
        lines = [f"{self.suite}: {self.status.value}"]
        for r in self.rows:
            extra = f" [{r.detail}]" if r.detail else ""
            lines.append(f"  {r.status:<13} {r.id}{extra}")
            if r.replay and r.status == Status.FAILS.value:
                lines.append(f"                replay: {r.replay}")
        s = self.summary()
        lines.append("  " + ", ".join(f"{k}={v}" for k, v in s.items()))
        return "\n".join(lines) + "\n"


def validate_report(data: dict) -> None:
    jsonschema.validate(data, REPORT_SCHEMA)
