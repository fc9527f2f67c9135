"""Three-valued results for degree-bounded checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Verdict:
    status: Status
    bound: Any = None
    witness: Any = None
    detail: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.status is Status.INCONCLUSIVE

    @classmethod
    def ok(cls, bound=None, detail: str = "", witness=None, **stats) -> "Verdict":
        return cls(Status.HOLDS, bound, witness, detail, stats)

    @classmethod
    def fail(cls, witness=None, bound=None, detail: str = "", **stats) -> "Verdict":
        return cls(Status.FAILS, bound, witness, detail, stats)

    @classmethod
    def unknown(cls, bound=None, detail: str = "", **stats) -> "Verdict":
        return cls(Status.INCONCLUSIVE, bound, None, detail, stats)


def combine(verdicts: Iterable[Verdict], bound=None) -> Verdict:
    """Conjunction: any failure wins, then any inconclusive."""
    verdicts = list(verdicts)
    for v in verdicts:
        if v.fails:
            return v
    for v in verdicts:
        if v.inconclusive:
            return v
    return Verdict.ok(bound)
