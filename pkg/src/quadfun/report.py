"""Pass/fail reports shared by the verification routines and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .abgroup import AbHom
from .theory import Morphism


def jsonable(x: Any) -> Any:
    """Convert witnesses (morphisms, tuples, sparse vectors) to plain JSON values."""
    if isinstance(x, Morphism):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return repr(x)


@dataclass
class CheckResult:
    id: str
    anchor: str
    ok: bool
    witness: Any = None

    def to_json(self) -> dict:
        out = {"id": self.id, "anchor": self.anchor, "status": "pass" if self.ok else "fail"}
        if not self.ok:
            out["witness"] = jsonable(self.witness)
        return out


@dataclass
class Report:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, id: str, anchor: str, ok: bool, witness: Any = None) -> CheckResult:
        result = CheckResult(id, anchor, bool(ok), None if ok else witness)
        self.checks.append(result)
        return result

    def compare(self, id: str, anchor: str, lhs: AbHom, rhs: AbHom, context: Any = None) -> CheckResult:
        """Record whether two maps agree; the witness names the first differing generator."""
        j = lhs.first_difference(rhs)
        witness = None if j is None else {"context": context, "generator": j, "lhs": lhs.images[j], "rhs": rhs.images[j]}
        return self.add(id, anchor, j is None, witness)

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def passed(self, id: str) -> bool:
        """Whether every check with this id passed (vacuously true if none ran)."""
        return all(c.ok for c in self.checks if c.id == id)

    def ids(self) -> list[str]:
        return sorted({c.id for c in self.checks})

    def summary(self) -> dict[str, bool]:
        out: dict[str, bool] = {}
        for c in self.checks:
            out[c.id] = out.get(c.id, True) and c.ok
        return out

    def to_json(self, wall_time: float | None = None) -> dict:
        out: dict = {"suite": self.suite, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}
        if wall_time is not None:
            out["wall_time"] = round(wall_time, 3)
        return out

    def dumps(self, wall_time: float | None = None) -> str:
        return json.dumps(self.to_json(wall_time), sort_keys=True, indent=2, ensure_ascii=False)


def merge(suite: str, reports: Iterable[Report]) -> Report:
    out = Report(suite)
    for r in reports:
        out.extend(r)
    return out
