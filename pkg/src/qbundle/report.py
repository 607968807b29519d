"""Verification reports shared by every checking routine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Entry:
    check_id: str
    anchor: str
    status: str
    witness: str = ""

    def as_dict(self) -> dict:
        return {"check-id": self.check_id, "paper-anchor": self.anchor,
                "status": self.status, "witness": self.witness}


@dataclass
class Report:
    """Ordered list of named checks with pass/fail status and witnesses."""

    name: str = ""
    entries: list[Entry] = field(default_factory=list)

    def add(self, check_id: str, ok: bool, witness: str = "", anchor: str = "") -> bool:
        self.entries.append(Entry(check_id, anchor, "pass" if ok else "fail", witness))
        return ok

    def skip(self, check_id: str, reason: str, anchor: str = "") -> None:
        self.entries.append(Entry(check_id, anchor, "n/a", reason))

    def tally(self, check_id: str, results, anchor: str = "") -> bool:
        """Collapse (label, ok) pairs into one entry naming the first failure."""
        n = 0
        for label, ok in results:
            n += 1
            if not ok:
                return self.add(check_id, False, f"fails at {label}", anchor)
        return self.add(check_id, True, f"{n} cases", anchor)

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for e in other.entries:
            cid = f"{prefix}{e.check_id}" if prefix else e.check_id
            self.entries.append(Entry(cid, e.anchor, e.status, e.witness))
        return self

    @property
    def ok(self) -> bool:
        return all(e.status != "fail" for e in self.entries)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failures(self) -> list[Entry]:
        return [e for e in self.entries if e.status == "fail"]

    @property
    def passed(self) -> list[Entry]:
        return [e for e in self.entries if e.status == "pass"]

    def get(self, check_id: str) -> Entry:
        for e in self.entries:
            if e.check_id == check_id:
                return e
        raise KeyError(check_id)

    def to_json(self) -> str:
        return json.dumps([e.as_dict() for e in self.entries], indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{e.status.upper():4} {e.check_id}" + (f"  [{e.witness}]" if e.witness else "")
                 for e in self.entries]
        lines.append(f"{len(self.passed)} passed, {len(self.failures)} failed")
        return "\n".join(lines)
