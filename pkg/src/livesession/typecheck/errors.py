from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


def show_path(path) -> str:
    return "/" + "/".join(path) if path else "/"


@dataclass
class TypingFailure:
    rule: str
    path: tuple
    expected: str = ""
    actual: str = ""
    pending_left: frozenset = frozenset()
    message: str = ""

    def to_json(self):
        return {
            "rule": self.rule,
            "path": show_path(self.path),
            "expected": self.expected,
            "actual": self.actual,
            "pendingLeft": sorted(self.pending_left),
        }

    def __str__(self):
        parts = [f"{self.rule} at {show_path(self.path)}"]
        if self.message:
            parts.append(self.message)
        if self.expected or self.actual:
            parts.append(f"expected {self.expected or '-'}, found {self.actual or '-'}")
        if self.pending_left:
            parts.append("undischarged: {" + ", ".join(sorted(self.pending_left)) + "}")
        return "; ".join(parts)


class SessionTypeError(Exception):
    def __init__(self, failure: TypingFailure):
        super().__init__(str(failure))
        self.failure = failure


class LivenessTypeError(SessionTypeError):
    pass


class Unsupported(LivenessTypeError):
    """The invariant search space is beyond the configured bound."""


@dataclass
class CheckResult:
    ok: bool
    failure: Optional[TypingFailure] = None
    invariants: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_json(self):
        out = {"ok": self.ok, "failure": self.failure.to_json() if self.failure else None}
        if self.invariants:
            out["invariants"] = {show_path(p): sorted(i) for p, i in sorted(self.invariants.items())}
        return out
