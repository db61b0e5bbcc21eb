"""Well-formedness conventions on primitive-recursion bodies."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .ops import free_pvars, subterms
from .terms import Inact, Par, PRec, Rec


class ViolationKind(enum.Enum):
    ParInBody = "ParInBody"
    InactInBody = "InactInBody"
    NestedRec = "NestedRec"
    ForeignPVar = "ForeignPVar"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    loop_var: str
    detail: str = ""

    def __str__(self):
        msg = f"{self.kind.value} in body of loop {self.loop_var}"
        return f"{msg}: {self.detail}" if self.detail else msg


def simple_for(body, x: str) -> list:
    """Violations that keep ``body`` from being simple for ``x``.

    At most one violation per kind is reported, in a fixed order.  Process
    variables bound by a nested ``rec`` inside the body are not foreign (the
    nested binder is already a violation).
    """
    found = {}
    for q in subterms(body):
        if isinstance(q, Par):
            found.setdefault(ViolationKind.ParInBody, "")
        elif isinstance(q, Inact):
            found.setdefault(ViolationKind.InactInBody, "")
        elif isinstance(q, (Rec, PRec)):
            found.setdefault(ViolationKind.NestedRec, q.var)
    foreign = sorted(free_pvars(body) - {x})
    if foreign:
        found[ViolationKind.ForeignPVar] = ",".join(foreign)
    return [Violation(k, x, found[k]) for k in ViolationKind if k in found]


def check_conventions(p) -> list:
    """Violations over every loop in ``p``; empty means well formed."""
    out = []
    for q in subterms(p):
        if isinstance(q, PRec):
            out.extend(simple_for(q.body, q.var))
    return out
