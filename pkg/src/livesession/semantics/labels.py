"""Process transition labels."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..syntax.printer import show_value
from ..syntax.terms import Chan

EMPTY = frozenset()


@dataclass(frozen=True)
class SendL:
    chan: Chan
    value: object

    def subject(self) -> Optional[Chan]:
        return self.chan

    def sel(self) -> frozenset:
        return EMPTY

    def show(self) -> str:
        return f"{self.chan}!{show_value(self.value)}"


@dataclass(frozen=True)
class RecvL:
    chan: Chan
    value: object = None  # None while the input is still open

    def subject(self):
        return self.chan

    def sel(self):
        return EMPTY

    def show(self):
        v = "_" if self.value is None else show_value(self.value)
        return f"{self.chan}?{v}"


@dataclass(frozen=True)
class SelL:
    chan: Chan
    label: str

    def subject(self):
        return self.chan

    def sel(self):
        return frozenset([self.label])

    def show(self):
        return f"{self.chan}<<{self.label}"


@dataclass(frozen=True)
class BraL:
    chan: Chan
    label: str

    def subject(self):
        return self.chan

    def sel(self):
        return frozenset([self.label])

    def show(self):
        return f"{self.chan}>>{self.label}"


@dataclass(frozen=True)
class Tau:
    def subject(self):
        return None

    def sel(self):
        return EMPTY

    def show(self):
        return "tau"


@dataclass(frozen=True)
class TauSel:
    label: str

    def subject(self):
        return None

    def sel(self):
        return frozenset([self.label])

    def show(self):
        return f"tau:{self.label}"


TAU = Tau()


def subject(lam):
    return lam.subject()


def sel_of_label(lam) -> frozenset:
    return lam.sel()


def sel_of_trace(labels) -> frozenset:
    out = set()
    for lam in labels:
        out |= lam.sel()
    return frozenset(out)
