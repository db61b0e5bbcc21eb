"""The syntactic response approximation and process-variable contexts."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..syntax.terms import Bra, If, Par, PRec, PVar, Rec, Recv, Send, Sel


@dataclass(frozen=True)
class GenEntry:
    """General recursion: accumulated selections, invariant, environment."""
    A: frozenset
    I: frozenset
    delta: tuple  # sorted (chan, type) pairs

    @property
    def env(self) -> dict:
        return dict(self.delta)


@dataclass(frozen=True)
class PrimEntry:
    """Primitive recursion: the pending set allowed at the recursion point."""
    I: frozenset
    delta: tuple

    @property
    def env(self) -> dict:
        return dict(self.delta)


def freeze_env(env: dict) -> tuple:
    return tuple(sorted(env.items(), key=lambda kv: str(kv[0])))


def gamma_plus(gamma: dict, labels) -> dict:
    """Add ``labels`` to the accumulator of every general entry."""
    labels = frozenset(labels)
    if not labels:
        return gamma
    return {x: GenEntry(e.A | labels, e.I, e.delta) if isinstance(e, GenEntry) else e
            for x, e in gamma.items()}


@lru_cache(maxsize=None)
def approx_A(p) -> frozenset:
    """Labels that every maximal lock-free run of ``p`` is certain to select."""
    if isinstance(p, (Send, Recv)):
        return approx_A(p.cont)
    if isinstance(p, Sel):
        return approx_A(p.cont) | {p.label}
    if isinstance(p, Bra):
        out = None
        for lab, q in p.arms:
            a = approx_A(q) | {lab}
            out = a if out is None else out & a
        return out or frozenset()
    if isinstance(p, Par):
        return approx_A(p.left) | approx_A(p.right)
    if isinstance(p, Rec):
        return approx_A(p.body)
    if isinstance(p, PRec):
        return approx_A(p.after)
    if isinstance(p, If):
        return approx_A(p.then) & approx_A(p.else_)
    return frozenset()


def M_of(gamma: dict) -> frozenset:
    out = set()
    for e in gamma.values():
        out |= e.A if isinstance(e, GenEntry) else e.I
    return frozenset(out)


def std_of(gamma: dict) -> dict:
    return {x: e.env for x, e in gamma.items()}


def must_select_before(p, x: str):
    """Labels selected on every way from ``p`` to a call of ``x``.

    ``None`` when ``p`` never calls ``x``.  Loop bodies cannot call ``x`` by
    the conventions, so only the continuation of a loop counts.
    """
    if isinstance(p, PVar):
        return frozenset() if p.var == x else None
    if isinstance(p, (Send, Recv)):
        return must_select_before(p.cont, x)
    if isinstance(p, Sel):
        r = must_select_before(p.cont, x)
        return None if r is None else r | {p.label}
    if isinstance(p, Bra):
        return _meet(None if r is None else r | {l}
                     for l, r in ((l, must_select_before(q, x)) for l, q in p.arms))
    if isinstance(p, Par):
        return _meet([must_select_before(p.left, x), must_select_before(p.right, x)])
    if isinstance(p, If):
        return _meet([must_select_before(p.then, x), must_select_before(p.else_, x)])
    if isinstance(p, Rec):
        return None if p.var == x else must_select_before(p.body, x)
    if isinstance(p, PRec):
        return _meet([None if p.var == x else must_select_before(p.body, x),
                      must_select_before(p.after, x)])
    return None


def _meet(parts):
    out = None
    for r in parts:
        if r is not None:
            out = r if out is None else out & r
    return out
