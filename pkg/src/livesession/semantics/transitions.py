"""The labelled transition system on processes, with occurrence residuals.

An occurrence is a position (a path of tokens from the root) of a
communication prefix.  Path tokens are ``c`` (prefix continuation),
``&l`` (branch arm ``l``), ``L``/``R`` (parallel components), ``body``,
``after`` (loop continuation), ``then`` and ``else``.

Each move records which positions it executes and a list of rewrite rules
``(src, dst)``: a position ``src + rest`` before the move sits at
``dst + rest`` afterwards.  Positions matched by neither are discarded, and
positions of the result not hit by any rule are fresh (for instance the
copies created by unfolding a recursion).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

from ..syntax.ops import free_names, subst_pvar, subst_value
from ..syntax.terms import (
    Bra, If, IntV, Lit, Par, PRec, Rec, Recv, Send, Sel,
)
from .evaluation import DEFAULT_PRIMS, DEFAULT_VALUES, as_bool, as_int, eval_expr
from .labels import BraL, RecvL, SelL, SendL, TAU, TauSel

Path = Tuple[str, ...]
EXECUTED = "executed"


@dataclass(frozen=True)
class Move:
    label: object
    target: Union[object, Callable]  # a callable of the received value while open
    executed: Tuple[Path, ...]
    rules: Tuple[Tuple[Path, Path], ...]
    chans: frozenset = frozenset()

    @property
    def is_open(self) -> bool:
        return isinstance(self.label, RecvL) and self.label.value is None

    def instantiate(self, v) -> "Move":
        return Move(RecvL(self.label.chan, v), self.target(v), self.executed,
                    self.rules, self.chans)

    def residual(self, path: Path):
        """``EXECUTED``, the new position of ``path``, or ``None`` if discarded."""
        if path in self.executed:
            return EXECUTED
        for src, dst in self.rules:
            n = len(src)
            if path[:n] == src:
                return dst + path[n:]
        return None


def _under(m: Move, tok: str) -> Move:
    """Re-root a move of an unfolding/chosen subterm at token ``tok``."""
    pre = (tok,)
    return Move(m.label, m.target, tuple(pre + e for e in m.executed),
                tuple((pre + s, d) for s, d in m.rules), m.chans)


def _lift(m: Move, tok: str, other, other_tok: str) -> Move:
    pre = (tok,)
    if m.is_open:
        t = m.target
        target = (lambda v: Par(t(v), other)) if tok == "L" else (lambda v: Par(other, t(v)))
    else:
        target = Par(m.target, other) if tok == "L" else Par(other, m.target)
    rules = tuple((pre + s, pre + d) for s, d in m.rules) + (((other_tok,), (other_tok,)),)
    return Move(m.label, target, tuple(pre + e for e in m.executed), rules, m.chans)


class Stepper:
    """Computes moves of processes under one primitive table, with caching."""

    def __init__(self, prims=None):
        self.prims = prims if prims is not None else DEFAULT_PRIMS
        self._cache = {}
        self._hits = 0

    def eval(self, e):
        return eval_expr(e, {}, self.prims)

    def loop_count(self, p: PRec) -> int:
        return max(as_int(self.eval(p.bound)), 0)

    def unfold_loop(self, p: PRec):
        n = self.loop_count(p) - 1
        body = subst_value(p.body, IntV(n), p.index)
        return subst_pvar(body, PRec(p.var, p.index, Lit(IntV(n)), p.body, p.after), p.var)

    def moves(self, p, guard=frozenset()) -> Tuple[Move, ...]:
        hit = self._cache.get(p)
        if hit is not None:
            return hit
        before = self._hits
        out = self._moves(p, guard)
        if self._hits == before:
            self._cache[p] = out
        return out

    def _moves(self, p, guard):
        if isinstance(p, Send):
            if p.chan.dual() in free_names(p.cont):
                return ()
            v = self.eval(p.expr)
            return (Move(SendL(p.chan, v), p.cont, ((),), ((("c",), ()),), frozenset([p.chan])),)
        if isinstance(p, Recv):
            if p.chan.dual() in free_names(p.cont):
                return ()
            cont, x = p.cont, p.var
            return (Move(RecvL(p.chan), lambda v: subst_value(cont, v, x), ((),),
                         ((("c",), ()),), frozenset([p.chan])),)
        if isinstance(p, Sel):
            if p.chan.dual() in free_names(p.cont):
                return ()
            return (Move(SelL(p.chan, p.label), p.cont, ((),), ((("c",), ()),),
                         frozenset([p.chan])),)
        if isinstance(p, Bra):
            out = []
            for lab, q in p.arms:
                if p.chan.dual() in free_names(q):
                    continue
                out.append(Move(BraL(p.chan, lab), q, ((),), ((("&" + lab,), ()),),
                                frozenset([p.chan])))
            return tuple(out)
        if isinstance(p, Par):
            return self._par(p, guard)
        if isinstance(p, Rec):
            if p in guard:
                self._hits += 1
                return ()
            unfolded = subst_pvar(p.body, p, p.var)
            return tuple(_under(m, "body") for m in self.moves(unfolded, guard | {p}))
        if isinstance(p, PRec):
            if self.loop_count(p) == 0:
                return tuple(_under(m, "after") for m in self.moves(p.after, guard))
            return tuple(_under(m, "body") for m in self.moves(self.unfold_loop(p), guard))
        if isinstance(p, If):
            if as_bool(self.eval(p.cond)):
                return tuple(_under(m, "then") for m in self.moves(p.then, guard))
            return tuple(_under(m, "else") for m in self.moves(p.else_, guard))
        return ()

    def _par(self, p: Par, guard):
        lm = self.moves(p.left, guard)
        rm = self.moves(p.right, guard)
        fl, fr = free_names(p.left), free_names(p.right)
        out = []
        for m in lm:
            s = m.label.subject()
            if s is None or s.dual() not in fr:
                out.append(_lift(m, "L", p.right, "R"))
        for m in rm:
            s = m.label.subject()
            if s is None or s.dual() not in fl:
                out.append(_lift(m, "R", p.left, "L"))
        for a in lm:
            sa = a.label.subject()
            if sa is None:
                continue
            for b in rm:
                sb = b.label.subject()
                if sb is None or not sa.is_co(sb):
                    continue
                com = _com(a, b)
                if com is not None:
                    out.append(com)
        return tuple(out)

    # -- top-level transitions

    def step(self, p, values=DEFAULT_VALUES):
        """Closed transitions ``(label, target, move)``; open inputs take each value."""
        out = []
        for m in self.moves(p):
            if m.is_open:
                for v in values:
                    mi = m.instantiate(v)
                    out.append((mi.label, mi.target, mi))
            else:
                out.append((m.label, m.target, m))
        return out

    def top_level(self, p, _pre=()) -> frozenset:
        """Positions of top-level occurrences.

        Conditionals and loops are resolved by evaluation: only the branch a
        conditional will take, and only the body of a loop that has
        iterations left, contribute.
        """
        if isinstance(p, (Send, Recv, Sel, Bra)):
            return frozenset([_pre])
        if isinstance(p, Par):
            return self.top_level(p.left, _pre + ("L",)) | self.top_level(p.right, _pre + ("R",))
        if isinstance(p, Rec):
            return self.top_level(p.body, _pre + ("body",))
        if isinstance(p, PRec):
            if self.loop_count(p) == 0:
                return self.top_level(p.after, _pre + ("after",))
            n = self.loop_count(p) - 1
            return self.top_level(subst_value(p.body, IntV(n), p.index), _pre + ("body",))
        if isinstance(p, If):
            if as_bool(self.eval(p.cond)):
                return self.top_level(p.then, _pre + ("then",))
            return self.top_level(p.else_, _pre + ("else",))
        return frozenset()

    def enabled(self, p) -> frozenset:
        out = set()
        for m in self.moves(p):
            out.update(m.executed)
        return frozenset(out)


def _com(a: Move, b: Move) -> Optional[Move]:
    la, lb = a.label, b.label
    if isinstance(la, SendL) and isinstance(lb, RecvL):
        label, target = TAU, Par(a.target, b.target(la.value))
    elif isinstance(la, RecvL) and isinstance(lb, SendL):
        label, target = TAU, Par(a.target(lb.value), b.target)
    elif isinstance(la, SelL) and isinstance(lb, BraL) and la.label == lb.label:
        label, target = TauSel(la.label), Par(a.target, b.target)
    elif isinstance(la, BraL) and isinstance(lb, SelL) and la.label == lb.label:
        label, target = TauSel(la.label), Par(a.target, b.target)
    else:
        return None
    executed = tuple(("L",) + e for e in a.executed) + tuple(("R",) + e for e in b.executed)
    rules = (tuple((("L",) + s, ("L",) + d) for s, d in a.rules)
             + tuple((("R",) + s, ("R",) + d) for s, d in b.rules))
    return Move(label, target, executed, rules, a.chans | b.chans)


def step(p, prims=None, values=DEFAULT_VALUES):
    """Set of ``(label, target)`` pairs."""
    return {(lab, q) for lab, q, _ in Stepper(prims).step(p, values)}


def occurrences(p) -> frozenset:
    """All communication-prefix positions of ``p`` (syntactic)."""
    out = set()

    def walk(q, pre):
        if isinstance(q, (Send, Recv, Sel)):
            out.add(pre)
            walk(q.cont, pre + ("c",))
        elif isinstance(q, Bra):
            out.add(pre)
            for lab, r in q.arms:
                walk(r, pre + ("&" + lab,))
        elif isinstance(q, Par):
            walk(q.left, pre + ("L",))
            walk(q.right, pre + ("R",))
        elif isinstance(q, Rec):
            walk(q.body, pre + ("body",))
        elif isinstance(q, PRec):
            walk(q.body, pre + ("body",))
            walk(q.after, pre + ("after",))
        elif isinstance(q, If):
            walk(q.then, pre + ("then",))
            walk(q.else_, pre + ("else",))

    walk(p, ())
    return frozenset(out)


def node_at(p, path: Path):
    """The subterm of ``p`` at ``path``."""
    for tok in path:
        if tok == "c":
            p = p.cont
        elif tok.startswith("&"):
            p = p.arm(tok[1:])
        elif tok == "L":
            p = p.left
        elif tok == "R":
            p = p.right
        elif tok == "body":
            p = p.body
        elif tok == "after":
            p = p.after
        elif tok == "then":
            p = p.then
        elif tok == "else":
            p = p.else_
        else:
            raise KeyError(tok)
    return p
