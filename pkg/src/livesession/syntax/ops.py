"""Binding operations: free names, substitutions, type unfolding."""
from __future__ import annotations

from functools import lru_cache

from .terms import (
    Apply, Binary, Bra, Branch, If, In, Lit, Mu, Out, Par, PRec,
    PVar, Rec, Recv, Send, Sel, TVar, Unary, Var,
)


class NonContractive(ValueError):
    pass


# ------------------------------------------------------------- processes


@lru_cache(maxsize=None)
def free_names(p) -> frozenset:
    """Free polarised channel names; a process variable contributes its list."""
    if isinstance(p, (Send, Recv, Sel)):
        return free_names(p.cont) | {p.chan}
    if isinstance(p, Bra):
        out = {p.chan}
        for _, q in p.arms:
            out |= free_names(q)
        return frozenset(out)
    if isinstance(p, Par):
        return free_names(p.left) | free_names(p.right)
    if isinstance(p, Rec):
        return free_names(p.body)
    if isinstance(p, PRec):
        return free_names(p.body) | free_names(p.after)
    if isinstance(p, PVar):
        return frozenset(p.chans)
    if isinstance(p, If):
        return free_names(p.then) | free_names(p.else_)
    return frozenset()


def expr_vars(e) -> frozenset:
    if isinstance(e, Var):
        return frozenset([e.name])
    if isinstance(e, Unary):
        return expr_vars(e.arg)
    if isinstance(e, Binary):
        return expr_vars(e.left) | expr_vars(e.right)
    if isinstance(e, Apply):
        out = frozenset()
        for a in e.args:
            out |= expr_vars(a)
        return out
    return frozenset()


def subst_expr(e, v, x):
    if isinstance(e, Var):
        return Lit(v) if e.name == x else e
    if isinstance(e, Unary):
        return Unary(e.op, subst_expr(e.arg, v, x))
    if isinstance(e, Binary):
        return Binary(e.op, subst_expr(e.left, v, x), subst_expr(e.right, v, x))
    if isinstance(e, Apply):
        return Apply(e.fname, tuple(subst_expr(a, v, x) for a in e.args))
    return e


def free_data_vars(p) -> frozenset:
    if isinstance(p, Send):
        return expr_vars(p.expr) | free_data_vars(p.cont)
    if isinstance(p, Recv):
        return free_data_vars(p.cont) - {p.var}
    if isinstance(p, Sel):
        return free_data_vars(p.cont)
    if isinstance(p, Bra):
        out = frozenset()
        for _, q in p.arms:
            out |= free_data_vars(q)
        return out
    if isinstance(p, Par):
        return free_data_vars(p.left) | free_data_vars(p.right)
    if isinstance(p, Rec):
        return free_data_vars(p.body)
    if isinstance(p, PRec):
        return (expr_vars(p.bound) | (free_data_vars(p.body) - {p.index})
                | free_data_vars(p.after))
    if isinstance(p, If):
        return expr_vars(p.cond) | free_data_vars(p.then) | free_data_vars(p.else_)
    return frozenset()


def subst_value(p, v, x: str):
    """``p{v/x}``; receive and loop-index binders shadow ``x``."""
    if x not in free_data_vars(p):
        return p
    return _subst_value(p, v, x)


def _subst_value(p, v, x):
    if isinstance(p, Send):
        return Send(p.chan, subst_expr(p.expr, v, x), _subst_value(p.cont, v, x))
    if isinstance(p, Recv):
        if p.var == x:
            return p
        return Recv(p.chan, p.var, _subst_value(p.cont, v, x))
    if isinstance(p, Sel):
        return Sel(p.chan, p.label, _subst_value(p.cont, v, x))
    if isinstance(p, Bra):
        return Bra(p.chan, tuple((l, _subst_value(q, v, x)) for l, q in p.arms))
    if isinstance(p, Par):
        return Par(_subst_value(p.left, v, x), _subst_value(p.right, v, x))
    if isinstance(p, Rec):
        return Rec(p.var, _subst_value(p.body, v, x), p.invariant)
    if isinstance(p, PRec):
        body = p.body if p.index == x else _subst_value(p.body, v, x)
        return PRec(p.var, p.index, subst_expr(p.bound, v, x), body,
                    _subst_value(p.after, v, x))
    if isinstance(p, If):
        return If(subst_expr(p.cond, v, x), _subst_value(p.then, v, x),
                  _subst_value(p.else_, v, x))
    return p


def free_pvars(p) -> frozenset:
    if isinstance(p, PVar):
        return frozenset([p.var])
    if isinstance(p, (Send, Recv, Sel)):
        return free_pvars(p.cont)
    if isinstance(p, Bra):
        out = frozenset()
        for _, q in p.arms:
            out |= free_pvars(q)
        return out
    if isinstance(p, Par):
        return free_pvars(p.left) | free_pvars(p.right)
    if isinstance(p, Rec):
        return free_pvars(p.body) - {p.var}
    if isinstance(p, PRec):
        return (free_pvars(p.body) - {p.var}) | free_pvars(p.after)
    if isinstance(p, If):
        return free_pvars(p.then) | free_pvars(p.else_)
    return frozenset()


def subst_pvar(p, q, x: str):
    """``p{q/X}``: every free ``X(...)`` is replaced wholesale by ``q``."""
    if isinstance(p, PVar):
        return q if p.var == x else p
    if isinstance(p, Send):
        return Send(p.chan, p.expr, subst_pvar(p.cont, q, x))
    if isinstance(p, Recv):
        return Recv(p.chan, p.var, subst_pvar(p.cont, q, x))
    if isinstance(p, Sel):
        return Sel(p.chan, p.label, subst_pvar(p.cont, q, x))
    if isinstance(p, Bra):
        return Bra(p.chan, tuple((l, subst_pvar(r, q, x)) for l, r in p.arms))
    if isinstance(p, Par):
        return Par(subst_pvar(p.left, q, x), subst_pvar(p.right, q, x))
    if isinstance(p, Rec):
        if p.var == x:
            return p
        return Rec(p.var, subst_pvar(p.body, q, x), p.invariant)
    if isinstance(p, PRec):
        body = p.body if p.var == x else subst_pvar(p.body, q, x)
        return PRec(p.var, p.index, p.bound, body, subst_pvar(p.after, q, x))
    if isinstance(p, If):
        return If(p.cond, subst_pvar(p.then, q, x), subst_pvar(p.else_, q, x))
    return p


def subterms(p):
    """Pre-order iteration over process subterms (including ``p``)."""
    stack = [p]
    while stack:
        q = stack.pop()
        yield q
        if isinstance(q, (Send, Recv, Sel)):
            stack.append(q.cont)
        elif isinstance(q, Bra):
            stack.extend(r for _, r in reversed(q.arms))
        elif isinstance(q, Par):
            stack.extend((q.right, q.left))
        elif isinstance(q, Rec):
            stack.append(q.body)
        elif isinstance(q, PRec):
            stack.extend((q.after, q.body))
        elif isinstance(q, If):
            stack.extend((q.else_, q.then))


def labels_of(p) -> frozenset:
    """Every label mentioned by a select or branch in ``p``."""
    out = set()
    for q in subterms(p):
        if isinstance(q, Sel):
            out.add(q.label)
        elif isinstance(q, Bra):
            out.update(l for l, _ in q.arms)
    return frozenset(out)


# ------------------------------------------------------------------ types


def type_free_vars(t) -> frozenset:
    if isinstance(t, TVar):
        return frozenset([t.name])
    if isinstance(t, (Out, In)):
        return type_free_vars(t.cont)
    if isinstance(t, Branch):
        out = frozenset()
        for _, _, s in t.arms:
            out |= type_free_vars(s)
        return out
    if isinstance(t, Mu):
        return type_free_vars(t.body) - {t.var}
    return frozenset()


def subst_type(t, s, name: str):
    """``t{s/name}``; ``s`` is assumed closed so capture cannot happen."""
    if isinstance(t, TVar):
        return s if t.name == name else t
    if isinstance(t, Out):
        return Out(subst_type(t.cont, s, name))
    if isinstance(t, In):
        return In(subst_type(t.cont, s, name))
    if isinstance(t, Branch):
        return type(t)(tuple((l, L, subst_type(u, s, name)) for l, L, u in t.arms))
    if isinstance(t, Mu):
        if t.var == name:
            return t
        return Mu(t.var, subst_type(t.body, s, name))
    return t


def is_contractive(t, _unguarded=frozenset()) -> bool:
    if isinstance(t, TVar):
        return t.name not in _unguarded
    if isinstance(t, Mu):
        return is_contractive(t.body, _unguarded | {t.var})
    if isinstance(t, (Out, In)):
        return is_contractive(t.cont)
    if isinstance(t, Branch):
        return all(is_contractive(s) for _, _, s in t.arms)
    return True


def is_closed(t) -> bool:
    return not type_free_vars(t)


@lru_cache(maxsize=None)
def unfold(t):
    """Unroll top-level ``mu`` binders until the head is a real constructor."""
    seen = 0
    while isinstance(t, Mu):
        t = subst_type(t.body, t, t.var)
        seen += 1
        if seen > 10_000:
            raise NonContractive("unfolding does not reach a guarded head")
    if isinstance(t, TVar):
        raise NonContractive(f"unguarded type variable {t.name}")
    return t
