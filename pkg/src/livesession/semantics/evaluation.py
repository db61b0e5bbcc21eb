"""Total evaluation of data expressions and the primitive-function tables."""
from __future__ import annotations

from typing import Callable, Dict, Mapping

from ..syntax.terms import (
    Apply, Binary, BoolV, IntV, Lit, SymV, Unary, Var, FALSE, TRUE,
)

PrimTable = Mapping[str, Callable]

DEFAULT_VALUES = (IntV(0), IntV(1), IntV(2), TRUE, FALSE)


def as_int(v) -> int:
    """Integer view of a value; anything that is not an integer counts as 0."""
    return v.n if isinstance(v, IntV) else 0


def as_bool(v) -> bool:
    return isinstance(v, BoolV) and v.b


def _arith(op, a, b):
    x, y = as_int(a), as_int(b)
    if op == "+":
        return IntV(x + y)
    if op == "-":
        return IntV(x - y)
    return IntV(x * y)


def _compare(op, a, b):
    if op == "=":
        return BoolV(a == b)
    x, y = as_int(a), as_int(b)
    return BoolV({"<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op])


def eval_expr(e, env: Mapping = None, prims: PrimTable = None):
    """Evaluate ``e``.  Never raises: see the defaulting rules in formats.md."""
    env = env or {}
    prims = prims if prims is not None else DEFAULT_PRIMS
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        return env.get(e.name, IntV(0))
    if isinstance(e, Unary):
        v = eval_expr(e.arg, env, prims)
        if e.op == "-":
            return IntV(-as_int(v))
        return BoolV(not as_bool(v))
    if isinstance(e, Binary):
        a = eval_expr(e.left, env, prims)
        if e.op == "&&":
            return BoolV(as_bool(a) and as_bool(eval_expr(e.right, env, prims)))
        if e.op == "||":
            return BoolV(as_bool(a) or as_bool(eval_expr(e.right, env, prims)))
        b = eval_expr(e.right, env, prims)
        if e.op in ("+", "-", "*"):
            return _arith(e.op, a, b)
        return _compare(e.op, a, b)
    if isinstance(e, Apply):
        args = tuple(eval_expr(a, env, prims) for a in e.args)
        fn = prims.get(e.fname)
        if fn is None:
            return SymV(e.fname, args)
        try:
            out = fn(*args)
        except TypeError:
            # arity mismatch
            return SymV(e.fname, args)
        return out
    raise TypeError(f"not an expression: {e!r}")


# -- primitive tables

def _sym(name):
    return lambda *args: SymV(name, tuple(args))


DEFAULT_PRIMS: Dict[str, Callable] = {
    "add": lambda a, b: IntV(as_int(a) + as_int(b)),
    "rem": lambda a, b: IntV(as_int(a) - as_int(b)),
    "min": lambda a, b: IntV(min(as_int(a), as_int(b))),
    "max": lambda a, b: IntV(max(as_int(a), as_int(b))),
    "succ": lambda a: IntV(as_int(a) + 1),
    "pred": lambda a: IntV(max(as_int(a) - 1, 0)),
}


def shopping_prims(cap: int = 2) -> Dict[str, Callable]:
    """Order data as an item count capped at ``cap``.

    The cap keeps the shopping-cart state space finite.  ``update`` leaves the
    order unchanged, so the unbounded delivery loop can run forever.
    """
    return {
        "empty": lambda: IntV(0),
        "add": lambda y, x: IntV(min(as_int(y) + 1, cap)),
        "rem": lambda y, x: IntV(max(as_int(y) - 1, 0)),
        "n": lambda y: IntV(max(as_int(y), 0)),
        "next": lambda y: SymV("item", (y,)),
        "update": lambda y: y,
        "inv": lambda y: SymV("invoice", (y,)),
        "pickitem": lambda y, i: SymV("item", (i,)),
    }


PRIM_REGISTRY = {
    "default": lambda: dict(DEFAULT_PRIMS),
    "shopping": shopping_prims,
}


def get_prims(name: str) -> Dict[str, Callable]:
    try:
        return PRIM_REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown primitive table {name!r}; known: {sorted(PRIM_REGISTRY)}")
