"""Pretty printers; output re-parses to a structurally equal term."""
from __future__ import annotations

from .terms import (
    Apply, Binary, BoolV, Bra, Branch, End, If, In, Inact, IntV, Lit, Mu, Out,
    Par, PRec, PVar, Rec, Recv, Select, Send, Sel, SymV, TVar, Unary, Var,
)

_PREC = {"||": 0, "&&": 1, "=": 2, "<": 2, "<=": 2, ">": 2, ">=": 2,
         "+": 3, "-": 3, "*": 4}


def show_value(v) -> str:
    if isinstance(v, IntV):
        return str(v.n)
    if isinstance(v, BoolV):
        return "true" if v.b else "false"
    if isinstance(v, SymV):
        if not v.args:
            return f"'{v.name}"
        return f"'{v.name}(" + ", ".join(show_value(a) for a in v.args) + ")"
    raise TypeError(v)


def show_expr(e, prec=0) -> str:
    if isinstance(e, Lit):
        return show_value(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Apply):
        return f"{e.fname}(" + ", ".join(show_expr(a) for a in e.args) + ")"
    if isinstance(e, Unary):
        if e.op == "-":
            return f"-({show_expr(e.arg)})"
        return f"not {show_expr(e.arg, 5)}"
    if isinstance(e, Binary):
        p = _PREC[e.op]
        s = f"{show_expr(e.left, p)} {e.op} {show_expr(e.right, p + 1)}"
        return f"({s})" if p < prec else s
    raise TypeError(e)


def show_labels(ls) -> str:
    return ", ".join(sorted(ls))


def show_process(p) -> str:
    if isinstance(p, Par):
        right = show_process(p.right)
        if isinstance(p.right, Par):
            right = f"({right})"
        return f"{show_process(p.left)} | {right}"
    return _prefix(p)


def _prefix(p) -> str:
    """Print at prefix level, parenthesising parallel compositions."""
    if isinstance(p, Par):
        return f"({show_process(p)})"
    if isinstance(p, Inact):
        return "0"
    if isinstance(p, Send):
        return f"{p.chan}!({show_expr(p.expr)}).{_prefix(p.cont)}"
    if isinstance(p, Recv):
        return f"{p.chan}?({p.var}).{_prefix(p.cont)}"
    if isinstance(p, Sel):
        return f"{p.chan}<<{p.label}.{_prefix(p.cont)}"
    if isinstance(p, Bra):
        arms = ", ".join(f"{l}: {show_process(q)}" for l, q in p.arms)
        return f"{p.chan}>>{{{arms}}}"
    if isinstance(p, Rec):
        inv = "" if p.invariant is None else f" invariant {{{show_labels(p.invariant)}}}"
        return f"rec {p.var}{inv}.{_prefix(p.body)}"
    if isinstance(p, PRec):
        return (f"loop {p.var} ({p.index} < {show_expr(p.bound)}) "
                f"{{{show_process(p.body)}}} then {{{show_process(p.after)}}}")
    if isinstance(p, PVar):
        return f"{p.var}(" + ", ".join(str(k) for k in p.chans) + ")"
    if isinstance(p, If):
        return f"if {show_expr(p.cond)} then {_prefix(p.then)} else {_prefix(p.else_)}"
    raise TypeError(p)


def show_type(t) -> str:
    if isinstance(t, End):
        return "end"
    if isinstance(t, Out):
        return f"!.{show_type(t.cont)}"
    if isinstance(t, In):
        return f"?.{show_type(t.cont)}"
    if isinstance(t, Branch):
        head = "+" if isinstance(t, Select) else "&"
        arms = []
        for l, L, s in t.arms:
            resp = f"[{show_labels(L)}]" if L else ""
            arms.append(f"{l}{resp}.{show_type(s)}")
        return head + "{" + ", ".join(arms) + "}"
    if isinstance(t, Mu):
        return f"mu {t.var}.{show_type(t.body)}"
    if isinstance(t, TVar):
        return t.name
    raise TypeError(t)


def show_env(env: dict) -> str:
    return "".join(f"{k} : {show_type(t)}\n" for k, t in sorted(env.items(), key=lambda kv: str(kv[0])))


def show_label(lab) -> str:
    """Printer for process, type and environment transition labels."""
    return lab.show() if hasattr(lab, "show") else str(lab)
