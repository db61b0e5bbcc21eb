"""The standard (safety-only) session typing system."""
from __future__ import annotations

from ..syntax.ops import free_names, unfold
from ..syntax.printer import show_type
from ..syntax.terms import (
    Bra, Branch, End, If, In, Inact, Out, Par, PRec, PVar, Rec, Recv, Select,
    Send, Sel,
)
from ..types import types_equal
from .env import completed
from .errors import CheckResult, SessionTypeError, TypingFailure


def head(t) -> str:
    u = unfold(t)
    if isinstance(u, End):
        return "end"
    if isinstance(u, Out):
        return "!"
    if isinstance(u, In):
        return "?"
    if isinstance(u, Select):
        return "+{" + ", ".join(l for l, _, _ in u.arms) + "}"
    if isinstance(u, Branch):
        return "&{" + ", ".join(l for l, _, _ in u.arms) + "}"
    return show_type(u)


def fail(rule, path, expected="", actual="", message="", pending=frozenset(), cls=SessionTypeError):
    raise cls(TypingFailure(rule, tuple(path), expected, actual, frozenset(pending), message))


def lookup(env, k, rule, path, cls=SessionTypeError):
    if k not in env:
        fail(rule, path, expected=f"an entry for {k}", actual="none", cls=cls)
    return unfold(env[k])


def split_env(env: dict, left, right):
    """Candidate splits of ``env`` for ``left | right``.

    Entries go with the component whose free names mention them; unused
    entries go right first, then left.
    """
    fl, fr = free_names(left), free_names(right)
    d1, d2, spare = {}, {}, {}
    for k, t in env.items():
        if k in fl:
            d1[k] = t
        elif k in fr:
            d2[k] = t
        else:
            spare[k] = t
    yield d1, {**d2, **spare}
    if spare:
        yield {**d1, **spare}, d2


def same_env(a: dict, b: dict) -> bool:
    return set(a) == set(b) and all(types_equal(a[k], b[k]) for k in a)


def check_prefix_type(p, env, path, rule_prefix, cls=SessionTypeError):
    """Shared head checks of the four prefixes.

    Returns ``[(label or None, response set, continuation env, subterm, token)]``.
    """
    k = p.chan
    if isinstance(p, Send):
        t = lookup(env, k, f"{rule_prefix}-Out", path, cls)
        if not isinstance(t, Out):
            fail(f"{rule_prefix}-Out", path, "!", head(t), cls=cls)
        return [(None, frozenset(), {**env, k: t.cont}, p.cont, "c")]
    if isinstance(p, Recv):
        t = lookup(env, k, f"{rule_prefix}-In", path, cls)
        if not isinstance(t, In):
            fail(f"{rule_prefix}-In", path, "?", head(t), cls=cls)
        return [(None, frozenset(), {**env, k: t.cont}, p.cont, "c")]
    if isinstance(p, Sel):
        t = lookup(env, k, f"{rule_prefix}-Sel", path, cls)
        if not isinstance(t, Select):
            fail(f"{rule_prefix}-Sel", path, f"+{{{p.label}, ...}}", head(t), cls=cls)
        arms = {l: (L, s) for l, L, s in t.arms}
        if p.label not in arms:
            fail(f"{rule_prefix}-Sel", path, f"+{{{p.label}, ...}}", head(t), cls=cls)
        L, s = arms[p.label]
        return [(p.label, L, {**env, k: s}, p.cont, "c")]
    t = lookup(env, k, f"{rule_prefix}-Bra", path, cls)
    plabels = [l for l, _ in p.arms]
    if not isinstance(t, Branch) or isinstance(t, Select):
        fail(f"{rule_prefix}-Bra", path, "&{" + ", ".join(plabels) + "}", head(t), cls=cls)
    arms = {l: (L, s) for l, L, s in t.arms}
    if set(arms) != set(plabels):
        fail(f"{rule_prefix}-Bra", path, head(t), "&{" + ", ".join(plabels) + "}",
             message="branch labels must match the type", cls=cls)
    return [(l, arms[l][0], {**env, k: arms[l][1]}, q, "&" + l) for l, q in p.arms]


def _check(theta, p, env, path):
    if isinstance(p, (Send, Recv, Sel, Bra)):
        for _, _, env2, q, tok in check_prefix_type(p, env, path, "Std"):
            _check(theta, q, env2, path + (tok,))
        return
    if isinstance(p, Inact):
        if not completed(env):
            open_ = sorted(str(k) for k, t in env.items() if not isinstance(unfold(t), End))
            fail("Std-Inact", path, "completed environment", "open: " + ", ".join(open_))
        return
    if isinstance(p, Par):
        first = None
        for d1, d2 in split_env(env, p.left, p.right):
            try:
                _check(theta, p.left, d1, path + ("L",))
                _check(theta, p.right, d2, path + ("R",))
                return
            except SessionTypeError as e:
                first = first or e
        raise first
    if isinstance(p, Rec):
        _check({**theta, p.var: env}, p.body, env, path + ("body",))
        return
    if isinstance(p, PRec):
        _check({**theta, p.var: env}, p.body, env, path + ("body",))
        _check(theta, p.after, env, path + ("after",))
        return
    if isinstance(p, PVar):
        if p.var not in theta:
            fail("Std-Var", path, f"a binding for {p.var}", "unbound")
        if len(set(p.chans)) != len(p.chans) or set(p.chans) != set(env):
            fail("Std-Var", path, "{" + ", ".join(sorted(map(str, env))) + "}",
                 "{" + ", ".join(map(str, p.chans)) + "}", message="dom(env) must equal the channel list")
        if not same_env(theta[p.var], env):
            fail("Std-Var", path, "environment bound at the recursion", "a different environment")
        return
    if isinstance(p, If):
        _check(theta, p.then, env, path + ("then",))
        _check(theta, p.else_, env, path + ("else",))
        return
    raise TypeError(f"not a process: {p!r}")


def check_std(theta, p, env) -> CheckResult:
    """``theta |-std p |> env``."""
    try:
        _check(dict(theta or {}), p, dict(env), ())
    except SessionTypeError as e:
        return CheckResult(False, e.failure)
    return CheckResult(True)
