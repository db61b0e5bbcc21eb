"""The typing system for request-response liveness.

The judgement is ``gamma; L |- P |> env``.  ``L`` is the set of responses
still owed; general recursion variables carry an accumulator ``A`` of
labels selected since the binder and an invariant ``I``; loop variables
carry the pending set allowed at the recursion point.
"""
from __future__ import annotations

from itertools import combinations
from typing import Optional

from ..syntax.ops import unfold
from ..syntax.terms import Bra, End, If, Inact, Par, PRec, PVar, Rec, Recv, Send, Sel
from ..types import automaton
from .approx import GenEntry, M_of, PrimEntry, approx_A, freeze_env, gamma_plus, must_select_before
from .env import completed
from .errors import CheckResult, LivenessTypeError, TypingFailure, Unsupported
from .standard import check_prefix_type, same_env, split_env

MAX_FREE_LABELS = 8
MAX_SPLIT_LABELS = 10


def _fail(rule, path, expected="", actual="", message="", pending=frozenset(), cls=LivenessTypeError):
    raise cls(TypingFailure(rule, tuple(path), expected, actual, frozenset(pending), message))


def _labels(ls) -> str:
    return "{" + ", ".join(sorted(ls)) + "}"


def env_labels(env: dict) -> frozenset:
    """Every label (selected or requested) reachable in the types of ``env``."""
    out = set()
    for t in env.values():
        auto = automaton(t)
        for edges in auto.edges.values():
            for rho, _ in edges:
                if hasattr(rho, "label"):
                    out.add(rho.label)
                    out |= rho.resp
    return frozenset(out)


def _descending_subsets(base: frozenset, free: frozenset):
    items = sorted(free)
    for r in range(len(items), -1, -1):
        for extra in combinations(items, r):
            yield base | frozenset(extra)


class LiveChecker:
    def __init__(self, max_free=MAX_FREE_LABELS, max_split=MAX_SPLIT_LABELS):
        self.max_free = max_free
        self.max_split = max_split
        self.invariants = {}
        self._memo = {}

    # The memo stores the failure (or None) per judgement.
    def check(self, gamma, L, p, env, path=()):
        key = (tuple(sorted(gamma.items())), frozenset(L), p, freeze_env(env))
        if key in self._memo:
            err = self._memo[key]
            if err is not None:
                raise err
            return
        try:
            self._check(gamma, frozenset(L), p, env, tuple(path))
        except LivenessTypeError as e:
            self._memo[key] = e
            raise
        self._memo[key] = None

    def ok(self, gamma, L, p, env, path=()) -> Optional[LivenessTypeError]:
        try:
            self.check(gamma, L, p, env, path)
        except LivenessTypeError as e:
            return e
        return None

    def _check(self, gamma, L, p, env, path):
        if isinstance(p, (Send, Recv, Sel, Bra)):
            for lab, resp, env2, q, tok in check_prefix_type(p, env, path, "E", LivenessTypeError):
                if lab is None:
                    self.check(gamma, L, q, env2, path + (tok,))
                else:
                    L2 = (L - {lab}) | resp
                    self.check(gamma_plus(gamma, {lab}), L2, q, env2, path + (tok,))
            return
        if isinstance(p, Inact):
            if L:
                _fail("E-Inact", path, "no pending responses", _labels(L),
                      message="process ends with responses still owed", pending=L)
            if not completed(env):
                open_ = sorted(str(k) for k, t in env.items() if not isinstance(unfold(t), End))
                _fail("E-Inact", path, "completed environment", "open: " + ", ".join(open_))
            return
        if isinstance(p, Par):
            return self._par(gamma, L, p, env, path)
        if isinstance(p, Rec):
            return self._rec(gamma, L, p, env, path)
        if isinstance(p, PRec):
            return self._prec(gamma, L, p, env, path)
        if isinstance(p, PVar):
            return self._var(gamma, L, p, env, path)
        if isinstance(p, If):
            self.check(gamma, L, p.then, env, path + ("then",))
            self.check(gamma, L, p.else_, env, path + ("else",))
            return
        raise TypeError(f"not a process: {p!r}")

    # The searches below only try pending sets allowed by the discharge
    # bound: a judgement with pending L can hold only if L minus M(gamma)
    # lies within the approximation of the process.

    def _par(self, gamma, L, p, env, path):
        M = M_of(gamma)
        ok1, ok2 = L & (approx_A(p.left) | M), L & (approx_A(p.right) | M)
        stuck = L - ok1 - ok2
        if stuck:
            _fail("E-Par", path, "pending responses discharged by a component", _labels(stuck),
                  message="no parallel component selects these labels", pending=stuck)
        forced1 = ok1 - ok2
        amb = sorted(ok1 & ok2)
        prefer = frozenset(amb) & approx_A(p.left)
        candidates = [forced1 | prefer]
        if len(amb) <= self.max_split:
            for mask in range(2 ** len(amb)):
                candidates.append(forced1 | frozenset(l for i, l in enumerate(amb) if mask >> i & 1))
        else:
            candidates.append(forced1 | frozenset(amb))
        first = None
        tried = set()
        for d1, d2 in split_env(env, p.left, p.right):
            for l1 in candidates:
                if l1 in tried:
                    continue
                tried.add(l1)
                l2 = L - l1
                e = self.ok(gamma, l1, p.left, d1, path + ("L",))
                if e is None:
                    e = self.ok(gamma, l2, p.right, d2, path + ("R",))
                if e is None:
                    return
                first = first or e
            tried.clear()
        raise first

    def _rec(self, gamma, L, p, env, path):
        if p.invariant is not None:
            I = frozenset(p.invariant)
            if not L <= I:
                _fail("E-Rec", path, f"pending within invariant {_labels(I)}", _labels(L),
                      pending=L - I)
            g2 = {**gamma, p.var: GenEntry(frozenset(), I, freeze_env(env))}
            self.check(g2, I, p.body, env, path + ("body",))
            self.invariants[path] = I
            return
        A_body = approx_A(p.body)
        upper = A_body | M_of(gamma)
        if not L <= upper:
            missing = L - upper
            _fail("E-Rec", path, f"an invariant containing {_labels(L)}",
                  f"the body guarantees only {_labels(A_body)}",
                  message="pending responses are not guaranteed by the recursion body",
                  pending=missing)
        on_path = must_select_before(p.body, p.var)
        if on_path is not None:
            upper &= on_path
            if not L <= upper:
                _fail("E-Rec", path, f"an invariant containing {_labels(L)}",
                      f"only {_labels(on_path)} selected on every way back to {p.var}",
                      message="the invariant cannot be re-established by the loop",
                      pending=L - upper)
        free = upper - L
        first_err = None
        tried = set()

        def candidates():
            yield L | (A_body & upper)
            if len(free) <= self.max_free:
                yield from _descending_subsets(L, free)

        for I in candidates():
            if I in tried:
                continue
            tried.add(I)
            g2 = {**gamma, p.var: GenEntry(frozenset(), I, freeze_env(env))}
            e = self.ok(g2, I, p.body, env, path + ("body",))
            if e is None:
                self.invariants[path] = I
                return
            first_err = first_err or e
        if len(free) > self.max_free:
            _fail("E-Rec", path, message=f"invariant search over {len(free)} labels exceeds the bound",
                  cls=Unsupported, pending=L)
        raise first_err

    def _prec(self, gamma, L, p, env, path):
        upper = approx_A(p.after) | M_of(gamma)
        if not L <= upper:
            _fail("E-RecP", path, f"pending within {_labels(upper)}", _labels(L),
                  message="the loop continuation does not discharge the pending responses",
                  pending=L - upper)
        free = upper - L
        first_err = None
        tried = set()

        def candidates():
            yield upper
            yield L
            if len(free) <= self.max_free:
                yield from _descending_subsets(L, free)

        for Lp in candidates():
            if Lp in tried:
                continue
            tried.add(Lp)
            g2 = {**gamma, p.var: PrimEntry(Lp, freeze_env(env))}
            e = self.ok(g2, Lp, p.body, env, path + ("body",))
            if e is None:
                e = self.ok(gamma, Lp, p.after, env, path + ("after",))
            if e is None:
                self.invariants[path] = Lp
                return
            first_err = first_err or e
        raise first_err

    def _var(self, gamma, L, p, env, path):
        e = gamma.get(p.var)
        if e is None:
            _fail("E-Var", path, f"a binding for {p.var}", "unbound")
        if len(set(p.chans)) != len(p.chans) or set(p.chans) != set(env):
            _fail("E-Var", path, _labels(map(str, env)), _labels(map(str, p.chans)),
                  message="dom(env) must equal the channel list")
        if not same_env(e.env, env):
            _fail("E-Var", path, "environment bound at the recursion", "a different environment")
        if isinstance(e, GenEntry):
            if not L <= e.I:
                _fail("E-Var", path, f"pending within invariant {_labels(e.I)}", _labels(L),
                      pending=L - e.I)
            if not e.I <= e.A:
                _fail("E-Var", path, f"invariant {_labels(e.I)} selected on the way",
                      f"selected {_labels(e.A)}",
                      message="the invariant is not re-established by the loop", pending=e.I - e.A)
            return
        if not L <= e.I:
            _fail("E-VarP", path, f"pending within {_labels(e.I)}", _labels(L), pending=L - e.I)


def check_live(gamma, L, p, env, checker: LiveChecker = None) -> CheckResult:
    """``gamma; L |- p |> env``; ``gamma`` maps variables to entries.

    Raises ``Unsupported`` when the verdict hinges on an invariant search
    beyond the bound.
    """
    checker = checker or LiveChecker()
    try:
        checker.check(dict(gamma or {}), frozenset(L or ()), p, dict(env))
    except Unsupported:
        raise
    except LivenessTypeError as e:
        return CheckResult(False, e.failure, dict(checker.invariants))
    return CheckResult(True, None, dict(checker.invariants))


def synth_invariant(p, env=None) -> frozenset:
    """Candidate invariant of a general recursion: the approximation of its body."""
    if not isinstance(p, Rec):
        raise TypeError("synth_invariant expects a recursion")
    return approx_A(p.body)


def validates(p, I, env, gamma=None, L=frozenset()) -> bool:
    """Whether ``p = rec X. body`` types with invariant ``I`` and pending ``L``."""
    if not L <= I:
        return False
    g = dict(gamma or {})
    g[p.var] = GenEntry(frozenset(), frozenset(I), freeze_env(env))
    return LiveChecker().ok(g, I, p.body, env) is None
