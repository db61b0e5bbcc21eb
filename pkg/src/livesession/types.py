"""Session types with responses: transitions, duality and trace analyses."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .liveness import is_live, is_live_lasso
from .syntax.ops import subst_type, type_free_vars, unfold
from .syntax.printer import show_labels, show_type
from .syntax.terms import Branch, End, In, Mu, Out, Select, TVar, select

EMPTY = frozenset()


# ----------------------------------------------------------------- labels


@dataclass(frozen=True)
class TOut:
    def show(self):
        return "!"


@dataclass(frozen=True)
class TIn:
    def show(self):
        return "?"


@dataclass(frozen=True)
class TBra:
    label: str
    resp: frozenset = EMPTY

    def show(self):
        return f"&{self.label}[{show_labels(self.resp)}]"


@dataclass(frozen=True)
class TSel:
    label: str
    resp: frozenset = EMPTY

    def show(self):
        return f"+{self.label}[{show_labels(self.resp)}]"


T_OUT = TOut()
T_IN = TIn()


def label_req(rho) -> frozenset:
    return rho.resp if isinstance(rho, (TBra, TSel)) else EMPTY


def label_res(rho) -> frozenset:
    return frozenset([rho.label]) if isinstance(rho, (TBra, TSel)) else EMPTY


def label_sel(rho) -> Optional[str]:
    return rho.label if isinstance(rho, (TBra, TSel)) else None


def labels_dual(a, b) -> bool:
    """``! ~ ?`` and ``&l[L] ~ +l[L']``; response sets are ignored."""
    if isinstance(a, TOut):
        return isinstance(b, TIn)
    if isinstance(a, TIn):
        return isinstance(b, TOut)
    if isinstance(a, TBra):
        return isinstance(b, TSel) and a.label == b.label
    if isinstance(a, TSel):
        return isinstance(b, TBra) and a.label == b.label
    return False


# ------------------------------------------------------------ transitions


def type_step(t) -> List[Tuple[object, object]]:
    """Outgoing ``(label, successor)`` pairs of ``t`` after unfolding."""
    u = unfold(t)
    if isinstance(u, Out):
        return [(T_OUT, u.cont)]
    if isinstance(u, In):
        return [(T_IN, u.cont)]
    if isinstance(u, Select):
        return [(TSel(l, L), s) for l, L, s in u.arms]
    if isinstance(u, Branch):
        return [(TBra(l, L), s) for l, L, s in u.arms]
    return []


def syntactic_dual(t):
    if isinstance(t, Out):
        return In(syntactic_dual(t.cont))
    if isinstance(t, In):
        return Out(syntactic_dual(t.cont))
    if isinstance(t, Select):
        return Branch(tuple((l, L, syntactic_dual(s)) for l, L, s in t.arms))
    if isinstance(t, Branch):
        return Select(tuple((l, L, syntactic_dual(s)) for l, L, s in t.arms))
    if isinstance(t, Mu):
        return Mu(t.var, syntactic_dual(t.body))
    return t


# --------------------------------------------------------------- automaton


@dataclass
class TypeAutomaton:
    initial: object
    states: list
    edges: Dict[object, List[Tuple[object, object]]]

    def to_dot(self) -> str:
        ids = {s: i for i, s in enumerate(self.states)}
        lines = ["digraph type {", "  rankdir=LR;"]
        for s, i in ids.items():
            shape = "doublecircle" if isinstance(s, End) else "circle"
            lines.append(f'  s{i} [shape={shape}, label="{i}"];')
        for s, out in self.edges.items():
            for rho, d in out:
                lines.append(f'  s{ids[s]} -> s{ids[d]} [label="{rho.show()}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


_auto_lock = threading.Lock()
_auto_cache: Dict[object, TypeAutomaton] = {}


def automaton(t) -> TypeAutomaton:
    """Finite transition graph of a closed contractive type.

    States are types unfolded to their head, so structurally equal
    unfoldings are shared.
    """
    with _auto_lock:
        hit = _auto_cache.get(t)
    if hit is not None:
        return hit
    init = unfold(t)
    states, edges = [init], {}
    todo = [init]
    while todo:
        s = todo.pop()
        out = []
        for rho, nxt in type_step(s):
            n = unfold(nxt)
            if n not in edges and n not in todo and n not in states:
                states.append(n)
                todo.append(n)
            out.append((rho, n))
        edges[s] = out
    auto = TypeAutomaton(init, states, edges)
    with _auto_lock:
        _auto_cache[t] = auto
    return auto


# ----------------------------------------------------------------- duality


def _head_kind(u):
    if isinstance(u, Select):
        return "+"
    if isinstance(u, Branch):
        return "&"
    return type(u).__name__


def is_dual(t, s) -> bool:
    """Coinductive duality check on pairs of unfolded states."""
    assumed = set()
    todo = [(unfold(t), unfold(s))]
    while todo:
        a, b = todo.pop()
        if (a, b) in assumed:
            continue
        assumed.add((a, b))
        if isinstance(a, End) or isinstance(b, End):
            if not (isinstance(a, End) and isinstance(b, End)):
                return False
        elif isinstance(a, Out):
            if not isinstance(b, In):
                return False
            todo.append((unfold(a.cont), unfold(b.cont)))
        elif isinstance(a, In):
            if not isinstance(b, Out):
                return False
            todo.append((unfold(a.cont), unfold(b.cont)))
        elif isinstance(a, Branch):
            ka, kb = _head_kind(a), _head_kind(b)
            if not isinstance(b, Branch) or ka == kb:
                return False
            bra, sel = (a, b) if ka == "&" else (b, a)
            bmap = {l: u for l, _, u in bra.arms}
            for l, _, u in sel.arms:
                if l not in bmap:
                    return False
                pair = (unfold(bmap[l]), unfold(u)) if bra is a else (unfold(u), unfold(bmap[l]))
                todo.append(pair)
        else:
            return False
    return True


def types_equal(t, s) -> bool:
    """Bisimilarity of the two type automata, response sets included."""
    seen = set()
    todo = [(unfold(t), unfold(s))]
    while todo:
        a, b = todo.pop()
        if (a, b) in seen:
            continue
        seen.add((a, b))
        ea, eb = type_step(a), type_step(b)
        if _head_kind(a) != _head_kind(b):
            return False
        ma = {rho: n for rho, n in ea}
        mb = {rho: n for rho, n in eb}
        if set(ma) != set(mb):
            return False
        for rho in ma:
            todo.append((unfold(ma[rho]), unfold(mb[rho])))
    return True


# ------------------------------------------------------------------ traces


@dataclass(frozen=True)
class TypeLasso:
    prefix: tuple
    cycle: tuple

    def canonical(self) -> "TypeLasso":
        return canonical_lasso(self.prefix, self.cycle)


def canonical_lasso(prefix, cycle) -> TypeLasso:
    """Shortest equivalent form: primitive cycle, rotated into the prefix."""
    prefix, cycle = tuple(prefix), tuple(cycle)
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle[:d] * (n // d) == cycle:
            cycle = cycle[:d]
            break
    while prefix and prefix[-1] == cycle[-1]:
        cycle = (cycle[-1],) + cycle[:-1]
        prefix = prefix[:-1]
    return TypeLasso(prefix, cycle)


def type_traces(t, depth: int):
    """Finite traces of length <= ``depth`` and the lassos they close.

    Returns ``(finite, lassos)``.  ``finite`` holds every trace up to the
    bound, the empty one included.  A walk that comes back to a state seen
    earlier on it closes a lasso, so ``lassos`` has every canonical lasso
    whose prefix and cycle together fit in ``depth`` labels.
    """
    auto = automaton(t)
    finite, lassos = set(), set()
    path_states = [auto.initial]
    labels: List[object] = []

    def dfs(s):
        finite.add(tuple(labels))
        n = len(labels)
        for i in range(n):
            if path_states[i] == s:
                lassos.add(canonical_lasso(labels[:i], labels[i:]))
        if n >= depth:
            return
        for rho, nxt in auto.edges[s]:
            labels.append(rho)
            path_states.append(nxt)
            dfs(nxt)
            path_states.pop()
            labels.pop()

    dfs(auto.initial)
    return finite, lassos


def accepts(t, labels) -> bool:
    """Whether the finite label sequence is a trace of ``t``."""
    s = unfold(t)
    for rho in labels:
        nxt = dict(type_step(s)).get(rho)
        if nxt is None:
            return False
        s = unfold(nxt)
    return True


def accepts_lasso(t, prefix, cycle) -> bool:
    """Whether ``prefix . cycle^omega`` is an (infinite) trace of ``t``."""
    if not cycle:
        return False
    auto = automaton(t)

    def run(s, seq):
        for rho in seq:
            nxt = dict(auto.edges[s]).get(rho)
            if nxt is None:
                return None
            s = nxt
        return s

    s = run(auto.initial, prefix)
    seen = set()
    while s is not None and s not in seen:
        seen.add(s)
        s = run(s, cycle)
    return s is not None


def responsive(tr) -> bool:
    """Liveness of a finite type trace or a :class:`TypeLasso`."""
    if isinstance(tr, TypeLasso):
        return is_live_lasso(tr.prefix, tr.cycle, label_req, label_res)
    return is_live(tr, label_req, label_res)


def selection_string(tr) -> tuple:
    """Selected labels of a trace, sends and receives erased."""
    if isinstance(tr, TypeLasso):
        return (selection_string(tr.prefix), selection_string(tr.cycle))
    return tuple(rho.label for rho in tr if isinstance(rho, (TBra, TSel)))


def is_standard(t) -> bool:
    if isinstance(t, (Out, In)):
        return is_standard(t.cont)
    if isinstance(t, Branch):
        return all(not L and is_standard(s) for _, L, s in t.arms)
    if isinstance(t, Mu):
        return is_standard(t.body)
    return True


def trace_by_selection(t, sels, fill=None) -> Optional[tuple]:
    """The unique type trace whose selection string is ``sels``.

    Sends and receives between selections are taken greedily; determinism of
    types makes the result unique when it exists.  A trailing run of
    ``!``/``?`` moves up to the next choice point (or ``end``) is included
    only when ``fill`` is true.
    """
    s = unfold(t)
    out = []
    todo = list(sels)
    steps = 0
    while True:
        moves = type_step(s)
        if not todo and not fill:
            break
        if len(moves) == 1 and isinstance(moves[0][0], (TOut, TIn)):
            out.append(moves[0][0])
            s = unfold(moves[0][1])
            steps += 1
            if steps > 10_000:
                return None
            continue
        if not todo:
            break
        want = todo.pop(0)
        match = [m for m in moves if label_sel(m[0]) == want]
        if not match:
            return None
        out.append(match[0][0])
        s = unfold(match[0][1])
    return tuple(out)


# --------------------------------------------------------- expressivity


WITNESS = select(("a", {"b"}, TVar("t")), ("b", {"a"}, TVar("t")))
WITNESS = Mu("t", WITNESS)


@dataclass
class ExpressivityReport:
    depth: int
    prefixes_extend: bool
    a_omega_in_traces: bool
    a_omega_responsive: bool
    b_omega_in_traces: bool
    b_omega_responsive: bool
    failures: list

    @property
    def ok(self) -> bool:
        return (self.prefixes_extend and self.a_omega_in_traces and not self.a_omega_responsive
                and self.b_omega_in_traces and not self.b_omega_responsive)

    def to_json(self):
        return {"depth": self.depth, "prefixes_extend": self.prefixes_extend,
                "a_omega_in_traces": self.a_omega_in_traces,
                "a_omega_responsive": self.a_omega_responsive,
                "b_omega_in_traces": self.b_omega_in_traces,
                "b_omega_responsive": self.b_omega_responsive,
                "failures": self.failures, "ok": self.ok}


def expressivity_experiment(depth: int, t=WITNESS) -> ExpressivityReport:
    """Every ``a^k`` (k <= depth) extends to the responsive ``a^k b (a b)^omega``,
    while ``a^omega`` is a trace that is not responsive (and likewise for b)."""
    a, b = TSel("a", frozenset({"b"})), TSel("b", frozenset({"a"}))
    failures = []
    for k in range(depth + 1):
        lasso = TypeLasso((a,) * k + (b,), (a, b))
        if not (accepts_lasso(t, lasso.prefix, lasso.cycle) and responsive(lasso)):
            failures.append(k)
    a_om, b_om = TypeLasso((), (a,)), TypeLasso((), (b,))
    return ExpressivityReport(
        depth=depth,
        prefixes_extend=not failures,
        a_omega_in_traces=accepts_lasso(t, (), (a,)),
        a_omega_responsive=responsive(a_om),
        b_omega_in_traces=accepts_lasso(t, (), (b,)),
        b_omega_responsive=responsive(b_om),
        failures=failures,
    )


def is_closed_type(t) -> bool:
    return not type_free_vars(t)


def show(t) -> str:
    return show_type(t)


__all__ = [
    "TOut", "TIn", "TBra", "TSel", "T_OUT", "T_IN", "label_req", "label_res",
    "label_sel", "labels_dual", "type_step", "syntactic_dual", "automaton",
    "TypeAutomaton", "is_dual", "types_equal", "TypeLasso", "canonical_lasso",
    "type_traces", "accepts", "accepts_lasso", "responsive", "selection_string",
    "is_standard", "trace_by_selection", "expressivity_experiment",
    "ExpressivityReport", "WITNESS", "subst_type",
]
