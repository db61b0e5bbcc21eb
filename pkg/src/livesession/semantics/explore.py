"""Depth-bounded exploration of transition sequences with lasso detection.

Every root path of the unfolded transition tree ends in one of four ways:
the last state has no transitions (``finite``); its successor already
appears on the path (``lasso``: the path from that point repeats forever);
the depth bound is reached (``truncated``); or the state budget runs out
(``budget``).  Lassos stand for the ultimately periodic infinite runs.

An unfair cycle is not a maximal run, so the search keeps extending it
(up to ``max_visits`` passes through the same state) to find the fair
interleavings that revisit a state several times.

Fairness and lock-freedom follow each occurrence through the residual
maps of the moves, wrapping around the cycle of a lasso; an occurrence
that comes back to the same position in the same cycle state without being
executed is never executed.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import List, Optional

from ..liveness import is_live, is_live_lasso
from ..syntax.printer import show_process
from .evaluation import DEFAULT_VALUES
from .labels import sel_of_trace
from .transitions import EXECUTED, Stepper

DEFAULT_MAX_STATES = 10 ** 6

FINITE, LASSO, TRUNCATED, BUDGET = "finite", "lasso", "truncated", "budget"


def max_states_default() -> int:
    raw = os.environ.get("LIVESESSION_MAX_STATES")
    if raw:
        try:
            return max(int(raw), 1)
        except ValueError:
            pass
    return DEFAULT_MAX_STATES


@dataclass
class ExploreConfig:
    max_depth: int = 12
    values: tuple = DEFAULT_VALUES
    detect_lassos: bool = True
    max_visits: int = 3  # times an unfair cycle may pass through one state
    max_states: Optional[int] = None
    prims: Optional[dict] = None
    env: Optional[dict] = None        # session environment for typed pairing
    pending: frozenset = frozenset()  # responses owed before the run starts

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        if not self.values:
            raise ValueError("the value domain must be nonempty")
        if self.max_states is None:
            self.max_states = max_states_default()


@dataclass
class Trace:
    states: list
    labels: list
    moves: list
    kind: str
    prefix_len: int = 0
    cycle_len: int = 0
    verdicts: dict = field(default_factory=dict)

    @property
    def prefix_labels(self):
        return self.labels[: self.prefix_len] if self.kind == LASSO else self.labels

    @property
    def cycle_labels(self):
        return self.labels[self.prefix_len:] if self.kind == LASSO else []

    def sel(self) -> frozenset:
        """Labels selected anywhere along the (possibly infinite) run."""
        return sel_of_trace(self.labels)

    @property
    def maximal(self) -> Optional[bool]:
        return self.verdicts.get("maximal")

    @property
    def lock_free(self) -> Optional[bool]:
        return self.verdicts.get("lockFree")

    def to_json(self, state_ids=None):
        state_ids = state_ids if state_ids is not None else {}
        steps = []
        ids = []
        for s in self.states:
            if s not in state_ids:
                state_ids[s] = len(state_ids)
            ids.append(state_ids[s])
        for i, lab in enumerate(self.labels):
            steps.append({"from": ids[i], "label": lab.show(), "to": ids[i + 1]})
        out = {"kind": self.kind}
        if self.kind == LASSO:
            out.update(prefixLen=self.prefix_len, cycleLen=self.cycle_len)
        out.update(steps=steps, verdicts=_json_verdicts(self.verdicts))
        return out


def _json_verdicts(v):
    keys = ("terminated", "maximal", "fair", "lockFree", "live")
    return {k: "unknown" if v.get(k) is None else v[k] for k in keys}


@dataclass
class ExploreResult:
    traces: List[Trace]
    states_visited: int
    budget_exhausted: bool = False

    def __iter__(self):
        return iter(self.traces)

    def __len__(self):
        return len(self.traces)

    def to_json(self):
        state_ids = {}
        traces = [t.to_json(state_ids) for t in self.traces]
        states = [None] * len(state_ids)
        for s, i in state_ids.items():
            states[i] = show_process(s)
        return {"states": states, "traces": traces, "statesVisited": self.states_visited,
                "budgetExhausted": self.budget_exhausted}


class Explorer:
    def __init__(self, cfg: ExploreConfig = None, stepper: Stepper = None):
        self.cfg = cfg or ExploreConfig()
        self.stepper = stepper or Stepper(self.cfg.prims)
        self._succ = {}
        self._enabled = {}
        self._top = {}

    def successors(self, p):
        out = self._succ.get(p)
        if out is None:
            out = self.stepper.step(p, self.cfg.values)
            self._succ[p] = out
        return out

    def enabled(self, p):
        out = self._enabled.get(p)
        if out is None:
            out = self.stepper.enabled(p)
            self._enabled[p] = out
        return out

    def top_level(self, p):
        out = self._top.get(p)
        if out is None:
            out = self.stepper.top_level(p)
            self._top[p] = out
        return out

    # -- enumeration

    def explore(self, p) -> ExploreResult:
        cfg = self.cfg
        traces = []
        states, labels, moves = [p], [], []
        on_path = {p: [0]}
        counter = [1]
        exhausted = [False]

        def make(kind, prefix_len=0, cycle_len=0, extra_state=None):
            st = list(states) if extra_state is None else list(states) + [extra_state]
            t = Trace(st, list(labels), list(moves), kind, prefix_len, cycle_len)
            self.classify(t)
            return t

        def close_cycle(q):
            # Prefer a fair cycle; an unfair one may still be extended.
            first = None
            for i in reversed(on_path[q]):
                t = make(LASSO, i, len(labels) - i, extra_state=q)
                if t.verdicts["fair"]:
                    return t, False
                first = first or t
            return first, len(on_path[q]) < cfg.max_visits

        def dfs(s):
            succ = self.successors(s)
            if not succ:
                traces.append(make(FINITE))
                return
            if len(labels) >= cfg.max_depth:
                traces.append(make(TRUNCATED))
                return
            for lab, q, m in succ:
                if exhausted[0]:
                    return
                labels.append(lab)
                moves.append(m)
                go_on = True
                if cfg.detect_lassos and q in on_path:
                    t, go_on = close_cycle(q)
                    traces.append(t)
                if go_on:
                    if counter[0] >= cfg.max_states:
                        exhausted[0] = True
                        traces.append(make(BUDGET, extra_state=q))
                    else:
                        counter[0] += 1
                        states.append(q)
                        on_path.setdefault(q, []).append(len(states) - 1)
                        dfs(q)
                        on_path[q].pop()
                        if not on_path[q]:
                            del on_path[q]
                        states.pop()
                labels.pop()
                moves.pop()

        dfs(p)
        return ExploreResult(traces, counter[0], exhausted[0])

    # -- verdicts

    def classify(self, t: Trace):
        v = t.verdicts
        if t.kind in (TRUNCATED, BUDGET):
            v.update(terminated=False, maximal=None, fair=None, lockFree=None, live=None)
            return
        v["terminated"] = t.kind == FINITE
        if t.kind == FINITE:
            v["fair"] = True
            v["maximal"] = True
        else:
            v["fair"] = self._obligations_met(t, self.enabled)
            v["maximal"] = v["fair"]
        v["lockFree"] = self._obligations_met(t, self.top_level) if v["maximal"] else None
        v["live"] = self._live(t) if self.cfg.env is not None else None

    def _obligations_met(self, t: Trace, occs) -> bool:
        """Every occurrence given by ``occs`` at every position is eventually executed."""
        n = len(t.moves)
        resolved = {}
        for i in range(n + 1 if t.kind == FINITE else n):
            for o in occs(t.states[i]):
                if not self._follow(t, i, o, resolved):
                    return False
        return True

    def _follow(self, t, pos, path, resolved) -> bool:
        n = len(t.moves)
        chain = []
        seen = set()
        result = None
        while True:
            key = (pos, path)
            if key in resolved:
                result = resolved[key]
                break
            if key in seen:
                result = False
                break
            seen.add(key)
            chain.append(key)
            if pos == n:
                if t.kind != LASSO:
                    result = False
                    break
                pos = t.prefix_len
                continue
            r = t.moves[pos].residual(path)
            if r == EXECUTED:
                result = True
                break
            if r is None:
                result = False
                break
            pos, path = pos + 1, r
        for key in chain:
            resolved[key] = result
        return result

    def _live(self, t: Trace):
        deltas = typed_pairing(t, self.cfg.env)
        if deltas is None:
            return None
        from ..typecheck.env import env_req, env_res
        pending = self.cfg.pending
        if t.kind == FINITE:
            return is_live(deltas[0], env_req, env_res, pending)
        prefix, cycle = deltas
        return is_live_lasso(prefix, cycle, env_req, env_res, pending)


def typed_pairing(t: Trace, env):
    """Environment labels matching the process labels of ``t``.

    Returns ``(sequence, [])`` for finite traces and ``(prefix, cycle)`` for
    lassos, where the cycle is unrolled until the environment repeats too.
    ``None`` when some step has no matching environment transition.
    """
    from ..typecheck.env import env_key, matching_steps

    def advance(delta, i):
        lam, m = t.labels[i], t.moves[i]
        cands = matching_steps(delta, lam, m.chans)
        if not cands:
            return None
        return cands[0]

    delta = dict(env)
    out = []
    limit = len(t.moves) if t.kind != LASSO else t.prefix_len
    for i in range(limit):
        st = advance(delta, i)
        if st is None:
            return None
        out.append(st.label)
        delta = st.env
    if t.kind != LASSO:
        return out, []
    starts = {env_key(delta): len(out)}
    while True:
        for i in range(t.prefix_len, len(t.moves)):
            st = advance(delta, i)
            if st is None:
                return None
            out.append(st.label)
            delta = st.env
        k = env_key(delta)
        if k in starts:
            j = starts[k]
            return out[:j], out[j:]
        starts[k] = len(out)
        if len(starts) > 10_000:
            return None


def explore(p, cfg: ExploreConfig = None) -> ExploreResult:
    return Explorer(cfg).explore(p)
