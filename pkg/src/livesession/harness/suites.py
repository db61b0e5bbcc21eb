"""Property suites: the metatheory executed on the corpus and on random processes."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import List, Optional

from ..semantics.evaluation import DEFAULT_PRIMS, DEFAULT_VALUES
from ..semantics.explore import FINITE, LASSO, ExploreConfig, Explorer
from ..semantics.labels import sel_of_label
from ..semantics.transitions import Stepper, node_at
from ..syntax.ops import free_names, labels_of
from ..syntax.printer import show_env, show_process
from ..syntax.terms import PREFIXES, TRUE, IntV, Rec
from ..typecheck.approx import M_of, approx_A, std_of
from ..typecheck.env import balanced, env_step, matching_steps, pending_update
from ..typecheck.liveness import LiveChecker, env_labels, validates
from ..typecheck.standard import check_std
from .corpus import load_corpus
from .generate import GenConfig, gen_typed

SR_CONFIG = GenConfig(max_depth=3, max_sessions=2)
EXPLORE_GEN_CONFIG = GenConfig(max_depth=3, max_sessions=2, if_probability=0.05)


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: List[dict] = field(default_factory=list)
    unknown: int = 0
    stats: dict = field(default_factory=dict)
    findings: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, **info):
        self.failures.append(info)

    def to_json(self):
        return {"name": self.name, "ok": self.ok, "checked": self.checked,
                "failures": self.failures[:20], "failureCount": len(self.failures),
                "unknown": self.unknown, "stats": self.stats,
                "findings": self.findings[:20]}

    def to_text(self) -> str:
        status = "ok" if self.ok else f"FAILED ({len(self.failures)})"
        extra = "".join(f" {k}={v}" for k, v in sorted(self.stats.items()))
        return f"{self.name}: {status} checked={self.checked} unknown={self.unknown}{extra}"


def _judgement(p, env, L=frozenset()):
    return {"process": show_process(p), "env": show_env(env), "pending": sorted(L)}


def live_typable(p, env, L=frozenset(), checker=None) -> bool:
    checker = checker or LiveChecker()
    return checker.ok({}, frozenset(L), p, env) is None


def live_pool(n: int, cfg: GenConfig, seed: int, max_tries: Optional[int] = None):
    """``n`` generated pairs accepted by the liveness typing (fewer if tries run out)."""
    rng = random.Random(seed)
    out = []
    tries = 0
    limit = max_tries if max_tries is not None else 20 * n + 100
    while len(out) < n and tries < limit:
        tries += 1
        p, env = gen_typed(cfg, rng)
        if live_typable(p, env):
            out.append((p, env))
    return out


# ------------------------------------------------------ subject reduction


def sr_step_check(p, env, L, live_ok, stepper, checker, report, values=DEFAULT_VALUES,
                  mutate=False):
    """Check every transition of ``p``; returns the list of admissible successors."""
    succ = []
    for lam, q, m in stepper.step(p, values):
        cands = matching_steps(env, lam, m.chans)
        std_next = [st for st in cands if check_std({}, q, st.env).ok]
        report.checked += 1
        if not std_next:
            report.fail(kind="standard", step=lam.show(), **_judgement(p, env, L),
                        target=show_process(q), candidates=[st.label.show() for st in cands])
            continue
        for st in std_next:
            dsub = st.label.subject()
            if balanced(env) and (dsub is None or dsub.dual() not in env) and not balanced(st.env):
                report.fail(kind="balance", step=lam.show(), delta=st.label.show(),
                            **_judgement(p, env, L))
        if not live_ok:
            succ.append((q, std_next[0].env, L, False))
            continue
        good = None
        for st in std_next:
            L2 = L if mutate else pending_update(L, st.label)
            if checker.ok({}, L2, q, st.env) is None:
                good = (q, st.env, L2, True)
                break
        if good is None:
            report.fail(kind="liveness", step=lam.show(), **_judgement(p, env, L),
                        target=show_process(q),
                        candidates=[st.label.show() for st in std_next])
            continue
        succ.append(good)
    return succ


def run_subject_reduction(n: int, cfg: GenConfig = SR_CONFIG, steps: int = 20, seed: int = 0,
                          mutate: bool = False, pairs=None, values=(IntV(0), IntV(1), TRUE)) -> Report:
    """Standard and liveness subject reduction plus balance preservation.

    Each pair is walked for up to ``steps`` random transitions; every
    transition out of every visited state is checked.  ``mutate`` skips the
    pending update, which the liveness check must notice.
    """
    report = Report("subject-reduction" + (" (mutated)" if mutate else ""))
    rng = random.Random(seed)
    if pairs is None:
        gen_rng = random.Random(seed)
        pairs = [(gen_typed(cfg, gen_rng) + (frozenset(), DEFAULT_PRIMS)) for _ in range(n)]
    live_start = 0
    for item in pairs:
        p, env, L, prims = item
        stepper = Stepper(prims)
        checker = LiveChecker()
        live_ok = checker.ok({}, L, p, env) is None
        live_start += live_ok
        state = (p, env, L, live_ok)
        for _ in range(steps):
            succ = sr_step_check(*state, stepper, checker, report, values, mutate)
            if not succ:
                break
            state = rng.choice(succ)
    report.stats.update(processes=len(pairs), liveTyped=live_start)
    return report


# ----------------------------------------------------------- liveness


def eventually_after(trace, trigger: str, target: str) -> bool:
    """Whenever ``trigger`` is selected, ``target`` is selected later on."""
    sels = [sel_of_label(l) for l in trace.labels]
    n = len(sels)
    cycle = set()
    if trace.kind == LASSO:
        for s in sels[trace.prefix_len:]:
            cycle |= s
    for i, s in enumerate(sels):
        if trigger in s:
            later = set().union(*sels[i + 1:]) if i + 1 < n else set()
            if target not in later | cycle:
                return False
    return True


def certify(p, env, pending, prims, depth, values, max_states=200_000):
    """Explore and decide whether the run certifies lock-freedom.

    Returns ``(status, result)`` with status ``certified``, ``not-lock-free``
    or ``unknown`` (some trace was truncated or the budget ran out).
    """
    ex = Explorer(ExploreConfig(max_depth=depth, values=values, prims=prims, env=env,
                                pending=frozenset(pending), max_states=max_states))
    res = ex.explore(p)
    if any(t.kind not in (FINITE, LASSO) for t in res):
        return "unknown", res
    if any(t.maximal and not t.lock_free for t in res):
        return "not-lock-free", res
    return "certified", res


def check_live_traces(name, p, env, L, result, report):
    A = approx_A(p)
    for t in result:
        if not t.maximal:
            continue
        report.checked += 1
        sel = t.sel()
        if not L <= sel:
            report.fail(kind="pending-not-selected", entry=name, missing=sorted(L - sel),
                        trace=[l.show() for l in t.labels])
        if not A <= sel:
            report.fail(kind="approx-not-selected", entry=name, missing=sorted(A - sel),
                        trace=[l.show() for l in t.labels])
        if t.verdicts.get("live") is not True:
            report.fail(kind="not-live", entry=name, verdict=t.verdicts.get("live"),
                        trace=[l.show() for l in t.labels])


def run_liveness_suite(entries=None, generated: int = 0, seed: int = 0, depth: int = 12,
                       values=DEFAULT_VALUES, gen_values=(IntV(0), IntV(1)), cfg: GenConfig = EXPLORE_GEN_CONFIG,
                       corpus_depths: Optional[dict] = None) -> Report:
    """Discharge, approximation soundness and liveness on explored runs.

    Only processes whose exploration certifies lock-freedom are checked;
    the others are counted (unknown when exploration was inconclusive).
    """
    report = Report("liveness")
    corpus_depths = corpus_depths or {}
    items = []
    for e in (load_corpus() if entries is None else entries):
        if e.env is None or not e.expected_live:
            continue
        items.append((e.name, e.process, e.env, e.pending, e.prims,
                      corpus_depths.get(e.name, depth), values))
    for i, (p, env) in enumerate(live_pool(generated, cfg, seed)):
        items.append((f"gen{i}", p, env, frozenset(), DEFAULT_PRIMS, depth, gen_values))
    certified = not_lf = 0
    for name, p, env, L, prims, d, vals in items:
        if not live_typable(p, env, L):
            report.fail(kind="not-live-typable", entry=name)
            continue
        status, res = certify(p, env, L, prims, d, vals)
        if status == "unknown":
            report.unknown += 1
            continue
        if status == "not-lock-free":
            not_lf += 1
            continue
        certified += 1
        check_live_traces(name, p, env, frozenset(L), res, report)
    report.stats.update(processes=len(items), certified=certified, notLockFree=not_lf)
    return report


# ------------------------------------------------------------ discharge


def judgements(checker: LiveChecker):
    """Every judgement the checker has derived."""
    for (gamma, L, p, env), err in checker._memo.items():
        if err is None:
            yield dict(gamma), L, p, env


def run_discharge(generated: int = 500, seed: int = 0, cfg: GenConfig = GenConfig(),
                  include_corpus: bool = True, extra_pending: int = 3) -> Report:
    """``L - M(gamma)`` lies within the approximation, for every derived judgement."""
    report = Report("discharge")
    rng = random.Random(seed + 1)
    items = []
    if include_corpus:
        for e in load_corpus():
            if e.env is not None and e.expected_live:
                items.append((e.process, e.env, e.pending))
    for p, env in live_pool(generated, cfg, seed):
        items.append((p, env, frozenset()))
        universe = sorted(approx_A(p) | labels_of(p))
        for _ in range(extra_pending):
            if universe:
                items.append((p, env, frozenset(rng.sample(universe, rng.randint(1, min(3, len(universe)))))))
    accepted = 0
    for p, env, L in items:
        checker = LiveChecker()
        if checker.ok({}, L, p, env) is not None:
            continue
        accepted += 1
        for gamma, L2, q, _ in judgements(checker):
            report.checked += 1
            over = (L2 - M_of(gamma)) - approx_A(q)
            if over:
                report.fail(process=show_process(q), pending=sorted(L2), extra=sorted(over))
    report.stats.update(roots=len(items), accepted=accepted)
    return report


# ----------------------------------------------------- invariant probe


def run_conjecture_probe(n: int = 200, seed: int = 0, cfg: GenConfig = None,
                         max_free: int = 8) -> Report:
    """Whether the body approximation is the largest invariant, on generated loops.

    Counterexamples are findings, not failures.
    """
    cfg = cfg or GenConfig(max_depth=4, max_sessions=2, force_rec=True, resp_probability=0.4)
    report = Report("invariant-conjecture")
    rng = random.Random(seed)
    tries = validated = bigger = 0
    while report.checked < n and tries < 50 * n:
        tries += 1
        p, env = gen_typed(cfg, rng)
        if not isinstance(p, Rec) or not live_typable(p, env):
            continue
        report.checked += 1
        cand = approx_A(p.body)
        ok = validates(p, cand, env)
        validated += ok
        if not ok:
            report.findings.append({"kind": "candidate-rejected", **_judgement(p, env),
                                    "candidate": sorted(cand)})
            continue
        universe = (labels_of(p) | env_labels(env)) - cand
        extra = sorted(universe)[:max_free]
        for r in range(1, len(extra) + 1):
            hit = None
            for add in combinations(extra, r):
                if validates(p, cand | frozenset(add), env):
                    hit = add
                    break
            if hit:
                bigger += 1
                report.findings.append({"kind": "larger-invariant", **_judgement(p, env),
                                        "candidate": sorted(cand), "extra": sorted(hit)})
                break
    report.stats.update(candidateValidates=validated, largerFound=bigger,
                        rate=round(validated / report.checked, 3) if report.checked else None)
    return report


# ------------------------------------------------ semantic properties


def _states(p, stepper, values, limit):
    seen = {p}
    todo = [p]
    while todo and len(seen) < limit:
        s = todo.pop()
        for _, q, _ in stepper.step(s, values):
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def run_occurrence_properties(pairs=None, generated: int = 100, seed: int = 0, limit: int = 300,
                          values=(IntV(0), IntV(1))) -> Report:
    """Enabled occurrences are top-level; each move executes a prefix; the
    co-name of the subject is gone from the target."""
    report = Report("occurrences")
    items = []
    if pairs is None:
        for e in load_corpus():
            items.append((e.process, e.prims))
        rng = random.Random(seed)
        for _ in range(generated):
            items.append((gen_typed(SR_CONFIG, rng)[0], DEFAULT_PRIMS))
    else:
        items = list(pairs)
    for p, prims in items:
        stepper = Stepper(prims)
        for s in _states(p, stepper, values, limit):
            report.checked += 1
            top = stepper.top_level(s)
            en = stepper.enabled(s)
            if not en <= top:
                report.fail(kind="enabled-not-top-level", state=show_process(s),
                            paths=[list(x) for x in en - top])
            for lam, q, m in stepper.step(s, values):
                if not m.executed:
                    report.fail(kind="nothing-executed", state=show_process(s), step=lam.show())
                for path in m.executed:
                    if not isinstance(node_at(s, path), PREFIXES):
                        report.fail(kind="executed-not-prefix", state=show_process(s),
                                    path=list(path))
                subj = lam.subject()
                if subj is not None and subj.dual() in free_names(q):
                    report.fail(kind="co-name-survives", state=show_process(s), step=lam.show())
    return report


def run_decomposition(generated: int = 60, seed: int = 0, depth: int = 6, values=(IntV(0), IntV(1))) -> Report:
    """Selections of a run of ``P | Q`` split into runs of ``P`` and of ``Q``."""
    from ..syntax.terms import Par
    report = Report("decomposition")
    rng = random.Random(seed)
    cfg = GenConfig(max_depth=3, max_sessions=2, if_probability=0.0, open_probability=0.0)
    done = 0
    tries = 0
    while done < generated and tries < 20 * generated:
        tries += 1
        p, _ = gen_typed(cfg, rng)
        if not isinstance(p, Par):
            continue
        done += 1
        whole = _prefix_sels(p, depth, values)
        left = _prefix_sels(p.left, depth, values)
        right = _prefix_sels(p.right, depth, values)
        unions = {a | b for a in left for b in right}
        for s in whole:
            report.checked += 1
            if s not in unions:
                report.fail(process=show_process(p), selections=sorted(s))
    report.stats.update(processes=done)
    return report


def _prefix_sels(p, depth, values):
    """Selection sets of all runs of length at most ``depth``."""
    stepper = Stepper()
    out = set()
    frontier = {(p, frozenset())}
    seen = set(frontier)
    for _ in range(depth + 1):
        nxt = set()
        for s, sel in frontier:
            out.add(sel)
            for lam, q, _ in stepper.step(s, values):
                item = (q, sel | sel_of_label(lam))
                if item not in seen:
                    seen.add(item)
                    nxt.add(item)
        frontier = nxt
    return out


# ------------------------------------------------- typing properties


def run_typing_properties(generated: int = 300, seed: int = 0, cfg: GenConfig = GenConfig()) -> Report:
    """Weakening, the embedding into the standard system, domains of steps."""
    report = Report("typing-properties")
    rng = random.Random(seed + 7)
    for p, env in live_pool(generated, cfg, seed):
        report.checked += 1
        checker = LiveChecker()
        # Embedding: every derived judgement is also a standard one.
        checker.ok({}, frozenset(), p, env)
        if not check_std({}, p, env).ok:
            report.fail(kind="embedding", **_judgement(p, env))
        for gamma, L, q, qenv in list(judgements(checker)):
            if not check_std_open(std_of(gamma), q, qenv):
                report.fail(kind="embedding", **_judgement(q, qenv, L))
        # Weakening from a random pending set that types.
        universe = sorted(approx_A(p))
        if universe:
            L = frozenset(rng.sample(universe, rng.randint(1, len(universe))))
            if live_typable(p, env, L):
                for r in range(len(L)):
                    for sub in combinations(sorted(L), r):
                        if not live_typable(p, env, frozenset(sub)):
                            report.fail(kind="weakening", **_judgement(p, env, L),
                                        weaker=sorted(sub))
        for st in env_step(env):
            if set(st.env) != set(env):
                report.fail(kind="domain", **_judgement(p, env), step=st.label.show())
    return report


def check_std_open(theta, p, env) -> bool:
    return check_std(theta, p, env).ok


def run_all(seed: int = 0, count: int = 100):
    """Every suite at a size proportional to ``count``."""
    return [
        run_subject_reduction(count, seed=seed),
        run_subject_reduction(0, seed=seed, mutate=True, pairs=corpus_sr_pairs()),
        run_liveness_suite(generated=max(count // 5, 1), seed=seed, corpus_depths=CORPUS_DEPTHS),
        run_discharge(count, seed=seed),
        run_conjecture_probe(max(count // 5, 1), seed=seed),
        run_occurrence_properties(generated=max(count // 5, 1), seed=seed),
        run_decomposition(max(count // 5, 1), seed=seed),
        run_typing_properties(max(count // 3, 1), seed=seed),
    ]


# Depth at which exploration of each corpus entry closes every run.
CORPUS_DEPTHS = {"shopping_d": 40, "shopping_d0": 40, "delivery_d": 40, "rw_r_u": 20}


def corpus_sr_pairs(names=None):
    out = []
    for e in load_corpus():
        if e.env is None or (names is not None and e.name not in names):
            continue
        out.append((e.process, e.env, e.pending, e.prims))
    return out
