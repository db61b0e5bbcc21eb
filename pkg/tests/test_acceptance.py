"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line that is printed in the terminal summary
(and to stdout, visible with ``-s``).
"""
import functools
import random
import time

from conftest import ACCEPTANCE, corpus_path
from livesession.cli import main
from livesession.harness import (
    get_entry, load_corpus, run_conjecture_probe, run_discharge,
    run_liveness_suite, run_subject_reduction,
)
from livesession.harness.suites import CORPUS_DEPTHS, certify, eventually_after
from livesession.semantics import DEFAULT_VALUES, ExploreConfig, explore
from livesession.semantics.explore import FINITE, LASSO
from livesession.syntax import Branch, Chan, Minus, Mu, In, Out, Plus, parse_type
from livesession.typecheck import check_live, check_std
from livesession.types import (
    T_OUT, TSel, TypeLasso, WITNESS, accepts, accepts_lasso, expressivity_experiment,
    is_dual, responsive, selection_string, syntactic_dual, trace_by_selection, types_equal,
)


def criterion(n, title):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                detail = fn(*args, **kwargs) or ""
            except BaseException as e:
                msg = str(e).splitlines()[0] if str(e) else type(e).__name__
                ACCEPTANCE[n] = (title, False, msg[:120], time.perf_counter() - t0)
                print(f"[FAIL] {n}. {title}: {msg}")
                raise
            secs = time.perf_counter() - t0
            ACCEPTANCE[n] = (title, True, detail, secs)
            print(f"[PASS] {n}. {title} ({secs:.2f}s) {detail}")
        return wrapper
    return deco


def _within(t0, budget):
    spent = time.perf_counter() - t0
    assert spent < budget, f"took {spent:.2f}s, budget {budget}s"
    return spent


# 1 ----------------------------------------------------------------------


@criterion(1, "shopping cart: safety accepts both, liveness only P(D)")
def test_criterion_1_safety_liveness_split(capsys, t_p, t_d):
    t0 = time.perf_counter()
    env = {Chan("k", Plus): t_p, Chan("o", Plus): t_d, Chan("o", Minus): syntactic_dual(t_d)}
    d, d0 = get_entry("shopping_d"), get_entry("shopping_d0")
    assert types_equal(d.env[Chan("o", Minus)], syntactic_dual(t_d))
    assert check_std({}, d0.process, env).ok is True
    assert check_std({}, d.process, env).ok is True
    assert check_live({}, frozenset(), d.process, env).ok is True
    assert check_live({}, frozenset(), d0.process, env).ok is False
    env_file = corpus_path("shopping.env")
    codes = [main(["check", corpus_path("shopping_d0.proc"), env_file]),
             main(["check", corpus_path("shopping_d.proc"), env_file]),
             main(["check-live", corpus_path("shopping_d.proc"), env_file]),
             main(["check-live", corpus_path("shopping_d0.proc"), env_file])]
    capsys.readouterr()
    assert codes == [0, 0, 0, 1]
    spent = _within(t0, 1.0)
    return f"cli exits {codes}, {spent:.3f}s"


# 2 ----------------------------------------------------------------------


def _arm_sites(t, path=()):
    if isinstance(t, Branch):
        for l, _, s in t.arms:
            yield path + (l,)
            yield from _arm_sites(s, path + (l,))
    elif isinstance(t, (Out, In)):
        yield from _arm_sites(t.cont, path + ("c",))
    elif isinstance(t, Mu):
        yield from _arm_sites(t.body, path + ("mu",))


def _set_resp(t, path, L):
    tok, rest = path[0], path[1:]
    if isinstance(t, Mu):
        return Mu(t.var, _set_resp(t.body, rest, L))
    if isinstance(t, (Out, In)):
        return type(t)(_set_resp(t.cont, rest, L))
    arms = []
    for l, M, s in t.arms:
        if l == tok:
            arms.append((l, L, s) if not rest else (l, M, _set_resp(s, rest, L)))
        else:
            arms.append((l, M, s))
    return type(t)(tuple(arms))


@criterion(2, "duality ignores response annotations")
def test_criterion_2_duality_with_mismatched_responses(t_d, t_e):
    t0 = time.perf_counter()
    assert is_dual(t_d, t_e) is True
    rng = random.Random(2)
    universe = ["read", "write", "quit", "x", "y"]
    changed = 0
    for _ in range(100):
        side = rng.random() < 0.5
        t = t_d if side else t_e
        site = rng.choice(list(_arm_sites(t)))
        L = frozenset(rng.sample(universe, rng.randint(0, 3)))
        m = _set_resp(t, site, L)
        changed += m != t
        pair = (m, t_e) if side else (t_d, m)
        assert is_dual(*pair) is True, site
    spent = _within(t0, 1.0)
    return f"100 mutations ({changed} changed a set), {spent:.3f}s"


# 3 ----------------------------------------------------------------------


@criterion(3, "selection traces of T_P: responsive vs not")
def test_criterion_3_selection_trace_classification(t_p):
    t = trace_by_selection(t_p, ["AI", "CO", "DI", "DI", "SI"], fill=True)
    assert accepts(t_p, t)
    assert selection_string(t) == ("AI", "CO", "DI", "DI", "SI")
    assert responsive(t) is True
    prefix = trace_by_selection(t_p, ["AI", "CO"], fill=True)
    u = TypeLasso(prefix, (TSel("DI"), T_OUT))
    assert accepts_lasso(t_p, u.prefix, u.cycle)
    assert selection_string(u) == (("AI", "CO"), ("DI",))
    assert responsive(u) is False
    return "t live, u not"


# 4 ----------------------------------------------------------------------


@criterion(4, "expressivity witness mu t.+{a[b].t, b[a].t}")
def test_criterion_4_expressivity():
    t0 = time.perf_counter()
    assert WITNESS == parse_type("mu t.+{a[b].t, b[a].t}")
    rep = expressivity_experiment(32)
    assert rep.prefixes_extend and rep.failures == []
    assert rep.a_omega_in_traces is True and rep.a_omega_responsive is False
    assert rep.ok
    spent = _within(t0, 1.0)
    return f"a^k extends for k <= 32, a^omega not responsive, {spent:.3f}s"


# 5 ----------------------------------------------------------------------


@criterion(5, "subject reduction fuzz, 1000 processes x 20 steps")
def test_criterion_5_subject_reduction():
    t0 = time.perf_counter()
    rep = run_subject_reduction(1000, steps=20, seed=0)
    assert rep.stats["processes"] == 1000
    assert rep.failures == [], rep.failures[:3]
    assert rep.stats["liveTyped"] > 0
    spent = _within(t0, 60.0)
    return (f"{rep.checked} transitions, 0 violations, "
            f"{rep.stats['liveTyped']} live-typed starts, {spent:.1f}s")


# 6 ----------------------------------------------------------------------


@criterion(6, "discharge: L minus M(Gamma) within A(P)")
def test_criterion_6_discharge():
    rep = run_discharge(generated=500, seed=0)
    corpus = sum(1 for e in load_corpus() if e.env is not None and e.expected_live)
    assert rep.stats["roots"] >= corpus + 500
    assert rep.failures == [], rep.failures[:3]
    assert rep.checked > 0
    return f"{rep.checked} derived judgements over {rep.stats['accepted']} accepted roots"


# 7 ----------------------------------------------------------------------


@criterion(7, "A-soundness on certified corpus processes")
def test_criterion_7_approximation_soundness():
    at12 = run_liveness_suite(generated=0, depth=12)
    assert at12.failures == [], at12.failures[:3]
    closed = run_liveness_suite(generated=0, depth=12, corpus_depths=CORPUS_DEPTHS)
    assert closed.failures == [], closed.failures[:3]
    assert closed.unknown == 0
    assert closed.stats["certified"] == closed.stats["processes"]
    return (f"depth 12: {at12.checked} traces, {at12.stats['certified']} certified, "
            f"{at12.unknown} not closed; closing depth: {closed.checked} traces, 0 unknown")


# 8 ----------------------------------------------------------------------


@criterion(8, "liveness of D and P(D)")
def test_criterion_8_liveness():
    t0 = time.perf_counter()
    d = get_entry("delivery_d")
    assert d.pending == {"SI"}
    status, res = certify(d.process, d.env, d.pending, d.prims, 40, DEFAULT_VALUES)
    assert status == "certified"
    maximal = [t for t in res if t.maximal]
    assert maximal and all(t.kind in (FINITE, LASSO) for t in res)
    assert all("SI" in t.sel() for t in maximal)
    pd = get_entry("shopping_d")
    status, res = certify(pd.process, pd.env, frozenset(), pd.prims, 40, DEFAULT_VALUES)
    assert status == "certified"
    with_co = [t for t in res if t.maximal and "CO" in t.sel()]
    assert with_co
    assert all(eventually_after(t, "CO", "SI") for t in res if t.maximal)
    spent = _within(t0, 30.0)
    return f"{len(maximal)} runs of D, {len(with_co)} runs of P(D) with CO, {spent:.2f}s"


# 9 ----------------------------------------------------------------------


@criterion(9, "invariant conjecture probe (statistic)")
def test_criterion_9_conjecture_probe():
    rep = run_conjecture_probe(200, seed=0)
    assert rep.checked == 200
    assert rep.ok  # findings are not failures
    s = rep.stats
    return (f"candidate validates {s['candidateValidates']}/200 (rate {s['rate']}), "
            f"larger invariant found {s['largerFound']}, findings {len(rep.findings)}")


# 10 ---------------------------------------------------------------------


@criterion(10, "relay: maximal but not lock-free")
def test_criterion_10_relay():
    res = explore(get_entry("relay").process, ExploreConfig(max_depth=12))
    lassos = [t for t in res if t.kind == LASSO]
    assert len(lassos) == 1 and len(res) == 1
    t = lassos[0]
    assert t.maximal is True
    assert t.lock_free is False
    return "one lasso, maximal, not lock-free"
