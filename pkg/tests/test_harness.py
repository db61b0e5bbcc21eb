import json

from hypothesis import given, settings, strategies as st

from livesession.harness import (
    GenConfig, certify, gen_many, gen_typed, get_entry, load_corpus, run_conjecture_probe,
    run_decomposition, run_discharge, run_liveness_suite, run_subject_reduction,
    run_typing_properties,
)
from livesession.harness.suites import corpus_sr_pairs, eventually_after, live_pool
from livesession.semantics import ExploreConfig, explore
from livesession.syntax import (
    INACT, Bra, If, Par, PRec, PVar, Rec, Recv, Send, Sel, check_conventions, subterms,
)
from livesession.typecheck import balanced, check_std, completed, matching_steps


def test_gen_depth_zero():
    p, env = gen_typed(GenConfig(max_depth=0, seed=3))
    assert p == INACT and completed(env)


def test_gen_seed_42_deterministic():
    a = gen_typed(GenConfig(seed=42))
    b = gen_typed(GenConfig(seed=42))
    assert a == b
    assert gen_many(GenConfig(seed=42), 5) == gen_many(GenConfig(seed=42), 5)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 7), st.integers(0, 5), st.booleans())
def test_generated_pairs_are_well_typed(seed, depth, force_rec):
    p, env = gen_typed(GenConfig(seed=seed, max_depth=depth, force_rec=force_rec))
    assert check_std({}, p, env).ok
    assert balanced(env)
    assert check_conventions(p) == []


def test_generator_covers_all_constructors():
    seen = set()
    for p, _ in gen_many(GenConfig(max_depth=5, seed=1), 400):
        seen |= {type(q) for q in subterms(p)}
    assert {Send, Recv, Sel, Bra, type(INACT), Par, Rec, PRec, PVar, If} <= seen


def test_sr_empty():
    rep = run_subject_reduction(0)
    assert rep.ok and rep.checked == 0


def test_sr_small_run():
    rep = run_subject_reduction(60, seed=5)
    assert rep.ok, rep.failures[:2]
    assert rep.checked > 0 and rep.stats["liveTyped"] > 0


def test_sr_mutation_is_caught():
    rep = run_subject_reduction(0, mutate=True, pairs=corpus_sr_pairs(["shopping_d", "delivery_d"]))
    assert not rep.ok
    assert all(f["kind"] == "liveness" for f in rep.failures)


def test_every_step_of_cart_has_matching_env_step(shop_d):
    res = explore(shop_d.process, ExploreConfig(max_depth=14, prims=shop_d.prims))
    steps = 0
    for t in res:
        env = dict(shop_d.env)
        for q, lab, m in zip(t.states[1:], t.labels, t.moves):
            cands = [c for c in matching_steps(env, lab, m.chans) if check_std({}, q, c.env).ok]
            assert cands, lab.show()
            env = cands[0].env
            steps += 1
    assert steps > 100


def test_eventually_after():
    res = explore(get_entry("shopping_d").process,
                  ExploreConfig(max_depth=40, prims=get_entry("shopping_d").prims))
    for t in res:
        if t.maximal:
            assert eventually_after(t, "CO", "SI")


def test_certify_statuses():
    relay = get_entry("relay")
    status, _ = certify(relay.process, None, frozenset(), relay.prims, 12, ExploreConfig().values)
    assert status == "not-lock-free"
    ab = get_entry("ab_loop")
    assert certify(ab.process, ab.env, frozenset(), ab.prims, 12, ExploreConfig().values)[0] == "certified"
    rwr = get_entry("rw_r_u")
    assert certify(rwr.process, rwr.env, frozenset(), rwr.prims, 3, ExploreConfig().values)[0] == "unknown"


def test_liveness_suite_small_generated():
    rep = run_liveness_suite(entries=[], generated=15, seed=2)
    assert rep.ok, rep.failures[:2]
    assert rep.stats["processes"] == 15


def test_liveness_suite_skips_non_live_entries():
    rep = run_liveness_suite(entries=[get_entry("shopping_d0"), get_entry("relay")])
    assert rep.ok and rep.stats["processes"] == 0


def test_discharge_small():
    rep = run_discharge(generated=20, seed=4)
    assert rep.ok, rep.failures[:2]
    assert rep.checked > 0


def test_conjecture_probe_small():
    rep = run_conjecture_probe(10, seed=1)
    assert rep.ok
    assert rep.checked == 10
    assert rep.stats["candidateValidates"] + sum(
        1 for f in rep.findings if f["kind"] == "candidate-rejected") == rep.checked


def test_decomposition_and_typing_properties():
    assert run_decomposition(10, seed=3).ok
    assert run_typing_properties(20, seed=3).ok


def test_live_pool_is_live_typable():
    from livesession.typecheck import check_live
    for p, env in live_pool(10, GenConfig(seed=9), 9):
        assert check_live({}, frozenset(), p, env).ok


def test_report_json_roundtrips():
    rep = run_decomposition(3, seed=1)
    j = json.loads(json.dumps(rep.to_json()))
    assert j["name"] == "decomposition" and j["ok"] is True
    assert rep.to_text().startswith("decomposition: ok")


def test_corpus_entries_load():
    names = {e.name for e in load_corpus()}
    assert {"shopping_d", "shopping_d0", "delivery_d", "relay", "ab_loop"} <= names
