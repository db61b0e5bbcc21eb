import pytest

from livesession.semantics import RecvL, SendL, TAU, TauSel, SelL
from livesession.syntax import (
    END, Chan, INACT, In, IntLit, IntV, Minus, Out, Plus, Send, Sel, branch, parse_env,
    parse_process, select,
)
from livesession.typecheck import (
    CheckResult, DAt, DTau, DTauSel, GenEntry, M_of, PrimEntry, approx_A, balanced,
    check_live, check_std, completed, env_step, freeze_env, gamma_plus, pending_update,
    sim, std_of, synth_invariant, validates,
)
from livesession.types import T_IN, T_OUT, TSel

K, KM = Chan("k", Plus), Chan("k", Minus)
E = frozenset()


def test_env_step_single():
    steps = env_step({K: Out(END)})
    assert [(s.label, s.env) for s in steps] == [(DAt(K, T_OUT), {K: END})]


def test_env_step_selection_com():
    env = {K: select(("l", {"m"}, END)), KM: branch(("l", (), END))}
    coms = [s for s in env_step(env) if isinstance(s.label, DTauSel)]
    assert [(s.label, s.env) for s in coms] == [(DTauSel("l", frozenset({"m"})), {K: END, KM: END})]


def test_env_step_com_unions_responses():
    env = {K: select(("l", {"m"}, END)), KM: branch(("l", {"n"}, END))}
    (com,) = [s for s in env_step(env) if isinstance(s.label, DTauSel)]
    assert com.label.resp == {"m", "n"}


def test_env_step_data_com():
    env = {K: Out(END), KM: In(END)}
    labels = {s.label for s in env_step(env)}
    assert DTau() in labels
    assert {DAt(K, T_OUT), DAt(KM, T_IN)} <= labels


def test_sim():
    assert sim(DTau(), TAU)
    assert sim(DAt(K, T_OUT), SendL(K, IntV(17)))
    assert not sim(DAt(K, T_OUT), RecvL(K, IntV(0)))
    assert sim(DTauSel("a", frozenset({"b"})), TauSel("a"))
    assert not sim(DTauSel("a"), TauSel("b"))
    assert sim(DAt(K, TSel("a")), SelL(K, "a"))


def test_pending_update():
    d = DTauSel("CO", frozenset({"SI"}))
    assert pending_update(frozenset({"CO", "x"}), d) == {"x", "SI"}
    assert pending_update(frozenset({"SI"}), DTauSel("SI")) == E


def test_balanced_and_completed(shopping_env, t_d, t_e):
    assert balanced(shopping_env)
    o, om = Chan("o", Plus), Chan("o", Minus)
    assert balanced({o: t_d, om: t_e})
    assert not balanced({o: t_d, om: t_d})
    assert completed({K: END}) and not completed({K: Out(END)})


# -------------------------------------------------------------- standard


def test_check_std_examples(shop_d0, shop_d, shopping_env):
    assert check_std({}, INACT, {K: END}).ok
    assert check_std({}, shop_d0.process, shopping_env).ok
    assert check_std({}, shop_d.process, shopping_env).ok
    r = check_std({}, Send(K, IntLit(5), INACT), {K: In(END)})
    assert not r.ok and r.failure.rule.startswith("Std-")


def test_check_std_requires_completed_at_inact():
    assert not check_std({}, INACT, {K: Out(END)}).ok


def test_check_std_branch_arms_must_match():
    p = parse_process("k+>>{a: 0}")
    assert not check_std({}, p, parse_env("k+ : &{a.end, b.end}")).ok
    assert check_std({}, p, parse_env("k+ : &{a.end}")).ok


def test_check_std_par_splits():
    p = parse_process("k+!(1).0 | k-?(x).0")
    assert check_std({}, p, parse_env("k+ : !.end\nk- : ?.end")).ok
    assert not check_std({}, p, parse_env("k+ : !.end\nk- : !.end")).ok


def test_failure_json_shape():
    r = check_std({}, Send(K, IntLit(5), INACT), {K: In(END)})
    j = r.to_json()
    assert j["ok"] is False
    assert set(j["failure"]) == {"rule", "path", "expected", "actual", "pendingLeft"}
    assert j["failure"]["path"] == "/"


# -------------------------------------------------------------- liveness


def test_ab_loop_types_with_both_invariants():
    env = parse_env("k+ : mu t.+{a[b].t, b[a].t}")
    p = parse_process("rec X.k+<<a.k+<<b.X(k+)")
    r = check_live({}, E, p, env)
    assert r.ok
    assert synth_invariant(p) == {"a", "b"}
    assert validates(p, frozenset({"a", "b"}), env)
    assert validates(p, frozenset({"a"}), env)
    annotated = parse_process("rec X invariant {a}.k+<<a.k+<<b.X(k+)")
    assert check_live({}, E, annotated, env).ok


def test_shopping_liveness_split(shop_d, shop_d0, shopping_env):
    assert check_live({}, E, shop_d.process, shopping_env).ok
    r = check_live({}, E, shop_d0.process, shopping_env)
    assert not r.ok
    assert "SI" in r.failure.pending_left
    assert r.failure.rule == "E-Rec"


def test_delivery_with_pending(delivery):
    assert delivery.pending == {"SI"}
    assert check_live({}, delivery.pending, delivery.process, delivery.env).ok
    assert not check_live({}, frozenset({"SI", "nope"}), delivery.process, delivery.env).ok


def test_pending_must_be_discharged():
    env = parse_env("k+ : +{a.end, b.end}")
    assert check_live({}, frozenset({"a"}), parse_process("k+<<a.0"), env).ok
    r = check_live({}, frozenset({"a"}), parse_process("k+<<b.0"), env)
    assert not r.ok and r.failure.pending_left == {"a"}


def test_requests_raise_obligations():
    env = parse_env("k+ : +{a[b].+{b.end, c.end}}")
    assert check_live({}, E, parse_process("k+<<a.k+<<b.0"), env).ok
    assert not check_live({}, E, parse_process("k+<<a.k+<<c.0"), env).ok


def test_rw_writer_against_annotated_type():
    p = parse_process("rec X. c+>>{read: X(c+), eof: c+?(n). rec Y. c+<<write. Y(c+)}")
    assert check_live({}, E, p, parse_env("c+ : mu t.&{read.t, eof.?.mu u.+{write.u, close.end}}")).ok
    r = check_live({}, E, p, parse_env("c+ : mu t.&{read.t, eof[close].?.mu u.+{write.u, close.end}}")).ok
    assert r is False


def test_live_implies_std_on_corpus():
    from livesession.harness import load_corpus
    for e in load_corpus():
        if e.env is None:
            continue
        assert check_std({}, e.process, e.env).ok == e.expected_std, e.name
        assert check_live({}, e.pending, e.process, e.env).ok == e.expected_live, e.name


def test_check_live_result_lists_invariants(shop_d, shopping_env):
    r = check_live({}, E, shop_d.process, shopping_env)
    assert isinstance(r, CheckResult) and r.invariants
    assert "invariants" in r.to_json()


# ---------------------------------------------------------- approximation


def test_approx_examples(delivery):
    assert approx_A(INACT) == E
    assert approx_A(Sel(K, "l", INACT)) == {"l"}
    assert "SI" in approx_A(delivery.process)
    assert approx_A(parse_process("k+>>{a: k+<<c.0, b: k+<<c.0}")) == {"c"}
    assert approx_A(parse_process("if true then k+<<a.0 else 0")) == E
    assert approx_A(parse_process("loop X (i < 3) { k+<<a.X(k+) } then { k+<<b.0 }")) == {"b"}


def test_M_of():
    d = freeze_env({K: END})
    assert M_of({}) == E
    assert M_of({"X": GenEntry(E, frozenset({"a"}), d)}) == E
    g = {"X": GenEntry(frozenset({"a", "b"}), frozenset({"a"}), d), "Y": PrimEntry(frozenset({"c"}), d)}
    assert M_of(g) == {"a", "b", "c"}


def test_gamma_plus_and_std_of():
    d = freeze_env({K: END})
    g = {"X": GenEntry(E, E, d), "Y": PrimEntry(frozenset({"c"}), d)}
    g2 = gamma_plus(g, {"a"})
    assert g2["X"].A == {"a"} and g2["Y"] == g["Y"]
    assert std_of({}) == {}
    assert std_of(g) == {"X": {K: END}, "Y": {K: END}}


def test_synth_invariant_examples(shop_d):
    assert synth_invariant(parse_process("rec X.k+<<a.k+<<b.X(k+)")) == {"a", "b"}
    p = parse_process("rec X.k+!(1).X(k+)")
    assert synth_invariant(p) == E
    env = parse_env("k+ : mu t.!.t")
    assert validates(p, E, env)
    assert not validates(p, E, env, L=frozenset({"a"}))
    # every ordering arm reads and writes the data object, nothing else is common
    cart = shop_d.process.right.cont
    assert synth_invariant(cart) == {"read", "write"}
    r = check_live({}, E, shop_d.process, shop_d.env)
    assert r.invariants[("R", "c")] == {"read", "write"}
    with pytest.raises(TypeError):
        synth_invariant(INACT)
