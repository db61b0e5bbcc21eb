import pytest
from hypothesis import given, settings, strategies as st

from livesession.harness import GenConfig, gen_typed, load_corpus
from livesession.syntax import (
    END, Apply, Binary, BoolLit, Bra, Branch, Chan, If, In, INACT, Inact, IntLit, IntV,
    Minus, Mu, NonContractive, Out, Par, ParseError, Plus, PRec, PVar, Rec, Recv, Select,
    Send, Sel, TVar, Var, ViolationKind, check_conventions, chan, free_data_vars,
    free_names, labels_of, parse_env, parse_expr, parse_process, parse_type, parse_value,
    parse_values, select, show_expr, show_process, show_type, subst_pvar, subst_value,
    unfold,
)

from conftest import CORPUS_DIR

K = Chan("k", Plus)
KM = Chan("k", Minus)
H = Chan("h", Minus)


# ------------------------------------------------------------------ parser


def test_parse_inact():
    assert parse_process("0") == INACT


def test_parse_select():
    assert parse_process("k+ << ai . 0") == Sel(K, "ai", Inact())


def test_parse_end():
    assert parse_type("end") == END


def test_parse_witness_type():
    t = parse_type("mu t. +{ a[b].t , b[a].t }")
    assert t == Mu("t", select(("a", {"b"}, TVar("t")), ("b", {"a"}, TVar("t"))))


def test_parse_t_p(t_p):
    src = "mu t. &{ AI[].?.t , RI[].?.t , CO[SI].?.mu s. +{ DI[].!.s , SI[].!.end } }"
    t = parse_type(src)
    # alpha-equivalent to the corpus file, which names the inner binder u
    assert show_type(t).replace("s.", "u.").replace(".s", ".u") == show_type(t_p)
    body = t.body
    assert isinstance(body, Branch) and not isinstance(body, Select)
    assert dict((l, L) for l, L, _ in body.arms) == {
        "AI": frozenset(), "RI": frozenset(), "CO": frozenset({"SI"})}


def test_parse_shopping_cart_reprints(shop_d):
    p = shop_d.process
    assert isinstance(p, Par)
    assert parse_process(show_process(p)) == p
    assert free_names(p) == {Chan("k", Plus), Chan("o", Plus), Chan("o", Minus)}
    assert {"AI", "RI", "CO", "DI", "SI", "read", "write", "quit"} <= labels_of(p)


def test_parse_branch_and_loop():
    p = parse_process("loop X (i < 3) { k+<<a. X(k+) } then { k+>>{x: 0, y: 0} }")
    assert isinstance(p, PRec)
    assert p.body == Sel(K, "a", PVar("X", (K,)))
    assert isinstance(p.after, Bra) and [l for l, _ in p.after.arms] == ["x", "y"]


def test_parse_precedence():
    p = parse_process("k+<<a.0 | k-<<b.0 | h-!(1).0")
    assert p == Par(Par(Sel(K, "a", INACT), Sel(KM, "b", INACT)), Send(H, IntLit(1), INACT))
    e = parse_expr("1 + 2 * 3 < 4 && true")
    assert e == Binary("&&", Binary("<", Binary("+", IntLit(1), Binary("*", IntLit(2), IntLit(3))),
                                    IntLit(4)), BoolLit(True))


def test_parse_comments_and_invariant():
    p = parse_process("# a comment\nrec X invariant {b, a}. k+<<a. X(k+)  # tail")
    assert p.invariant == frozenset({"a", "b"})


@pytest.mark.parametrize("src", [
    "k+<<", "k<<a.0", "rec X.", "k+>>{a: 0, a: 0}", "if 1 then 0", "0 |", "k+!(1.0",
])
def test_parse_errors(src):
    with pytest.raises(ParseError):
        parse_process(src)


@pytest.mark.parametrize("src", ["mu t.t", "mu t.s", "+{a.end, a.end}", "&{a[b.end}"])
def test_type_parse_errors(src):
    with pytest.raises(ParseError):
        parse_type(src)


def test_parse_env_separators():
    env = parse_env("k+ : !.end; k- : ?.end, h+ : end")
    assert env == {K: Out(END), KM: In(END), Chan("h", Plus): END}
    with pytest.raises(ParseError):
        parse_env("k+ : end\nk+ : end")


def test_parse_values():
    assert parse_value("-3") == IntV(-3)
    assert parse_values("0, true, 'item(1)")[0] == IntV(0)
    with pytest.raises(ParseError):
        parse_values("")


# -------------------------------------------------------------- round trip

PROCESSES = [
    "0",
    "k+!(1).0",
    "k+?(x).k+!(x + 1).0",
    "k+<<a.0",
    "k+>>{a: 0, b: k+!(2).0}",
    "k+<<a.0 | k-<<b.0",
    "rec X.k+<<a.X(k+)",
    "rec X invariant {a}.k+<<a.X(k+)",
    "loop X (i < 2) { k+<<a.X(k+) } then { 0 }",
    "if x = 0 then k+<<a.0 else k+<<b.0",
    "if not (x < 1) || false then 0 else 0",
    "k+!(f(1, g(x), 'sym)).0",
    "k+!(-x).0",
    "k+!('item('a, 3)).0",
    "k+!(1 - (2 - 3)).0",
    "(k+<<a.0 | h-<<b.0) | c+<<d.0",
    "k+<<a.(h+<<b.0 | c+<<d.0)",
    "rec X.k+>>{a: X(k+), b: rec Y.h-?(z).Y(h-)}",
    "loop X (i < n(y)) { k+<<DI.o-<<read.o-?(y).X(k+, o-) } then { k+<<SI.0 }",
    "k+!(true && (false || x <= 2)).0",
    "k+!(a >= b).0 | k-?(v).if v > 0 then 0 else 0",
]

TYPES = [
    "end", "!.end", "?.?.end", "+{a.end}", "&{a[b].end, b.!.end}",
    "mu t.+{a[b].t, b[a].t}", "mu t.&{AI.?.t, RI.?.t, CO[SI].?.mu u.+{DI.!.u, SI.!.end}}",
    "mu t.?.mu s.&{read.!.s, write.t, quit.end}", "mu t.!.mu s.+{read.?.s, write[read].t, quit.end}",
    "+{a[a, b, c].mu t.!.t}", "mu t.&{x.mu s.+{y.t, z.s}}",
]


@pytest.mark.parametrize("src", PROCESSES)
def test_process_round_trip(src):
    p = parse_process(src)
    assert parse_process(show_process(p)) == p


@pytest.mark.parametrize("src", TYPES)
def test_type_round_trip(src):
    t = parse_type(src)
    assert parse_type(show_type(t)) == t


def test_corpus_round_trip():
    for e in load_corpus():
        p = e.process
        assert parse_process(show_process(p)) == p, e.name
        if e.env is not None:
            assert parse_env("\n".join(f"{k} : {show_type(t)}" for k, t in e.env.items())) == e.env
    for path in CORPUS_DIR.glob("*.sty"):
        t = parse_type(path.read_text())
        assert parse_type(show_type(t)) == t


def test_branch_arm_order_is_irrelevant():
    assert parse_process("k+>>{a: 0, b: 0}") == parse_process("k+>>{b: 0, a: 0}")
    assert parse_type("&{a.end, b.!.end}") == parse_type("&{b.!.end, a.end}")
    assert parse_type("&{a.end}") != parse_type("+{a.end}")


gen_pairs = st.integers(0, 10 ** 6).map(lambda s: gen_typed(GenConfig(seed=s)))


@settings(max_examples=60, deadline=None)
@given(gen_pairs)
def test_generated_round_trip(pair):
    p, env = pair
    assert parse_process(show_process(p)) == p
    for t in env.values():
        assert parse_type(show_type(t)) == t


# ------------------------------------------------------------- operations


def test_free_names():
    assert free_names(INACT) == frozenset()
    assert free_names(PVar("X", (K, H))) == {K, H}
    assert free_names(Send(K, IntLit(5), Recv(H, "x", INACT))) == {K, H}


def test_subst_value():
    x = "x"
    assert subst_value(Send(K, Var(x), INACT), IntV(5), x) == Send(K, IntLit(5), INACT)
    shadow = Recv(K, x, Send(K, Var(x), INACT))
    assert subst_value(shadow, IntV(7), x) == shadow
    p = If(Binary("=", Var(x), IntLit(0)), INACT, PVar("X", (K,)))
    assert subst_value(p, IntV(0), x) == If(Binary("=", IntLit(0), IntLit(0)), INACT, PVar("X", (K,)))


def test_subst_value_loop_index_shadows():
    p = PRec("X", "i", Var("i"), Send(K, Var("i"), PVar("X", (K,))), Send(K, Var("i"), INACT))
    q = subst_value(p, IntV(4), "i")
    assert q.bound == IntLit(4)
    assert q.body == p.body
    assert q.after == Send(K, IntLit(4), INACT)


def test_subst_pvar():
    q = Sel(K, "a", INACT)
    assert subst_pvar(PVar("X", (K,)), q, "X") == q
    assert subst_pvar(PVar("Y", (K,)), q, "X") == PVar("Y", (K,))
    r = Rec("X", PVar("X", (K,)))
    assert subst_pvar(r, q, "X") == r


@settings(max_examples=60, deadline=None)
@given(gen_pairs, st.sampled_from([IntV(0), IntV(3)]))
def test_subst_value_keeps_free_names(pair, v):
    p, _ = pair
    for x in free_data_vars(p) | {"x1", "nope"}:
        q = subst_value(p, v, x)
        assert free_names(q) == free_names(p)
        assert x not in free_data_vars(q)


def test_conventions():
    body = Sel(K, "a", PVar("X", (K,)))
    assert check_conventions(PRec("X", "i", IntLit(3), body, INACT)) == []
    bad = PRec("X", "i", IntLit(3), Par(INACT, INACT), INACT)
    assert [v.kind for v in check_conventions(bad)] == [ViolationKind.ParInBody, ViolationKind.InactInBody]
    nested = PRec("X", "i", IntLit(3), Rec("Y", PVar("Y", (K,))), INACT)
    assert [v.kind for v in check_conventions(nested)] == [ViolationKind.NestedRec]
    foreign = PRec("X", "i", IntLit(3), Sel(K, "a", PVar("Z", (K,))), INACT)
    assert [v.kind for v in check_conventions(foreign)] == [ViolationKind.ForeignPVar]


def test_unfold():
    assert unfold(END) == END
    t = Mu("t", Out(TVar("t")))
    assert unfold(t) == Out(t)
    with pytest.raises(NonContractive):
        unfold(Mu("t", TVar("t")))


def test_unfold_t_p(t_p):
    u = unfold(t_p)
    assert isinstance(u, Branch) and not isinstance(u, Select)
    assert sorted(l for l, _, _ in u.arms) == ["AI", "CO", "RI"]


@settings(max_examples=80, deadline=None)
@given(gen_pairs)
def test_unfold_idempotent(pair):
    for t in pair[1].values():
        u = unfold(t)
        assert unfold(u) == u
        assert not isinstance(u, (Mu, TVar))


def test_chan_helpers():
    assert chan("k+") == K and K.dual() == KM and K.is_co(KM) and not K.is_co(K)
    assert show_expr(Apply("f", (Var("x"), IntLit(1)))) == "f(x, 1)"
