"""Random generation of well-typed processes.

Generation is type-directed.  A balanced environment of session types is
sampled first; the process then walks those types.  A ``rec`` is placed
wherever the walk crosses a ``mu`` and the matching type variable becomes a
recursive call, so the standard typing holds by construction.  While a
channel sits inside such a loop the walk stays on that channel, which keeps
the other entries equal to the ones bound at the recursion.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Tuple

from ..syntax.ops import type_free_vars
from ..syntax.terms import (
    END, Binary, BoolLit, Bra, Branch, Chan, End, If, In, INACT, IntLit, Minus,
    Mu, Out, Par, Plus, PRec, PVar, Rec, Recv, Select, Send, Sel, TVar, Var,
)
from ..types import syntactic_dual

SESSION_NAMES = ("k", "h", "c", "o")


@dataclass(frozen=True)
class GenConfig:
    max_depth: int = 4
    max_sessions: int = 2
    labels: Tuple[str, ...] = ("a", "b", "c", "d")
    rec_probability: float = 0.4
    seed: int = 0
    resp_probability: float = 0.3
    open_probability: float = 0.3   # chance that a session has one endpoint only
    par_probability: float = 0.3
    if_probability: float = 0.1
    loop_probability: float = 0.3   # bounded loop instead of rec at a mu
    force_rec: bool = False         # root is a general recursion


class _Gen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.n = 0

    def fresh(self, base):
        self.n += 1
        return f"{base}{self.n}"

    # ------------------------------------------------------------- types

    def gen_type(self, depth, tvars=(), guarded=True, force_mu=False):
        r = self.rng
        cfg = self.cfg
        if force_mu or (depth > 0 and r.random() < cfg.rec_probability and guarded):
            t = self.fresh("t")
            return Mu(t, self.gen_type(max(depth, 1), tvars + (t,), guarded=False))
        if guarded and tvars and r.random() < 0.3:
            return TVar(r.choice(tvars))
        if depth <= 0:
            if tvars and guarded:
                return TVar(r.choice(tvars))
            return END
        c = r.random()
        if c < 0.15 and guarded:
            return END
        if c < 0.35:
            return Out(self.gen_type(depth - 1, tvars))
        if c < 0.55:
            return In(self.gen_type(depth - 1, tvars))
        labels = r.sample(cfg.labels, r.randint(1, min(3, len(cfg.labels))))
        arms = tuple((l, self.gen_resp(), self.gen_type(depth - 1, tvars)) for l in labels)
        return Select(arms) if c < 0.8 else Branch(arms)

    def gen_resp(self):
        if self.rng.random() >= self.cfg.resp_probability:
            return frozenset()
        return frozenset(self.rng.sample(self.cfg.labels, self.rng.randint(1, 2)))

    def perturb(self, t):
        """The same type with some response sets replaced."""
        if isinstance(t, (Select, Branch)):
            arms = tuple((l, self.gen_resp() if self.rng.random() < 0.3 else L, self.perturb(s))
                         for l, L, s in t.arms)
            return type(t)(arms)
        if isinstance(t, (Out, In)):
            return type(t)(self.perturb(t.cont))
        if isinstance(t, Mu):
            return Mu(t.var, self.perturb(t.body))
        return t

    # ---------------------------------------------------------- processes

    def expr(self, dvars):
        r = self.rng.random()
        if dvars and r < 0.4:
            return Var(self.rng.choice(dvars))
        if r < 0.8:
            return IntLit(self.rng.randint(0, 2))
        return BoolLit(self.rng.random() < 0.5)

    def cond(self, dvars):
        if dvars and self.rng.random() < 0.7:
            op = self.rng.choice(("=", "<"))
            return Binary(op, Var(self.rng.choice(dvars)), IntLit(self.rng.randint(0, 2)))
        return BoolLit(self.rng.random() < 0.5)

    def proc(self, env, calls, active, depth, dvars, root=False):
        """``env``: chan -> open type; ``calls``: chan -> {tvar: pvar}."""
        cfg, r = self.cfg, self.rng
        live = [k for k in sorted(env) if not isinstance(env[k], End)]
        if not live:
            return INACT
        if active is None and depth > 0 and not root:
            if len(live) >= 2 and r.random() < cfg.par_probability:
                return self.split(env, calls, depth, dvars)
            if r.random() < cfg.if_probability:
                return If(self.cond(dvars), self.proc(env, calls, None, depth - 1, dvars),
                          self.proc(env, calls, None, depth - 1, dvars))
        k = active if active is not None else (live[0] if root else r.choice(live))
        t = env[k]
        if isinstance(t, Mu):
            if not root and depth > 0 and r.random() < cfg.loop_probability:
                p = self.loop(env, calls, active, k, t, depth, dvars)
                if p is not None:
                    return p
            x = self.fresh("X")
            calls2 = {**calls, k: {**calls.get(k, {}), t.var: x}}
            return Rec(x, self.proc({**env, k: t.body}, calls2, k, depth, dvars))
        if isinstance(t, TVar):
            return PVar(calls[k][t.name], tuple(sorted(env)))
        nxt = depth - 1

        def cont(s, dv=dvars):
            still = k if type_free_vars(s) else None
            return self.proc({**env, k: s}, calls, still, nxt, dv)

        if isinstance(t, Out):
            return Send(k, self.expr(dvars), cont(t.cont))
        if isinstance(t, In):
            x = self.fresh("x")
            return Recv(k, x, cont(t.cont, dvars + (x,)))
        if isinstance(t, Select):
            if depth > 0:
                l, _, s = r.choice(t.arms)
            else:
                l, _, s = min(t.arms, key=lambda a: _cost(a[2]))
            return Sel(k, l, cont(s))
        if isinstance(t, Branch):
            return Bra(k, tuple((l, cont(s)) for l, _, s in t.arms))
        raise AssertionError(t)

    def split(self, env, calls, depth, dvars):
        keys = sorted(env)
        live = [k for k in keys if not isinstance(env[k], End)]
        self.rng.shuffle(live)
        cut = self.rng.randint(1, len(live) - 1)
        left = set(live[:cut])
        for k in keys:
            if isinstance(env[k], End) and self.rng.random() < 0.5:
                left.add(k)
        e1 = {k: env[k] for k in keys if k in left}
        e2 = {k: env[k] for k in keys if k not in left}
        return Par(self.proc(e1, calls, None, depth - 1, dvars),
                   self.proc(e2, calls, None, depth - 1, dvars))

    def loop(self, env, calls, active, k, t, depth, dvars):
        x = self.fresh("X")
        i = self.fresh("i")
        chans = tuple(sorted(env))
        body = self._loop_body(t.body, t.var, k, x, chans, dvars + (i,), 6)
        if body is None:
            return None
        bound = Var(self.rng.choice(dvars)) if dvars and self.rng.random() < 0.3 \
            else IntLit(self.rng.randint(0, 3))
        after = self.proc(env, calls, active, depth - 1, dvars)
        return PRec(x, i, bound, body, after)

    def _loop_body(self, s, tv, k, x, chans, dvars, fuel):
        if isinstance(s, TVar):
            return PVar(x, chans) if s.name == tv else None
        if fuel <= 0 or isinstance(s, (End, Mu)):
            return None
        if isinstance(s, Out):
            c = self._loop_body(s.cont, tv, k, x, chans, dvars, fuel - 1)
            return None if c is None else Send(k, self.expr(dvars), c)
        if isinstance(s, In):
            y = self.fresh("x")
            c = self._loop_body(s.cont, tv, k, x, chans, dvars + (y,), fuel - 1)
            return None if c is None else Recv(k, y, c)
        if isinstance(s, Select):
            arms = list(s.arms)
            self.rng.shuffle(arms)
            for l, _, u in arms:
                c = self._loop_body(u, tv, k, x, chans, dvars, fuel - 1)
                if c is not None:
                    return Sel(k, l, c)
            return None
        arms = []
        for l, _, u in s.arms:
            c = self._loop_body(u, tv, k, x, chans, dvars, fuel - 1)
            if c is None:
                return None
            arms.append((l, c))
        return Bra(k, tuple(arms))


def _cost(t) -> int:
    if isinstance(t, (End, TVar)):
        return 0
    if isinstance(t, (Out, In)):
        return 1 + _cost(t.cont)
    if isinstance(t, Mu):
        return _cost(t.body)
    if isinstance(t, Select):
        return 1 + min(_cost(s) for _, _, s in t.arms)
    return 1 + sum(_cost(s) for _, _, s in t.arms)


def gen_typed(cfg: GenConfig = GenConfig(), rng: Optional[random.Random] = None):
    """A pair ``(P, env)`` with ``P`` standard-typable under the balanced ``env``.

    Without ``rng`` the output is a function of ``cfg.seed`` alone.
    """
    rng = rng or random.Random(cfg.seed)
    g = _Gen(cfg, rng)
    n = rng.randint(1, max(cfg.max_sessions, 1))
    env = {}
    for name in SESSION_NAMES[:n]:
        first = cfg.force_rec and not env
        t = g.gen_type(cfg.max_depth, force_mu=first and cfg.max_depth > 0)
        env[Chan(name, Plus)] = t
        if not cfg.force_rec and rng.random() >= cfg.open_probability:
            env[Chan(name, Minus)] = g.perturb(syntactic_dual(t))
    if cfg.force_rec or len(env) < 2 or cfg.max_depth <= 0:
        p = g.proc(env, {}, None, cfg.max_depth, (), root=cfg.force_rec)
    else:
        p = _separate_pairs(g, env, cfg.max_depth)
    return p, env


def _separate_pairs(g: _Gen, env, depth):
    """Root split placing the two endpoints of each session apart."""
    r = g.rng
    if r.random() < 0.2:
        return g.proc(env, {}, None, depth, ())
    left, right = {}, {}
    for k in sorted(env):
        if k.pol is Plus:
            side = r.random() < 0.5
            (left if side else right)[k] = env[k]
            co = k.dual()
            if co in env:
                (right if side else left)[co] = env[co]
    if not left or not right:
        return g.proc(env, {}, None, depth, ())
    return Par(g.proc(left, {}, None, depth, ()), g.proc(right, {}, None, depth, ()))


def gen_many(cfg: GenConfig, count: int):
    """``count`` pairs from one seeded stream."""
    rng = random.Random(cfg.seed)
    return [gen_typed(cfg, rng) for _ in range(count)]
