"""Session environments and their transitions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, NamedTuple

from ..semantics.labels import BraL, RecvL, SelL, SendL, Tau, TauSel
from ..syntax.ops import unfold
from ..syntax.printer import show_labels, show_type
from ..syntax.terms import End
from ..types import (
    TBra, TIn, TOut, TSel, is_dual, label_req, label_res, type_step,
)

EMPTY = frozenset()


@dataclass(frozen=True)
class DTau:
    def subject(self):
        return None

    def sel(self):
        return EMPTY

    def req(self):
        return EMPTY

    def res(self):
        return EMPTY

    def show(self):
        return "tau"


@dataclass(frozen=True)
class DTauSel:
    label: str
    resp: frozenset = EMPTY

    def subject(self):
        return None

    def sel(self):
        return frozenset([self.label])

    def req(self):
        return self.resp

    def res(self):
        return frozenset([self.label])

    def show(self):
        return f"tau:{self.label}[{show_labels(self.resp)}]"


@dataclass(frozen=True)
class DAt:
    chan: object
    rho: object

    def subject(self):
        return self.chan

    def sel(self):
        return label_res(self.rho)

    def req(self):
        return label_req(self.rho)

    def res(self):
        return label_res(self.rho)

    def show(self):
        return f"{self.chan}:{self.rho.show()}"


D_TAU = DTau()


def env_req(d) -> frozenset:
    return d.req()


def env_res(d) -> frozenset:
    return d.res()


class EnvStep(NamedTuple):
    label: object
    env: dict
    chans: frozenset


def completed(env: dict) -> bool:
    return all(isinstance(unfold(t), End) for t in env.values())


def balanced(env: dict) -> bool:
    for k, t in env.items():
        u = env.get(k.dual())
        if u is not None and not is_dual(t, u):
            return False
    return True


def env_key(env: dict):
    """Hashable identity of an environment up to unfolding of its entries."""
    return frozenset((k, unfold(t)) for k, t in env.items())


def env_step(env: dict):
    """All lifted entry moves plus the communications between co-channels."""
    out = []
    per_chan = {k: type_step(t) for k, t in env.items()}
    for k, moves in per_chan.items():
        for rho, t2 in moves:
            out.append(EnvStep(DAt(k, rho), {**env, k: t2}, frozenset([k])))
    for k, moves in per_chan.items():
        kb = k.dual()
        if kb not in per_chan or str(k) > str(kb):
            continue
        for rho, t2 in moves:
            for sigma, u2 in per_chan[kb]:
                d = _fuse(rho, sigma)
                if d is not None:
                    out.append(EnvStep(d, {**env, k: t2, kb: u2}, frozenset([k, kb])))
    return out


def _fuse(rho, sigma):
    if (isinstance(rho, TOut) and isinstance(sigma, TIn)) or (isinstance(rho, TIn) and isinstance(sigma, TOut)):
        return D_TAU
    if isinstance(rho, TSel) and isinstance(sigma, TBra) and rho.label == sigma.label:
        return DTauSel(rho.label, rho.resp | sigma.resp)
    if isinstance(rho, TBra) and isinstance(sigma, TSel) and rho.label == sigma.label:
        return DTauSel(rho.label, rho.resp | sigma.resp)
    return None


def sim(d, lam) -> bool:
    """The correspondence between environment and process labels."""
    if isinstance(d, DTau):
        return isinstance(lam, Tau)
    if isinstance(d, DTauSel):
        return isinstance(lam, TauSel) and lam.label == d.label
    if isinstance(d, DAt):
        rho = d.rho
        if isinstance(rho, TOut):
            return isinstance(lam, SendL) and lam.chan == d.chan
        if isinstance(rho, TIn):
            return isinstance(lam, RecvL) and lam.chan == d.chan
        if isinstance(rho, TBra):
            return isinstance(lam, BraL) and lam.chan == d.chan and lam.label == rho.label
        if isinstance(rho, TSel):
            return isinstance(lam, SelL) and lam.chan == d.chan and lam.label == rho.label
    return False


def matching_steps(env: dict, lam, chans=None):
    """Environment steps ``d`` with ``d ~ lam``.

    For silent labels ``chans`` (the channels that acted, as recorded on the
    process move) narrows the communication to the right pair of endpoints.
    """
    out = []
    for st in env_step(env):
        if not sim(st.label, lam):
            continue
        if chans is not None and st.label.subject() is None and st.chans != frozenset(chans):
            continue
        out.append(st)
    return out


def show_env_label(d) -> str:
    return d.show()


def env_to_json(env: dict) -> Dict[str, str]:
    return {str(k): show_type(t) for k, t in sorted(env.items(), key=lambda kv: str(kv[0]))}


def pending_update(L: frozenset, d) -> frozenset:
    """``(L \\ res(d)) | req(d)``."""
    return (frozenset(L) - d.res()) | d.req()
