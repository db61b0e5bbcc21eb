"""Request-response liveness of finite and ultimately periodic sequences.

A label sequence is live when every request of a label is met by a later
response.  For a lasso ``prefix . cycle^omega`` every label of the cycle
occurs infinitely often, so a request in the prefix may be answered in the
rest of the prefix or anywhere in the cycle, while a request in the cycle
must be answered by the cycle itself.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence


def supp(labels: Iterable, res: Callable) -> frozenset:
    out = set()
    for a in labels:
        out |= res(a)
    return frozenset(out)


def is_live(seq: Sequence, req: Callable, res: Callable, pending=frozenset()) -> bool:
    """Finite sequences.  ``pending`` are obligations raised before ``seq``."""
    owed = set(pending)
    for a in seq:
        owed -= res(a)
        owed |= req(a)
    return not owed


def is_live_lasso(prefix: Sequence, cycle: Sequence, req: Callable, res: Callable,
                  pending=frozenset()) -> bool:
    if not cycle:
        return is_live(prefix, req, res, pending)
    in_cycle = supp(cycle, res)
    cycle_req = set()
    for a in cycle:
        cycle_req |= req(a)
    if not cycle_req <= in_cycle:
        return False
    owed = set(pending)
    for a in prefix:
        owed -= res(a)
        owed |= req(a)
    return owed <= in_cycle


def unrolled_check(prefix, cycle, req, res, times=3, pending=frozenset()) -> bool:
    """Position-by-position check of the prefix requests on a finite unrolling.

    Only requests raised before the cycle (and ``pending``) are judged; used
    as an independent cross-check of :func:`is_live_lasso`.
    """
    seq = list(prefix) + list(cycle) * times
    if not set(pending) <= supp(seq, res):
        return False
    for i in range(len(prefix)):
        if not req(seq[i]) <= supp(seq[i + 1:], res):
            return False
    return True


def trace_is_live(trace, req: Callable, res: Callable, pending=frozenset()) -> bool:
    """Liveness of a plain sequence or of anything with a prefix and a cycle.

    Lassos may be given as ``(prefix, cycle)`` pairs, or as objects exposing
    ``prefix``/``cycle`` or ``prefix_labels``/``cycle_labels``.
    """
    if hasattr(trace, "prefix_labels"):
        return is_live_lasso(trace.prefix_labels, trace.cycle_labels, req, res, pending)
    if hasattr(trace, "cycle"):
        return is_live_lasso(trace.prefix, trace.cycle, req, res, pending)
    if isinstance(trace, tuple) and len(trace) == 2 and all(isinstance(x, (list, tuple)) for x in trace):
        return is_live_lasso(trace[0], trace[1], req, res, pending)
    return is_live(trace, req, res, pending)
