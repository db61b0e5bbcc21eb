"""Command-line interface.

Exit codes: 0 pass, 1 fail, 2 unreadable or malformed input, 3 internal
error (including an invariant search beyond its bound).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .semantics.evaluation import DEFAULT_VALUES, PRIM_REGISTRY, get_prims
from .semantics.explore import ExploreConfig, explore
from .semantics.transitions import Stepper
from .syntax import (
    ParseError, check_conventions, parse_env, parse_process, parse_type, parse_values,
    show_env, show_process,
)
from .typecheck import check_live, check_std, matching_steps, pending_update
from .typecheck.approx import approx_A
from .typecheck.errors import Unsupported
from .types import is_dual

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None


def _parse(fn, path):
    text = _read(path)
    try:
        return fn(text)
    except ParseError as e:
        raise InputError(f"{path}:{e.line}:{e.col}: {e.msg}") from None


def _load_process(path):
    p = _parse(parse_process, path)
    bad = check_conventions(p)
    if bad:
        raise InputError(f"{path}: loop body conventions violated: "
                         + ", ".join(v.kind.name for v in bad))
    return p


def _labels(ls) -> str:
    return "{" + ", ".join(sorted(ls)) + "}"


def _pending(text):
    if not text:
        return frozenset()
    return frozenset(s.strip() for s in text.split(",") if s.strip())


def err(msg):
    print(msg, file=sys.stderr)


# ------------------------------------------------------------ commands


def cmd_check(args):
    p = _load_process(args.proc)
    env = _parse(parse_env, args.env)
    r = check_std({}, p, env)
    if args.json:
        print(json.dumps(r.to_json(), indent=2))
    if r.ok:
        if not args.json:
            print("well-typed")
        return EXIT_OK
    if not args.json:
        print("ill-typed")
    err(str(r.failure))
    return EXIT_FAIL


def cmd_check_live(args):
    p = _load_process(args.proc)
    env = _parse(parse_env, args.env)
    r = check_live({}, _pending(args.pending), p, env)
    if args.json:
        print(json.dumps(r.to_json(), indent=2))
    elif r.ok:
        print("live-typable")
        for path, inv in sorted(r.invariants.items()):
            print("  invariant at /" + "/".join(path) + ": " + _labels(inv))
    else:
        print("not live-typable")
    if r.ok:
        return EXIT_OK
    err(str(r.failure))
    if r.failure.pending_left:
        err("undischarged responses: " + _labels(r.failure.pending_left))
    return EXIT_FAIL


def cmd_dual(args):
    t = _parse(parse_type, args.left)
    s = _parse(parse_type, args.right)
    ok = is_dual(t, s)
    print("dual" if ok else "not dual")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_approx(args):
    p = _load_process(args.proc)
    print(_labels(approx_A(p)))
    return EXIT_OK


def _config(args, env=None):
    values = parse_values(args.values) if args.values else DEFAULT_VALUES
    return ExploreConfig(max_depth=args.depth, values=values, detect_lassos=args.lassos,
                         prims=get_prims(args.prims), env=env, pending=_pending(args.pending))


def cmd_traces(args):
    p = _load_process(args.proc)
    env = _parse(parse_env, args.env) if args.env else None
    try:
        cfg = _config(args, env)
    except ParseError as e:
        raise InputError(f"--values: {e.msg}") from None
    res = explore(p, cfg)
    print(json.dumps(res.to_json(), indent=2))
    if res.budget_exhausted:
        err("state budget exhausted; some traces are incomplete")
    return EXIT_OK


def cmd_simulate(args):
    p = _load_process(args.proc)
    env = _parse(parse_env, args.env) if args.env else None
    try:
        values = parse_values(args.values) if args.values else DEFAULT_VALUES
    except ParseError as e:
        raise InputError(f"--values: {e.msg}") from None
    picks = []
    for item in args.pick or []:
        try:
            picks.extend(int(s) for s in str(item).split(",") if s.strip())
        except ValueError:
            raise InputError(f"--pick expects integers, got {item!r}") from None
    stepper = Stepper(get_prims(args.prims))
    L = _pending(args.pending)
    state = p
    for n, choice in enumerate(picks + [None]):
        print(f"[{n}] {show_process(state)}")
        if env is not None:
            print("    env: " + show_env(env).strip().replace("\n", "; "))
            print("    pending: " + _labels(L))
        moves = stepper.step(state, values)
        for i, (lab, q, _) in enumerate(moves):
            print(f"    {i}: {lab.show()}")
        if not moves:
            print("    (no transitions)")
            return EXIT_OK
        if choice is None:
            return EXIT_OK
        if not 0 <= choice < len(moves):
            raise InputError(f"pick {choice} out of range at step {n} ({len(moves)} transitions)")
        lab, state, m = moves[choice]
        print(f"  -> {lab.show()}")
        if env is not None:
            cands = matching_steps(env, lab, m.chans)
            if not cands:
                err(f"no environment transition matches {lab.show()}")
                return EXIT_FAIL
            d = cands[0]
            print(f"     typed by {d.label.show()}")
            L = pending_update(L, d.label)
            env = d.env
    return EXIT_OK


def cmd_suite(args):
    from .harness import suites
    runners = {
        "sr": lambda: suites.run_subject_reduction(args.count, seed=args.seed),
        "sr-mutated": lambda: suites.run_subject_reduction(
            0, seed=args.seed, mutate=True, pairs=suites.corpus_sr_pairs()),
        "liveness": lambda: suites.run_liveness_suite(
            generated=max(args.count // 5, 1), seed=args.seed, corpus_depths=suites.CORPUS_DEPTHS),
        "discharge": lambda: suites.run_discharge(args.count, seed=args.seed),
        "conjecture": lambda: suites.run_conjecture_probe(max(args.count // 5, 1), seed=args.seed),
        "occurrences": lambda: suites.run_occurrence_properties(generated=max(args.count // 5, 1),
                                                            seed=args.seed),
        "decomposition": lambda: suites.run_decomposition(max(args.count // 5, 1), seed=args.seed),
        "typing": lambda: suites.run_typing_properties(max(args.count // 3, 1), seed=args.seed),
    }
    names = args.only or list(runners)
    unknown = [n for n in names if n not in runners]
    if unknown:
        raise InputError("unknown suite(s): " + ", ".join(unknown)
                         + "; choose from " + ", ".join(runners))
    reports = {}
    ok = True
    for name in names:
        r = runners[name]()
        # The mutated run is a self-test: it passes when violations are found.
        passed = (not r.ok) if name == "sr-mutated" else r.ok
        ok = ok and passed
        reports[name] = r
        if not args.json:
            print(("PASS " if passed else "FAIL ") + r.to_text())
    if args.json:
        print(json.dumps({n: r.to_json() for n, r in reports.items()}, indent=2))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="livesession",
                                 description="Session types with responses: checking and exploration.")
    sub = ap.add_subparsers(dest="command", required=True)

    def prims(p):
        p.add_argument("--prims", default="default", choices=sorted(PRIM_REGISTRY),
                       help="primitive function table")

    p = sub.add_parser("check", help="standard session typing")
    p.add_argument("proc")
    p.add_argument("env")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("check-live", help="liveness typing")
    p.add_argument("proc")
    p.add_argument("env")
    p.add_argument("--pending", default="", help="comma-separated responses owed initially")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_check_live)

    p = sub.add_parser("dual", help="duality of two session types")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(fn=cmd_dual)

    p = sub.add_parser("approx", help="print the response approximation of a process")
    p.add_argument("proc")
    p.set_defaults(fn=cmd_approx)

    p = sub.add_parser("traces", help="explore transition sequences, print JSON")
    p.add_argument("proc")
    p.add_argument("--env", help="session environment for typed pairing and liveness")
    p.add_argument("--pending", default="")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--values", help="value domain for open inputs, e.g. 0,1,true")
    p.add_argument("--lassos", action=argparse.BooleanOptionalAction, default=True)
    prims(p)
    p.set_defaults(fn=cmd_traces)

    p = sub.add_parser("simulate", help="step a process by scripted choices")
    p.add_argument("proc")
    p.add_argument("--env")
    p.add_argument("--pending", default="")
    p.add_argument("--pick", action="append", help="transition index per step (repeatable or comma list)")
    p.add_argument("--values")
    prims(p)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("suite", help="run the property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--only", action="append", help="run only the named suite (repeatable)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return args.fn(args)
    except InputError as e:
        err(f"error: {e}")
        return EXIT_INPUT
    except Unsupported as e:
        err(f"unsupported: {e}")
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        err(f"internal error: {type(e).__name__}: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
