"""Command-line front end.

Exit codes: 0 success, 1 infeasible or a failed check, 2 bad input,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from .diophantine import DEFAULT_DIO_BUDGET, DioInstance, dio_enumerate, dio_lemma_failures
from .generate import random_bip, random_bkp
from .instance_io import InstanceFormatError, exact, instance_to_dict, load_instance
from .model import BipInstance, BkpInstance, BudgetExceeded, validate_instance, verify_bip, verify_bkp
from .oracle import DEFAULT_BOX_BUDGET, oracle_count, oracle_optimize, oracle_solve
from .pipeline import (
    RunStats,
    count_bip,
    count_bkp_via_sap,
    ensure_not_double_b,
    lattice_source,
    optimize_bip,
    solve_bip,
    solve_bkp_via_sap,
)
from .preprocess import Verdict, aggregate, positivize
from .reduction import reduce_bkp
from .sap import DEFAULT_NODE_BUDGET, Norm

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(args, doc: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(exact(doc), sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def _fmt(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


def _stats_doc(stats: RunStats) -> dict:
    return {
        "nodes_visited": stats.nodes_visited,
        "branches": stats.branches,
        "probes": stats.probes,
        "params": [
            {"s0": p.s0, "s1": p.s1, "lambda": p.lam, "gamma": p.gamma, "delta": p.delta, "p": p.p}
            for p in stats.params
        ],
    }


def _load(path: str):
    inst, c = load_instance(path)
    problems = validate_instance(inst)
    if problems:
        raise InputError(f"{path}: " + "; ".join(problems))
    return inst, c


def _parse_objective(text: Optional[str], fallback, n: int) -> list[int]:
    if text is None:
        if fallback is None:
            raise InputError("no objective: pass --objective or add a 'c' field")
        c = fallback
    elif text.endswith(".json"):
        try:
            with open(text, encoding="utf-8") as fh:
                doc = json.load(fh)
            c = [int(v) for v in doc["c"]]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read an objective 'c' from {text}: {exc}") from exc
    else:
        try:
            c = [int(v) for v in text.strip("[]").split(",") if v.strip()]
        except ValueError as exc:
            raise InputError(f"bad objective {text!r}: {exc}") from exc
    if len(c) != n:
        raise InputError(f"objective has length {len(c)}, expected {n}")
    return c


# -- subcommands ---------------------------------------------------------------

def cmd_solve(args) -> int:
    inst, _ = _load(args.file)
    stats = RunStats()
    if isinstance(inst, BkpInstance):
        x = solve_bkp_via_sap(inst, args.norm, args.safety, args.node_budget, stats)
        verified = x is not None and verify_bkp(inst, x)
    else:
        x = solve_bip(inst, args.norm, args.safety, args.node_budget, stats)
        verified = x is not None and verify_bip(inst, x)
    status = "feasible" if x is not None else "infeasible"
    doc = {"status": status, "x": x, "verified": verified, "stats": _stats_doc(stats)}
    lines = [f"status: {status}"]
    if x is not None:
        lines += [f"x: {_fmt(x)}", f"verified: {str(verified).lower()}"]
    lines.append(f"nodes visited: {stats.nodes_visited}")
    _emit(args, doc, lines)
    if x is not None and not verified:
        return EXIT_FALSE
    return EXIT_OK if x is not None else EXIT_FALSE


def cmd_count(args) -> int:
    inst, _ = _load(args.file)
    stats = RunStats()
    if isinstance(inst, BkpInstance):
        count = count_bkp_via_sap(inst, args.safety, args.node_budget, stats)
    else:
        count = count_bip(inst, args.safety, args.node_budget, stats)
    doc = {"status": "ok", "count": count, "stats": _stats_doc(stats)}
    _emit(args, doc, [f"count: {count}", f"nodes visited: {stats.nodes_visited}"])
    return EXIT_OK


def cmd_optimize(args) -> int:
    inst, c0 = _load(args.file)
    bip = inst.as_bip() if isinstance(inst, BkpInstance) else inst
    c = _parse_objective(args.objective, c0, bip.n)
    stats = RunStats()
    res = optimize_bip(bip, c, args.norm, args.safety, args.node_budget, stats)
    if res is None:
        _emit(args, {"status": "infeasible", "stats": _stats_doc(stats)}, ["status: infeasible"])
        return EXIT_FALSE
    x, value = res
    doc = {"status": "optimal", "x": x, "value": value, "verified": verify_bip(bip, x), "stats": _stats_doc(stats)}
    _emit(args, doc, ["status: optimal", f"x: {_fmt(x)}", f"value: {value}", f"probes: {stats.probes}"])
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst, _ = _load(args.file)
    if isinstance(inst, BipInstance):
        single, _ = aggregate(inst)
        kn, _ = positivize(single.A[0], single.b[0], single.u)
        if isinstance(kn, Verdict):
            _emit(args, {"status": kn.value}, [f"no lattice needed: {kn.value}"])
            return EXIT_FALSE
        inst = kn
    source = lattice_source(inst)
    if source is None:
        _emit(args, {"status": "all variables fixed"}, ["no lattice needed: every variable is fixed"])
        return EXIT_FALSE
    bkp, _ = ensure_not_double_b(source)
    art = reduce_bkp(bkp, args.safety)
    prm = art.params
    params = {
        "s0": prm.s0, "s1": prm.s1, "lambda": prm.lam, "gamma": prm.gamma, "delta": prm.delta,
        "delta_i": list(prm.delta_i), "C": list(prm.C), "u_max": prm.u_max, "p": prm.p,
    }
    doc = {
        "status": "ok",
        "instance": instance_to_dict(bkp),
        "params": params,
        "basis": [list(row) for row in art.basis],
        "subspace_functional": list(art.subspace_functional),
    }
    lines = [f"knapsack: a={_fmt(bkp.a)} b={bkp.b} u={_fmt(bkp.u)}"]
    lines += [f"{k}: {_fmt(v) if isinstance(v, list) else v}" for k, v in params.items()]
    lines.append(f"basis ({art.dim} x {art.dim}):")
    lines += ["  " + _fmt(row) for row in art.basis]
    lines.append(f"subspace functional: {_fmt(art.subspace_functional)}")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst, c0 = _load(args.file)
    bip = inst.as_bip() if isinstance(inst, BkpInstance) else inst
    if args.count:
        count = oracle_count(bip, args.box_budget)
        _emit(args, {"status": "ok", "count": count}, [f"count: {count}"])
        return EXIT_OK
    if args.optimize:
        c = _parse_objective(args.objective, c0, bip.n)
        res = oracle_optimize(bip, c, args.box_budget)
        if res is None:
            _emit(args, {"status": "infeasible"}, ["status: infeasible"])
            return EXIT_FALSE
        doc = {"status": "optimal", "x": res[0], "value": res[1]}
        _emit(args, doc, ["status: optimal", f"x: {_fmt(res[0])}", f"value: {res[1]}"])
        return EXIT_OK
    x = oracle_solve(bip, args.box_budget)
    status = "feasible" if x is not None else "infeasible"
    _emit(args, {"status": status, "x": x}, [f"status: {status}"] + ([f"x: {_fmt(x)}"] if x else []))
    return EXIT_OK if x is not None else EXIT_FALSE


def cmd_diophantine(args) -> int:
    try:
        inst = DioInstance(args.lam, args.n, args.t)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.box < 1:
        raise InputError("--box must be a positive integer")
    sols = dio_enumerate(inst, args.box, args.node_budget)
    failures = dio_lemma_failures(inst, args.box, args.node_budget)
    holds = not failures
    doc = {
        "status": "holds" if holds else "fails",
        "gamma": inst.gamma,
        "bound": abs(inst.lam) - abs(inst.t),
        "solutions": sols,
        "failures": [{"x": x, "reason": why} for x, why in failures],
    }
    lines = [f"gamma: {inst.gamma}", f"solutions in box: {len(sols)}"]
    lines += ["  " + _fmt(x) for x in sols]
    lines.append(f"lemma holds: {str(holds).lower()}")
    lines += [f"  failure {_fmt(x)}: {why}" for x, why in failures]
    _emit(args, doc, lines)
    return EXIT_OK if holds else EXIT_FALSE


def cmd_gen(args) -> int:
    for name in ("n", "umax", "amax"):
        if getattr(args, name) < 1:
            raise InputError(f"--{name} must be positive")
    rng = random.Random(args.seed)
    if args.m:
        inst = random_bip(rng, args.m, args.n, args.umax, args.amax, args.feasible)
    else:
        inst = random_bkp(rng, args.n, args.umax, args.amax, args.feasible)
    print(json.dumps(instance_to_dict(inst), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(None if args.json else print)
    if args.json:
        doc = {
            "status": "pass" if all(r.passed for r in results) else "fail",
            "criteria": [
                {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--norm", choices=[n.value for n in Norm], default="linf")
    common.add_argument("--safety", type=int, default=1, metavar="K", help="lambda safety factor")
    common.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    common.add_argument("--box-budget", type=int, default=DEFAULT_BOX_BUDGET)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="bipsap", description="Bounded integer programs through lattice enumeration.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="find a solution")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", parents=[common], help="count solutions")
    p.add_argument("file")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("optimize", parents=[common], help="minimize c . x")
    p.add_argument("file")
    p.add_argument("--objective", help="file with a 'c' field, or inline '1,-2,3'")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("reduce", parents=[common], help="print the lattice basis and parameters")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference answers")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--optimize", action="store_true")
    p.add_argument("--objective")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("diophantine", parents=[common], help="check the large-component bound")
    p.add_argument("--lambda", dest="lam", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--box", type=int, required=True)
    p.set_defaults(func=cmd_diophantine, node_budget=DEFAULT_DIO_BUDGET)

    p = sub.add_parser("gen", parents=[common], help="generate a seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--umax", type=int, required=True)
    p.add_argument("--amax", type=int, required=True)
    p.add_argument("--m", type=int, default=0, help="rows; 0 gives a knapsack")
    p.add_argument("--feasible", action="store_true", help="plant a solution")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "safety", 1) < 1:
        print("error: --safety must be a positive integer", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, InstanceFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
