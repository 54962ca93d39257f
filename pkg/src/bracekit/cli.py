"""Command-line interface: build, check, solution, verify, filter.

Exit codes: 0 verified true, 1 verified false, 2 inapplicable or cap exceeded,
3 input error.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .brace import (DEFAULT_CAP, DEFAULT_SAMPLES, DEFAULT_SEED, LeftBrace, is_simple, socle,
                    tabulate, verify_brace_axioms)
from .cycle import order_filters, simplicity_criterion
from .errors import BraceError, CapExceeded, SpecError
from .io import (FORMAT, brace_from_json, cycle_from_json, dumps, read_json, report_envelope,
                 sha256_file, solution_from_json, solution_to_json, table_to_json, write_json)
from .matched import decompose_and_rebuild, graph_verdict
from .ybe import (YBE_BUDGET, canonical_solution, permutation_group, verify_involutive,
                  verify_nondegenerate, verify_ybe)

EXIT_TRUE, EXIT_FALSE, EXIT_INAPPLICABLE, EXIT_INPUT = 0, 1, 2, 3


def _emit(report: dict, out: str | None):
    if out:
        Path(out).write_text(dumps(report))
    else:
        sys.stdout.write(dumps(report))


def _envelope(args, command: str, inputs: dict, result: dict) -> dict:
    return report_envelope(command, inputs, args.cap, args.seed, args.samples, result)


def _load_brace(path: str) -> tuple[dict, LeftBrace]:
    obj = read_json(path)
    return obj, brace_from_json(obj, Path(path).parent)


def cmd_build(args) -> int:
    obj, B = _load_brace(args.spec)
    inputs = {"spec": sha256_file(args.spec)}
    if B.order <= args.cap:
        T = tabulate(B, args.cap)
        rep = verify_brace_axioms(T, args.cap)
        if not rep.ok:
            _emit(_envelope(args, "build", inputs, {"order": B.order, "axioms": rep.to_dict()}), None)
            return EXIT_FALSE
        T.provenance = B.provenance
        write_json(args.output, table_to_json(T))
        result = {"order": B.order, "kind": "table", "axioms": rep.to_dict()}
    else:
        if not args.formula:
            raise CapExceeded(f"order {B.order} exceeds cap {args.cap}; pass --formula")
        cert = {"axioms": verify_brace_axioms(B, args.cap, args.samples, args.seed).to_dict()}
        if obj.get("kind") == "cycle":
            cert["simplicity_criterion"] = simplicity_criterion(cycle_from_json(obj))
        descriptor = {"format": FORMAT, "kind": "formula", "spec": obj, "order": B.order,
                      "certificate": cert}
        write_json(args.output, descriptor)
        result = {"order": B.order, "kind": "formula", "certificate": cert}
        if not cert["axioms"]["ok"]:
            _emit(_envelope(args, "build", inputs, result), None)
            return EXIT_FALSE
    _emit(_envelope(args, "build", inputs, result), None)
    return EXIT_TRUE


def _timed(args, result: dict, name: str, fn):
    t0 = time.perf_counter()
    out = fn()
    if args.timing:
        result.setdefault("seconds", {})[name] = round(time.perf_counter() - t0, 6)
    return out


def cmd_check(args) -> int:
    obj, B = _load_brace(args.brace)
    inputs = {"brace": sha256_file(args.brace)}
    wanted = [k for k in ("axioms", "simple", "socle", "decompose", "graph") if getattr(args, k)]
    wanted = wanted or ["axioms"]
    result: dict = {"order": B.order}
    verdicts: list[bool | None] = []

    for name in wanted:
        try:
            if name == "axioms":
                rep = _timed(args, result, name,
                             lambda: verify_brace_axioms(B, args.cap, args.samples, args.seed))
                result["axioms"] = rep.to_dict()
                verdicts.append(rep.ok)
            elif name == "simple":
                if B.order <= args.cap:
                    res = _timed(args, result, name, lambda: is_simple(B, args.cap))
                    result.update(res.to_dict())
                    verdicts.append(res.simple)
                elif obj.get("kind") == "formula" and obj["spec"].get("kind") == "cycle":
                    ok = simplicity_criterion(cycle_from_json(obj["spec"]))
                    result.update({"simple": ok, "certificate": "cycle criterion"})
                    verdicts.append(ok)
                else:
                    raise CapExceeded(f"order {B.order} exceeds cap {args.cap}")
            elif name == "socle":
                result["socle"] = _timed(args, result, name, lambda: socle(B, args.cap))
            elif name == "decompose":
                dec = _timed(args, result, name, lambda: decompose_and_rebuild(B, args.cap))
                result["decompose"] = {
                    "components": [{"prime": c.prime, "order": c.brace.order} for c in dec.components],
                    "actions": sorted([list(k) for k in dec.spec.actions]),
                    "eta_check": dec.eta_check}
                verdicts.append(dec.eta_check)
            elif name == "graph":
                dec = decompose_and_rebuild(B, args.cap)
                gv = _timed(args, result, name,
                            lambda: graph_verdict(dec.spec, mode=args.mode, cap=args.cap, seed=args.seed))
                result["graph"] = gv.to_dict()
                verdicts.append({"simple": True, "not-simple": False}.get(gv.verdict))
        except CapExceeded as exc:
            result[name] = {"inapplicable": str(exc)}
            verdicts.append(None)

    _emit(_envelope(args, "check", inputs, result), args.output)
    if any(v is False for v in verdicts):
        return EXIT_FALSE
    if any(v is None for v in verdicts):
        return EXIT_INAPPLICABLE
    return EXIT_TRUE


def cmd_solution(args) -> int:
    _, B = _load_brace(args.brace)
    sol = canonical_solution(B, args.cap)
    write_json(args.output, solution_to_json(sol))
    result = {"n": sol.n}
    _emit(_envelope(args, "solution", {"brace": sha256_file(args.brace)}, result), None)
    return EXIT_TRUE


def cmd_verify(args) -> int:
    sol = solution_from_json(read_json(args.solution))
    ybe = verify_ybe(sol, args.budget, sample=args.sample, samples=args.samples, seed=args.seed)
    inv, nondeg = verify_involutive(sol), verify_nondegenerate(sol)
    result = {"ybe": ybe.to_dict(), "involutive": inv.to_dict(), "nondegenerate": nondeg.to_dict()}
    if nondeg.ok and sol.n <= args.cap:
        result["permutation_group"] = permutation_group(sol).to_dict()
    _emit(_envelope(args, "verify", {"solution": sha256_file(args.solution)}, result), args.output)
    return EXIT_TRUE if (ybe.ok and inv.ok and nondeg.ok) else EXIT_FALSE


def cmd_filter(args) -> int:
    verdict = order_filters(args.N)
    _emit(_envelope(args, "filter", {}, verdict.to_dict()), None)
    return EXIT_TRUE if verdict.possible else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="exhaustive cap on brace order")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled checks")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="sample count above the cap")

    parser = argparse.ArgumentParser(prog="bracekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build a brace file from a spec")
    p.add_argument("spec")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--formula", action="store_true",
                   help="write a formula descriptor when the order exceeds the cap")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", parents=[common], help="check properties of a brace")
    p.add_argument("brace")
    for flag in ("axioms", "simple", "socle", "decompose", "graph"):
        p.add_argument(f"--{flag}", action="store_true")
    p.add_argument("--mode", choices=["walk-cycle", "strict-cycle"], default="walk-cycle",
                   help="full-cycle reading used by --graph")
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds (not deterministic)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solution", parents=[common], help="canonical YBE solution of a brace")
    p.add_argument("brace")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_solution)

    p = sub.add_parser("verify", parents=[common], help="verify a solution file")
    p.add_argument("solution")
    p.add_argument("--budget", type=int, default=YBE_BUDGET, help="max triples for the exhaustive check")
    p.add_argument("--sample", action="store_true", help="sample triples when over budget")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("filter", parents=[common], help="necessary conditions for a simple brace of order N")
    p.add_argument("N", type=int)
    p.set_defaults(func=cmd_filter)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"bracekit: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (SpecError, BraceError, OSError, KeyError, TypeError, ValueError) as exc:
        print(f"bracekit: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
