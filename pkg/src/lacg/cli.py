"""Command line front end: generate, solve, compare, reference.

Exit codes: 0 success, 2 usage error, 3 iteration budget exhausted,
4 a numerical flag was raised during the run.
"""

import argparse
import json
import sys

from . import harness
from .trace import STATUS_GAP_REACHED

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_FLAGGED = 4


def _add_common_solver_args(parser):
    parser.add_argument("--instance", required=True, help="instance JSON file")
    parser.add_argument("--eps", type=float, default=1e-8, help="target Wolfe gap")
    parser.add_argument("--max-iters", type=int, default=20000)
    parser.add_argument("--step", choices=("exact", "short_step"), default="exact")
    parser.add_argument("--reference", help="reference JSON (adds the primal_gap column)")
    parser.add_argument("--enhance", action="store_true", help="keep-best enhancement of the coupled run")
    parser.add_argument("--early-restart", action="store_true")
    parser.add_argument("--cull", action="store_true", help="cull stale hull vertices")


def _lacg_flags(args):
    return {
        "enhancement_enabled": args.enhance,
        "early_restart_enabled": args.early_restart,
        "culling_enabled": args.cull,
    }


def _load_f_star(args):
    if not args.reference:
        return None
    with open(args.reference) as fh:
        return json.load(fh)["f_star"]


def _exit_code(results):
    results = results if isinstance(results, list) else [results]
    if any(r.flagged for r in results):
        return EXIT_FLAGGED
    if all(r.status == STATUS_GAP_REACHED for r in results):
        return EXIT_OK
    return EXIT_BUDGET


def cmd_generate(args):
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        if not _:
            raise SystemExit(f"bad --param {item!r}, expected key=value")
        params[key] = float(value) if "." in value or "e" in value.lower() else int(value)
    instance = harness.build_instance(args.kind, seed=args.seed, **params)
    harness.dump_instance(instance, args.out)
    print(f"wrote {args.out} ({args.kind}, n={instance.objective.n}, seed={args.seed})")
    return EXIT_OK


def cmd_solve(args):
    instance = harness.load_instance(args.instance)
    f_star = _load_f_star(args)
    try:
        result = harness.solve(
            instance,
            args.alg,
            eps=args.eps,
            max_iters=args.max_iters,
            step_rule=args.step,
            f_star=f_star,
            lacg_flags=_lacg_flags(args),
        )
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result.write_csv(args.out)
    last = result.rows[-1]
    print(f"{args.alg}: {len(result.rows) - 1} iterations, f={last.f:.12g}, wolfe_gap={last.wolfe_gap:.3e}")
    return _exit_code(result)


def cmd_compare(args):
    instance = harness.load_instance(args.instance)
    if len(args.algs) < 2:
        print("usage error: compare needs at least two algorithms", file=sys.stderr)
        return EXIT_USAGE
    f_star = _load_f_star(args)
    if f_star is None and not args.no_reference:
        f_star = harness.compute_reference(instance, gap=args.reference_gap)["f_star"]
    try:
        results = harness.compare(
            instance,
            args.algs,
            eps=args.eps,
            max_iters=args.max_iters,
            step_rule=args.step,
            f_star=f_star,
            lacg_flags=_lacg_flags(args),
        )
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    harness.write_comparison_csv(results, args.out)
    for name, result in results.items():
        print(f"{name}: {len(result.rows) - 1} iterations, status={result.status}")
    return _exit_code(list(results.values()))


def cmd_reference(args):
    instance = harness.load_instance(args.instance)
    ref = harness.compute_reference(instance, gap=args.gap, max_iters=args.max_iters)
    with open(args.out, "w") as fh:
        json.dump(ref, fh)
    print(f"f_star={ref['f_star']:.15g} (wolfe_gap={ref['wolfe_gap']:.3e})")
    return EXIT_OK if ref["converged"] else EXIT_BUDGET


def build_parser():
    parser = argparse.ArgumentParser(prog="lacg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a benchmark instance JSON")
    gen.add_argument("--kind", required=True, choices=harness.GENERATORS)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--param", action="append", help="generator parameter key=value (repeatable)")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    slv = sub.add_parser("solve", help="run one algorithm, write a trace CSV")
    _add_common_solver_args(slv)
    slv.add_argument("--alg", required=True, choices=harness.ALGORITHMS)
    slv.add_argument("--out", required=True)
    slv.set_defaults(func=cmd_solve)

    cmp_ = sub.add_parser("compare", help="run several algorithms, write a long-format CSV")
    _add_common_solver_args(cmp_)
    cmp_.add_argument("--algs", nargs="+", required=True, choices=harness.ALGORITHMS)
    cmp_.add_argument("--no-reference", action="store_true", help="skip the reference solve")
    cmp_.add_argument("--reference-gap", type=float, default=1e-13)
    cmp_.add_argument("--out", required=True)
    cmp_.set_defaults(func=cmd_compare)

    ref = sub.add_parser("reference", help="compute a high-accuracy solution for primal gaps")
    ref.add_argument("--instance", required=True)
    ref.add_argument("--gap", type=float, default=1e-13)
    ref.add_argument("--max-iters", type=int, default=500000)
    ref.add_argument("--out", required=True)
    ref.set_defaults(func=cmd_reference)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
