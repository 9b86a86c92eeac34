"""Command-line front end: solve an instance, verify a trace against the
charging inequalities, run experiment batches, or generate instances.
"""

import argparse
import json
import math
import sys

from .analysis import prune_down_monotone, verify_run
from .bench import (
    ExperimentSpec,
    brute_force_opt,
    generate_instance,
    greedy_baseline,
    run_experiment,
)
from .instances import (
    instance_to_json,
    load_instance,
    load_trace,
    save_instance,
    save_trace,
)
from .nonmonotone import RepetitionsConfig, repetitions_with_trace
from .solver import SolverConfig, run_efficient, run_reference


def build_parser():
    parser = argparse.ArgumentParser(
        prog="parityls",
        description=(
            "Hybrid greedy/local-search maximization of submodular functions "
            "under matroid k-parity constraints"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run a solver on an instance file")
    solve.add_argument("--instance", required=True)
    solve.add_argument(
        "--mode",
        default="hybrid",
        choices=["greedy", "hybrid", "hybrid-reference", "nonmonotone"],
    )
    solve.add_argument("--epsilon", type=float, default=0.5)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--ell", type=int, default=0)
    solve.add_argument("--out", default="", help="write the run trace here (JSON)")

    verify = sub.add_parser("verify", help="check a trace against an instance")
    verify.add_argument("--instance", required=True)
    verify.add_argument("--trace", required=True)
    verify.add_argument(
        "--d", type=float, default=0.0, help="discrepancy weight (default 2*sqrt(k))"
    )
    verify.add_argument(
        "--reference",
        default="",
        help="JSON list of edge ids to verify against (default: pruned brute-force optimum)",
    )
    verify.add_argument("--out", default="", help="write the report here (JSON)")

    bench = sub.add_parser("bench", help="run a batch of trials, write CSV + JSON")
    bench.add_argument("--instance", default="")
    bench.add_argument("--generator", default="", help="generator kind")
    bench.add_argument("--params", default="{}", help="generator params as JSON")
    bench.add_argument(
        "--mode",
        default="hybrid",
        choices=["greedy", "hybrid", "hybrid-reference", "nonmonotone"],
    )
    bench.add_argument("--trials", type=int, default=1)
    bench.add_argument("--epsilon", type=float, default=0.5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--ell", type=int, default=0)
    bench.add_argument("--out", required=True)

    gen = sub.add_parser("gen", help="generate a seeded instance file")
    gen.add_argument("--kind", required=True)
    gen.add_argument("--params", default="{}", help="generator params as JSON")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="", help="output path (default stdout)")

    return parser


def _cmd_solve(args):
    cons, f = load_instance(args.instance)
    if args.mode == "greedy":
        chosen = greedy_baseline(f, cons)
        trace = None
    elif args.mode == "nonmonotone":
        config = RepetitionsConfig(ell=args.ell, epsilon=args.epsilon, seed=args.seed)
        chosen, rep_trace = repetitions_with_trace(f, cons, config)
        trace = None
        print(f"rounds: {len(rep_trace.rounds)}")
    else:
        runner = run_efficient if args.mode == "hybrid" else run_reference
        chosen, trace = runner(
            f, cons, SolverConfig(epsilon=args.epsilon, seed=args.seed)
        )
    print(f"selected: {sorted(chosen)}")
    print(f"value: {f.value(chosen):.12g}")
    if trace is not None:
        print(f"alpha: {trace.alpha:.12g}")
        print(f"improvements: {trace.improvement_count}")
        if args.out:
            save_trace(args.out, trace)
            print(f"trace written to {args.out}")
    return 0


def _cmd_verify(args):
    cons, f = load_instance(args.instance)
    trace = load_trace(args.trace)
    if args.reference:
        with open(args.reference, encoding="utf-8") as fh:
            reference = frozenset(json.load(fh))
        reference = prune_down_monotone(f, reference)
    else:
        best_set, _ = brute_force_opt(f, cons)
        reference = prune_down_monotone(f, best_set)
    d = args.d if args.d > 0 else 2.0 * math.sqrt(cons.k)
    report = verify_run(trace, f, cons, reference, d=d)
    payload = report.to_json()
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if not report.ok:
        failed = ", ".join(c.name for c in report.failed())
        print(f"FAILED checks: {failed}", file=sys.stderr)
        return 1
    print("all checks passed", file=sys.stderr)
    return 0


def _cmd_bench(args):
    if bool(args.instance) == bool(args.generator):
        raise SystemExit("bench needs exactly one of --instance / --generator")
    source = ("file", args.instance) if args.instance else ("gen", args.generator)
    spec = ExperimentSpec(
        source=source,
        mode=args.mode,
        seed=args.seed,
        trials=args.trials,
        epsilon=args.epsilon,
        ell=args.ell,
        params=json.loads(args.params),
        out=args.out,
    )
    result = run_experiment(spec)
    print(f"wrote {len(result['rows'])} rows to {args.out}.csv")
    return 0


def _cmd_gen(args):
    cons, f = generate_instance(args.kind, json.loads(args.params), args.seed)
    if args.out:
        save_instance(args.out, cons, f)
        print(f"instance written to {args.out}")
    else:
        print(json.dumps(instance_to_json(cons, f), indent=2, sort_keys=True))
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "verify": _cmd_verify,
        "bench": _cmd_bench,
        "gen": _cmd_gen,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
