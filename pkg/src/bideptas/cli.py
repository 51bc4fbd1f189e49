"""Command line entry point.

JSON goes to stdout, a short summary to stderr.  Exit codes: 0 success,
1 usage or input error, 2 infeasible instance or budget exceeded, 3 internal
invariant violation.  Vertex ids in JSON are 0-based; instance and vertex
list files are 1-based.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

from . import checks
from .graph import GraphError, dump_graph, gen_gamma, gen_grid, gen_stacked_planar, read_graph, read_vertex_list
from .model import DP_PROBLEMS, EPTAS_PROBLEMS, AnnotatedInstance, InfeasibleError
from .oracle import PROBLEMS as ORACLE_PROBLEMS, OracleError, brute_force
from .partitioner import PartitionError, derive_constants, lemma_partition
from .transversals import TransversalError, build_transversal, eta_transversal_approx
from .treewidth.decomposition import dump_td, heuristic_decomposition, validate_decomposition
from .treewidth.exact import TreewidthBudgetError, exact_treewidth
from .treewidth.nice import make_nice
from .twsolvers.dp import DPBudgetError, dp_selfcheck, dp_solve, exact_nice

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload, summary=None):
    print(json.dumps(payload, sort_keys=True))
    if summary and not args.json_only:
        print(summary, file=sys.stderr)


def _vertices(path, g):
    x = read_vertex_list(path)
    bad = [v + 1 for v in x if not 0 <= v < g.n]
    if bad:
        raise UsageError(f"{path}: vertex ids out of range: {sorted(bad)[:5]}")
    return x


# -- subcommands -------------------------------------------------------------

def cmd_gen(args):
    if args.kind == "grid":
        g = gen_grid(args.r)
        note = f"grid r={args.r}"
    elif args.kind == "gamma":
        g = gen_gamma(args.r, join=not args.no_join)
        note = f"triangulated grid r={args.r}"
    else:
        g = gen_stacked_planar(args.n, args.seed, keep=args.keep)
        note = f"stacked planar n={args.n} seed={args.seed} keep={args.keep}"
    text = dump_graph(g, note)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _emit(args, {"n": g.n, "m": g.m, "path": args.out}, f"wrote {note} to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_decompose(args):
    g = read_graph(args.file)
    if args.exact:
        got = exact_treewidth(g, args.budget)
        if got is None:
            _emit(args, {"n": g.n, "exceeds_ub": args.budget}, f"treewidth > {args.budget}")
            return EXIT_INFEASIBLE
        width, td = got
    else:
        td = heuristic_decomposition(g)
        width = td.width
    nice = make_nice(td) if args.nice else None
    payload = {
        "n": g.n, "m": g.m, "width": width, "bags": len(td.bags), "exact": args.exact,
        "valid": not validate_decomposition(g, td),
        "td": dump_td(td, g.n),
    }
    if nice is not None:
        payload["nice_nodes"] = len(nice)
        payload["nice_width"] = nice.width
    if args.td_out:
        with open(args.td_out, "w") as fh:
            fh.write(payload["td"])
    _emit(args, payload, f"width {width}, {len(td.bags)} bags")
    return EXIT_OK


def cmd_partition(args):
    g = read_graph(args.file)
    if args.transversal_file:
        x = _vertices(args.transversal_file, g)
    else:
        x, _ = build_transversal(args.problem, g)
    if args.gamma is not None:
        gamma = args.gamma
    else:
        gamma = derive_constants(args.epsilon, args.lam, args.beta, args.eta).gamma
    rep = lemma_partition(g, x, gamma)
    payload = rep.as_dict()
    payload["x_prime"] = sorted(rep.x_prime)
    payload["flagged"] = rep.flagged
    payload["violations"] = len(rep.violations())
    _emit(args, payload, f"|X|={len(x)} |X'|={len(rep.x_prime)} gamma={gamma:g} "
          f"guard={rep.guard_triggers} components={len(rep.rows)}")
    if rep.violations() and not rep.flagged:
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_transversal(args):
    g = read_graph(args.file)
    if args.gamma_cap is not None:
        res = eta_transversal_approx(g, args.gamma_cap)
        x, eta = res.x, 1
        extra = {"rounds": res.rounds, "fallback": res.fallback}
    else:
        x, eta = build_transversal(args.problem, g)
        extra = {}
    rest, _ = g.without(x)
    width = heuristic_decomposition(rest).width
    payload = {"problem": args.problem, "eta": eta, "size": len(x), "vertices": sorted(x),
               "residual_width": width, **extra}
    _emit(args, payload, f"|X|={len(x)} eta={eta} width(G-X)={width}")
    return EXIT_INTERNAL if width > eta else EXIT_OK


def _solution_payload(sol, g):
    return {"problem": sol.problem, "n": g.n, "m": g.m, "objective": sol.objective,
            "feasible": sol.feasible, "witness": sol.witness_json(),
            "provenance": sol.provenance}


def cmd_solve_dp(args):
    g = read_graph(args.file)
    R = _vertices(args.r_file, g) if args.r_file else frozenset()
    inst = AnnotatedInstance(args.problem, g, R, args.budget, args.connected)
    ntd = exact_nice(g) if args.exact_td else None
    sol = dp_solve(inst, ntd)
    ok, obj = checks.check(args.problem, g, sol.witness, R, args.budget, args.connected)
    payload = _solution_payload(sol, g)
    payload.update(width=sol.stats["width"], dp_states=sol.stats["dp_states"])
    _emit(args, payload, f"{args.problem}: objective {sol.objective}, width {sol.stats['width']}")
    return EXIT_OK if ok and obj == sol.objective else EXIT_INTERNAL


def cmd_solve_eptas(args):
    from .eptas import EptasOptions, eptas_solve

    g = read_graph(args.file)
    opts = EptasOptions(lam=args.lam, beta=args.beta, eta=args.eta, gamma=args.gamma)
    if args.transversal_file:
        opts.transversal = _vertices(args.transversal_file, g)
    if args.rho_transversal is not None:
        opts.rho_transversal = args.rho_transversal
    res = eptas_solve(args.problem, g, args.epsilon, opts)
    sol = res.solution
    ok, obj = checks.check(args.problem, g, sol.witness)
    payload = res.as_dict(g)
    secs = payload["trace"].pop("seconds")
    _emit(args, payload, f"{args.problem}: objective {sol.objective} feasible={ok} "
          f"|X|={res.trace['transversal_size']} |X'|={res.trace['modulator_size']} "
          f"width={res.trace['width']} {payload['guarantee']} times={secs}")
    return EXIT_OK if ok and obj == sol.objective else EXIT_INTERNAL


def cmd_oracle(args):
    g = read_graph(args.file)
    R = _vertices(args.r_file, g) if args.r_file else frozenset()
    sol = brute_force(args.problem, g, args.budget, R, args.connected)
    _emit(args, _solution_payload(sol, g), f"{args.problem}: optimum {sol.objective}")
    return EXIT_OK


def cmd_selfcheck(args):
    rep = dp_selfcheck(args.problem, args.n, args.trials, args.seed)
    rep["mismatch_count"] = len(rep["mismatches"])
    _emit(args, rep, f"{args.problem}: {len(rep['mismatches'])} mismatches in {args.trials} trials")
    return EXIT_INTERNAL if rep["mismatches"] else EXIT_OK


def cmd_bench(args):
    from .eptas import EptasOptions, eptas_solve

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["instance", "n", "m", "stage", "millis", "aux"])
    for n in args.sizes:
        g = gen_stacked_planar(n, args.seed)
        name = f"stacked-{n}-s{args.seed}"
        t = time.perf_counter()
        td = heuristic_decomposition(g)
        writer.writerow([name, g.n, g.m, "decompose", f"{1000 * (time.perf_counter() - t):.1f}",
                         f"width={td.width}"])
        res = eptas_solve(args.problem, g, args.epsilon, EptasOptions(gamma=args.gamma))
        tr = res.trace
        aux = {"transversal": f"size={tr['transversal_size']}",
               "modulator": f"size={tr['modulator_size']}",
               "dp": f"states={tr['dp_states']};width={tr['width']}",
               "lift": f"objective={res.solution.objective}"}
        for stage, secs in tr["seconds"].items():
            writer.writerow([name, g.n, g.m, stage, f"{1000 * secs:.1f}", aux.get(stage, "")])
        if not args.json_only:
            print(f"{name}: objective {res.solution.objective}", file=sys.stderr)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-only", action="store_true", help="no summary on stderr")
    common.add_argument("--seed", type=int, default=0)

    consts = argparse.ArgumentParser(add_help=False)
    consts.add_argument("--epsilon", type=float, default=0.5)
    consts.add_argument("--gamma", type=float, help="override the derived gamma")
    consts.add_argument("--eta", type=float)
    consts.add_argument("--beta", type=float)
    consts.add_argument("--lambda", dest="lam", type=float, default=0.5)

    p = _Parser(prog="bideptas", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", parents=[common], help="write a generated instance")
    gen.add_argument("kind", choices=["grid", "gamma", "planar"])
    gen.add_argument("--r", type=int, default=6)
    gen.add_argument("--n", type=int, default=50)
    gen.add_argument("--keep", type=float, default=1.0)
    gen.add_argument("--no-join", action="store_true", help="gamma: skip the corner join")
    gen.add_argument("--out", "-o")
    gen.set_defaults(func=cmd_gen)

    dec = sub.add_parser("decompose", parents=[common], help="tree decomposition")
    dec.add_argument("file")
    dec.add_argument("--exact", action="store_true")
    dec.add_argument("--budget", type=int, help="upper bound for --exact")
    dec.add_argument("--nice", action="store_true")
    dec.add_argument("--td-out")
    dec.set_defaults(func=cmd_decompose)

    part = sub.add_parser("partition", parents=[common, consts], help="shrink a modulator")
    part.add_argument("file")
    part.add_argument("--problem", default="fvs", choices=sorted(EPTAS_PROBLEMS))
    part.add_argument("--transversal-file")
    part.set_defaults(func=cmd_partition)

    tr = sub.add_parser("transversal", parents=[common], help="build a modulator")
    tr.add_argument("file")
    tr.add_argument("--problem", default="fvs", choices=["vc", "cvc", "fvs", "cycle-packing", "max-leaf"])
    tr.add_argument("--gamma-cap", type=int, help="use the generic enumeration (fvs only)")
    tr.set_defaults(func=cmd_transversal)

    dp = sub.add_parser("solve-dp", parents=[common], help="exact DP on a decomposition")
    dp.add_argument("file")
    dp.add_argument("--problem", required=True, choices=DP_PROBLEMS)
    dp.add_argument("--budget", type=int, help="t for partial-vc")
    dp.add_argument("--r-file", help="anchor set R (1-based ids)")
    dp.add_argument("--connected", action="store_true", help="single-component mode")
    dp.add_argument("--exact-td", action="store_true", help="use an optimal decomposition")
    dp.set_defaults(func=cmd_solve_dp)

    ep = sub.add_parser("solve-eptas", parents=[common, consts], help="approximation pipeline")
    ep.add_argument("file")
    ep.add_argument("--problem", required=True, choices=EPTAS_PROBLEMS)
    ep.add_argument("--transversal-file")
    ep.add_argument("--rho-transversal", type=float, help="factor of a supplied transversal")
    ep.set_defaults(func=cmd_solve_eptas)

    orc = sub.add_parser("oracle", parents=[common], help="brute-force optimum (n <= 16)")
    orc.add_argument("file")
    orc.add_argument("--problem", required=True, choices=ORACLE_PROBLEMS)
    orc.add_argument("--budget", type=int)
    orc.add_argument("--r-file")
    orc.add_argument("--connected", action="store_true")
    orc.set_defaults(func=cmd_oracle)

    sc = sub.add_parser("selfcheck", parents=[common], help="DP against the oracle")
    sc.add_argument("--problem", required=True, choices=DP_PROBLEMS)
    sc.add_argument("--n", type=int, default=12)
    sc.add_argument("--trials", type=int, default=100)
    sc.set_defaults(func=cmd_selfcheck)

    be = sub.add_parser("bench", parents=[common], help="per-stage timings as CSV")
    be.add_argument("--sizes", type=lambda s: [int(x) for x in s.split(",")], default=[100, 500, 2000])
    be.add_argument("--problem", default="fvs", choices=[p for p in EPTAS_PROBLEMS if p != "ds"])
    be.add_argument("--epsilon", type=float, default=0.5)
    be.add_argument("--gamma", type=float, default=20)
    be.set_defaults(func=cmd_bench)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphError, OSError, OracleError, TransversalError,
            PartitionError, ValueError) as exc:
        if isinstance(exc, InfeasibleError):
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DPBudgetError, TreewidthBudgetError) as exc:
        sizing = getattr(exc, "sizing", None)
        print(f"budget exceeded: {exc}" + (f" {json.dumps(sizing, sort_keys=True)}" if sizing else ""),
              file=sys.stderr)
        return EXIT_INFEASIBLE
    except AssertionError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
