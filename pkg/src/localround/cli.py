"""Command-line surface: graph generation, algorithm runs, benchmarks.

Exit codes: 0 success, 2 a checked guarantee failed, 3 usage error,
4 an oracle refused its budget.  Run reports are JSON (schema "v1") and
byte-identical for identical config and master seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time

from . import generators
from .clustering import cluster_all, cluster_constant, mpx_randomized, verify_partition
from .errors import BudgetExceeded, ClaimViolation, PreconditionError, RetryBudgetExceeded
from .graphs import Graph, dump_edge_list, load_graph
from .ledger import RoundLedger
from .matching import approx_matching
from .mis import luby_randomized, mis
from .oracles import DEFAULT_BUDGET

ALGORITHMS = ("mis", "matching", "cluster-all", "cluster-constant", "mpx", "luby-rand")
RANDOMIZED = ("mpx", "luby-rand")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 3
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_with(message))

    @staticmethod
    def exit_with(message: str) -> int:
        print(f"error: {message}", file=sys.stderr)
        return 3


def _build_parser() -> _Parser:
    parser = _Parser(prog="localround")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a generated graph as an edge list")
    gen.add_argument("--kind", required=True, choices=sorted(generators.KINDS))
    gen.add_argument("--n", type=int)
    gen.add_argument("--p", type=float)
    gen.add_argument("--rows", type=int)
    gen.add_argument("--cols", type=int)
    gen.add_argument("--deg", type=int)
    gen.add_argument("--count", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    run = sub.add_parser("run", help="run one algorithm and write a report")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="edge-list file")
    src.add_argument("--gen", help="generator spec, e.g. gnp:n=100,p=0.05,seed=7")
    run.add_argument("--algo", required=True, choices=ALGORITHMS)
    run.add_argument("--alpha", type=int)
    run.add_argument("--f-override", type=float)
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.add_argument("--budget-retries", type=int, default=DEFAULT_BUDGET.retries)

    bench = sub.add_parser("bench", help="sweep sizes and write a CSV")
    bench.add_argument("--ns", required=True, help="comma-separated node counts")
    bench.add_argument("--algos", default="mis", help="comma-separated algorithms")
    bench.add_argument("--avg-deg", type=float, default=8.0)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", required=True)
    return parser


def _generate(kind: str, args: argparse.Namespace) -> Graph:
    if kind == "gnp":
        _need(args.n is not None and args.p is not None, "gnp needs --n and --p")
        return generators.gnp(args.n, args.p, args.seed)
    if kind == "grid":
        _need(args.rows is not None and args.cols is not None, "grid needs --rows/--cols")
        return generators.grid(args.rows, args.cols)
    if kind == "regular":
        _need(args.n is not None and args.deg is not None, "regular needs --n/--deg")
        return generators.regular(args.n, args.deg, args.seed)
    if kind == "disjoint-edges":
        _need(args.count is not None, "disjoint-edges needs --count")
        return generators.disjoint_edges(args.count)
    if kind == "tree":
        _need(args.n is not None, f"{kind} needs --n")
        return generators.tree(args.n, args.seed)
    _need(args.n is not None, f"{kind} needs --n")
    return generators.KINDS[kind](args.n)


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


class UsageError(ValueError):
    pass


def parse_gen_spec(spec: str) -> Graph:
    """Build a graph from "kind:key=value,...".  Seed defaults to 0."""
    kind, _, rest = spec.partition(":")
    if kind not in generators.KINDS:
        raise UsageError(f"unknown generator {kind!r}")
    params: dict[str, float] = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not value:
                raise UsageError(f"bad generator parameter {item!r}")
            params[key] = float(value)
    seed = int(params.pop("seed", 0))
    try:
        if kind == "gnp":
            return generators.gnp(int(params.pop("n")), params.pop("p"), seed, **params)
        if kind == "grid":
            return generators.grid(int(params.pop("rows")), int(params.pop("cols")))
        if kind == "regular":
            return generators.regular(int(params.pop("n")), int(params.pop("d")), seed)
        if kind == "tree":
            return generators.tree(int(params.pop("n")), seed)
        if kind == "disjoint-edges":
            return generators.disjoint_edges(int(params.pop("count")))
        return generators.KINDS[kind](int(params.pop("n")))
    except KeyError as exc:
        raise UsageError(f"generator {kind} missing parameter {exc}") from exc


def _load_source(args: argparse.Namespace) -> tuple[Graph, dict]:
    if args.graph:
        with open(args.graph, "r", encoding="utf-8") as fh:
            return load_graph(fh.read()), {"graph": args.graph}
    return parse_gen_spec(args.gen), {"gen": args.gen}


def _run_algorithm(g: Graph, args: argparse.Namespace) -> dict:
    ledger = RoundLedger()
    algo = args.algo
    seed = args.seed if args.seed is not None else 0
    if algo in RANDOMIZED and args.seed is None:
        raise UsageError(f"{algo} is randomized; pass --seed")
    if algo == "mis":
        res = mis(g, args.alpha, seed, args.f_override, ledger, args.budget_retries)
        body = {
            "is_size": len(res.independent_set),
            "iterations": res.iterations,
            "per_iteration_removed_fraction": res.removed_fractions,
            "checks": res.checks,
        }
    elif algo == "luby-rand":
        res = luby_randomized(g, seed)
        ledger.charge("randomized-iterations", 1, max(1, res.iterations))
        body = {
            "is_size": len(res.independent_set),
            "iterations": res.iterations,
            "per_iteration_removed_fraction": res.removed_fractions,
            "checks": {},
        }
    elif algo == "matching":
        res = approx_matching(g, args.alpha, seed, args.f_override, ledger, args.budget_retries)
        body = {
            "m_star_bound": res.m_star_lower_bound,
            "frac_value": res.frac_value,
            "good_value": res.good_value,
            "intra_value": res.intra_value,
            "matching_size": len(res.matching),
            "checks": res.checks,
        }
    else:
        alpha = args.alpha if args.alpha is not None else 3
        if algo == "cluster-all":
            part = cluster_all(g, alpha, ledger)
        elif algo == "cluster-constant":
            weights = {u: 1.0 / max(1, g.n) for u in g.nodes}
            part = cluster_constant(g, alpha, weights, ledger)
        else:
            part = mpx_randomized(g, alpha, seed, ledger)
        report = verify_partition(g, part, alpha, part.meta.get("degree_bound"))
        report["degree_histogram"] = {
            str(k): v for k, v in sorted(report["degree_histogram"].items())
        }
        if not report["ok"]:
            raise ClaimViolation("partition-report", "diameter or degree bound failed")
        body = {"partition": report, "checks": part.meta.get("claims", {})}
    body["rounds"] = ledger.total
    body["ledger"] = ledger.report()
    return body


def _atomic_write(path: str, payload: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def _emit_report(args: argparse.Namespace, source: dict, body: dict, failed: str | None) -> None:
    report = {
        "schema_version": "v1",
        "config": {
            "source": source,
            "algo": args.algo,
            "alpha": args.alpha,
            "f_override": args.f_override,
            "seed": args.seed,
            "budget_retries": args.budget_retries,
        },
        "result": body,
        "failed_claim": failed,
    }
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        _atomic_write(args.out, payload)
    else:
        sys.stdout.write(payload)


def _cmd_run(args: argparse.Namespace) -> int:
    g, source = _load_source(args)
    try:
        body = _run_algorithm(g, args)
    except ClaimViolation as exc:
        _emit_report(args, source, {"error": str(exc)}, exc.claim)
        return 2
    _emit_report(args, source, body, None)
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    g = _generate(args.kind, args)
    _atomic_write(args.out, dump_edge_list(g))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    ns = [int(x) for x in args.ns.split(",") if x]
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad:
        raise UsageError(f"unknown algorithms {bad}")
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "algorithm", "rounds", "quality", "wall_time_s"])
    for n in ns:
        p = min(1.0, args.avg_deg / max(1, n - 1))
        g = generators.gnp(n, p, seed=args.seed + n)
        for algo in algos:
            ns_args = argparse.Namespace(
                algo=algo,
                alpha=None,
                f_override=None,
                seed=args.seed,
                budget_retries=200,
            )
            start = time.perf_counter()
            body = _run_algorithm(g, ns_args)
            wall = time.perf_counter() - start
            quality = body.get("is_size", body.get("matching_size"))
            if quality is None:
                quality = body.get("partition", {}).get("max_cluster_degree")
            writer.writerow([n, algo, body["rounds"], quality, f"{wall:.3f}"])
    _atomic_write(args.out, buf.getvalue())
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 3
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_bench(args)
    except (UsageError, PreconditionError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except BudgetExceeded as exc:
        print(f"oracle budget refused: {exc}", file=sys.stderr)
        return 4
    except (ClaimViolation, RetryBudgetExceeded) as exc:
        print(f"guarantee failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
