"""Command-line interface.

Subcommands: gen (instances), solve (single TSP run), gw (bias only),
oracle (exact solves), sweep (epsilon sweep), bench (depth benchmark),
report (CSV/SVG from saved records).  Exit code 0 on success, 1 with a
diagnostic on stderr otherwise.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import pipeline
from .encoding import cut_value, regularize_gw_bits
from .gw import anchored_bits, randomized_rounding, solve_sdp
from .problems import (
    brute_force_maxcut,
    brute_force_qubo,
    brute_force_tsp,
    build_tsp_qubo,
    load_graph,
    load_tsp_instance,
)

_METHODS = {"pce": pipeline.METHOD_PCE, "warm-pce": pipeline.METHOD_WARM}


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _instance_files(path: Path) -> list[Path]:
    if path.is_dir():
        files = sorted(p for p in path.glob("*.json") if p.name != "manifest.json")
        if not files:
            raise FileNotFoundError(f"no instance files in {path}")
        return files
    return [path]


def cmd_gen(args) -> int:
    paths = pipeline.generate_instances(args.kind, args.count, args.size, args.seed, args.out)
    print(f"wrote {len(paths)} {args.kind} instances to {args.out}")
    return 0


def cmd_solve(args) -> int:
    instance = load_tsp_instance(args.instance)
    instance_id = Path(args.instance).stem
    method = _METHODS[args.method]
    _, optimal = brute_force_tsp(instance)
    bias = None
    records = []
    for init in range(args.inits):
        seed = pipeline.derive_seed(args.seed, instance_id, method, args.layers, init)
        record = pipeline.run_single(
            instance,
            instance_id,
            method,
            args.layers,
            args.epsilon,
            seed,
            bias=bias,
            gw_seed=pipeline.derive_seed(args.seed, instance_id, "gw-bias"),
            post_process=not args.no_postprocess,
            max_evals=args.max_evals,
            optimal_length=optimal,
        )
        records.append(record)
        if record.tour is not None:
            print(
                f"init {init}: tour {'-'.join(map(str, record.tour))} "
                f"length {record.tour_length:.6f} ratio {record.ratio:.4f}"
                f"{' (optimum)' if record.hit_optimum else ''}"
            )
        else:
            print(
                f"init {init}: infeasible "
                f"(rows {list(record.infeasible_rows)}, cols {list(record.infeasible_cols)})"
            )
    feasible = [r for r in records if r.tour_length is not None]
    print(f"optimal tour length: {optimal:.6f}")
    if feasible:
        best = min(feasible, key=lambda r: r.tour_length)
        print(
            f"best of {args.inits}: length {best.tour_length:.6f} "
            f"ratio {best.ratio:.4f} hit_optimum {str(best.hit_optimum).lower()}"
        )
    else:
        print(f"best of {args.inits}: no feasible tour decoded")
    return 0


def cmd_gw(args) -> int:
    graph = load_graph(args.graph)
    relaxed = solve_sdp(graph, seed=args.seed)
    solution = randomized_rounding(relaxed.vectors, graph, args.roundings, seed=args.seed)
    bits = anchored_bits(solution, graph)
    regularized = regularize_gw_bits(bits.astype(float), args.epsilon)
    print(f"relaxation value: {relaxed.value:.6f} (converged: {relaxed.converged})")
    print(f"best-of-{args.roundings} cut: {solution.best_cut:.6f}")
    print(f"bits: {''.join(str(b) for b in bits)}")
    print(f"regularized bits (epsilon={args.epsilon}): {regularized.tolist()}")
    return 0


def cmd_oracle(args) -> int:
    if args.kind == "tsp":
        instance = load_tsp_instance(args.instance)
        tour, length = brute_force_tsp(instance)
        print(f"optimal tour: {'-'.join(map(str, tour.order))}")
        print(f"optimal length: {length!r}")
    elif args.kind == "maxcut":
        graph = load_graph(args.instance)
        bits, cut = brute_force_maxcut(graph)
        print(f"optimal cut: {cut!r}")
        print(f"spins: {''.join('+' if b > 0 else '-' for b in bits)}")
        assert abs(cut_value(bits, graph) - cut) < 1e-9
    else:  # qubo derived from a TSP instance
        instance = load_tsp_instance(args.instance)
        qubo = build_tsp_qubo(instance, args.penalty, args.penalty)
        x, value = brute_force_qubo(qubo)
        print(f"optimal objective: {value!r}")
        print(f"assignment: {''.join(str(b) for b in x)}")
    return 0


def cmd_sweep(args) -> int:
    from . import report

    graphs = [(p.stem, load_graph(p)) for p in _instance_files(Path(args.graphs))]
    records = pipeline.run_epsilon_sweep(
        graphs,
        inits=args.inits,
        epsilons=args.epsilons,
        master_seed=args.seed,
        depth=args.layers,
        roundings=args.roundings,
        max_evals=args.max_evals,
    )
    paths = report.emit_sweep_report(records, args.out)
    import numpy as np

    for epsilon in sorted({r.epsilon for r in records}):
        ratios = [r.ratio for r in records if r.epsilon == epsilon]
        print(f"epsilon {epsilon:g}: median ratio {np.median(ratios):.4f}")
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return 0


def cmd_bench(args) -> int:
    from . import report

    instances = [(p.stem, load_tsp_instance(p)) for p in _instance_files(Path(args.instances))]
    records, summary = pipeline.run_benchmark(
        instances,
        inits=args.inits,
        depths=args.depths,
        epsilon=args.epsilon,
        master_seed=args.seed,
        post_process=not args.no_postprocess,
        max_evals=args.max_evals,
    )
    paths = report.emit_report(records, summary, args.out)
    for row in summary.rows:
        print(
            f"p={row.depth}: ratio PCE {row.mean_ratio_pce:.4f} / Warm {row.mean_ratio_warm:.4f}; "
            f"success PCE {row.success_pce:.2f} / Warm {row.success_warm:.2f}; "
            f"W/T/L {row.warm_wins}/{row.ties}/{row.warm_losses}"
        )
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return 0


def cmd_report(args) -> int:
    from . import report

    if args.sweep:
        records = report.read_sweep_csv(args.records)
        paths = report.emit_sweep_report(records, args.out)
    else:
        records = report.read_records_csv(args.records)
        paths = report.emit_report(records, None, args.out)
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warmpce",
        description="PCE and Warm-PCE solvers for MaxCut and TSP (exact simulation)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate random instance files")
    p.add_argument("kind", choices=("tsp", "graph"))
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--size", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="run PCE or Warm-PCE on one TSP instance")
    p.add_argument("instance")
    p.add_argument("--method", choices=sorted(_METHODS), default="warm-pce")
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--inits", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-evals", type=int, default=1000)
    p.add_argument("--no-postprocess", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gw", help="Goemans-Williamson bias for a graph")
    p.add_argument("graph")
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--roundings", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gw)

    p = sub.add_parser("oracle", help="exact solve by enumeration")
    p.add_argument("kind", choices=("tsp", "maxcut", "qubo"))
    p.add_argument("instance")
    p.add_argument("--penalty", type=float, default=None,
                   help="QUBO penalty (default 2*N*max distance)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="epsilon sweep on MaxCut graphs")
    p.add_argument("--graphs", required=True, help="graph file or directory")
    p.add_argument("--inits", type=int, default=5)
    p.add_argument("--epsilons", type=_float_list, default=(0.05, 0.2, 0.35, 0.5))
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--roundings", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-evals", type=int, default=1000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bench", help="PCE vs Warm-PCE depth benchmark on TSP instances")
    p.add_argument("--instances", required=True, help="instance file or directory")
    p.add_argument("--inits", type=int, default=10)
    p.add_argument("--depths", type=_int_list, default=(1, 2, 3, 4, 5))
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-evals", type=int, default=1000)
    p.add_argument("--no-postprocess", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="regenerate CSV summaries and SVG charts")
    p.add_argument("--records", required=True)
    p.add_argument("--sweep", action="store_true", help="records are sweep records")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # surface a diagnostic, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
