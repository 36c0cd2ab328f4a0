"""End-to-end pipelines: single runs, depth benchmarks, epsilon sweeps, instances.

Every run's randomness flows from one integer seed; grid runs derive their
seeds as ``derive_seed(master, instance_id, method, depth, init)`` so adding
depths, methods or instances never perturbs existing runs.  The GW bias is
computed once per instance and shared by all warm runs on it.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cobyla import OptimizerConfig, OptimResult, minimize, random_start
from .encoding import (
    GwBias,
    LossConfig,
    bit_swap_search,
    cut_value,
    extract_bits,
    generate_encoding,
    pce_loss,
    qubits_for_variables,
    regularize_gw_bits,
    warm_pce_loss,
)
from .gw import anchored_bits, gw_bias_for, randomized_rounding, solve_sdp
from .problems import (
    MaxCutGraph,
    Tour,
    TspInstance,
    brute_force_maxcut,
    brute_force_tsp,
    build_tsp_qubo,
    decode_cut,
    decode_tour,
    qubo_to_maxcut,
    save_graph,
    save_tsp_instance,
    tour_length,
)
from .simulator import AnsatzConfig, PauliBatch, prepare_state

METHOD_PCE = "PCE"
METHOD_WARM = "WarmPCE"
CORRELATION_ORDER = 2
OPTIMUM_TOL = 1e-9


@dataclass(frozen=True)
class RunRecord:
    """One TSP optimization run: configuration, final bits, decoded tour, metrics."""

    method: str
    instance_id: str
    depth: int
    init_index: int
    seed: int
    post_processed: bool
    final_spin_bits: tuple[int, ...]
    cut: float
    tour: tuple[int, ...] | None
    infeasible_rows: tuple[int, ...]
    infeasible_cols: tuple[int, ...]
    tour_length: float | None
    ratio: float
    hit_optimum: bool


@dataclass(frozen=True)
class SweepRecord:
    """One epsilon-sweep run on a raw MaxCut instance."""

    graph_id: str
    epsilon: float
    init_index: int
    seed: int
    energy: float
    max_cut: float
    ratio: float


@dataclass(frozen=True)
class DepthSummary:
    depth: int
    mean_ratio_pce: float
    mean_ratio_warm: float
    success_pce: float
    success_warm: float
    warm_wins: int
    ties: int
    warm_losses: int


@dataclass(frozen=True)
class BenchmarkSummary:
    instance_count: int
    rows: tuple[DepthSummary, ...]


def _token(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    if isinstance(part, bool) or not isinstance(part, int):
        raise TypeError(f"seed parts must be str or int, got {part!r}")
    return part


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit seed for a grid point; insensitive to other grid points."""
    entropy = [_token(master_seed)] + [_token(p) for p in parts]
    state = np.random.SeedSequence(entropy).generate_state(2)
    return int(state[0]) << 32 | int(state[1])


def default_loss_config(
    graph: MaxCutGraph, epsilon: float = 0.2, alpha: float = 3.0, reg_scale: float = 0.1
) -> LossConfig:
    """Loss settings with the correlator penalty scaled to the instance weights."""
    _, _, w = graph.edge_arrays
    reg = reg_scale * float(np.mean(np.abs(w))) if w.size else 0.0
    return LossConfig(alpha=alpha, reg_weight=reg, epsilon=epsilon)


def optimize_bits(
    graph: MaxCutGraph,
    depth: int,
    seed: int,
    bias: GwBias | None = None,
    loss_cfg: LossConfig | None = None,
    post_process: bool = True,
    max_evals: int = 1000,
) -> tuple[np.ndarray, OptimResult]:
    """Optimize the (warm-)PCE loss on a graph and extract the spin assignment.

    ``bias=None`` runs plain PCE.  The qubit count is the smallest n whose
    order-2 capacity covers the node count; the first ``nodes`` canonical
    strings carry the variables.
    """
    if loss_cfg is None:
        loss_cfg = default_loss_config(graph)
    n = qubits_for_variables(graph.nodes, CORRELATION_ORDER)
    enc = generate_encoding(n, CORRELATION_ORDER, graph.nodes)
    batch = PauliBatch(enc.strings, n)
    ansatz = AnsatzConfig(qubits=n, layers=depth)

    if bias is None:
        def objective(params):
            corr = batch.values(prepare_state(ansatz, params))
            return pce_loss(corr, graph, loss_cfg)
    else:
        def objective(params):
            corr = batch.values(prepare_state(ansatz, params))
            return warm_pce_loss(corr, graph, bias, loss_cfg)

    start = random_start(ansatz.parameter_count, seed)
    result = minimize(objective, start, OptimizerConfig(max_evals=max_evals, seed=seed))
    corr = batch.values(prepare_state(ansatz, result.best_params))
    bits = extract_bits(corr)
    if post_process:
        bits = bit_swap_search(bits, graph)
    return bits, result


def run_single(
    instance: TspInstance,
    instance_id: str,
    method: str,
    depth: int,
    epsilon: float = 0.2,
    seed: int = 0,
    *,
    bias: GwBias | None = None,
    gw_seed: int | None = None,
    roundings: int = 100,
    post_process: bool = True,
    alpha: float = 3.0,
    reg_scale: float = 0.1,
    max_evals: int = 1000,
    optimal_length: float | None = None,
) -> RunRecord:
    """Full TSP pipeline: QUBO, MaxCut reduction, (warm) PCE optimization, decoding."""
    if method not in (METHOD_PCE, METHOD_WARM):
        raise ValueError(f"unknown method {method!r}")
    graph = qubo_to_maxcut(build_tsp_qubo(instance))
    loss_cfg = default_loss_config(graph, epsilon, alpha, reg_scale)
    if method == METHOD_WARM and bias is None:
        bias = gw_bias_for(
            graph, epsilon, roundings, seed if gw_seed is None else gw_seed
        )
    run_bias = bias if method == METHOD_WARM else None
    bits, _ = optimize_bits(graph, depth, seed, run_bias, loss_cfg, post_process, max_evals)
    cut = cut_value(bits, graph)
    decoded = decode_tour(decode_cut(bits, graph), instance.cities)
    if optimal_length is None:
        optimal_length = brute_force_tsp(instance)[1]

    if isinstance(decoded, Tour):
        length = tour_length(decoded, instance)
        return RunRecord(
            method=method,
            instance_id=instance_id,
            depth=depth,
            init_index=0,
            seed=seed,
            post_processed=post_process,
            final_spin_bits=tuple(int(b) for b in bits),
            cut=cut,
            tour=decoded.order,
            infeasible_rows=(),
            infeasible_cols=(),
            tour_length=length,
            ratio=optimal_length / length,
            hit_optimum=abs(length - optimal_length) <= OPTIMUM_TOL,
        )
    return RunRecord(
        method=method,
        instance_id=instance_id,
        depth=depth,
        init_index=0,
        seed=seed,
        post_processed=post_process,
        final_spin_bits=tuple(int(b) for b in bits),
        cut=cut,
        tour=None,
        infeasible_rows=decoded.violated_rows,
        infeasible_cols=decoded.violated_cols,
        tour_length=None,
        ratio=0.0,
        hit_optimum=False,
    )


def run_benchmark(
    instances,
    inits: int = 10,
    depths=(1, 2, 3, 4, 5),
    epsilon: float = 0.2,
    master_seed: int = 0,
    *,
    post_process: bool = True,
    roundings: int = 100,
    alpha: float = 3.0,
    reg_scale: float = 0.1,
    max_evals: int = 1000,
) -> tuple[list[RunRecord], BenchmarkSummary]:
    """PCE-vs-WarmPCE grid over (instance, method, depth, init); GW bias once per instance."""
    instances = list(instances)
    depths = tuple(depths)
    if not instances or not depths or inits < 1:
        raise ValueError("need at least one instance, one depth and one init")
    records: list[RunRecord] = []
    for instance_id, instance in instances:
        _, optimal = brute_force_tsp(instance)
        graph = qubo_to_maxcut(build_tsp_qubo(instance))
        bias = gw_bias_for(
            graph, epsilon, roundings, derive_seed(master_seed, instance_id, "gw-bias")
        )
        for method in (METHOD_PCE, METHOD_WARM):
            for depth in depths:
                for init in range(inits):
                    seed = derive_seed(master_seed, instance_id, method, depth, init)
                    record = run_single(
                        instance,
                        instance_id,
                        method,
                        depth,
                        epsilon,
                        seed,
                        bias=bias if method == METHOD_WARM else None,
                        post_process=post_process,
                        alpha=alpha,
                        reg_scale=reg_scale,
                        max_evals=max_evals,
                        optimal_length=optimal,
                    )
                    records.append(_with_init(record, init))
    return records, summarize_benchmark(records)


def _with_init(record: RunRecord, init_index: int) -> RunRecord:
    from dataclasses import replace

    return replace(record, init_index=init_index)


def _best_length(records) -> float:
    lengths = [r.tour_length for r in records if r.tour_length is not None]
    return min(lengths) if lengths else np.inf


def summarize_benchmark(records) -> BenchmarkSummary:
    """Per-depth means, success rates and best-of-inits comparison; recomputable
    from the records alone."""
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    depths = sorted({r.depth for r in records})
    instance_ids = sorted({r.instance_id for r in records})
    rows = []
    for depth in depths:
        at_depth = [r for r in records if r.depth == depth]
        pce = [r for r in at_depth if r.method == METHOD_PCE]
        warm = [r for r in at_depth if r.method == METHOD_WARM]
        wins = ties = losses = 0
        for instance_id in instance_ids:
            warm_best = _best_length([r for r in warm if r.instance_id == instance_id])
            pce_best = _best_length([r for r in pce if r.instance_id == instance_id])
            if np.isinf(warm_best) and np.isinf(pce_best):
                ties += 1
            elif warm_best < pce_best - OPTIMUM_TOL:
                wins += 1
            elif pce_best < warm_best - OPTIMUM_TOL:
                losses += 1
            else:
                ties += 1
        rows.append(
            DepthSummary(
                depth=depth,
                mean_ratio_pce=_mean_ratio(pce),
                mean_ratio_warm=_mean_ratio(warm),
                success_pce=_success_rate(pce, instance_ids),
                success_warm=_success_rate(warm, instance_ids),
                warm_wins=wins,
                ties=ties,
                warm_losses=losses,
            )
        )
    return BenchmarkSummary(instance_count=len(instance_ids), rows=tuple(rows))


def _mean_ratio(records) -> float:
    return float(np.mean([r.ratio for r in records])) if records else float("nan")


def _success_rate(records, instance_ids) -> float:
    if not records:
        return float("nan")
    hits = sum(
        1
        for instance_id in instance_ids
        if any(r.hit_optimum for r in records if r.instance_id == instance_id)
    )
    return hits / len(instance_ids)


def run_epsilon_sweep(
    graphs,
    inits: int = 5,
    epsilons=(0.05, 0.2, 0.35, 0.5),
    master_seed: int = 0,
    *,
    depth: int = 3,
    roundings: int = 100,
    alpha: float = 3.0,
    reg_scale: float = 0.1,
    max_evals: int = 1000,
) -> list[SweepRecord]:
    """Warm-PCE on raw MaxCut graphs over a grid of bias strengths.

    No bit-swap post-processing; one GW solution per graph, re-regularized per
    epsilon; seeds depend only on (graph, init) so epsilon columns share starts.
    """
    graphs = list(graphs)
    if not graphs or not epsilons or inits < 1:
        raise ValueError("need at least one graph, one epsilon and one init")
    records: list[SweepRecord] = []
    for graph_id, graph in graphs:
        _, max_cut = brute_force_maxcut(graph)
        relaxed = solve_sdp(graph, seed=derive_seed(master_seed, graph_id, "gw-sdp"))
        solution = randomized_rounding(
            relaxed.vectors,
            graph,
            roundings,
            seed=derive_seed(master_seed, graph_id, "gw-rounding"),
        )
        raw_bits = anchored_bits(solution, graph).astype(float)
        for epsilon in epsilons:
            bias = GwBias(regularize_gw_bits(raw_bits, epsilon), epsilon)
            loss_cfg = default_loss_config(graph, epsilon, alpha, reg_scale)
            for init in range(inits):
                seed = derive_seed(master_seed, graph_id, init)
                bits, _ = optimize_bits(
                    graph,
                    depth,
                    seed,
                    bias,
                    loss_cfg,
                    post_process=False,
                    max_evals=max_evals,
                )
                energy = cut_value(bits, graph)
                records.append(
                    SweepRecord(
                        graph_id=graph_id,
                        epsilon=float(epsilon),
                        init_index=init,
                        seed=seed,
                        energy=energy,
                        max_cut=max_cut,
                        ratio=energy / max_cut,
                    )
                )
    return records


def random_tsp_instance(size: int, seed: int) -> TspInstance:
    """Euclidean distances between points drawn uniformly in the unit square."""
    rng = np.random.default_rng(seed)
    points = rng.random((size, 2))
    diff = points[:, None, :] - points[None, :, :]
    return TspInstance(np.sqrt(np.sum(diff * diff, axis=-1)))


def random_complete_graph(size: int, seed: int) -> MaxCutGraph:
    """Complete graph with edge weights uniform in (0, 1]."""
    rng = np.random.default_rng(seed)
    edges = tuple(
        (i, j, float(1.0 - rng.random()))
        for i in range(size)
        for j in range(i + 1, size)
    )
    return MaxCutGraph(nodes=size, edges=edges)


def generate_instances(kind: str, count: int, size: int, seed: int, out_dir) -> list[Path]:
    """Write ``count`` instance files plus a manifest; byte-identical per seed."""
    import json

    if kind not in ("tsp", "graph"):
        raise ValueError(f"kind must be 'tsp' or 'graph', got {kind!r}")
    if count < 1 or size < 1:
        raise ValueError("count and size must be positive")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    instance_seeds = []
    for index in range(count):
        child = derive_seed(seed, kind, index)
        instance_seeds.append(child)
        if kind == "tsp":
            path = out / f"tsp_{index:03d}.json"
            save_tsp_instance(random_tsp_instance(size, child), path)
        else:
            path = out / f"graph_{index:03d}.json"
            save_graph(random_complete_graph(size, child), path)
        paths.append(path)
    manifest = {
        "kind": kind,
        "count": count,
        "size": size,
        "seed": seed,
        "instance_seeds": instance_seeds,
        "files": [p.name for p in paths],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2))
    return paths
