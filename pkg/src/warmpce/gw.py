"""Goemans-Williamson MaxCut: low-rank relaxation plus randomized hyperplane rounding.

The relaxation max sum_E W_ij (1 - v_i . v_j) / 2 over unit vectors is solved
by factorizing to rank ceil(sqrt(2 m)) + 1 and running projected gradient
ascent (rows renormalized after every step) from several random starts.  A
rank that large has no spurious local optima on these instance sizes, so the
ascent value matches the SDP optimum to solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, sqrt

import numpy as np

from .encoding import GwBias, regularize_gw_bits
from .problems import MaxCutGraph

_STEP_GROWTH = 1.3
_STEP_MAX = 8.0
_ARMIJO = 1e-4


@dataclass(frozen=True, eq=False)
class SdpResult:
    """Unit-vector relaxation: one row per node, plus the achieved value."""

    vectors: np.ndarray
    value: float
    converged: bool
    iterations: int


@dataclass(frozen=True, eq=False)
class GwSolution:
    """Best rounding of a relaxation: binary sides, cut value, rounding count."""

    vectors: np.ndarray
    best_bits: np.ndarray
    best_cut: float
    roundings: int


def default_rank(nodes: int) -> int:
    return ceil(sqrt(2.0 * nodes)) + 1


def _normalize_rows(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    norms[norms < 1e-12] = 1.0
    return v / norms


def _relaxation_value(v, i, j, w) -> float:
    dots = np.sum(v[i] * v[j], axis=1)
    return float(np.sum(w * (1.0 - dots)) / 2.0)


def _ascend(v, i, j, w, max_iters, grad_tol):
    value = _relaxation_value(v, i, j, w)
    step = 1.0
    for it in range(max_iters):
        grad = np.zeros_like(v)
        np.add.at(grad, i, -0.5 * w[:, None] * v[j])
        np.add.at(grad, j, -0.5 * w[:, None] * v[i])
        grad -= np.sum(grad * v, axis=1, keepdims=True) * v  # tangent projection
        gnorm_sq = float(np.sum(grad * grad))
        if sqrt(gnorm_sq) < grad_tol:
            return v, value, True, it
        while step > 1e-14:
            candidate = _normalize_rows(v + step * grad)
            new_value = _relaxation_value(candidate, i, j, w)
            if new_value > value + _ARMIJO * step * gnorm_sq:
                break
            step /= 2.0
        else:
            return v, value, False, it
        v, value = candidate, new_value
        step = min(step * _STEP_GROWTH, _STEP_MAX)
    return v, value, False, max_iters


def solve_sdp(
    graph: MaxCutGraph,
    rank: int | None = None,
    restarts: int = 5,
    seed: int = 0,
    max_iters: int = 2000,
    grad_tol: float = 1e-7,
) -> SdpResult:
    """Approximate the MaxCut relaxation; best of ``restarts`` random starts."""
    if graph.nodes < 1:
        raise ValueError("graph must have at least one node")
    r = default_rank(graph.nodes) if rank is None else rank
    if r < 2:
        raise ValueError(f"rank must be >= 2, got {r}")
    i, j, w = graph.edge_arrays
    best = None
    for child in np.random.SeedSequence(seed).spawn(max(restarts, 1)):
        rng = np.random.default_rng(child)
        v0 = _normalize_rows(rng.standard_normal((graph.nodes, r)))
        v, value, converged, iters = _ascend(v0, i, j, w, max_iters, grad_tol)
        if best is None or value > best.value:
            best = SdpResult(v, value, converged, iters)
    return best


def randomized_rounding(
    vectors: np.ndarray, graph: MaxCutGraph, count: int, seed: int = 0
) -> GwSolution:
    """Best-of-``count`` hyperplane rounding; bit = 1 on positive inner product."""
    if count < 1:
        raise ValueError(f"need at least one rounding, got {count}")
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape[0] != graph.nodes:
        raise ValueError(
            f"{vectors.shape[0]} vectors for a {graph.nodes}-node graph"
        )
    rng = np.random.default_rng(seed)
    normals = rng.standard_normal((count, vectors.shape[1]))
    sides = vectors @ normals.T > 0.0  # (nodes, count)
    i, j, w = graph.edge_arrays
    crossing = (sides[i, :] != sides[j, :]).astype(float)
    cuts = w @ crossing if w.size else np.zeros(count)
    k = int(np.argmax(cuts))
    return GwSolution(
        vectors=vectors,
        best_bits=sides[:, k].astype(int),
        best_cut=float(cuts[k]),
        roundings=count,
    )


def anchored_bits(solution: GwSolution, graph: MaxCutGraph) -> np.ndarray:
    """GW bits with the anchor node (aux node if present, else node 0) on side 0."""
    anchor = graph.aux_node if graph.aux_node is not None else 0
    bits = solution.best_bits
    return 1 - bits if bits[anchor] == 1 else bits.copy()


def gw_bias_for(
    graph: MaxCutGraph,
    epsilon: float = 0.2,
    roundings: int = 100,
    seed: int = 0,
    rank: int | None = None,
    restarts: int = 5,
) -> GwBias:
    """Relax, round best-of-``roundings``, anchor, regularize: the warm-start bias."""
    sdp_seed, rounding_seed = np.random.SeedSequence(seed).generate_state(2)
    relaxed = solve_sdp(graph, rank=rank, restarts=restarts, seed=int(sdp_seed))
    solution = randomized_rounding(
        relaxed.vectors, graph, roundings, seed=int(rounding_seed)
    )
    bits = anchored_bits(solution, graph)
    return GwBias(regularize_gw_bits(bits.astype(float), epsilon), epsilon)
