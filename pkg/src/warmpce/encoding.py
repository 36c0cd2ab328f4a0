"""Pauli correlation encoding: string generation, loss functions, bit extraction.

Each binary variable is carried by the sign of one k-body Pauli correlator.
The canonical string order enumerates qubit-index combinations
lexicographically and emits the Z, X, Y string for each combination before
moving to the next, truncating tail-first at the requested count.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .problems import MaxCutGraph


@dataclass(frozen=True)
class PceEncoding:
    """An ordered set of same-order Pauli strings encoding one variable each."""

    qubits: int
    order: int
    strings: tuple[str, ...]


@dataclass(frozen=True)
class LossConfig:
    """Loss hyperparameters: tanh sharpness, correlator penalty weight, GW bias strength.

    The default sharpness keeps the edge terms partially saturated; with a
    near-linear tanh the coupling term degenerates into a spectral objective
    and the GW bias stops steering the optimum.
    """

    alpha: float = 3.0
    reg_weight: float = 0.0
    epsilon: float = 0.2

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.reg_weight < 0:
            raise ValueError(f"reg_weight must be nonnegative, got {self.reg_weight}")
        if not 0.0 < self.epsilon <= 0.5:
            raise ValueError(f"epsilon must be in (0, 0.5], got {self.epsilon}")


@dataclass(frozen=True, eq=False)
class GwBias:
    """Regularized GW bits; edges whose endpoints the GW cut separates get up-weighted."""

    regularized_bits: np.ndarray
    epsilon: float

    def edge_multipliers(self, graph: MaxCutGraph) -> np.ndarray:
        """Per-edge factor 1 + |c_i - c_j|, aligned with graph.edges; lies in [1, 2]."""
        c = np.asarray(self.regularized_bits, dtype=float)
        if c.shape != (graph.nodes,):
            raise ValueError(f"bias has {c.shape} bits, graph has {graph.nodes} nodes")
        i, j, _ = graph.edge_arrays
        return 1.0 + np.abs(c[i] - c[j])


def encoding_capacity(n: int, k: int) -> int:
    """Maximum variable count for n qubits at correlation order k: 3 * C(n, k)."""
    return 3 * comb(n, k)


def qubits_for_variables(m: int, k: int = 2) -> int:
    """Smallest qubit count whose order-k capacity reaches m variables."""
    n = k
    while encoding_capacity(n, k) < m:
        n += 1
    return n


def generate_encoding(n: int, k: int, m: int) -> PceEncoding:
    """The first m strings of the canonical order-k encoding on n qubits."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 1:
        raise ValueError(f"need at least one string, got m={m}")
    cap = encoding_capacity(n, k)
    if m > cap:
        raise ValueError(f"{m} variables exceed capacity {cap} for n={n}, k={k}")
    strings = []
    for combo in combinations(range(n), k):
        for letter in "ZXY":
            chars = ["I"] * n
            for q in combo:
                chars[q] = letter
            strings.append("".join(chars))
            if len(strings) == m:
                return PceEncoding(n, k, tuple(strings))
    raise AssertionError("unreachable: capacity checked above")


def extract_bits(correlators) -> np.ndarray:
    """Signs of the correlators as spins; an exact zero maps to +1."""
    c = np.asarray(correlators, dtype=float)
    return np.where(c >= 0.0, 1, -1)


def _weighted_loss(correlators, graph, multipliers, cfg: LossConfig) -> float:
    c = np.asarray(correlators, dtype=float)
    if c.shape != (graph.nodes,):
        raise ValueError(f"got {c.shape} correlators for {graph.nodes} nodes")
    i, j, w = graph.edge_arrays
    t = np.tanh(cfg.alpha * c)
    coupling = float(np.sum(w * multipliers * t[i] * t[j]))
    return coupling + cfg.reg_weight * float(np.sum(c * c))


def pce_loss(correlators, graph: MaxCutGraph, cfg: LossConfig) -> float:
    """sum_E W_ij tanh(a c_i) tanh(a c_j) + reg_weight * sum_i c_i^2 (minimize)."""
    return _weighted_loss(correlators, graph, 1.0, cfg)


def warm_pce_loss(
    correlators, graph: MaxCutGraph, bias: GwBias, cfg: LossConfig
) -> float:
    """PCE loss with each edge scaled by 1 + |c_i - c_j| from the GW bias.

    At epsilon = 0.5 every multiplier is exactly 1 and this coincides
    bit-for-bit with pce_loss.
    """
    return _weighted_loss(correlators, graph, bias.edge_multipliers(graph), cfg)


def regularize_gw_bits(raw_bits, epsilon: float) -> np.ndarray:
    """Clamp GW bits away from {0, 1}: below eps -> eps, above 1-eps -> 1-eps,
    floor in between."""
    if not 0.0 < epsilon <= 0.5:
        raise ValueError(f"epsilon must be in (0, 0.5], got {epsilon}")
    c = np.asarray(raw_bits, dtype=float)
    if np.any(c < 0.0) or np.any(c > 1.0):
        raise ValueError("raw GW bits must lie in [0, 1]")
    return np.where(c < epsilon, epsilon, np.where(c > 1.0 - epsilon, 1.0 - epsilon, np.floor(c)))


def cut_value(bits, graph: MaxCutGraph) -> float:
    """Total weight of edges whose endpoints sit on opposite sides."""
    bits = np.asarray(bits)
    if bits.shape != (graph.nodes,):
        raise ValueError(f"got {bits.shape} spins for {graph.nodes} nodes")
    i, j, w = graph.edge_arrays
    return float(np.sum(w[bits[i] != bits[j]]))


def bit_swap_search(bits, graph: MaxCutGraph) -> np.ndarray:
    """Greedy best-improvement single-flip hill climbing on the cut value.

    Flipping node v changes the cut by sum of W_e * b_i * b_j over edges at v;
    the largest strictly positive gain (lowest index on ties) is taken until
    none remains, so the result is a 1-flip local optimum.
    """
    bits = np.array(bits, dtype=int, copy=True)
    if bits.shape != (graph.nodes,):
        raise ValueError(f"got {bits.shape} spins for {graph.nodes} nodes")
    i, j, w = graph.edge_arrays
    while True:
        gains = np.zeros(graph.nodes)
        edge_prod = w * bits[i] * bits[j]
        np.add.at(gains, i, edge_prod)
        np.add.at(gains, j, edge_prod)
        v = int(np.argmax(gains))
        if gains[v] <= 0.0:
            return bits
        bits[v] = -bits[v]
