"""TSP instances, QUBO construction, QUBO-to-MaxCut reduction and exact oracles.

The TSP model fixes city 0 as start/end and uses (N-1)^2 binary variables
x[i,t] (city i at tour position t, both 1-based), flattened city-major:
``var(i, t) = (i-1)*(N-1) + (t-1)``.  Row/column one-hot constraints enter the
QUBO as quadratic penalties.

The MaxCut reduction substitutes x_i = (1 - y_aux * y_i) / 2 with one
auxiliary spin, giving signed edge weights and an affine identity
``objective(x(y)) = const + total_weight - 2 * cut(y)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from pathlib import Path

import numpy as np

_ENUM_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class TspInstance:
    """Symmetric distance matrix over N >= 3 cities, zero diagonal."""

    distances: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"distance matrix must be square, got {d.shape}")
        if d.shape[0] < 3:
            raise ValueError(f"need at least 3 cities, got {d.shape[0]}")
        if not np.allclose(d, d.T, atol=1e-12):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0.0):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(d < 0.0):
            raise ValueError("distances must be nonnegative")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)

    @property
    def cities(self) -> int:
        return self.distances.shape[0]


@dataclass(frozen=True)
class Tour:
    """City visit order starting at city 0; the return edge is implicit."""

    order: tuple[int, ...]

    def __post_init__(self):
        if not self.order or self.order[0] != 0:
            raise ValueError("tour must start at city 0")
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("tour must visit each city exactly once")


@dataclass(frozen=True)
class Infeasibility:
    """One-hot constraint violations of a decoded assignment.

    Rows are city indices (1..N-1), columns tour positions (1..N-1).
    """

    violated_rows: tuple[int, ...]
    violated_cols: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class QuboProblem:
    """Minimize offset + sum_i Q[i,i] x_i + sum_{i<j} Q[i,j] x_i x_j over x in {0,1}^v."""

    coefficients: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        q = np.asarray(self.coefficients, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"coefficient matrix must be square, got {q.shape}")
        if np.any(np.tril(q, -1) != 0.0):
            raise ValueError("coefficients must be upper triangular")
        q = q.copy()
        q.setflags(write=False)
        object.__setattr__(self, "coefficients", q)

    @property
    def size(self) -> int:
        return self.coefficients.shape[0]

    def objective(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.size,):
            raise ValueError(f"expected {self.size} variables, got {x.shape}")
        linear = np.diag(self.coefficients)
        quad = np.triu(self.coefficients, 1)
        return float(self.offset + linear @ x + x @ quad @ x)

    def objective_batch(self, xs: np.ndarray) -> np.ndarray:
        """Objective of every row of the (batch, size) binary matrix ``xs``."""
        xs = np.asarray(xs, dtype=float)
        linear = np.diag(self.coefficients)
        quad = np.triu(self.coefficients, 1)
        return self.offset + xs @ linear + np.einsum("bi,bi->b", xs @ quad, xs)


@dataclass(frozen=True, eq=False)
class MaxCutGraph:
    """Weighted undirected graph; edge weights may be signed.

    ``aux_node``/``var_map``/``const`` are populated by the QUBO reduction:
    node ``var_map[i]`` carries QUBO variable i, ``aux_node`` the auxiliary
    spin, and ``objective_from_cut`` recovers the QUBO value of the
    assignment a cut encodes.
    """

    nodes: int
    edges: tuple[tuple[int, int, float], ...]
    aux_node: int | None = None
    var_map: tuple[int, ...] | None = None
    const: float = 0.0

    def __post_init__(self):
        seen = set()
        normalized = []
        for i, j, w in self.edges:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < self.nodes and 0 <= j < self.nodes):
                raise ValueError(f"edge ({i}, {j}) out of range for {self.nodes} nodes")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            normalized.append((key[0], key[1], float(w)))
        object.__setattr__(self, "edges", tuple(normalized))

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(i, j, w) index/weight arrays, one entry per edge."""
        if not self.edges:
            empty = np.zeros(0, dtype=np.intp)
            return empty, empty.copy(), np.zeros(0)
        i, j, w = zip(*self.edges)
        return (
            np.asarray(i, dtype=np.intp),
            np.asarray(j, dtype=np.intp),
            np.asarray(w, dtype=float),
        )

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def objective_from_cut(self, cut: float) -> float:
        """QUBO objective of any assignment whose cut value is ``cut``."""
        return self.const + self.total_weight - 2.0 * cut


def build_tsp_qubo(
    instance: TspInstance,
    penalty_a: float | None = None,
    penalty_b: float | None = None,
) -> QuboProblem:
    """Penalized QUBO whose minimum over feasible assignments is the tour length.

    Defaults both penalties to 2 * N * max(W), large enough that every
    infeasible assignment costs more than any tour.
    """
    w = instance.distances
    n = instance.cities
    default = 2.0 * n * float(w.max())
    a = default if penalty_a is None else float(penalty_a)
    b = default if penalty_b is None else float(penalty_b)
    if a <= 0 or b <= 0:
        raise ValueError("penalties must be positive")

    size = (n - 1) * (n - 1)
    q = np.zeros((size, size))

    def var(city: int, pos: int) -> int:
        return (city - 1) * (n - 1) + (pos - 1)

    def add(u: int, v: int, coef: float) -> None:
        if u == v:
            q[u, u] += coef
        else:
            q[min(u, v), max(u, v)] += coef

    # travel cost between consecutive positions, plus the fixed-city links
    for t in range(1, n - 1):
        for i in range(1, n):
            for j in range(1, n):
                if i != j:
                    add(var(i, t), var(j, t + 1), w[i, j])
    for i in range(1, n):
        add(var(i, 1), var(i, 1), w[0, i])
        add(var(i, n - 1), var(i, n - 1), w[0, i])

    # one-hot penalties: (sum x - 1)^2 per row (city) and per column (position)
    for i in range(1, n):
        for t in range(1, n):
            add(var(i, t), var(i, t), -a)
            for t2 in range(t + 1, n):
                add(var(i, t), var(i, t2), 2.0 * a)
    for t in range(1, n):
        for i in range(1, n):
            add(var(i, t), var(i, t), -b)
            for i2 in range(i + 1, n):
                add(var(i, t), var(i2, t), 2.0 * b)
    offset = (a + b) * (n - 1)
    return QuboProblem(q, offset)


def qubo_to_maxcut(qubo: QuboProblem) -> MaxCutGraph:
    """Reduce a QUBO to MaxCut with one auxiliary node absorbing linear terms.

    Substituting x_i = (1 - y_aux y_i)/2 gives pair weights Q_ij/4, auxiliary
    weights -(Q_ii/2 + sum_{j!=i} Q_ij/4) and a recorded constant so that
    ``graph.objective_from_cut(cut(y))`` equals the QUBO objective.  Edges
    with exactly zero reduced weight are dropped.
    """
    v = qubo.size
    linear = np.diag(qubo.coefficients)
    quad = np.triu(qubo.coefficients, 1)
    pair_sums = quad.sum(axis=0) + quad.sum(axis=1)
    aux_weights = -(linear / 2.0 + pair_sums / 4.0)

    edges = []
    for i in range(v):
        for j in range(i + 1, v):
            if quad[i, j] != 0.0:
                edges.append((i, j, quad[i, j] / 4.0))
    for i in range(v):
        if aux_weights[i] != 0.0:
            edges.append((i, v, aux_weights[i]))
    const = qubo.offset + float(linear.sum()) / 2.0 + float(quad.sum()) / 4.0
    return MaxCutGraph(
        nodes=v + 1,
        edges=tuple(edges),
        aux_node=v,
        var_map=tuple(range(v)),
        const=const,
    )


def decode_cut(bits, graph: MaxCutGraph) -> np.ndarray:
    """Binary variables from spins: x_i = 1 iff node i is cut away from the aux node."""
    bits = np.asarray(bits)
    if graph.aux_node is None:
        raise ValueError("graph has no auxiliary node; nothing to decode")
    if bits.shape != (graph.nodes,):
        raise ValueError(f"expected {graph.nodes} spins, got {bits.shape}")
    mask = np.arange(graph.nodes) != graph.aux_node
    return (bits[mask] != bits[graph.aux_node]).astype(int)


def decode_tour(x, cities: int) -> Tour | Infeasibility:
    """Tour from a one-hot-feasible assignment, else the violated constraints."""
    x = np.asarray(x)
    size = (cities - 1) * (cities - 1)
    if x.shape != (size,):
        raise ValueError(f"expected {size} variables for {cities} cities, got {x.shape}")
    m = x.reshape(cities - 1, cities - 1)
    bad_rows = tuple(i + 1 for i in range(cities - 1) if m[i, :].sum() != 1)
    bad_cols = tuple(t + 1 for t in range(cities - 1) if m[:, t].sum() != 1)
    if bad_rows or bad_cols:
        return Infeasibility(bad_rows, bad_cols)
    order = [0]
    for t in range(cities - 1):
        order.append(int(np.argmax(m[:, t])) + 1)
    return Tour(tuple(order))


def tour_to_assignment(tour: Tour) -> np.ndarray:
    """One-hot binary assignment of a tour; inverse of decode_tour."""
    n = len(tour.order)
    x = np.zeros((n - 1) * (n - 1), dtype=int)
    for t, city in enumerate(tour.order[1:], start=1):
        x[(city - 1) * (n - 1) + (t - 1)] = 1
    return x


def tour_length(tour: Tour, instance: TspInstance) -> float:
    """Total length including the closing edge back to city 0."""
    if len(tour.order) != instance.cities:
        raise ValueError(
            f"tour has {len(tour.order)} cities, instance has {instance.cities}"
        )
    w = instance.distances
    total = 0.0
    for a, b in zip(tour.order, tour.order[1:]):
        total += w[a, b]
    return float(total + w[tour.order[-1], 0])


def tour_candidates(cities: int):
    """All (N-1)! visit orders of cities 1..N-1, lexicographic."""
    return permutations(range(1, cities))


def brute_force_tsp(instance: TspInstance) -> tuple[Tour, float]:
    """Exact optimum by enumeration; ties resolved to the lexicographically lowest tour."""
    n = instance.cities
    if n > 11:
        raise ValueError(f"refusing to enumerate {n} cities (limit 11)")
    w = instance.distances
    best_len = np.inf
    best_order = None
    for perm in tour_candidates(n):
        length = w[0, perm[0]] + w[perm[-1], 0]
        for a, b in zip(perm, perm[1:]):
            length += w[a, b]
        if length < best_len:
            best_len = length
            best_order = perm
    return Tour((0,) + best_order), float(best_len)


def brute_force_maxcut(graph: MaxCutGraph) -> tuple[np.ndarray, float]:
    """Exact MaxCut over 2^(nodes-1) assignments (node 0 gauge-fixed to +1).

    Returns the spin vector of the first-found optimum and its cut value.
    """
    n = graph.nodes
    if n > 24:
        raise ValueError(f"refusing to enumerate {n} nodes (limit 24)")
    i_arr, j_arr, w_arr = graph.edge_arrays
    best_cut = -np.inf
    best_index = 0
    shifts = np.arange(n - 1, dtype=np.uint64)
    for start in range(0, 1 << (n - 1), _ENUM_CHUNK):
        stop = min(start + _ENUM_CHUNK, 1 << (n - 1))
        codes = np.arange(start, stop, dtype=np.uint64)
        # column k is the side of node k+1; node 0 is always side 0
        sides = np.zeros((codes.size, n), dtype=np.uint8)
        sides[:, 1:] = (codes[:, None] >> shifts) & 1
        crossing = (sides[:, i_arr] ^ sides[:, j_arr]).astype(float)
        cuts = crossing @ w_arr if w_arr.size else np.zeros(codes.size)
        k = int(np.argmax(cuts))
        if cuts[k] > best_cut:
            best_cut = float(cuts[k])
            best_index = start + k
    spins = np.ones(n, dtype=int)
    for node in range(1, n):
        if (best_index >> (node - 1)) & 1:
            spins[node] = -1
    return spins, best_cut


def brute_force_qubo(qubo: QuboProblem) -> tuple[np.ndarray, float]:
    """Exact QUBO minimum over all 2^size assignments (size <= 24)."""
    v = qubo.size
    if v > 24:
        raise ValueError(f"refusing to enumerate {v} variables (limit 24)")
    best_val = np.inf
    best_index = 0
    shifts = np.arange(v, dtype=np.uint64)
    for start in range(0, 1 << v, _ENUM_CHUNK):
        stop = min(start + _ENUM_CHUNK, 1 << v)
        codes = np.arange(start, stop, dtype=np.uint64)
        xs = ((codes[:, None] >> shifts) & 1).astype(float)
        vals = qubo.objective_batch(xs)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val = float(vals[k])
            best_index = start + k
    x = np.array([(best_index >> b) & 1 for b in range(v)], dtype=int)
    return x, best_val


def save_tsp_instance(instance: TspInstance, path) -> None:
    payload = {"n": instance.cities, "distances": instance.distances.tolist()}
    Path(path).write_text(json.dumps(payload, sort_keys=True))


def load_tsp_instance(path) -> TspInstance:
    payload = json.loads(Path(path).read_text())
    d = np.asarray(payload["distances"], dtype=float)
    if d.shape != (payload["n"], payload["n"]):
        raise ValueError(f"distance matrix shape {d.shape} does not match n={payload['n']}")
    return TspInstance(d)


def save_graph(graph: MaxCutGraph, path) -> None:
    payload = {"nodes": graph.nodes, "edges": [[i, j, w] for i, j, w in graph.edges]}
    Path(path).write_text(json.dumps(payload, sort_keys=True))


def load_graph(path) -> MaxCutGraph:
    payload = json.loads(Path(path).read_text())
    edges = tuple((int(i), int(j), float(w)) for i, j, w in payload["edges"])
    return MaxCutGraph(nodes=int(payload["nodes"]), edges=edges)
