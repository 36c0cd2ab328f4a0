"""Derivative-free trust-region minimizer in the COBYLA style.

Maintains a simplex of n+1 points, fits the linear interpolant of the
objective over it, and steps the best vertex by the trust radius along the
model's descent direction.  Failed steps shrink the radius; ill-conditioned
simplices are rebuilt around the incumbent.  The problem here is
unconstrained, so no constraint machinery is included.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EDGE_SLACK = 3.0  # simplex edges longer than this multiple of rho get pulled in
_THIN_LIMIT = 0.1  # smallest singular value below this multiple of rho is degenerate
_GROWTH = 1.4  # trust radius growth after an accepted step, capped at initial_step


class NonFiniteObjectiveError(RuntimeError):
    """Objective returned NaN/inf; carries the offending parameter vector."""

    def __init__(self, params: np.ndarray, value: float):
        self.params = np.array(params, copy=True)
        self.value = value
        super().__init__(f"objective returned {value} at parameters {self.params.tolist()}")


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    max_evals: int = 1000
    initial_step: float = 0.7
    final_step: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if self.max_evals < 1:
            raise ValueError(f"max_evals must be >= 1, got {self.max_evals}")
        if not 0.0 < self.final_step < self.initial_step:
            raise ValueError(
                f"need 0 < final_step < initial_step, got "
                f"{self.final_step} vs {self.initial_step}"
            )


@dataclass(frozen=True, eq=False)
class OptimResult:
    best_params: np.ndarray
    best_loss: float
    evals_used: int
    trace: tuple[float, ...]


def minimize(objective, start, cfg: OptimizerConfig = OptimizerConfig()) -> OptimResult:
    """Minimize ``objective`` from ``start``; returns the best point ever evaluated.

    The objective is called at most ``cfg.max_evals`` times.  Terminates when
    the trust radius reaches ``cfg.final_step`` or the budget runs out.
    """
    start = np.asarray(start, dtype=float)
    n = start.size
    trace: list[float] = []
    best_x = start.copy()
    best_f = np.inf

    def evaluate(x: np.ndarray) -> float:
        nonlocal best_x, best_f
        if len(trace) >= cfg.max_evals:
            raise _BudgetExhausted
        value = float(objective(x))
        trace.append(value)
        if not np.isfinite(value):
            raise NonFiniteObjectiveError(x, value)
        if value < best_f:
            best_f = value
            best_x = x.copy()
        return value

    rho = cfg.initial_step
    points = np.empty((n + 1, n))
    values = np.empty(n + 1)
    try:
        points[0] = start
        values[0] = evaluate(start)
        for k in range(n):
            points[k + 1] = start + rho * _unit(n, k)
            values[k + 1] = evaluate(points[k + 1])
        while True:
            base = int(np.argmin(values))
            if base != 0:
                points[[0, base]] = points[[base, 0]]
                values[[0, base]] = values[[base, 0]]
            edges = points[1:] - points[0]

            # geometry first: pull in stretched edges, re-span thin directions
            lengths = np.linalg.norm(edges, axis=1)
            if lengths.max() > _EDGE_SLACK * rho:
                j = int(np.argmax(lengths))
                points[j + 1] = points[0] + (rho / lengths[j]) * edges[j]
                values[j + 1] = evaluate(points[j + 1])
                continue
            _, sv, vt = np.linalg.svd(edges)
            if sv[-1] < _THIN_LIMIT * rho:
                probe = rho * vt[-1]
                j = _volume_replacement(edges, probe)
                points[j + 1] = points[0] + probe
                values[j + 1] = evaluate(points[j + 1])
                continue

            gradient = np.linalg.solve(edges, values[1:] - values[0])
            gnorm = float(np.linalg.norm(gradient))
            if gnorm * rho < 1e-15:  # model is flat at this scale
                if rho <= cfg.final_step:
                    break
                rho = max(rho / 2.0, cfg.final_step)
                continue
            step = -(rho / gnorm) * gradient
            candidate = points[0] + step
            f_cand = evaluate(candidate)
            j = _volume_replacement(edges, step)
            points[j + 1] = candidate
            values[j + 1] = f_cand
            if f_cand >= values[0]:  # no progress at this radius
                if rho <= cfg.final_step:
                    break
                rho = max(rho / 2.0, cfg.final_step)
            else:
                rho = min(rho * _GROWTH, cfg.initial_step)
    except _BudgetExhausted:
        pass
    return OptimResult(best_x, best_f, len(trace), tuple(trace))


def _unit(n: int, k: int) -> np.ndarray:
    e = np.zeros(n)
    e[k] = 1.0
    return e


def _volume_replacement(edges: np.ndarray, new_edge: np.ndarray) -> int:
    """Vertex whose replacement by the new point maximizes simplex volume.

    Writing new_edge = sum_j t_j edge_j, swapping edge j for the new edge
    scales the volume by |t_j|, so the largest coefficient wins.
    """
    t = np.linalg.solve(edges.T, new_edge)
    return int(np.argmax(np.abs(t)))


def random_start(param_count: int, seed: int) -> np.ndarray:
    """Uniform angles in [0, 2*pi), deterministic per seed."""
    if param_count < 1:
        raise ValueError(f"param_count must be >= 1, got {param_count}")
    return np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, param_count)
