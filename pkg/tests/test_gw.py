"""Tests for the Goemans-Williamson relaxation, rounding and bias construction."""

import numpy as np
import pytest

from warmpce.encoding import cut_value
from warmpce.gw import (
    anchored_bits,
    default_rank,
    gw_bias_for,
    randomized_rounding,
    solve_sdp,
)
from warmpce.problems import MaxCutGraph, brute_force_maxcut


def random_graph(nodes, seed):
    rng = np.random.default_rng(seed)
    edges = tuple(
        (i, j, float(1.0 - rng.random()))
        for i in range(nodes)
        for j in range(i + 1, nodes)
    )
    return MaxCutGraph(nodes=nodes, edges=edges)


TRIANGLE = MaxCutGraph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))


class TestSolveSdp:
    def test_single_edge_antipodal(self):
        graph = MaxCutGraph(2, ((0, 1, 1.0),))
        res = solve_sdp(graph, seed=0)
        assert res.value == pytest.approx(1.0, abs=1e-6)
        assert np.dot(res.vectors[0], res.vectors[1]) == pytest.approx(-1.0, abs=1e-6)

    def test_triangle_120_degrees(self):
        res = solve_sdp(TRIANGLE, seed=3)
        assert res.value == pytest.approx(2.25, abs=1e-4)
        for i in range(3):
            for j in range(i + 1, 3):
                assert np.dot(res.vectors[i], res.vectors[j]) == pytest.approx(
                    -0.5, abs=1e-3
                )

    def test_unit_rows(self):
        res = solve_sdp(random_graph(10, 5), seed=5)
        norms = np.linalg.norm(res.vectors, axis=1)
        assert np.max(np.abs(norms - 1.0)) < 1e-8

    def test_relaxation_dominates_brute_force(self):
        for seed in range(3):
            graph = random_graph(12, 100 + seed)
            _, opt = brute_force_maxcut(graph)
            res = solve_sdp(graph, seed=seed)
            assert res.value >= opt - 1e-6

    def test_deterministic(self):
        graph = random_graph(8, 2)
        a = solve_sdp(graph, seed=9)
        b = solve_sdp(graph, seed=9)
        assert np.array_equal(a.vectors, b.vectors)
        assert a.value == b.value

    def test_default_rank(self):
        assert default_rank(17) == 7  # ceil(sqrt(34)) + 1


class TestRandomizedRounding:
    def test_antipodal_pair_always_cut(self):
        graph = MaxCutGraph(2, ((0, 1, 2.5),))
        vectors = np.array([[1.0, 0.0], [-1.0, 0.0]])
        sol = randomized_rounding(vectors, graph, count=1, seed=0)
        assert sol.best_cut == 2.5
        assert sorted(sol.best_bits.tolist()) == [0, 1]

    def test_identical_vectors_never_cut(self):
        graph = MaxCutGraph(3, ((0, 1, 1.0), (1, 2, 1.0)))
        vectors = np.tile(np.array([[0.6, 0.8]]), (3, 1))
        sol = randomized_rounding(vectors, graph, count=50, seed=1)
        assert sol.best_cut == 0.0

    def test_triangle_best_of_100_is_optimal(self):
        res = solve_sdp(TRIANGLE, seed=3)
        sol = randomized_rounding(res.vectors, TRIANGLE, count=100, seed=7)
        assert sol.best_cut == pytest.approx(2.0, abs=1e-9)

    def test_best_cut_consistent_with_bits(self):
        graph = random_graph(9, 4)
        res = solve_sdp(graph, seed=4)
        sol = randomized_rounding(res.vectors, graph, count=20, seed=4)
        spins = 1 - 2 * sol.best_bits
        assert cut_value(spins, graph) == pytest.approx(sol.best_cut, abs=1e-9)

    def test_rounded_cut_never_exceeds_optimum(self):
        for seed in range(3):
            graph = random_graph(10, 200 + seed)
            _, opt = brute_force_maxcut(graph)
            res = solve_sdp(graph, seed=seed)
            sol = randomized_rounding(res.vectors, graph, count=100, seed=seed)
            assert sol.best_cut <= opt + 1e-9
            assert res.value >= sol.best_cut - 1e-9

    def test_seed_determinism(self):
        graph = random_graph(8, 6)
        res = solve_sdp(graph, seed=6)
        a = randomized_rounding(res.vectors, graph, count=30, seed=13)
        b = randomized_rounding(res.vectors, graph, count=30, seed=13)
        assert np.array_equal(a.best_bits, b.best_bits)
        assert a.best_cut == b.best_cut

    def test_best_of_count_monotone_on_prefix(self):
        graph = random_graph(10, 8)
        res = solve_sdp(graph, seed=8)
        one = randomized_rounding(res.vectors, graph, count=1, seed=21)
        hundred = randomized_rounding(res.vectors, graph, count=100, seed=21)
        assert hundred.best_cut >= one.best_cut

    def test_count_must_be_positive(self):
        graph = random_graph(4, 1)
        with pytest.raises(ValueError):
            randomized_rounding(np.eye(4), graph, count=0, seed=0)


class TestGwBias:
    def test_epsilon_half_neutralizes(self):
        graph = random_graph(8, 3)
        bias = gw_bias_for(graph, epsilon=0.5, roundings=10, seed=0)
        assert np.all(bias.regularized_bits == 0.5)
        assert np.all(bias.edge_multipliers(graph) == 1.0)

    def test_two_node_composition(self):
        graph = MaxCutGraph(2, ((0, 1, 1.0),))
        bias = gw_bias_for(graph, epsilon=0.2, roundings=10, seed=0)
        assert bias.regularized_bits.tolist() == [0.2, 0.8]
        assert bias.edge_multipliers(graph)[0] == pytest.approx(1.6)

    def test_anchor_node_on_side_zero(self):
        graph = random_graph(9, 12)
        res = solve_sdp(graph, seed=1)
        sol = randomized_rounding(res.vectors, graph, count=10, seed=1)
        bits = anchored_bits(sol, graph)
        assert bits[0] == 0  # no aux node: node 0 anchors

    def test_quality_on_seeded_batch(self):
        # best-of-100 should reach the GW guarantee on nearly all small instances
        good = 0
        for seed in range(5):
            graph = random_graph(12, 300 + seed)
            _, opt = brute_force_maxcut(graph)
            res = solve_sdp(graph, seed=seed)
            sol = randomized_rounding(res.vectors, graph, count=100, seed=seed)
            if sol.best_cut >= 0.878 * opt:
                good += 1
        assert good >= 4
