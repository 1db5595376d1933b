import math

import numpy as np
import pytest

from graphsense.constructors import g4_graph, path_graph
from graphsense.general import (algorithm1, algorithm1_trace,
                                algorithm1_with_agents, custom_leaf_construction,
                                leaf_group_trace)
from graphsense.graphs import Graph, radius_and_center
from graphsense.kernels import (BINARY_EXPANSION, CompleteKernelSpec,
                                kernel_row_count)
from graphsense.matrices import apply_matrix, check_feasibility
from graphsense.recovery import sequential_decode

from helpers import random_connected_graph

BIN = CompleteKernelSpec(BINARY_EXPANSION)


def star(n: int) -> Graph:
    return Graph.from_edges(n, [(0, i) for i in range(1, n)])


class TestAlgorithm1:
    def test_star_trace(self):
        matrix, plan = algorithm1_trace(star(5), 1, BIN)
        assert len(plan.groups) == 1
        assert plan.groups[0].leaves == (1, 2, 3, 4)
        assert plan.groups[0].hub == (0,)
        assert plan.final_node == 0
        assert matrix.m == math.ceil(math.log2(5)) + 1 + 1 == 5

    def test_path_bound(self):
        g = path_graph(4)
        a = algorithm1(g, 1, BIN)
        r, _ = radius_and_center(g)
        assert a.m <= r * math.ceil(math.log2(5)) + r + 1

    def test_single_node(self):
        a = algorithm1(Graph.from_edges(1, []), 1, BIN)
        assert a.rows == ((0,),)

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError, match="disconnected"):
            algorithm1(Graph.from_edges(3, [(0, 1)]), 1, BIN)

    @pytest.mark.parametrize("seed", range(12))
    def test_feasible_and_bounded(self, seed):
        g = random_connected_graph(10 + 5 * (seed % 5), seed % 20, seed)
        a, plan = algorithm1_trace(g, 1, BIN)
        ok, bad = check_feasibility(g, a)
        assert ok, f"row {bad} infeasible"
        r, _ = radius_and_center(g)
        f = math.ceil(math.log2(g.n + 1))
        assert a.m <= r * f + r + 1
        assert len(plan.groups) <= max(r, 1)

    @pytest.mark.parametrize("seed", range(10))
    def test_groups_partition_nodes(self, seed):
        g = random_connected_graph(20, 10, seed)
        _, plan = algorithm1_trace(g, 1, BIN)
        seen: set[int] = set()
        for rec in plan.groups:
            assert not (seen & set(rec.leaves))
            seen |= set(rec.leaves)
        assert seen | {plan.final_node} == set(range(g.n))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_annotation_snapshots_recorded(self, seed):
        g = random_connected_graph(12, 4, seed)
        _, plan = algorithm1_trace(g, 1, BIN)
        assert all(rec.annotations is not None for rec in plan.groups)

    @pytest.mark.parametrize("seed", range(6))
    def test_end_to_end_one_sparse(self, seed):
        g = random_connected_graph(12 + 8 * seed, 3 * seed, seed)
        a = algorithm1(g, 1, BIN)
        rng = np.random.default_rng(seed)
        for idx in range(g.n):
            x = np.zeros(g.n)
            x[idx] = rng.standard_normal() + 2.0
            res = sequential_decode(a, apply_matrix(a, x))
            assert np.allclose(res.x_hat, x, atol=1e-6), idx

    def test_radius_strictly_decreases_across_iterations(self):
        g = random_connected_graph(40, 10, 3)
        _, plan = algorithm1_trace(g, 1, BIN)
        radii = [rec.radius for rec in plan.groups]
        assert all(b < a for a, b in zip(radii, radii[1:]))


class TestTraceOnly:
    @pytest.mark.parametrize("seed", range(5))
    def test_counts_match_materialized(self, seed):
        g = random_connected_graph(40, 25, seed)
        a, plan_full = algorithm1_trace(g, 1, BIN)
        plan = leaf_group_trace(g)
        sizes = [len(rec.leaves) for rec in plan.groups]
        count = sum(math.ceil(math.log2(s + 1)) for s in sizes) + len(sizes) + 1
        assert count == a.m
        assert [r.leaves for r in plan.groups] == [r.leaves for r in plan_full.groups]


class TestCustomKernels:
    def test_singleton_groups(self):
        g = star(6)
        matrix, plan = custom_leaf_construction(
            g, lambda i, s: None)
        # five leaves measured directly plus the final center row
        assert matrix.m == 6
        assert all(len(r) == 1 for r in matrix.rows)

    def test_mixed_factory(self):
        g = random_connected_graph(30, 12, 1)

        def factory(index, size):
            if size < 4:
                return None
            from graphsense.kernels import complete_kernel
            spec = CompleteKernelSpec(
                "bernoulli-half", row_count_override=math.ceil(size / 2),
                rng_seed=index)
            return complete_kernel(1, size, spec)

        matrix, plan = custom_leaf_construction(g, factory)
        ok, bad = check_feasibility(g, matrix)
        assert ok, bad


class TestAgents:
    def test_identical_when_y_covers_hubs(self):
        g = random_connected_graph(18, 6, 4)
        base = algorithm1(g, 1, BIN)
        agents = algorithm1_with_agents(g, 1, range(g.n), BIN)
        assert agents.rows == base.rows

    def test_path_every_row_contains_agent(self):
        g = path_graph(5)
        a = algorithm1_with_agents(g, 1, {0}, BIN)
        assert all(0 in row for row in a.rows)

    def test_star_leaf_agent(self):
        a = algorithm1_with_agents(star(5), 1, {1}, BIN)
        assert all(1 in row for row in a.rows)

    @pytest.mark.parametrize("seed", range(10))
    def test_rows_meet_agents_and_bound(self, seed):
        g = random_connected_graph(16 + seed, 5, seed)
        rng = np.random.default_rng(seed)
        y = {int(v) for v in rng.choice(g.n, size=2, replace=False)}
        a = algorithm1_with_agents(g, 1, y, BIN)
        assert all(y & set(row) for row in a.rows)
        ok, bad = check_feasibility(g, a)
        assert ok, bad
        r, _ = radius_and_center(g)
        f = math.ceil(math.log2(g.n + 1))
        assert a.m <= r * f + 3 * r + 2

    @pytest.mark.parametrize("seed", range(6))
    def test_end_to_end_with_agents(self, seed):
        g = random_connected_graph(14, 4, seed)
        y = {seed % g.n}
        a = algorithm1_with_agents(g, 1, y, BIN)
        rng = np.random.default_rng(seed + 100)
        for idx in range(g.n):
            x = np.zeros(g.n)
            x[idx] = rng.standard_normal() + 1.5
            res = sequential_decode(a, apply_matrix(a, x))
            assert np.allclose(res.x_hat, x, atol=1e-6), idx

    def test_empty_agent_set_rejected(self):
        with pytest.raises(ValueError):
            algorithm1_with_agents(path_graph(4), 1, set(), BIN)
