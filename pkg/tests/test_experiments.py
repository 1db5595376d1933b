import math

import numpy as np
import pytest

from graphsense.experiments import (build_experiment2_system,
                                    er_partition_experiment, experiment1,
                                    experiment2)


class TestExperiment1:
    def test_small_run_structure(self):
        records = experiment1(n=50, steps=2, edges_per_step=10, trials=2, seed=1)
        assert len(records) == 2 * 3
        steps = [r.params["step"] for r in records]
        assert steps == [0, 1, 2, 0, 1, 2]
        for r in records:
            assert r.experiment == "exp1"
            assert r.params["edges"] == 49 + 10 * r.params["step"]

    def test_count_formula_recomputed_from_groups(self):
        records = experiment1(n=60, steps=1, edges_per_step=15, trials=1, seed=3)
        for r in records:
            sizes = r.metrics["groups"]
            q = len(sizes) + 1
            expected = sum(math.ceil(math.log2(s + 1)) for s in sizes) + q
            assert r.metrics["measurements"] == expected

    def test_count_below_bound(self):
        records = experiment1(n=80, steps=2, edges_per_step=20, trials=2, seed=5)
        for r in records:
            assert r.metrics["measurements"] <= r.metrics["bound"]

    def test_deterministic(self):
        a = experiment1(n=40, steps=1, edges_per_step=5, trials=1, seed=7)
        b = experiment1(n=40, steps=1, edges_per_step=5, trials=1, seed=7)
        assert [r.metrics for r in a] == [r.metrics for r in b]


class TestExperiment2:
    def test_system_shape(self):
        matrix, hub_rows = build_experiment2_system(n=120, m=2, seed=2)
        assert matrix.n == 120
        assert len(hub_rows) == 2  # the first two groups go through hubs
        groups = matrix.decode_plan.groups
        covered = set()
        for grp in groups:
            covered |= set(grp.target)
        assert covered == set(range(120))
        for grp in groups[:2]:
            assert grp.hub_row is not None
            assert len(grp.kernel) == math.ceil(len(grp.target) / 2)
        for grp in groups[2:]:  # everything else is measured directly
            assert grp.hub_row is None

    def test_errors_separate_the_methods(self):
        records = experiment2(n=80, k_sweep=(2,), trials=4, seed=4, ba_m=2)
        robust = [r.metrics["err_robust"] for r in records]
        plain = [r.metrics["err_plain"] for r in records]
        assert max(robust) <= 1e-6
        assert min(plain) >= 0.05

    def test_zero_sparsity(self):
        records = experiment2(n=60, k_sweep=(0,), trials=2, seed=6, ba_m=2)
        for r in records:
            assert r.metrics["err_robust"] <= 1e-8
            # plain decoding absorbs the hub error into the estimate
            assert r.metrics["err_plain"] >= 0.0

    def test_noise_run_keeps_robust_ahead(self):
        noisy = experiment2(n=80, k_sweep=(2,), trials=4, noise_sigma=0.04,
                            seed=4, ba_m=2)
        mean_robust = np.mean([r.metrics["err_robust"] for r in noisy])
        mean_plain = np.mean([r.metrics["err_plain"] for r in noisy])
        assert mean_robust < mean_plain


class TestErPartitionExperiment:
    def test_mostly_valid_at_moderate_scale(self):
        records = er_partition_experiment(n=400, beta=3.0, trials=10, seed=8)
        valid = sum(1 for r in records if r.metrics["valid"])
        assert valid >= 8
        assert all(r.params["groups"] == 2 for r in records)
