import math

import numpy as np
import pytest

from graphsense.kernels import (BERNOULLI_HALF, BERNOULLI_ONES_ROW,
                                BINARY_EXPANSION, CompleteKernelSpec,
                                complete_kernel, default_kernel_spec,
                                derive_seed, kernel_row_count, spec_for_group)
from graphsense.verify import columns_2k_independent


class TestBinaryExpansion:
    def test_seven_targets(self):
        f = complete_kernel(1, 7, CompleteKernelSpec(BINARY_EXPANSION))
        assert f.shape == (3, 7)
        # column j holds the binary digits of j+1, most significant first
        assert f[:, 4].tolist() == [1, 0, 1]

    def test_single_target(self):
        f = complete_kernel(1, 1, CompleteKernelSpec(BINARY_EXPANSION))
        assert f.tolist() == [[1]]

    def test_rejects_k_above_one(self):
        with pytest.raises(ValueError, match="1-sparse"):
            complete_kernel(2, 5, CompleteKernelSpec(BINARY_EXPANSION))

    @pytest.mark.parametrize("n_t", [2, 3, 15, 16, 100, 1024])
    def test_columns_distinct_and_nonzero(self, n_t):
        f = complete_kernel(1, n_t, CompleteKernelSpec(BINARY_EXPANSION))
        assert f.shape[0] == math.ceil(math.log2(n_t + 1))
        cols = {tuple(c) for c in f.T}
        assert len(cols) == n_t
        assert all(any(c) for c in f.T)


class TestBernoulli:
    def test_default_row_count(self):
        spec = CompleteKernelSpec(BERNOULLI_HALF, rng_seed=7)
        assert kernel_row_count(spec, 2, 20) == math.ceil(8 * math.log(10)) + 1 == 20
        f = complete_kernel(2, 20, spec)
        assert f.shape == (20, 20)

    def test_every_2k_columns_independent_after_reseed(self):
        spec = CompleteKernelSpec(BERNOULLI_HALF, rng_seed=7)
        f = complete_kernel(2, 20, spec)
        for bump in range(8):  # reseed policy: bump the seed on oracle failure
            ok, _ = columns_2k_independent(f, 2)
            if ok:
                break
            f = complete_kernel(2, 20, CompleteKernelSpec(BERNOULLI_HALF,
                                                          rng_seed=7 + bump + 1))
        assert ok

    def test_deterministic_per_seed(self):
        spec = CompleteKernelSpec(BERNOULLI_HALF, rng_seed=123)
        a = complete_kernel(2, 12, spec)
        b = complete_kernel(2, 12, spec)
        assert np.array_equal(a, b)

    def test_no_zero_rows_or_columns(self):
        for seed in range(30):
            f = complete_kernel(1, 2, CompleteKernelSpec(
                BERNOULLI_HALF, row_count_override=3, rng_seed=seed))
            assert f.any(axis=1).all() and f.any(axis=0).all()

    def test_ones_row_variant(self):
        f = complete_kernel(2, 9, CompleteKernelSpec(BERNOULLI_ONES_ROW,
                                                     rng_seed=5))
        assert (f[-1] == 1).all()

    def test_row_count_override(self):
        spec = CompleteKernelSpec(BERNOULLI_HALF, row_count_override=6,
                                  rng_seed=1)
        assert complete_kernel(3, 10, spec).shape == (6, 10)


class TestSpecPlumbing:
    def test_default_spec_kind_switches_on_k(self):
        assert default_kernel_spec(1).kind == BINARY_EXPANSION
        assert default_kernel_spec(2).kind == BERNOULLI_HALF

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            CompleteKernelSpec("fourier")

    def test_derive_seed_deterministic_and_distinct(self):
        assert derive_seed(42, 1) == derive_seed(42, 1)
        assert derive_seed(42, 1) != derive_seed(42, 2)

    def test_spec_for_group_changes_stream(self):
        spec = CompleteKernelSpec(BERNOULLI_HALF, rng_seed=9)
        a = complete_kernel(2, 10, spec_for_group(spec, 0))
        b = complete_kernel(2, 10, spec_for_group(spec, 1))
        assert not np.array_equal(a, b)

    def test_empty_target(self):
        f = complete_kernel(1, 0, CompleteKernelSpec(BINARY_EXPANSION))
        assert f.shape == (0, 0)
