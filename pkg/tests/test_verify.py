import numpy as np
import pytest

from graphsense.constructors import line_matrix
from graphsense.verify import (columns_2k_independent,
                               exhaustive_identifiability, integer_rank,
                               nsp_verify, rational_null_basis)


class TestIntegerRank:
    def test_identity(self):
        assert integer_rank(np.eye(4, dtype=int).tolist()) == 4

    def test_dependent_rows(self):
        assert integer_rank([[1, 2], [2, 4], [0, 1]]) == 2

    def test_zero(self):
        assert integer_rank([[0, 0], [0, 0]]) == 0

    def test_matches_numpy_on_random(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            m = rng.integers(-3, 4, size=(rng.integers(1, 7), rng.integers(1, 7)))
            assert integer_rank(m.tolist()) == np.linalg.matrix_rank(m)


class TestColumns2kIndependent:
    def test_identity(self):
        ok, bad = columns_2k_independent(np.eye(5, dtype=int), 2)
        assert ok and bad is None

    def test_line_matrix_k3(self):
        ok, _ = columns_2k_independent(line_matrix(11, 3).to_dense(), 3)
        assert ok

    def test_duplicate_column_reported(self):
        a = np.array([[1, 1, 0], [0, 0, 1]])
        ok, bad = columns_2k_independent(a, 1)
        assert not ok and bad == (0, 1)

    def test_guard(self):
        with pytest.raises(ValueError, match="guard"):
            columns_2k_independent(np.eye(100, dtype=int), 10, guard=10)

    def test_too_few_rows(self):
        ok, bad = columns_2k_independent(np.ones((1, 4), dtype=int), 1)
        assert not ok


class TestNullBasis:
    def test_dimension(self):
        basis = rational_null_basis(line_matrix(11, 3).to_dense())
        assert len(basis) == 11 - integer_rank(line_matrix(11, 3).to_dense().tolist())

    def test_vectors_annihilate(self):
        a = line_matrix(9, 2).to_dense()
        for vec in rational_null_basis(a):
            prod = [sum(int(a[i, j]) * vec[j] for j in range(a.shape[1]))
                    for i in range(a.shape[0])]
            assert all(v == 0 for v in prod)


class TestExhaustiveIdentifiability:
    def test_identity(self):
        assert exhaustive_identifiability(np.eye(4, dtype=int), 2)

    def test_zero_column(self):
        a = np.array([[1, 0, 0], [0, 1, 0]])
        assert not exhaustive_identifiability(a, 1)

    def test_cross_oracle_agreement(self):
        rng = np.random.default_rng(2024)
        for trial in range(200):
            n = int(rng.integers(3, 10))
            m = int(rng.integers(2, 9))
            k = int(rng.integers(1, 3))
            a = (rng.random((m, n)) < 0.45).astype(int)
            ok_cols, _ = columns_2k_independent(a, k)
            assert ok_cols == exhaustive_identifiability(a, k), (a, k)


class TestNsp:
    def test_full_rank_square_vacuous(self):
        ok, ratio = nsp_verify(np.eye(4), 2)
        assert ok and ratio == 0.0

    def test_sign_difference_matrix_saturates(self):
        ok, ratio = nsp_verify(np.array([[1.0, -1.0]]), 1)
        assert not ok
        assert ratio == pytest.approx(0.5, abs=1e-9)

    def test_line_matrix_certified(self):
        ok, ratio = nsp_verify(line_matrix(12, 2).to_dense(), 2)
        assert ok
        assert ratio < 0.5

    def test_nsp_implies_identifiability(self):
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(60):
            n = int(rng.integers(3, 8))
            m = int(rng.integers(2, 7))
            a = (rng.random((m, n)) < 0.5).astype(int)
            ok_nsp, _ = nsp_verify(a, 1)
            if ok_nsp:
                checked += 1
                ok_cols, _ = columns_2k_independent(a, 1)
                assert ok_cols
        assert checked  # the implication was exercised

    def test_guard(self):
        with pytest.raises(ValueError, match="guard"):
            nsp_verify(np.eye(30), 10, guard=100)
