"""Ground-truth identifiability and null-space-property certification for
desk-scale matrices.

Rank decisions use exact integer arithmetic (fraction-free elimination), so
the oracles carry no numerical doubt; only the NSP check solves floating
LPs, and there the quantity is an inequality with an explicit margin.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .simplex import solve_min_standard

__all__ = [
    "integer_rank",
    "rational_null_basis",
    "columns_2k_independent",
    "exhaustive_identifiability",
    "nsp_verify",
]


def _as_int_rows(a) -> list[list[int]]:
    if hasattr(a, "to_dense"):
        a = a.to_dense()
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if not np.allclose(arr, np.round(arr)):
        raise ValueError("exact rank requires integer entries")
    return [[int(round(x)) for x in row] for row in arr]


def integer_rank(mat: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix (Bareiss fraction-free elimination)."""
    m = [list(map(int, row)) for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    rank = 0
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            mic = m[i][c]
            mrc = m[r][c]
            if mic == 0:
                continue
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, cols):
                row_i[j] = (mrc * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = m[r][c]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def rational_null_basis(mat) -> list[list[Fraction]]:
    """Exact basis of the null space of an integer matrix, one vector per
    free column of the reduced row echelon form."""
    rows = [[Fraction(x) for x in row] for row in _as_int_rows(mat)]
    n = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -rows[ri][fc]
        basis.append(vec)
    return basis


def columns_2k_independent(a, k: int, guard: int = 10 ** 7,
                           ) -> tuple[bool, tuple[int, ...] | None]:
    """True iff every set of 2k columns is linearly independent (exact).

    Returns the lexicographically first dependent column set otherwise.
    """
    rows = _as_int_rows(a)
    n = len(rows[0]) if rows else 0
    size = min(2 * k, n)
    if size == 0:
        return True, None
    if math.comb(n, size) > guard:
        raise ValueError(f"C({n},{size}) submatrices exceed the enumeration guard")
    if len(rows) < size:
        return False, tuple(range(size))
    for cols in combinations(range(n), size):
        sub = [[row[c] for c in cols] for row in rows]
        if integer_rank(sub) < size:
            return False, cols
    return True, None


def exhaustive_identifiability(a, k: int, guard: int = 10 ** 7) -> bool:
    """Independent identifiability oracle: no nonzero null vector has 2k or
    fewer nonzeros.  Decided from an exact null basis N by checking, for
    every candidate support T, whether the rows of N outside T lose rank."""
    rows = _as_int_rows(a)
    n = len(rows[0]) if rows else 0
    basis = rational_null_basis(rows)
    d = len(basis)
    if d == 0:
        return True
    size = min(2 * k, n)
    if size >= n:
        return False  # whole support available, any null vector violates
    if math.comb(n, size) > guard:
        raise ValueError(f"C({n},{size}) supports exceed the enumeration guard")
    # clear denominators so rank checks stay in integer arithmetic
    int_basis: list[list[int]] = []
    for vec in basis:
        lcm = 1
        for x in vec:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        int_basis.append([int(x * lcm) for x in vec])
    for t in combinations(range(n), size):
        t_set = set(t)
        outside = [[int_basis[j][i] for j in range(d)]
                   for i in range(n) if i not in t_set]
        if integer_rank(outside) < d:
            return False
    return True


def nsp_verify(a, k: int, guard: int = 10 ** 5, margin: float = 1e-9,
               ) -> tuple[bool, float]:
    """Null-space property check: for every null vector w and every support
    T with |T| <= k, ||w_T||_1 < ||w||_1 / 2.

    Per support and sign pattern, maximizes s.w_T over {A w = 0,
    ||w||_1 <= 1} by LP; returns (certified, worst ratio found).
    """
    if hasattr(a, "to_dense"):
        a = a.to_dense()
    arr = np.asarray(a, dtype=float)
    m, n = arr.shape
    if k < 1:
        raise ValueError("k must be >= 1")
    if math.comb(n, min(k, n)) * 2 ** k > guard:
        raise ValueError("NSP enumeration exceeds the LP-count guard")
    if np.allclose(arr, np.round(arr)) and integer_rank(_as_int_rows(arr)) == n:
        return True, 0.0  # trivial null space

    # variables: u (n), v (n), slack; w = u - v, sum(u+v) + slack = 1
    n_var = 2 * n + 1
    a_eq = np.zeros((m + 1, n_var))
    a_eq[:m, :n] = arr
    a_eq[:m, n:2 * n] = -arr
    a_eq[m, :2 * n] = 1.0
    a_eq[m, 2 * n] = 1.0
    b_eq = np.zeros(m + 1)
    b_eq[m] = 1.0

    worst = 0.0
    for size in range(1, min(k, n) + 1):
        for t in combinations(range(n), size):
            # s and -s reach the same maximum; fix the first sign
            for signs in product((1.0, -1.0), repeat=size - 1):
                s = (1.0,) + signs
                c = np.zeros(n_var)
                for idx, si in zip(t, s):
                    c[idx] = -si
                    c[n + idx] = si
                res = solve_min_standard(c, a_eq, b_eq)
                if res.status != "optimal":
                    raise ArithmeticError(f"NSP subproblem ended {res.status}")
                worst = max(worst, -res.objective)
    return worst < 0.5 - margin, worst
