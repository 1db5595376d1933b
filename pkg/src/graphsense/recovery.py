"""Sparse-signal recovery: exact l1 minimization by linear programming,
brute-force l0 decoding, decode-plan-driven sequential group recovery, and
recovery that stays exact when a hub measurement carries an error."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
import scipy.linalg

from .matrices import MeasurementMatrix
from .simplex import solve_min_standard

__all__ = [
    "SparseVector",
    "RecoveryResult",
    "L0Result",
    "DecodeError",
    "l1_minimize",
    "l0_oracle",
    "sequential_decode",
    "hub_error_matrix",
    "hub_error_recover",
    "HubErrorResult",
    "augmented_l1_recover",
]

#: feasibility slack, scaled by (1 + ||y||_inf)
FEASIBILITY_TOL = 1e-8
#: certified bound on the LP duality gap, scaled by (1 + |objective|)
DUALITY_GAP_TOL = 1e-8


class DecodeError(RuntimeError):
    """Solver failure inside a decode group; carries the group index."""

    def __init__(self, group: int, message: str):
        super().__init__(f"decode group {group}: {message}")
        self.group = group


@dataclass(frozen=True)
class SparseVector:
    """Length-n vector stored as sorted (index, nonzero value) pairs."""

    n: int
    entries: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        last = -1
        for idx, val in self.entries:
            if not 0 <= idx < self.n:
                raise ValueError(f"index {idx} out of range")
            if idx <= last:
                raise ValueError("indices must be strictly increasing")
            if val == 0:
                raise ValueError(f"stored value at {idx} must be nonzero")
            last = idx

    @staticmethod
    def from_dense(x: Sequence[float], tol: float = 0.0) -> "SparseVector":
        x = np.asarray(x, dtype=float)
        entries = tuple((int(i), float(x[i]))
                        for i in np.flatnonzero(np.abs(x) > tol))
        return SparseVector(len(x), entries)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.n)
        for idx, val in self.entries:
            out[idx] = val
        return out

    @property
    def sparsity(self) -> int:
        return len(self.entries)


@dataclass
class RecoveryResult:
    x_hat: np.ndarray
    status: str  # "exact-feasible" | "infeasible" | "iteration-limit"
    residual: float
    l1_value: float


@dataclass
class L0Result:
    solutions: list[np.ndarray]
    support_size: int | None
    unique: bool


def _independent_rows(a: np.ndarray) -> list[int]:
    """Indices of a maximal independent row subset (QR with pivoting)."""
    if a.shape[0] == 0:
        return []
    _, r, piv = scipy.linalg.qr(a.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        return []
    thresh = diag[0] * max(a.shape) * np.finfo(float).eps
    rank = int(np.sum(diag > thresh))
    return sorted(int(i) for i in piv[:rank])


def l1_minimize(a: np.ndarray, y: Sequence[float]) -> RecoveryResult:
    """min ||z||_1 s.t. A z = y, via the split z = z+ - z- linear program.

    Redundant rows are eliminated first; infeasible systems are reported,
    and optimal solves are certified by the duality gap.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    m, n = a.shape
    if y.shape != (m,):
        raise ValueError(f"y must have length {m}")
    tol = FEASIBILITY_TOL * (1.0 + np.abs(y).max(initial=0.0))

    ls, *_ = np.linalg.lstsq(a, y, rcond=None)
    if np.abs(a @ ls - y).max(initial=0.0) > tol:
        return RecoveryResult(np.zeros(n), "infeasible",
                              float(np.abs(a @ ls - y).max()), math.inf)

    keep = _independent_rows(a)
    if not keep:  # zero matrix, consistent only with y = 0
        return RecoveryResult(np.zeros(n), "exact-feasible",
                              float(np.abs(y).max(initial=0.0)), 0.0)
    a_r, y_r = a[keep], y[keep]
    lp = solve_min_standard(
        np.ones(2 * n), np.hstack([a_r, -a_r]), y_r)
    if lp.status == "iteration-limit":
        return RecoveryResult(np.zeros(n), "iteration-limit", math.inf, math.inf)
    if lp.status != "optimal":
        raise ArithmeticError(f"l1 subproblem ended {lp.status}")
    x = lp.x[:n] - lp.x[n:]
    residual = float(np.abs(a @ x - y).max())
    if residual > tol:
        raise ArithmeticError(
            f"LP solution violates feasibility: residual {residual:.3e}")
    if not (lp.dual_gap <= DUALITY_GAP_TOL * (1.0 + abs(lp.objective))):
        raise ArithmeticError(f"duality gap {lp.dual_gap:.3e} not certified")
    return RecoveryResult(x, "exact-feasible", residual, float(np.abs(x).sum()))


def l0_oracle(a: np.ndarray, y: Sequence[float], k_max: int,
              guard: int = 10 ** 6) -> L0Result:
    """All minimum-support solutions of A z = y with at most k_max nonzeros,
    by exhaustive support enumeration (smallest support size first)."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    m, n = a.shape
    if y.shape != (m,):
        raise ValueError(f"y must have length {m}")
    total = sum(math.comb(n, s) for s in range(k_max + 1))
    if total > guard:
        raise ValueError(f"{total} supports exceed the enumeration guard")
    tol = 1e-9 * (1.0 + float(np.linalg.norm(y)))

    if np.linalg.norm(y) <= tol:
        return L0Result([np.zeros(n)], 0, True)
    for size in range(1, k_max + 1):
        found: list[np.ndarray] = []
        any_deficient = False
        for t in combinations(range(n), size):
            cols = a[:, t]
            sol, _, rank, _ = np.linalg.lstsq(cols, y, rcond=None)
            if np.linalg.norm(cols @ sol - y) <= tol:
                x = np.zeros(n)
                x[list(t)] = sol
                found.append(x)
                if rank < size:
                    any_deficient = True
        if found:
            return L0Result(found, size, len(found) == 1 and not any_deficient)
    return L0Result([], None, False)


def _solve_group(kernel: np.ndarray, rhs: np.ndarray, group: int) -> np.ndarray:
    rows, cols = kernel.shape
    if cols == 0:
        return np.zeros(0)
    if rows == cols:
        try:
            return np.linalg.solve(kernel, rhs)
        except np.linalg.LinAlgError:
            pass  # singular square kernel: fall through to l1
    res = l1_minimize(kernel, rhs)
    if res.status != "exact-feasible":
        raise DecodeError(group, f"l1 solve ended {res.status}")
    return res.x_hat


def sequential_decode(a: MeasurementMatrix, y: Sequence[float],
                      ) -> RecoveryResult:
    """Decode plan groups in order: subtract already-recovered values and
    the hub measurement, then solve each group's kernel system."""
    if a.decode_plan is None:
        raise ValueError("matrix has no decode plan")
    y = np.asarray(y, dtype=float).ravel()
    if y.shape != (a.m,):
        raise ValueError(f"y must have length {a.m}")
    x_hat = np.zeros(a.n)
    for gi, grp in enumerate(a.decode_plan.groups):
        start, stop = grp.row_range
        adjusted = np.array([
            y[r] - x_hat[list(grp.prior_subtract[r - start])].sum()
            for r in range(start, stop)])
        data = [r - start for r in grp.data_rows()]
        rhs = adjusted[data]
        if grp.hub_row is not None:
            rhs = rhs - adjusted[grp.hub_row - start]
        if grp.target:
            x_hat[list(grp.target)] = _solve_group(grp.kernel_array(), rhs, gi)
    return _finish(a, y, x_hat)


def _finish(a: MeasurementMatrix, y: np.ndarray, x_hat: np.ndarray,
            error_rows: dict[int, float] | None = None) -> RecoveryResult:
    predicted = np.array([x_hat[list(row)].sum() for row in a.rows])
    if error_rows:
        for r, e in error_rows.items():
            predicted[r] += e
    residual = float(np.abs(predicted - y).max(initial=0.0))
    tol = FEASIBILITY_TOL * (1.0 + np.abs(y).max(initial=0.0))
    status = "exact-feasible" if residual <= tol else "infeasible"
    return RecoveryResult(x_hat, status, residual, float(np.abs(x_hat).sum()))


def augmented_l1_recover(a: MeasurementMatrix, y: Sequence[float],
                         hub_rows: Sequence[int]) -> RecoveryResult:
    """Sequential decoding that treats each listed hub measurement's error
    as an extra coordinate: groups whose hub row is listed solve
    min ||[x_T, e]||_1 s.t. [K | -1] [x_T; e] = adjusted rows."""
    if a.decode_plan is None:
        raise ValueError("matrix has no decode plan")
    hub_set = set(int(r) for r in hub_rows)
    for r in hub_set:
        if not 0 <= r < a.m:
            raise ValueError(f"hub row {r} out of range")
    y = np.asarray(y, dtype=float).ravel()
    if y.shape != (a.m,):
        raise ValueError(f"y must have length {a.m}")
    x_hat = np.zeros(a.n)
    errors: dict[int, float] = {}
    for gi, grp in enumerate(a.decode_plan.groups):
        start, stop = grp.row_range
        adjusted = np.array([
            y[r] - x_hat[list(grp.prior_subtract[r - start])].sum()
            for r in range(start, stop)])
        data = [r - start for r in grp.data_rows()]
        rhs = adjusted[data]
        if grp.hub_row is not None:
            rhs = rhs - adjusted[grp.hub_row - start]
        if not grp.target:
            continue
        kernel = grp.kernel_array()
        if grp.hub_row is not None and grp.hub_row in hub_set:
            augmented = np.hstack([kernel, -np.ones((kernel.shape[0], 1))])
            res = l1_minimize(augmented, rhs)
            if res.status != "exact-feasible":
                raise DecodeError(gi, f"augmented l1 ended {res.status}")
            x_hat[list(grp.target)] = res.x_hat[:-1]
            errors[grp.hub_row] = float(res.x_hat[-1])
        else:
            x_hat[list(grp.target)] = _solve_group(kernel, rhs, gi)
    return _finish(a, y, x_hat, errors)


def hub_error_matrix(s_size: int, m: int, seed: int) -> np.ndarray:
    """m x s_size 0-1 block: all-ones final row, fair-coin entries above."""
    if m < 2:
        raise ValueError("need at least two rows")
    if s_size < 1:
        raise ValueError("need at least one column")
    rng = np.random.default_rng(seed & ((1 << 64) - 1))
    block = (rng.random((m - 1, s_size)) < 0.5).astype(np.int64)
    return np.vstack([block, np.ones((1, s_size), dtype=np.int64)])


@dataclass
class HubErrorResult:
    x_s: np.ndarray
    e0: float
    lp: RecoveryResult


def hub_error_recover(a_block: np.ndarray, z: Sequence[float],
                      z0_hat: float) -> HubErrorResult:
    """Recover the group subvector and the hub-measurement error jointly.

    ``z`` are the group measurements (each row of ``a_block`` over the
    targets, plus the hub sum), ``z0_hat`` the possibly-erroneous direct hub
    measurement.  Solves min ||x'||_1 s.t. (2*A_head - 1 | -1) x' = 2*y_head
    - y_last, where y = z - z0_hat and x' = [x_S; e0].
    """
    a_block = np.asarray(a_block)
    m, s = a_block.shape
    if m < 2:
        raise ValueError("need at least two rows")
    if not (a_block[-1] == 1).all():
        raise ValueError("final row of the block must be all ones")
    z = np.asarray(z, dtype=float).ravel()
    if z.shape != (m,):
        raise ValueError(f"z must have length {m}")
    y = z - float(z0_hat)
    system = np.hstack([2.0 * a_block[:-1] - 1.0, -np.ones((m - 1, 1))])
    rhs = 2.0 * y[:-1] - y[-1]
    res = l1_minimize(system, rhs)
    return HubErrorResult(res.x_hat[:s], float(res.x_hat[s]), res)
