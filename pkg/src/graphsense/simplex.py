"""Dense two-phase primal simplex for small equality-form programs:

    min c.x  subject to  A x = b,  x >= 0.

Pricing is Dantzig's rule with deterministic smallest-index tie-breaks;
runs of degenerate pivots switch to Bland's rule until the objective moves
again, which prevents cycling.  The tableau is periodically refactorized
from the current basis, and optimality is only accepted on a freshly
rebuilt tableau, so accumulated floating-point drift cannot stall or fake
convergence.  Optimal solves carry a primal-dual gap certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LpResult", "solve_min_standard"]

_PIVOT_TOL = 1e-10
_COST_TOL = 1e-9
_DEGENERATE_RUN = 40
_REFACTOR_EVERY = 150


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration-limit"
    x: np.ndarray | None
    objective: float
    iterations: int
    dual_gap: float


class _Tableau:
    """B^-1 [A | b] plus the reduced-cost row, rebuildable from scratch."""

    def __init__(self, a: np.ndarray, b: np.ndarray, c: np.ndarray,
                 basis: list[int]):
        self.a = a
        self.b = b
        self.c = c
        self.basis = basis
        self.body: np.ndarray = np.empty(0)
        self.cost: np.ndarray = np.empty(0)
        self.fresh = False
        self.rebuild()

    def rebuild(self) -> None:
        bmat = self.a[:, self.basis]
        aug = np.hstack([self.a, self.b[:, None]])
        self.body = np.linalg.solve(bmat, aug)
        c_basis = self.c[self.basis]
        self.cost = np.concatenate([self.c, [0.0]]) - c_basis @ self.body
        self.fresh = True

    def pivot(self, row: int, col: int) -> None:
        pr = self.body[row]
        pr /= pr[col]
        colv = self.body[:, col].copy()
        colv[row] = 0.0
        self.body -= np.outer(colv, pr)
        self.cost -= self.cost[col] * pr
        self.basis[row] = col
        self.fresh = False

    @property
    def objective(self) -> float:
        return -float(self.cost[-1])


def _run(t: _Tableau, max_iter: int, force_bland: bool = False,
         ) -> tuple[str, int]:
    n = t.a.shape[1]
    it = 0
    bland = force_bland
    stall = 0
    since_rebuild = 0
    last_obj = t.objective
    while it < max_iter:
        if since_rebuild >= _REFACTOR_EVERY:
            t.rebuild()
            since_rebuild = 0
            last_obj = t.objective
        reduced = t.cost[:n]
        if bland:
            neg = np.flatnonzero(reduced < -_COST_TOL)
            col = int(neg[0]) if neg.size else -1
        else:
            col = int(np.argmin(reduced))
            if reduced[col] >= -_COST_TOL:
                col = -1
        if col < 0:
            if t.fresh:
                return "optimal", it
            t.rebuild()  # confirm optimality against drift
            since_rebuild = 0
            last_obj = t.objective
            continue
        colvals = t.body[:, col]
        rhs = t.body[:, -1]
        mask = colvals > _PIVOT_TOL
        if not mask.any():
            if not t.fresh:
                t.rebuild()
                since_rebuild = 0
                continue
            return "unbounded", it
        ratios = np.full(len(rhs), np.inf)
        ratios[mask] = rhs[mask] / colvals[mask]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12)
        row = int(min(ties, key=lambda r: t.basis[r]))
        t.pivot(row, col)
        it += 1
        since_rebuild += 1
        obj = t.objective
        if obj < last_obj - 1e-10 * (1.0 + abs(obj)):
            stall = 0
            bland = force_bland  # degeneracy escaped; resume Dantzig pricing
        else:
            stall += 1
            if stall >= _DEGENERATE_RUN:
                bland = True
        last_obj = obj
    return "iteration-limit", it


def solve_min_standard(c: np.ndarray, a: np.ndarray, b: np.ndarray,
                       max_iter: int | None = None) -> LpResult:
    """Solve min c.x s.t. A x = b, x >= 0.  A need not have full row rank;
    redundant rows are pivoted away after phase 1."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    m, n = a.shape
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if max_iter is None:
        max_iter = 100 * (m + n) + 2000

    a = a.copy()
    b = b.copy()
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0
    # deterministic epsilon-perturbations break primal (b) and dual (c)
    # degeneracy, so pricing rarely ties and pivots make real progress; the
    # final basis is re-solved and certified against the unperturbed data
    rng = np.random.default_rng(0x5EED)
    scale_b = 1.0 + abs(b).max(initial=0.0)
    perturbed = b + scale_b * 1e-9 * (1.0 + rng.random(m))
    scale_c = 1.0 + abs(c).max(initial=0.0)
    c_pert = c + scale_c * 1e-9 * rng.random(n)

    # phase 1: minimize the sum of artificial variables
    a1 = np.hstack([a, np.eye(m)])
    c1 = np.concatenate([np.zeros(n), np.ones(m)])
    t = _Tableau(a1, perturbed, c1, list(range(n, n + m)))
    status, it1 = _run(t, max_iter)
    if status == "iteration-limit":
        return LpResult(status, None, np.nan, it1, np.nan)
    if t.objective > 1e-7 * (1.0 + abs(b).max(initial=0.0)):
        return LpResult("infeasible", None, np.nan, it1, np.nan)

    # drive artificials out of the basis; rows that cannot pivot are redundant
    keep = np.ones(m, dtype=bool)
    for r in range(m):
        if t.basis[r] < n:
            continue
        entries = np.abs(t.body[r, :n])
        col = int(np.argmax(entries))
        if entries[col] > 1e-8:
            t.pivot(r, col)
        else:
            keep[r] = False
    rows_kept = np.flatnonzero(keep)
    basis = [t.basis[r] for r in rows_kept]
    a2 = a[rows_kept]
    b2 = b[rows_kept]

    # phase 2 on the pruned system with the (perturbed) real objective
    t2 = _Tableau(a2, perturbed[rows_kept], c_pert, basis)
    status, it2 = _run(t2, max_iter)
    if status == "iteration-limit":  # backstop: restart under Bland's rule
        t2.rebuild()
        status, extra = _run(t2, 4 * max_iter, force_bland=True)
        it2 += extra
    if status != "optimal":
        return LpResult(status, None, np.nan, it1 + it2, np.nan)

    # polish: re-optimize from the found vertex against the true data (the
    # perturbation may have tilted the optimal face to a different vertex)
    t2.b = b2
    t2.c = c
    t2.rebuild()
    status, it3 = _run(t2, max_iter)
    if status == "iteration-limit":
        t2.rebuild()
        status, extra = _run(t2, 4 * max_iter, force_bland=True)
        it3 += extra
    if status != "optimal":
        return LpResult(status, None, np.nan, it1 + it2 + it3, np.nan)

    x = np.zeros(n)
    for r, bv in enumerate(t2.basis):
        x[bv] = t2.body[r, -1]
    objective = float(c @ x)
    # _run accepts optimality only on a fresh tableau, so the reduced costs
    # certify dual feasibility of the final basis
    gap = max(0.0, -float(t2.cost[:n].min(initial=0.0)))
    return LpResult("optimal", x, objective, it1 + it2 + it3, gap)
