"""0-1 measurement matrices over a constraint graph, feasibility checking,
and the hub composition that turns a complete-graph kernel into feasible
rows plus a decode group."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import Graph, HubCertificate, is_connected_induced, is_hub

__all__ = [
    "MeasurementMatrix",
    "DecodePlan",
    "DecodeGroup",
    "apply_matrix",
    "check_feasibility",
    "hub_compose",
    "whole_vector_plan",
]


@dataclass(frozen=True)
class DecodeGroup:
    """One sequential decoding step.

    ``row_range`` is a half-open span [start, stop) of matrix rows.  If
    ``hub_row`` is set it lies inside the span and its (prior-adjusted)
    value is subtracted from the other rows of the span before solving
    ``kernel @ x_target = adjusted``.  ``prior_subtract`` lists, per row of
    the span, already-recovered node ids whose values are subtracted first.
    """

    target: tuple[int, ...]
    row_range: tuple[int, int]
    hub_row: int | None
    prior_subtract: tuple[tuple[int, ...], ...]
    kernel: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        start, stop = self.row_range
        if not 0 <= start <= stop:
            raise ValueError("bad row range")
        if len(self.prior_subtract) != stop - start:
            raise ValueError("prior_subtract must cover every row of the span")
        if self.hub_row is not None and not start <= self.hub_row < stop:
            raise ValueError("hub row outside the row range")
        n_kernel_rows = stop - start - (1 if self.hub_row is not None else 0)
        if len(self.kernel) != n_kernel_rows:
            raise ValueError("kernel height must match non-hub rows of the span")
        for row in self.kernel:
            if len(row) != len(self.target):
                raise ValueError("kernel width must match target size")

    def kernel_array(self) -> np.ndarray:
        return np.array(self.kernel, dtype=float).reshape(
            len(self.kernel), len(self.target))

    def data_rows(self) -> list[int]:
        """Absolute indices of the rows the kernel applies to."""
        start, stop = self.row_range
        return [r for r in range(start, stop) if r != self.hub_row]


@dataclass(frozen=True)
class DecodePlan:
    groups: tuple[DecodeGroup, ...]

    def validate(self, n: int, m: int) -> None:
        recovered: set[int] = set()
        for gi, grp in enumerate(self.groups):
            if grp.row_range[1] > m:
                raise ValueError(f"group {gi} references rows beyond the matrix")
            tset = set(grp.target)
            if tset & recovered:
                raise ValueError(f"group {gi} target overlaps an earlier group")
            if any(not 0 <= t < n for t in grp.target):
                raise ValueError(f"group {gi} target out of range")
            for prior in grp.prior_subtract:
                bad = set(prior) - recovered
                if bad:
                    raise ValueError(
                        f"group {gi} subtracts nodes {sorted(bad)} not yet recovered")
            recovered |= tset

    def covered_nodes(self) -> set[int]:
        out: set[int] = set()
        for grp in self.groups:
            out |= set(grp.target)
        return out


@dataclass(frozen=True)
class MeasurementMatrix:
    """Rows are sorted index sets (the '1' positions); y = A x row-wise."""

    n: int
    rows: tuple[tuple[int, ...], ...]
    decode_plan: DecodePlan | None = None

    def __post_init__(self) -> None:
        for i, row in enumerate(self.rows):
            if not row:
                raise ValueError(f"row {i} is empty")
            last = -1
            for j in row:
                if not 0 <= j < self.n:
                    raise ValueError(f"row {i}: index {j} out of range")
                if j <= last:
                    raise ValueError(f"row {i}: indices not sorted/unique")
                last = j
        if self.decode_plan is not None:
            self.decode_plan.validate(self.n, len(self.rows))

    @property
    def m(self) -> int:
        return len(self.rows)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((len(self.rows), self.n), dtype=np.int64)
        for i, row in enumerate(self.rows):
            out[i, list(row)] = 1
        return out

    @staticmethod
    def from_dense(arr: np.ndarray, decode_plan: DecodePlan | None = None,
                   ) -> "MeasurementMatrix":
        arr = np.asarray(arr)
        if arr.ndim != 2 or not np.isin(arr, (0, 1)).all():
            raise ValueError("expected a 2-d 0-1 array")
        rows = tuple(tuple(int(j) for j in np.flatnonzero(r)) for r in arr)
        return MeasurementMatrix(arr.shape[1], rows, decode_plan)


def apply_matrix(a: MeasurementMatrix, x: Sequence[float]) -> np.ndarray:
    """y = A x: per row, the exact sum of the selected entries."""
    x = np.asarray(x, dtype=float)
    if x.shape != (a.n,):
        raise ValueError(f"x must have length {a.n}")
    return np.array([x[list(row)].sum() for row in a.rows])


def check_feasibility(g: Graph, a: MeasurementMatrix,
                      ) -> tuple[bool, int | None]:
    """Every row must induce a connected subgraph of g.  Returns
    (ok, index of the first offending row)."""
    if a.n != g.n:
        raise ValueError(f"matrix over {a.n} nodes vs graph with {g.n}")
    for i, row in enumerate(a.rows):
        if not is_connected_induced(g, row):
            return False, i
    return True, None


def whole_vector_plan(n: int, rows: Sequence[Sequence[int]]) -> DecodePlan:
    """Plan that decodes the full vector from all rows in one l1 solve."""
    m = len(rows)
    kernel = tuple(
        tuple(1 if j in set(row) else 0 for j in range(n)) for row in rows)
    group = DecodeGroup(
        target=tuple(range(n)),
        row_range=(0, m),
        hub_row=None,
        prior_subtract=((),) * m,
        kernel=kernel,
    )
    return DecodePlan((group,))


def hub_compose(g: Graph, cert: HubCertificate, f_block: np.ndarray,
                row_offset: int = 0,
                ) -> tuple[list[tuple[int, ...]], DecodeGroup]:
    """Compose a complete-graph kernel with a hub.

    Emits the hub-sum row S first, then one row S | W per kernel row, where
    W selects targets by the kernel's 1 entries (column j = j-th smallest
    target).  The decode group records the hub row and the kernel so that
    subtracting the hub measurement leaves ``f_block @ x_targets``.
    ``row_offset`` is the absolute index the first emitted row will get.
    """
    targets = sorted(cert.targets)
    hub = sorted(cert.hub)
    if not is_hub(g, cert.hub, cert.targets):
        raise ValueError("hub certificate does not hold on this graph")
    f_block = np.asarray(f_block)
    if f_block.size and not np.isin(f_block, (0, 1)).all():
        raise ValueError("kernel must be a 0-1 block")
    if f_block.ndim != 2 or f_block.shape[1] != len(targets):
        raise ValueError(
            f"kernel has {f_block.shape[1] if f_block.ndim == 2 else '?'} columns "
            f"for {len(targets)} targets")
    rows: list[tuple[int, ...]] = [tuple(hub)]
    for r in f_block:
        selected = [targets[j] for j in np.flatnonzero(r)]
        rows.append(tuple(sorted(hub + selected)))
    group = DecodeGroup(
        target=tuple(targets),
        row_range=(row_offset, row_offset + len(rows)),
        hub_row=row_offset,
        prior_subtract=((),) * len(rows),
        kernel=tuple(tuple(int(v) for v in r) for r in f_block),
    )
    return rows, group
