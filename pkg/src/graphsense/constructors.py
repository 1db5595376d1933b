"""Closed-form measurement constructions for special graphs: line/ring
sliding windows, the distance-2 ring (hub-based and Markov-chain rows, with
and without deleted chords or row-length caps), the line graph of a
degree-4 ring network, the two-dimensional grid, trees, and the
short-measurement block families."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import Graph, HubCertificate, bfs_tree
from .kernels import CompleteKernelSpec, complete_kernel, spec_for_group
from .matrices import (DecodeGroup, DecodePlan, MeasurementMatrix,
                       hub_compose, whole_vector_plan)

__all__ = [
    "LineSpec",
    "ShortSpec",
    "BK",
    "DK",
    "path_graph",
    "ring_graph",
    "g4_graph",
    "g4h_graph",
    "chord_midpoint",
    "ring_network_line_graph",
    "grid_graph",
    "line_matrix",
    "line_min_measurements",
    "g4_matrix",
    "g4h_matrix",
    "ring_network_line_graph_matrix",
    "grid_matrix",
    "tree_matrix",
    "markov_rows",
    "markov_default_row_count",
    "short_matrix",
    "short_block",
    "short_assembled",
    "g4_bounded_length_matrix",
]

BK = "bk"
DK = "dk"


@dataclass(frozen=True)
class LineSpec:
    """Sliding-window construction parameters for a line/ring."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("sparsity k must be >= 1")
        if self.k > self.n:
            raise ValueError("k may not exceed n")

    @property
    def t(self) -> int:
        """Window width floor((n+1)/(k+1))."""
        return (self.n + 1) // (self.k + 1)

    @property
    def row_count(self) -> int:
        return self.n + 1 - self.t


@dataclass(frozen=True)
class ShortSpec:
    """Block-diagonal short-measurement families over a line/ring."""

    n: int
    k: int
    family: str

    def __post_init__(self) -> None:
        if self.family not in (BK, DK):
            raise ValueError(f"unknown family {self.family!r}")
        if self.k < 1 or self.n < 1:
            raise ValueError("need k >= 1 and n >= 1")

    @property
    def t(self) -> int:
        if self.family == BK:
            return math.ceil(self.n / (self.k + 1))
        return math.ceil(self.n / (2 * self.k))

    @property
    def rows_before_deletion(self) -> int:
        if self.family == BK:
            return self.k * self.t + 1
        return (2 * self.k - 1) * self.t + 1


# ---------------------------------------------------------------------------
# graphs


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def ring_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a ring needs at least 3 nodes")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def g4_graph(n: int) -> Graph:
    """Ring where every node also connects to its distance-2 neighbors."""
    if n < 5:
        raise ValueError("the distance-2 ring needs at least 5 nodes")
    edges = set()
    for i in range(n):
        for step in (1, 2):
            edges.add(tuple(sorted((i, (i + step) % n))))
    return Graph.from_edges(n, sorted(edges))


def chord_midpoint(n: int, chord: tuple[int, int]) -> int:
    """Midpoint i of a chord that must have the form (i-1, i+1) mod n."""
    u, v = chord[0] % n, chord[1] % n
    if (u + 2) % n == v:
        return (u + 1) % n
    if (v + 2) % n == u:
        return (v + 1) % n
    raise ValueError(f"chord {chord} is not of the form (i-1, i+1) mod {n}")


def g4h_graph(n: int, chords: list[tuple[int, int]]) -> Graph:
    """Distance-2 ring with the given distance-2 chords deleted."""
    base = g4_graph(n)
    removed = set()
    for chord in chords:
        mid = chord_midpoint(n, chord)
        edge = tuple(sorted(((mid - 1) % n, (mid + 1) % n)))
        if edge in removed:
            raise ValueError(f"chord {chord} deleted twice")
        removed.add(edge)
    return Graph.from_edges(n, [e for e in base.edges() if e not in removed])


def ring_network_line_graph(n: int) -> Graph:
    """Line graph of a ring network whose routers each connect to four
    neighbors: odd nodes reach +-1, +-2, +-3 and even nodes +-1, +-3, +-4
    (all mod n).  Requires n divisible by 4 and n >= 8."""
    if n < 8 or n % 4 != 0:
        raise ValueError("need n >= 8 with n divisible by 4")
    edges = set()
    for i in range(n):
        steps = (1, 2, 3) if i % 2 == 1 else (1, 3, 4)
        for s in steps:
            edges.add(tuple(sorted((i, (i + s) % n))))
    return Graph.from_edges(n, sorted(edges))


def grid_graph(side: int) -> Graph:
    if side < 2:
        raise ValueError("grid side must be >= 2")
    edges = []
    for r in range(side):
        for c in range(side):
            v = r * side + c
            if c + 1 < side:
                edges.append((v, v + 1))
            if r + 1 < side:
                edges.append((v, v + side))
    return Graph.from_edges(side * side, edges)


# ---------------------------------------------------------------------------
# line / ring


def line_matrix(n: int, k: int) -> MeasurementMatrix:
    """Sliding windows of width floor((n+1)/(k+1)): row i measures nodes
    i..i+t-1.  The same rows serve a ring (they never wrap).  Decoding is
    whole-vector l1 minimization."""
    spec = LineSpec(n, k)
    t = spec.t
    rows = tuple(tuple(range(i, i + t)) for i in range(n + 1 - t))
    return MeasurementMatrix(n, rows, whole_vector_plan(n, rows))


def line_min_measurements(n: int, k: int, ring: bool = False) -> int:
    """Minimum measurement count: n+1-floor((n+1)/(k+1)) for a line, and
    the proved ring lower bound n-floor(n/(k+1))."""
    if ring:
        return n - n // (k + 1)
    return n + 1 - (n + 1) // (k + 1)


# ---------------------------------------------------------------------------
# distance-2 ring family


def _parity_sets(n: int) -> tuple[list[int], list[int]]:
    evens = list(range(0, n, 2))
    odds = list(range(1, n, 2))
    return evens, odds


def g4_matrix(n: int, k: int, spec: CompleteKernelSpec) -> MeasurementMatrix:
    """Two hub groups on the distance-2 ring: odd nodes serve the evens,
    then even nodes serve the odds."""
    g = g4_graph(n)
    evens, odds = _parity_sets(n)
    rows: list[tuple[int, ...]] = []
    groups: list[DecodeGroup] = []
    for gi, (hub, targets) in enumerate([(odds, evens), (evens, odds)]):
        kernel = complete_kernel(k, len(targets), spec_for_group(spec, gi))
        cert = HubCertificate(frozenset(hub), frozenset(targets))
        new_rows, grp = hub_compose(g, cert, kernel, row_offset=len(rows))
        rows.extend(new_rows)
        groups.append(grp)
    return MeasurementMatrix(n, tuple(rows), DecodePlan(tuple(groups)))


def g4h_matrix(n: int, k: int, deleted_chords: list[tuple[int, int]],
               spec: CompleteKernelSpec) -> MeasurementMatrix:
    """Distance-2 ring with chords removed: chord midpoints are measured by
    singleton rows, then each parity class (minus the midpoints) is served
    by the opposite class extended with the same-parity midpoints."""
    g = g4h_graph(n, deleted_chords)
    mids = sorted({chord_midpoint(n, c) for c in deleted_chords})
    evens, odds = _parity_sets(n)
    mid_set = set(mids)

    rows: list[tuple[int, ...]] = [(d,) for d in mids]
    groups: list[DecodeGroup] = []
    if mids:
        ident = tuple(tuple(1 if i == j else 0 for j in range(len(mids)))
                      for i in range(len(mids)))
        groups.append(DecodeGroup(
            target=tuple(mids), row_range=(0, len(mids)), hub_row=None,
            prior_subtract=((),) * len(mids), kernel=ident))

    sides = [
        (sorted(set(odds) | (set(evens) & mid_set)),
         [v for v in evens if v not in mid_set]),
        (sorted(set(evens) | (set(odds) & mid_set)),
         [v for v in odds if v not in mid_set]),
    ]
    for gi, (hub, targets) in enumerate(sides):
        if not targets:
            continue
        kernel = complete_kernel(k, len(targets), spec_for_group(spec, gi))
        cert = HubCertificate(frozenset(hub), frozenset(targets))
        new_rows, grp = hub_compose(g, cert, kernel, row_offset=len(rows))
        rows.extend(new_rows)
        groups.append(grp)
    return MeasurementMatrix(n, tuple(rows), DecodePlan(tuple(groups)))


def markov_default_row_count(n: int, k: int) -> int:
    """min(ceil(g(k) ln n), 64 k ceil(ln n)) with the theorem-faithful
    g(k) = (2k+1) 2^(4k^2+2k-1) / (2k-1)!, which grows astronomically."""
    g_k = (2 * k + 1) * 2 ** (4 * k * k + 2 * k - 1) // math.factorial(2 * k - 1)
    faithful = math.ceil(g_k * math.log(n))
    practical = 64 * k * math.ceil(math.log(n))
    return min(faithful, practical)


def markov_rows(n: int, k: int, row_count: int | None = None, seed: int = 0,
                ) -> MeasurementMatrix:
    """Random feasible rows on the distance-2 ring: each row is a chain
    realization starting at 1 where a 0 must be followed by a 1, so no two
    consecutive indices are both skipped."""
    if n < 5:
        raise ValueError("the distance-2 ring needs at least 5 nodes")
    if row_count is None:
        row_count = markov_default_row_count(n, k)
    rng = np.random.default_rng(seed & ((1 << 64) - 1))
    rows = []
    for _ in range(row_count):
        coins = rng.random(n)
        support = [0]
        state = 1
        for j in range(1, n):
            state = 1 if state == 0 else (1 if coins[j] < 0.5 else 0)
            if state:
                support.append(j)
        rows.append(tuple(support))
    return MeasurementMatrix(n, tuple(rows), whole_vector_plan(n, rows))


def g4_bounded_length_matrix(n: int, k: int, d: int,
                             spec: CompleteKernelSpec) -> MeasurementMatrix:
    """Distance-2 ring rows capped at d nodes: the even nodes split into
    runs of d/2 consecutive evens, each a hub for the odds one step ahead,
    then the mirrored odd runs serve the evens."""
    if not 4 <= d <= n:
        raise ValueError("need 4 <= d <= n")
    if n % 2 or d % 2:
        raise ValueError("this construction needs n and d even")
    g = g4_graph(n)
    evens, odds = _parity_sets(n)
    run = d // 2
    rows: list[tuple[int, ...]] = []
    groups: list[DecodeGroup] = []
    gi = 0
    for side in (evens, odds):
        for start in range(0, len(side), run):
            hub = side[start:start + run]
            targets = sorted((v + 1) % n for v in hub)
            kernel = complete_kernel(k, len(targets), spec_for_group(spec, gi))
            cert = HubCertificate(frozenset(hub), frozenset(targets))
            new_rows, grp = hub_compose(g, cert, kernel, row_offset=len(rows))
            rows.extend(new_rows)
            groups.append(grp)
            gi += 1
    return MeasurementMatrix(n, tuple(rows), DecodePlan(tuple(groups)))


# ---------------------------------------------------------------------------
# ring-network line graph


def ring_network_line_graph_matrix(n: int, k: int, spec: CompleteKernelSpec,
                                   ) -> MeasurementMatrix:
    """Hub construction on the line graph of the degree-4 ring network:
    all odd nodes serve the evens, then the nodes {4j+2} serve the odds."""
    g = ring_network_line_graph(n)
    evens, odds = _parity_sets(n)
    hub2 = list(range(2, n, 4))
    rows: list[tuple[int, ...]] = []
    groups: list[DecodeGroup] = []
    for gi, (hub, targets) in enumerate([(odds, evens), (hub2, odds)]):
        kernel = complete_kernel(k, len(targets), spec_for_group(spec, gi))
        cert = HubCertificate(frozenset(hub), frozenset(targets))
        new_rows, grp = hub_compose(g, cert, kernel, row_offset=len(rows))
        rows.extend(new_rows)
        groups.append(grp)
    return MeasurementMatrix(n, tuple(rows), DecodePlan(tuple(groups)))


# ---------------------------------------------------------------------------
# grid


def grid_matrix(side: int, k: int, spec: CompleteKernelSpec,
                ) -> MeasurementMatrix:
    """Three hub stages on the side x side grid.  The first two serve all
    nodes below row 0 (even and odd columns in turn); the third measures
    row-0 subsets together with row 1 and subtracts the already-recovered
    row-1 values instead of a hub-sum row."""
    g = grid_graph(side)
    n = side * side

    def node(r: int, c: int) -> int:
        return r * side + c

    row0 = [node(0, c) for c in range(side)]
    row1 = [node(1, c) for c in range(side)]
    rows: list[tuple[int, ...]] = []
    groups: list[DecodeGroup] = []
    for gi, parity in enumerate((1, 0)):
        hub = set(row0) | {node(r, c) for r in range(side)
                           for c in range(parity, side, 2)}
        targets = sorted(set(range(n)) - hub)
        kernel = complete_kernel(k, len(targets), spec_for_group(spec, gi))
        cert = HubCertificate(frozenset(hub), frozenset(targets))
        new_rows, grp = hub_compose(g, cert, kernel, row_offset=len(rows))
        rows.extend(new_rows)
        groups.append(grp)

    kernel3 = complete_kernel(k, side, spec_for_group(spec, 2))
    start = len(rows)
    prior = tuple(tuple(row1) for _ in range(kernel3.shape[0]))
    for krow in kernel3:
        selected = [row0[j] for j in np.flatnonzero(krow)]
        rows.append(tuple(sorted(set(row1) | set(selected))))
    groups.append(DecodeGroup(
        target=tuple(row0), row_range=(start, len(rows)), hub_row=None,
        prior_subtract=prior,
        kernel=tuple(tuple(int(v) for v in r) for r in kernel3)))
    return MeasurementMatrix(n, tuple(rows), DecodePlan(tuple(groups)))


# ---------------------------------------------------------------------------
# tree


def _trace_to_common_ancestor(selected: list[int], parent: Sequence[int],
                              depth: Sequence[int]) -> set[int]:
    """Union of the upward paths from ``selected`` until they merge at one
    node (their lowest common ancestor); a single node needs no tracing."""
    cursors = set(selected)
    visited = set(selected)
    while len(cursors) > 1:
        deepest = max(cursors, key=lambda v: (depth[v], v))
        cursors.discard(deepest)
        up = parent[deepest]
        cursors.add(up)
        visited.add(up)
    return visited


def tree_matrix(g: Graph, root: int, k: int, spec: CompleteKernelSpec,
                ) -> MeasurementMatrix:
    """Layer-by-layer construction on a tree: the root is measured alone; a
    row for a layer subset traces the members back to their meeting point,
    and the decode subtracts the already-recovered ancestors."""
    if g.dead:
        raise ValueError("tree constructor needs a plain graph")
    if g.edge_count != g.n - 1:
        raise ValueError("graph is not a tree")
    tree = bfs_tree(g, root)  # also proves connectivity

    depth = [0] * g.n
    for v in tree.order:
        if v != root:
            depth[v] = depth[tree.parent[v]] + 1
    layers: dict[int, list[int]] = {}
    for v in range(g.n):
        layers.setdefault(depth[v], []).append(v)

    rows: list[tuple[int, ...]] = [(root,)]
    groups: list[DecodeGroup] = [DecodeGroup(
        target=(root,), row_range=(0, 1), hub_row=None,
        prior_subtract=((),), kernel=((1,),))]
    for level in range(1, max(layers) + 1):
        targets = sorted(layers[level])
        kernel = complete_kernel(k, len(targets), spec_for_group(spec, level))
        start = len(rows)
        prior: list[tuple[int, ...]] = []
        for krow in kernel:
            selected = [targets[j] for j in np.flatnonzero(krow)]
            support = _trace_to_common_ancestor(selected, tree.parent, depth)
            rows.append(tuple(sorted(support)))
            prior.append(tuple(sorted(support - set(selected))))
        groups.append(DecodeGroup(
            target=tuple(targets), row_range=(start, len(rows)), hub_row=None,
            prior_subtract=tuple(prior),
            kernel=tuple(tuple(int(v) for v in r) for r in kernel)))
    return MeasurementMatrix(g.n, tuple(rows), DecodePlan(tuple(groups)))


# ---------------------------------------------------------------------------
# short-measurement families


def short_block(k: int, family: str) -> np.ndarray:
    """The base block: main diagonal plus first row (and a subdiagonal that
    stops one row early for odd k), or main diagonal plus subdiagonal."""
    if family == BK:
        size = k + 1
        block = np.eye(size, dtype=np.int64)
        block[0, :] = 1
        stop = size if k % 2 == 0 else size - 1
        for i in range(1, stop):
            block[i, i - 1] = 1
        return block
    if family == DK:
        size = 2 * k
        block = np.eye(size, dtype=np.int64)
        for i in range(1, size):
            block[i, i - 1] = 1
        return block
    raise ValueError(f"unknown family {family!r}")


def short_assembled(spec: ShortSpec) -> np.ndarray:
    """Overlapping block-diagonal assembly, truncated to n columns but with
    all-zero rows still present."""
    n, t = spec.n, spec.t
    block = short_block(spec.k, spec.family)
    size = block.shape[0]  # also the block width
    step = size - 1  # consecutive blocks share one row
    out = np.zeros((spec.rows_before_deletion, size * t), dtype=np.int64)
    for i in range(t):
        out[i * step:i * step + size, i * size:(i + 1) * size] |= block
    return out[:, :n]


def short_matrix(spec: ShortSpec) -> MeasurementMatrix:
    """Short-measurement matrix: blocks assembled, columns truncated to n,
    and every all-zero row deleted."""
    assembled = short_assembled(spec)
    kept = assembled[assembled.any(axis=1)]
    return MeasurementMatrix.from_dense(kept)
