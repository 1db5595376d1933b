"""Measurement construction for arbitrary connected graphs.

Each iteration roots a BFS tree at an exact center of the current graph,
measures the tree leaves through the remaining nodes as a hub, then deletes
the leaves while fully connecting their neighborhoods.  Shortcut edges
remember the deleted nodes they stand in for, so every row built on a
reduced graph expands into a feasible row of the original graph.

The agent variant additionally forces every emitted row to pass through a
fixed node set, rerouting hubs along shortest paths when needed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .graphs import Graph, _bfs_dist, _radius_center_adj
from .kernels import CompleteKernelSpec, complete_kernel, spec_for_group
from .matrices import DecodeGroup, DecodePlan, MeasurementMatrix

__all__ = [
    "GeneralPlan",
    "IterationRecord",
    "algorithm1",
    "algorithm1_trace",
    "algorithm1_with_agents",
    "leaf_group_trace",
    "custom_leaf_construction",
]

KernelFactory = Callable[[int, int], "np.ndarray | None"]


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class IterationRecord:
    """One reduction round: the leaf group, its hub, the radius of the
    graph the round saw, and (optionally) the annotation table snapshot."""

    leaves: tuple[int, ...]
    hub: tuple[int, ...]
    radius: int
    annotations: tuple[tuple[tuple[int, int], tuple[int, ...]], ...] | None


@dataclass(frozen=True)
class GeneralPlan:
    groups: tuple[IterationRecord, ...]
    final_node: int
    radius_initial: int


class _ReducedState:
    """Mutable adjacency + shortcut annotations for the reduction loop."""

    def __init__(self, g: Graph):
        if g.dead:
            raise ValueError("expected a plain graph")
        self.n = g.n
        self.adj: dict[int, set[int]] = {v: set(g.adj[v]) for v in range(g.n)}
        self.alive: set[int] = set(range(g.n))
        self.ann: dict[tuple[int, int], frozenset[int]] = {}

    def k_of(self, u: int, v: int) -> frozenset[int]:
        return self.ann.get(_pair(u, v), frozenset())

    def reduce(self, u: int) -> None:
        nbrs = sorted(self.adj.pop(u))
        self.alive.discard(u)
        for v in nbrs:
            self.adj[v].discard(u)
        nset = set(nbrs)
        for v in nbrs:
            new_ws = nset.difference(self.adj[v])
            for w in sorted(new_ws):
                if w <= v:
                    continue
                self.ann[_pair(v, w)] = self.k_of(v, u) | self.k_of(u, w) | {u}
                self.adj[v].add(w)
                self.adj[w].add(v)
        for v in nbrs:
            self.ann.pop(_pair(u, v), None)

    def snapshot(self) -> tuple[tuple[tuple[int, int], tuple[int, ...]], ...]:
        return tuple(sorted(
            (edge, tuple(sorted(nodes))) for edge, nodes in self.ann.items()))


def _bfs_leaves(state: _ReducedState, root: int) -> list[int]:
    """Leaves of the BFS spanning tree (ascending neighbor exploration)."""
    parent = [-2] * state.n
    parent[root] = -1
    has_child = [False] * state.n
    q = deque([root])
    count = 1
    while q:
        v = q.popleft()
        for w in sorted(state.adj[v]):
            if parent[w] == -2:
                parent[w] = v
                has_child[v] = True
                count += 1
                q.append(w)
    if count != len(state.alive):
        raise ValueError("graph became disconnected during reduction")
    return sorted(v for v in state.alive if not has_child[v])


def _check_hub(state: _ReducedState, hub: Sequence[int], targets: Iterable[int],
               ) -> None:
    hub_set = set(hub)
    start = next(iter(hub_set))
    seen = {start}
    q = deque([start])
    while q:
        v = q.popleft()
        for w in state.adj[v]:
            if w in hub_set and w not in seen:
                seen.add(w)
                q.append(w)
    if len(seen) != len(hub_set):
        raise RuntimeError("leaf-group hub is not connected in the reduced graph")
    for s in targets:
        if not (state.adj[s] & hub_set):
            raise RuntimeError(f"leaf {s} has no neighbor in its hub")


def _expand(state: _ReducedState, nodes: set[int]) -> set[int]:
    """Expand a connected reduced-graph node set into the original graph:
    take its BFS spanning tree and pull in every traversed edge's
    annotation."""
    root = min(nodes)
    seen = {root}
    out = set(nodes)
    q = deque([root])
    while q:
        v = q.popleft()
        for w in sorted(state.adj[v]):
            if w in nodes and w not in seen:
                seen.add(w)
                q.append(w)
                ann = state.ann.get(_pair(v, w))
                if ann:
                    out |= ann
    if len(seen) != len(nodes):
        raise RuntimeError("row support is not connected in the reduced graph")
    return out


class _Builder:
    def __init__(self, g: Graph):
        self.g = g
        self.rows: list[tuple[int, ...]] = []
        self.groups: list[DecodeGroup] = []
        self.recovered: set[int] = set()

    def _prior(self, support: set[int], alive: set[int]) -> tuple[int, ...]:
        prior = support - alive
        missing = prior - self.recovered
        if missing:
            raise RuntimeError(
                f"row pulls in nodes {sorted(missing)} not recovered earlier")
        return tuple(sorted(prior))

    def add_group(self, supports: list[set[int]], targets: Sequence[int],
                  hub_index: int | None, kernel: np.ndarray,
                  alive: set[int]) -> None:
        start = len(self.rows)
        prior = []
        for sup in supports:
            prior.append(self._prior(sup, alive))
            self.rows.append(tuple(sorted(sup)))
        self.groups.append(DecodeGroup(
            target=tuple(targets),
            row_range=(start, len(self.rows)),
            hub_row=None if hub_index is None else start + hub_index,
            prior_subtract=tuple(prior),
            kernel=tuple(tuple(int(v) for v in r) for r in np.atleast_2d(kernel))
            if len(targets) else (),
        ))
        self.recovered |= set(targets)

    def add_pair_group(self, node: int, path: Sequence[int], alive: set[int],
                       ) -> None:
        """Recover one node from a path row and the same row without it."""
        path_set = set(path)
        if len(path_set) == 1:
            self.add_group([path_set], [node], None,
                           np.ones((1, 1), dtype=np.int64), alive)
            return
        self.add_group([path_set, path_set - {node}], [node], 1,
                       np.ones((1, 1), dtype=np.int64), alive)

    def build(self) -> MeasurementMatrix:
        return MeasurementMatrix(self.g.n, tuple(self.rows),
                                 DecodePlan(tuple(self.groups)))


def _shortest_path_avoiding(g: Graph, sources: Sequence[int],
                            goals: set[int], blocked: set[int],
                            ) -> list[int] | None:
    """Deterministic multi-source BFS path from a source to the nearest
    goal, never entering ``blocked``; returns the path or None."""
    parent = {s: -1 for s in sorted(sources) if s not in blocked}
    if not parent:
        return None
    frontier = sorted(parent)
    hit = [s for s in frontier if s in goals]
    while frontier and not hit:
        nxt = []
        for v in frontier:
            for w in g.adj[v]:
                if w not in parent and w not in blocked:
                    parent[w] = v
                    nxt.append(w)
        frontier = sorted(set(nxt))
        hit = [w for w in frontier if w in goals]
    if not hit:
        return None
    cur = min(hit)
    path = [cur]
    while parent[cur] != -1:
        cur = parent[cur]
        path.append(cur)
    return path  # goal first, source last


def _agent_adjustment(state: _ReducedState, g: Graph, hub: list[int],
                      leaves: list[int], y_set: set[int],
                      ) -> tuple[str, set[int], int | None, list[int] | None]:
    """Decide how to make every row of this iteration meet the agent set.

    Returns (mode, extra path nodes, node moved out of the leaf group, the
    recovery path for that node).
    """
    if y_set & set(hub):
        return "direct", set(), None, None
    leaf_set = set(leaves)
    # a path from the hub to an agent node, avoiding the leaf group, keeps
    # the decode untouched (path nodes are hub-constant or already known)
    path = _shortest_path_avoiding(g, hub, y_set - leaf_set, leaf_set)
    if path is not None:
        return "augment", set(path), None, None
    # otherwise move one leaf onto a path that reaches an agent node
    in_leaves = sorted(y_set & leaf_set)
    if in_leaves:
        i = in_leaves[0]
        return "move", {i}, i, [i]
    for i in leaves:
        path = _shortest_path_avoiding(
            g, sorted(y_set - leaf_set), {i}, leaf_set - {i})
        if path is not None:
            return "move", set(path), i, path
    raise RuntimeError("agent set unreachable without crossing the leaf group")


def _construct(g: Graph, kernel_factory: KernelFactory,
               y: Iterable[int] | None = None,
               capture_annotations: bool = False,
               trace_only: bool = False,
               ) -> tuple[MeasurementMatrix | None, GeneralPlan]:
    if g.dead:
        raise ValueError("expected a plain graph")
    if g.n == 0:
        raise ValueError("empty graph")
    y_set = set(y) if y is not None else None
    if y_set is not None and not y_set:
        raise ValueError("agent set must be nonempty")
    state = _ReducedState(g)
    builder = _Builder(g)
    records: list[IterationRecord] = []
    radius_initial = 0
    center = None

    while len(state.alive) > 1:
        radius, center = _radius_center_adj(state.adj, state.alive, g.n,
                                            hint=center)
        if not records:
            radius_initial = radius
        leaves = _bfs_leaves(state, center)
        hub = sorted(state.alive - set(leaves))
        _check_hub(state, hub, leaves)
        records.append(IterationRecord(
            tuple(leaves), tuple(hub), radius,
            state.snapshot() if capture_annotations else None))

        if not trace_only:
            extra: set[int] = set()
            moved: int | None = None
            if y_set is not None:
                mode, extra, moved, move_path = _agent_adjustment(
                    state, g, hub, leaves, y_set)
                if mode == "move":
                    builder.add_pair_group(moved, move_path, state.alive)
            targets = [v for v in leaves if v != moved]
            hub_cur = hub if moved is None else sorted(hub + [moved])
            kernel = kernel_factory(len(records) - 1, len(targets))
            if kernel is None:  # measure this group's nodes one by one
                if y_set is not None:
                    raise ValueError("agent mode requires kernel groups")
                supports = [{v} for v in targets]
                eye = np.eye(len(targets), dtype=np.int64)
                builder.add_group(supports, targets, None, eye, state.alive)
            elif targets:
                supports = [_expand(state, set(hub_cur)) | extra]
                for krow in np.atleast_2d(kernel):
                    chosen = {targets[j] for j in np.flatnonzero(krow)}
                    supports.append(
                        _expand(state, set(hub_cur) | chosen) | extra)
                builder.add_group(supports, targets, 0, kernel, state.alive)

        for v in leaves:
            state.reduce(v)

    last = next(iter(state.alive))
    if not trace_only:
        if y_set is None:
            builder.add_group([{last}], [last], None,
                              np.ones((1, 1), dtype=np.int64), state.alive)
        else:
            path = _shortest_path_avoiding(g, [last], y_set, set())
            if path is None:
                raise RuntimeError("agent set unreachable from the final node")
            builder.add_pair_group(last, path, state.alive)

    plan = GeneralPlan(tuple(records), last, radius_initial)
    if trace_only:
        return None, plan
    matrix = builder.build()
    if y_set is not None:
        for row in matrix.rows:
            if not y_set & set(row):
                raise RuntimeError("constructed a row missing the agent set")
    return matrix, plan


def _standard_factory(k: int, spec: CompleteKernelSpec) -> KernelFactory:
    def factory(index: int, size: int) -> np.ndarray:
        return complete_kernel(k, size, spec_for_group(spec, index))
    return factory


def algorithm1(g: Graph, k: int, spec: CompleteKernelSpec,
               ) -> MeasurementMatrix:
    """Iterated BFS-leaf construction; at most R f(k,n) + R + 1 rows where
    R is the radius of ``g``."""
    matrix, _ = _construct(g, _standard_factory(k, spec))
    return matrix


def algorithm1_trace(g: Graph, k: int, spec: CompleteKernelSpec,
                     ) -> tuple[MeasurementMatrix, GeneralPlan]:
    matrix, plan = _construct(g, _standard_factory(k, spec),
                              capture_annotations=True)
    return matrix, plan


def algorithm1_with_agents(g: Graph, k: int, y: Iterable[int],
                           spec: CompleteKernelSpec) -> MeasurementMatrix:
    """Like :func:`algorithm1` but every emitted row contains at least one
    node of ``y``; at most R f(k,n) + 3R + 2 rows."""
    matrix, _ = _construct(g, _standard_factory(k, spec), y=y)
    return matrix


def leaf_group_trace(g: Graph) -> GeneralPlan:
    """Group sizes, hubs and per-iteration radii only (no rows built)."""
    _, plan = _construct(g, lambda i, s: None, trace_only=True)
    return plan


def custom_leaf_construction(g: Graph, kernel_factory: KernelFactory,
                             ) -> tuple[MeasurementMatrix, GeneralPlan]:
    """Leaf-group construction with caller-chosen kernels; a factory
    returning None makes that group's nodes individually measured."""
    matrix, plan = _construct(g, kernel_factory)
    return matrix, plan
