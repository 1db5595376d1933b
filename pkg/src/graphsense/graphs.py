"""Undirected simple graphs and the structural predicates behind
graph-constrained measurement design: induced-subgraph connectivity, hubs,
partitions, BFS spanning trees, exact radius/center, the line-graph
transform, and node elimination with shortcut-edge annotations.

Node ids are 0-based everywhere.  Graphs are immutable after construction;
all operations here are pure functions.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Graph",
    "EdgeAnnotations",
    "HubCertificate",
    "Partition",
    "BfsTree",
    "is_connected_induced",
    "is_hub",
    "validate_partition",
    "bfs_tree",
    "radius_and_center",
    "eccentricity",
    "reduce_node",
    "line_graph",
    "components",
]


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with sorted adjacency lists.

    ``dead`` holds node ids eliminated by :func:`reduce_node`; they keep
    their slots (stable ids) but have no incident edges and are ignored by
    connectivity, radius and component queries.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    dead: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length must equal n")
        for v, nbrs in enumerate(self.adj):
            last = -1
            for w in nbrs:
                if not 0 <= w < self.n:
                    raise ValueError(f"node {v}: neighbor {w} out of range")
                if w == v:
                    raise ValueError(f"self-loop at node {v}")
                if w <= last:
                    raise ValueError(f"node {v}: neighbors not sorted/unique")
                last = w
        for v, nbrs in enumerate(self.adj):
            for w in nbrs:
                if v not in self.adj[w]:
                    raise ValueError(f"edge ({v},{w}) not symmetric")
        for v in self.dead:
            if self.adj[v]:
                raise ValueError(f"dead node {v} still has neighbors")

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError(f"self-loop ({u},{u})")
            if v in nbrs[u]:
                raise ValueError(f"duplicate edge ({u},{v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return Graph(n, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def alive(self) -> list[int]:
        if not self.dead:
            return list(range(self.n))
        return [v for v in range(self.n) if v not in self.dead]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as (u, v) with u < v, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        lo, hi = 0, len(a)
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(a) and a[lo] == v


class EdgeAnnotations:
    """Map from an edge (v, w) to the original-graph nodes K(v, w) that a
    shortcut edge stands in for.  Missing edges annotate as the empty set."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[tuple[int, int], frozenset[int]] | None = None):
        self._entries: dict[tuple[int, int], frozenset[int]] = {}
        if entries:
            for (u, v), nodes in entries.items():
                key = _pair(u, v)
                nodes = frozenset(nodes)
                if key[0] in nodes or key[1] in nodes:
                    raise ValueError(f"annotation of edge {key} contains an endpoint")
                self._entries[key] = nodes

    def get(self, u: int, v: int) -> frozenset[int]:
        return self._entries.get(_pair(u, v), frozenset())

    def items(self):
        return self._entries.items()

    def as_dict(self) -> dict[tuple[int, int], frozenset[int]]:
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeAnnotations):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        return f"EdgeAnnotations({self._entries!r})"


@dataclass(frozen=True)
class HubCertificate:
    """A hub set S and the target set T it serves: S induces a connected
    subgraph and every target has at least one neighbor in S."""

    hub: frozenset[int]
    targets: frozenset[int]

    def __post_init__(self) -> None:
        if self.hub & self.targets:
            raise ValueError("hub and target sets overlap")


@dataclass(frozen=True)
class Partition:
    """Disjoint node groups N_1..N_r covering V, each with its complement
    acting as a hub."""

    groups: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class BfsTree:
    root: int
    parent: tuple[int, ...]  # -1 at the root; -2 marks nodes outside the tree
    order: tuple[int, ...]
    leaves: frozenset[int]

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] >= 0:
            path.append(self.parent[path[-1]])
        return path


# ---------------------------------------------------------------------------
# connectivity predicates


def is_connected_induced(g: Graph, s: Iterable[int]) -> bool:
    """True iff the subgraph induced by ``s`` is connected.

    The empty set and singletons count as connected.
    """
    nodes = set(s)
    for v in nodes:
        if not 0 <= v < g.n:
            raise ValueError(f"node {v} out of range")
        if v in g.dead:
            raise ValueError(f"node {v} is dead")
    if len(nodes) <= 1:
        return True
    start = next(iter(nodes))
    seen = {start}
    q = deque([start])
    while q:
        v = q.popleft()
        for w in g.adj[v]:
            if w in nodes and w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) == len(nodes)


def is_hub(g: Graph, s: Iterable[int], t: Iterable[int]) -> bool:
    """True iff ``s`` is a hub for ``t``: the subgraph induced by ``s`` is
    connected and every node of ``t`` has a neighbor in ``s``."""
    s_set, t_set = set(s), set(t)
    if s_set & t_set:
        raise ValueError("hub and target sets must be disjoint")
    if not is_connected_induced(g, s_set):
        return False
    for u in t_set:
        if not 0 <= u < g.n:
            raise ValueError(f"node {u} out of range")
        if not any(w in s_set for w in g.adj[u]):
            return False
    return True


def validate_partition(g: Graph, p: Partition) -> tuple[bool, str | None]:
    """Check the r-partition conditions; returns (ok, violation reason)."""
    seen: set[int] = set()
    for i, grp in enumerate(p.groups):
        if seen & grp:
            return False, f"group {i} overlaps an earlier group"
        seen |= grp
    universe = set(g.alive)
    if seen != universe:
        return False, "groups do not cover all nodes"
    for i, grp in enumerate(p.groups):
        comp = universe - grp
        if not comp:
            return False, f"group {i} has an empty complement"
        if not is_connected_induced(g, comp):
            return False, f"complement of group {i} is not connected"
        for u in grp:
            if not any(w in comp for w in g.adj[u]):
                return False, f"node {u} in group {i} has no neighbor outside it"
    return True, None


# ---------------------------------------------------------------------------
# BFS machinery


def _bfs_dist(adj: Sequence[Sequence[int]] | Mapping[int, Iterable[int]],
              src: int, n: int) -> list[int]:
    """Distances from ``src``; -1 where unreachable.  Neighbor order does
    not affect distances."""
    dist = [-1] * n
    dist[src] = 0
    q = deque([src])
    while q:
        v = q.popleft()
        dv1 = dist[v] + 1
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dv1
                q.append(w)
    return dist


def bfs_tree(g: Graph, root: int) -> BfsTree:
    """Breadth-first spanning tree rooted at ``root``, exploring neighbors
    in ascending id order.  Raises on disconnected (alive) graphs."""
    if not 0 <= root < g.n or root in g.dead:
        raise ValueError(f"invalid root {root}")
    parent = [-2] * g.n
    parent[root] = -1
    order = [root]
    has_child = [False] * g.n
    q = deque([root])
    while q:
        v = q.popleft()
        for w in g.adj[v]:  # adjacency lists are sorted
            if parent[w] == -2:
                parent[w] = v
                has_child[v] = True
                order.append(w)
                q.append(w)
    alive = g.alive
    if len(order) != len(alive):
        raise ValueError("graph is disconnected")
    leaves = frozenset(v for v in alive if not has_child[v])
    return BfsTree(root, tuple(parent), tuple(order), leaves)


def _compact_csr(adj, nodes: Sequence[int]) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Adjacency of the subgraph on ``nodes`` in CSR form over compact ids."""
    ids = sorted(nodes)
    pos = {v: i for i, v in enumerate(ids)}
    indptr = np.zeros(len(ids) + 1, dtype=np.int64)
    chunks = []
    for i, v in enumerate(ids):
        nbrs = [pos[w] for w in adj[v] if w in pos]
        nbrs.sort()
        chunks.append(np.array(nbrs, dtype=np.int64))
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return indptr, indices, ids


def _bfs_levels(indptr: np.ndarray, indices: np.ndarray, src: int, nn: int,
                ) -> np.ndarray:
    """Level-synchronized BFS distances over a compact CSR; -1 unreached."""
    dist = np.full(nn, -1, dtype=np.int64)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        cum = np.cumsum(counts)
        gather = np.arange(total) + np.repeat(starts - (cum - counts), counts)
        neigh = indices[gather]
        new = neigh[dist[neigh] < 0]
        if new.size == 0:
            break
        new = np.unique(new)
        dist[new] = level
        frontier = new
    return dist


def _radius_center_adj(adj, nodes: Sequence[int], n: int,
                       hint: int | None = None) -> tuple[int, int]:
    """Exact radius and smallest-id center of the connected graph on
    ``nodes``, by eccentricity bounding.  Result is identical to all-pairs
    BFS; typically only a handful of BFS runs are needed.  ``hint`` seeds
    the search with a node believed central (result is unaffected)."""
    indptr, indices, ids = _compact_csr(adj, nodes)
    nn = len(ids)
    if nn == 1:
        return 0, ids[0]
    lo = np.zeros(nn, dtype=np.int64)
    hi = np.full(nn, np.iinfo(np.int64).max, dtype=np.int64)
    ecc = np.full(nn, -1, dtype=np.int64)
    cand = np.ones(nn, dtype=bool)
    best = np.iinfo(np.int64).max
    pos = {v: i for i, v in enumerate(ids)}
    first = pos.get(hint) if hint is not None else None

    def ecc_of(i: int) -> tuple[int, np.ndarray]:
        dist = _bfs_levels(indptr, indices, i, nn)
        if (dist < 0).any():
            raise ValueError("graph is disconnected")
        return int(dist.max()), dist

    while cand.any():
        if first is not None and cand[first]:
            v = first
        else:
            v = int(np.argmin(np.where(cand, lo, np.iinfo(np.int64).max)))
        first = None
        e, dist = ecc_of(v)
        ecc[v] = e
        best = min(best, e)
        np.maximum(lo, np.maximum(dist, e - dist), out=lo)
        np.minimum(hi, e + dist, out=hi)
        cand &= (lo < best) & (ecc < 0)
    for i in range(nn):  # smallest id attaining the radius
        if lo[i] > best:
            continue
        e = int(ecc[i]) if ecc[i] >= 0 else ecc_of(i)[0]
        if e == best:
            return int(best), ids[i]
    raise AssertionError("radius search failed to confirm a center")


def radius_and_center(g: Graph) -> tuple[int, int]:
    """Exact radius R = min_u max_v d(u, v) and the smallest-id node
    attaining it.  Raises on disconnected graphs."""
    alive = g.alive
    if not alive:
        raise ValueError("empty graph has no radius")
    return _radius_center_adj(g.adj, alive, g.n)


def eccentricity(g: Graph, v: int) -> int:
    dist = _bfs_dist(g.adj, v, g.n)
    alive = g.alive
    if any(dist[u] < 0 for u in alive):
        raise ValueError("graph is disconnected")
    return max(dist[u] for u in alive)


# ---------------------------------------------------------------------------
# graph rewrites


def reduce_node(g: Graph, ann: EdgeAnnotations, u: int,
                ) -> tuple[Graph, EdgeAnnotations]:
    """Delete ``u`` and fully connect its neighbors.  A new edge (v, w)
    inherits K(v,w) = K(v,u) | K(u,w) | {u}; existing edges keep their
    annotations.  Node ids are stable: ``u`` joins the dead set."""
    if not 0 <= u < g.n or u in g.dead:
        raise ValueError(f"node {u} not present")
    nbrs = list(g.adj[u])
    new_adj = [set(a) for a in g.adj]
    new_entries = ann.as_dict()
    for v in nbrs:
        new_adj[v].discard(u)
    new_adj[u] = set()
    for i, v in enumerate(nbrs):
        for w in nbrs[i + 1:]:
            if w not in new_adj[v]:
                new_adj[v].add(w)
                new_adj[w].add(v)
                new_entries[_pair(v, w)] = (
                    ann.get(v, u) | ann.get(u, w) | {u})
    for v in nbrs:  # drop annotations of edges incident to u
        new_entries.pop(_pair(u, v), None)
    reduced = Graph(g.n, tuple(tuple(sorted(a)) for a in new_adj),
                    g.dead | {u})
    return reduced, EdgeAnnotations(new_entries)


def line_graph(network: Graph) -> Graph:
    """Line graph: one node per edge of ``network``, adjacent iff the edges
    share an endpoint.  Node id = rank of the edge in sorted edge order."""
    if network.dead:
        raise ValueError("line graph of a reduced graph is not defined")
    edges = network.edges()
    if not edges:
        raise ValueError("network has no edges")
    index = {e: i for i, e in enumerate(edges)}
    incident: list[list[int]] = [[] for _ in range(network.n)]
    for e, i in index.items():
        incident[e[0]].append(i)
        incident[e[1]].append(i)
    nbrs: list[set[int]] = [set() for _ in edges]
    for ids in incident:
        for a in ids:
            for b in ids:
                if a != b:
                    nbrs[a].add(b)
    return Graph(len(edges), tuple(tuple(sorted(s)) for s in nbrs))


def components(g: Graph) -> list[list[int]]:
    """Connected components (each sorted), ordered by smallest member."""
    seen: set[int] = set()
    out: list[list[int]] = []
    for v in g.alive:
        if v in seen:
            continue
        comp = {v}
        q = deque([v])
        while q:
            x = q.popleft()
            for w in g.adj[x]:
                if w not in comp:
                    comp.add(w)
                    q.append(w)
        seen |= comp
        out.append(sorted(comp))
    return out
