"""Shared test fixtures: small reference graphs and independent oracles
(deliberately not implemented via the library's own code paths)."""

from collections import deque

import numpy as np

from graphsense.graphs import Graph


def random_connected_graph(n: int, extra_edges: int, seed: int) -> Graph:
    """Random spanning tree plus extra random edges; always connected."""
    rng = np.random.default_rng(seed)
    edges = {(int(rng.integers(0, v)), v) for v in range(1, n)}
    while len(edges) < min(n - 1 + extra_edges, n * (n - 1) // 2):
        u, v = int(rng.integers(0, n)), int(rng.integers(0, n))
        if u == v:
            continue
        edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(edges))


def union_find_components(n: int, edges) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def all_pairs_radius_center(g: Graph) -> tuple[int, int]:
    """Brute-force all-pairs BFS radius oracle."""
    nodes = g.alive
    best = None
    center = None
    for u in nodes:
        dist = {u: 0}
        q = deque([u])
        while q:
            v = q.popleft()
            for w in g.adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        assert len(dist) == len(nodes), "disconnected"
        ecc = max(dist.values())
        if best is None or ecc < best:
            best, center = ecc, u
    return best, center


def fig3_graph() -> Graph:
    """Eight-node graph on which {0,1,2,4,5} and {2,3,6,7} both induce
    connected subgraphs (stand-in for the two-measurement example)."""
    edges_1based = [(1, 2), (2, 3), (3, 4), (3, 5), (5, 6), (4, 7), (7, 8), (6, 8)]
    return Graph.from_edges(8, [(u - 1, v - 1) for u, v in edges_1based])


def fig6_tree() -> Graph:
    """Small rooted tree: root 0 with children 1,2,3; node 4 under 1 and
    node 6 under 2 (so measuring {4,6} traces back through {0,1,2})."""
    edges = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 6), (2, 7)]
    return Graph.from_edges(8, edges)


def five_link_network() -> Graph:
    """Network with five links whose links 1..4 form a connected subnetwork."""
    edges = [(0, 1), (1, 2), (1, 3), (2, 4), (4, 5)]
    return Graph.from_edges(6, edges)
