"""Seeded random graphs (Erdos-Renyi, Barabasi-Albert, random trees), the
partition-based pipeline for Erdos-Renyi graphs, and giant-component
quantities used for comparison against theory."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .general import algorithm1
from .graphs import Graph, HubCertificate, Partition, components, validate_partition
from .kernels import CompleteKernelSpec, complete_kernel, derive_seed, spec_for_group
from .matrices import DecodeGroup, DecodePlan, MeasurementMatrix, hub_compose

__all__ = [
    "ErdosRenyiSpec",
    "BarabasiAlbertSpec",
    "gen_er",
    "gen_ba",
    "random_attachment_tree",
    "SplitResult",
    "er_partition_split",
    "PipelineResult",
    "er_pipeline",
    "giant_component_alpha",
    "expected_component_count",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ErdosRenyiSpec:
    """G(n, p); ``beta`` sets p = beta ln(n) / n when p is not given."""

    n: int
    p: float | None = None
    beta: float | None = None
    seed: int = 0

    def edge_probability(self) -> float:
        if self.p is not None:
            p = self.p
        elif self.beta is not None:
            p = self.beta * math.log(self.n) / self.n
        else:
            raise ValueError("need p or beta")
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"edge probability {p} outside [0, 1]")
        return p


@dataclass(frozen=True)
class BarabasiAlbertSpec:
    n: int
    m: int
    m0: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.m0 <= self.n:
            raise ValueError("need 1 <= m <= m0 <= n")


def gen_er(spec: ErdosRenyiSpec) -> Graph:
    """Every pair joined independently with probability p (seeded)."""
    p = spec.edge_probability()
    n = spec.n
    rng = np.random.default_rng(spec.seed & _MASK64)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    edges = list(zip(iu[mask].tolist(), ju[mask].tolist()))
    return Graph.from_edges(n, edges)


def random_attachment_tree(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Random tree grown by joining each new node to a uniformly chosen
    earlier node."""
    return [(int(rng.integers(0, v)), v) for v in range(1, n)]


def gen_ba(spec: BarabasiAlbertSpec) -> Graph:
    """Preferential attachment: start from a random tree of m0 nodes, then
    each new node picks m distinct neighbors with probability proportional
    to degree."""
    rng = np.random.default_rng(spec.seed & _MASK64)
    edges = random_attachment_tree(spec.m0, rng)
    repeated: list[int] = []
    for u, v in edges:
        repeated.append(u)
        repeated.append(v)
    for v in range(spec.m0, spec.n):
        chosen: set[int] = set()
        while len(chosen) < spec.m:
            pick = repeated[int(rng.integers(0, len(repeated)))]
            chosen.add(pick)
        for u in sorted(chosen):
            edges.append((u, v))
            repeated.append(u)
            repeated.append(v)
    return Graph.from_edges(spec.n, edges)


@dataclass(frozen=True)
class SplitResult:
    partition: Partition
    valid: bool
    reason: str | None


def er_partition_split(g: Graph, beta: float, epsilon: float, seed: int = 0,
                       ) -> SplitResult:
    """Shuffle node ids and deal them round-robin into
    ceil((beta-eps)/(beta-eps-1)) near-equal groups, then validate the
    partition (complement of each group must be its hub)."""
    if beta - epsilon <= 1.0:
        raise ValueError("need beta - epsilon > 1")
    r = math.ceil((beta - epsilon) / (beta - epsilon - 1.0))
    rng = np.random.default_rng(seed & _MASK64)
    order = rng.permutation(g.n)
    groups = tuple(frozenset(int(v) for v in order[i::r]) for i in range(r))
    partition = Partition(groups)
    ok, reason = validate_partition(g, partition)
    return SplitResult(partition, ok, reason)


@dataclass(frozen=True)
class PipelineResult:
    matrix: MeasurementMatrix
    regime: str
    partition_r: int | None

    @property
    def row_count(self) -> int:
        return self.matrix.m


def _partition_matrix(g: Graph, partition: Partition, k: int,
                      spec: CompleteKernelSpec) -> MeasurementMatrix:
    rows: list[tuple[int, ...]] = []
    groups: list[DecodeGroup] = []
    universe = set(range(g.n))
    for gi, grp in enumerate(partition.groups):
        targets = sorted(grp)
        hub = frozenset(universe - grp)
        kernel = complete_kernel(k, len(targets), spec_for_group(spec, gi))
        cert = HubCertificate(hub, frozenset(targets))
        new_rows, dec = hub_compose(g, cert, kernel, row_offset=len(rows))
        rows.extend(new_rows)
        groups.append(dec)
    return MeasurementMatrix(g.n, tuple(rows), DecodePlan(tuple(groups)))


def _relabel_matrix(sub: MeasurementMatrix, mapping: list[int], n: int,
                    ) -> tuple[list[tuple[int, ...]], list[DecodeGroup]]:
    rows = [tuple(sorted(mapping[j] for j in row)) for row in sub.rows]
    groups = []
    for grp in sub.decode_plan.groups:
        groups.append(DecodeGroup(
            target=tuple(mapping[j] for j in grp.target),
            row_range=grp.row_range,
            hub_row=grp.hub_row,
            prior_subtract=tuple(tuple(mapping[j] for j in p)
                                 for p in grp.prior_subtract),
            kernel=grp.kernel))
    return rows, groups


def er_pipeline(g: Graph, k: int, spec: CompleteKernelSpec,
                ) -> PipelineResult:
    """Regime dispatch on observed structure.  Connected graphs try seeded
    half-splits (r = 2, then 3) and fall back to the leaf-group algorithm;
    disconnected graphs run it on the giant component and measure every
    small-component node directly."""
    comps = components(g)
    if len(comps) == 1:
        for r in (2, 3):
            beta = r / (r - 1) + 1e-9  # smallest beta giving this many groups
            split = er_partition_split(g, beta, 1e-12, seed=spec.rng_seed)
            if split.valid:
                matrix = _partition_matrix(g, split.partition, k, spec)
                return PipelineResult(matrix, f"connected-{r}-partition", r)
        return PipelineResult(algorithm1(g, k, spec), "connected-algorithm1", None)

    giant = max(comps, key=len)  # components are ordered by smallest member
    mapping = list(giant)
    local = {v: i for i, v in enumerate(mapping)}
    sub = Graph.from_edges(len(giant), [
        (local[u], local[v]) for u, v in g.edges()
        if u in local and v in local])
    sub_matrix = algorithm1(sub, k, spec)
    rows, groups = _relabel_matrix(sub_matrix, mapping, g.n)

    small = sorted(v for comp in comps for v in comp if comp is not giant)
    if small:
        start = len(rows)
        rows.extend((v,) for v in small)
        eye = tuple(tuple(1 if i == j else 0 for j in range(len(small)))
                    for i in range(len(small)))
        groups.append(DecodeGroup(
            target=tuple(small), row_range=(start, start + len(small)),
            hub_row=None, prior_subtract=((),) * len(small), kernel=eye))
    matrix = MeasurementMatrix(g.n, tuple(rows), DecodePlan(tuple(groups)))
    return PipelineResult(matrix, "disconnected-giant", None)


def giant_component_alpha(c: float, tol: float = 1e-12) -> float:
    """Giant-component fraction: the root of exp(-c a) = 1 - a in (0, 1),
    by bisection; 0 when c <= 1."""
    if c <= 1.0:
        return 0.0
    f = lambda a: 1.0 - a - math.exp(-c * a)
    lo, hi = tol, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def expected_component_count(n: int, c: float) -> float:
    """Leading-order expected number of components of G(n, c/n)."""
    a = giant_component_alpha(c)
    return (1.0 - a - c * (1.0 - a) ** 2 / 2.0) * n
