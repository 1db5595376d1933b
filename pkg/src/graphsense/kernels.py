"""Complete-graph measurement kernels f(k, n): the dense 0-1 blocks that
hub composition lifts onto constrained graphs.

Two families are provided: the binary-expansion matrix (1-sparse signals
only) and seeded Bernoulli(1/2) blocks, optionally with a forced all-ones
final row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "BINARY_EXPANSION",
    "BERNOULLI_HALF",
    "BERNOULLI_ONES_ROW",
    "CompleteKernelSpec",
    "complete_kernel",
    "kernel_row_count",
    "default_kernel_spec",
    "derive_seed",
    "spec_for_group",
]

BINARY_EXPANSION = "binary-expansion"
BERNOULLI_HALF = "bernoulli-half"
BERNOULLI_ONES_ROW = "bernoulli-ones-row"
_KINDS = (BINARY_EXPANSION, BERNOULLI_HALF, BERNOULLI_ONES_ROW)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class CompleteKernelSpec:
    """Which kernel family to draw from, and how.

    ``row_count_override`` replaces the default Bernoulli row count
    ceil(c * k * ln(max(n/k, 2))) + 1.  Binary expansion ignores the seed
    and the row count; it is only valid for k = 1.
    """

    kind: str = BINARY_EXPANSION
    row_count_override: int | None = None
    rng_seed: int = 0
    c: float = 4.0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.row_count_override is not None and self.row_count_override < 1:
            raise ValueError("row count override must be positive")


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic per-subtask seed derived from a base seed."""
    ss = np.random.SeedSequence([seed & _MASK64, *[p & _MASK64 for p in path]])
    return int(ss.generate_state(1, np.uint64)[0])


def spec_for_group(spec: CompleteKernelSpec, index: int) -> CompleteKernelSpec:
    """Same spec with an independent seed stream for group ``index``."""
    return replace(spec, rng_seed=derive_seed(spec.rng_seed, index))


def default_kernel_spec(k: int, seed: int = 0) -> CompleteKernelSpec:
    kind = BINARY_EXPANSION if k == 1 else BERNOULLI_HALF
    return CompleteKernelSpec(kind=kind, rng_seed=seed)


def kernel_row_count(spec: CompleteKernelSpec, k: int, n_t: int) -> int:
    """Rows the kernel will have for target size ``n_t``.  The Bernoulli
    default is capped at n_t: a square block already carries complete
    information, so extra coin rows would add nothing."""
    if n_t < 1:
        return 0
    if spec.kind == BINARY_EXPANSION:
        return math.ceil(math.log2(n_t + 1))
    if spec.row_count_override is not None:
        return spec.row_count_override
    return min(math.ceil(spec.c * k * math.log(max(n_t / k, 2.0))) + 1, n_t)


def _binary_expansion(n_t: int) -> np.ndarray:
    rows = math.ceil(math.log2(n_t + 1))
    out = np.zeros((rows, n_t), dtype=np.int64)
    for j in range(n_t):
        for r in range(rows):  # most-significant digit first
            out[r, j] = (j + 1) >> (rows - 1 - r) & 1
    return out


def complete_kernel(k: int, n_t: int, spec: CompleteKernelSpec,
                    max_redraws: int = 64) -> np.ndarray:
    """Dense 0-1 block F with one column per target.

    Bernoulli blocks are redrawn (bounded retries, same seed stream) until
    no row or column is all-zero; the ones-row variant forces the final row
    to all ones.
    """
    if k < 1:
        raise ValueError("sparsity k must be >= 1")
    if n_t < 0:
        raise ValueError("target size must be >= 0")
    if n_t == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if spec.kind == BINARY_EXPANSION:
        if k != 1:
            raise ValueError("binary expansion only identifies 1-sparse vectors")
        return _binary_expansion(n_t)

    m = kernel_row_count(spec, k, n_t)
    rng = np.random.default_rng(spec.rng_seed & _MASK64)
    force_ones = spec.kind == BERNOULLI_ONES_ROW
    n_random = m - 1 if force_ones else m
    if n_random < 0:
        raise ValueError("ones-row kernel needs at least one row")
    for _ in range(max_redraws):
        block = (rng.random((n_random, n_t)) < 0.5).astype(np.int64)
        if force_ones:
            block = np.vstack([block, np.ones((1, n_t), dtype=np.int64)])
        if not (block.any(axis=1).all() and block.any(axis=0).all()):
            continue
        if m >= n_t and np.linalg.matrix_rank(block) < n_t:
            continue  # overdetermined blocks must determine their targets
        return block
    raise ValueError(
        f"could not draw an acceptable kernel in {max_redraws} tries")
