"""Outer multiset bases of full delta-ary trees.

Vertices use the BFS labelling of :class:`msdim.graph.FullAryTree` (0-based
internally).  The seed constants below are kept in the 1-based labels used
by every external interface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DepthLimitExceeded, InvalidParam, PremiseViolation, SearchBudgetExceeded
from .graph import FullAryTree, twin_partition
from .resolvability import Notion, histogram_rows, is_resolving
from .search import Budget, sweep

__all__ = [
    "DEPTH4_SEEDS",
    "SMALL_BINARY_BASES",
    "BasisCatalog",
    "root_multiplicity",
    "same_depth_resolving",
    "compose_bases",
    "recursion_step",
    "algorithm1",
    "dim_ms_full_binary",
    "build_binary_basis",
]

# three minimum bases of T_4^2 with root multiplicities 10, 9 and 11 (1-based)
DEPTH4_SEEDS: tuple[tuple[int, ...], ...] = (
    (22, 24, 14, 25, 26, 16, 28, 18, 2, 8, 30, 20, 21),
    (22, 12, 24, 14, 26, 16, 28, 18, 6, 8, 30, 20, 21),
    (22, 24, 14, 25, 26, 16, 17, 28, 18, 8, 30, 20, 21),
)

# lexicographically first minimum bases of T_1^2, T_2^2, T_3^2 (1-based),
# found by exhaustive search
SMALL_BINARY_BASES: dict[int, tuple[int, ...]] = {
    1: (2,),
    2: (2, 4, 6),
    3: (4, 8, 10, 12, 13, 14),
}

_BINARY_SMALL_DIMS = {1: 1, 2: 3, 3: 6, 4: 13}


def _zero_based(labels: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted(v - 1 for v in labels))


@dataclass(frozen=True)
class BasisCatalog:
    """Minimum outer multiset bases of one tree, one per root multiplicity."""

    delta: int
    depth: int
    bases: tuple[tuple[int, ...], ...] = ()
    root_multiplicities: tuple[int, ...] = ()
    dims: tuple[tuple[int, int], ...] = field(default=())

    @property
    def dimension(self) -> int | None:
        return len(self.bases[0]) if self.bases else None

    @property
    def certifies_recursion(self) -> bool:
        """Enough bases with distinct root multiplicities to run the depth recursion."""
        return len(set(self.root_multiplicities)) >= self.delta + 1

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "depth": self.depth,
            "dimension": self.dimension,
            "bases": [[v + 1 for v in b] for b in self.bases],
            "multiplicities": list(self.root_multiplicities),
            "dims_by_depth": {str(k): v for k, v in self.dims},
        }


def root_multiplicity(t: FullAryTree, S: Sequence[int]) -> int:
    """Multiplicity of the root's eccentricity in the root's multiset representation."""
    row = t.distances.d[t.root]
    ecc = int(row.max())
    return int(np.count_nonzero(row[list(S)] == ecc))


def same_depth_resolving(t: FullAryTree, S: Sequence[int]) -> bool:
    """Only pairs of non-members at the same depth need to be told apart."""
    S = sorted(set(int(v) for v in S))
    if not S:
        # two sibling leaves share every distance
        return t.n <= 2
    members = np.zeros(t.n, dtype=bool)
    members[S] = True
    outside = np.flatnonzero(~members)
    rows = np.column_stack([t.depths[outside], histogram_rows(t.distances, S)[outside]])
    return len(np.unique(rows, axis=0)) == len(outside)


def compose_bases(
    t: FullAryTree,
    branch_bases: Sequence[Sequence[int]],
    dimension: int | None = None,
) -> tuple[int, ...]:
    """Place one basis of ``t`` in each root branch of the next deeper tree.

    Each input is checked to be outer-multiset resolving on ``t`` (and of
    size ``dimension`` when given), and the inputs must have pairwise
    distinct root multiplicities.  Returns the union of the images.
    """
    delta, depth = t.delta, t.depth
    if depth <= 1:
        raise PremiseViolation("composition needs depth at least 2")
    if len(branch_bases) != delta:
        raise PremiseViolation(f"expected {delta} bases, got {len(branch_bases)}")
    bases = [tuple(sorted(set(int(v) for v in b))) for b in branch_bases]
    sizes = {len(b) for b in bases}
    if len(sizes) != 1:
        raise PremiseViolation(f"bases have different sizes {sorted(sizes)}")
    if dimension is not None and sizes != {dimension}:
        raise PremiseViolation(f"bases have size {sizes.pop()}, expected {dimension}")
    dm = t.distances
    for i, b in enumerate(bases):
        if any(not 0 <= v < t.n for v in b) or not is_resolving(dm, b, Notion.OUTER_MULTISET):
            raise PremiseViolation(f"input {i + 1} is not an outer multiset resolving set")
    mults = [root_multiplicity(t, b) for b in bases]
    if len(set(mults)) != len(mults):
        raise PremiseViolation(f"root multiplicities collide: {mults}")
    big = FullAryTree.build(delta, depth + 1)
    out: list[int] = []
    for k, b in enumerate(bases):
        out.extend(int(x) for x in big.branch_map(k)[list(b)])
    return tuple(sorted(out))


def recursion_step(
    t: FullAryTree, seeds: Sequence[Sequence[int]], check: bool = True
) -> tuple[tuple[int, ...], ...]:
    """Map ``delta + 1`` bases of ``t`` to ``delta + 1`` bases one level deeper.

    The ``i``-th output composes all seeds except the ``i``-th, in index order.
    """
    if len(seeds) != t.delta + 1:
        raise PremiseViolation(f"expected {t.delta + 1} seeds, got {len(seeds)}")
    out = []
    for i in range(len(seeds)):
        rest = [s for j, s in enumerate(seeds) if j != i]
        if check:
            out.append(compose_bases(t, rest))
        else:
            big = FullAryTree.build(t.delta, t.depth + 1)
            out.append(
                tuple(sorted(int(x) for k, s in enumerate(rest) for x in big.branch_map(k)[list(s)]))
            )
    return tuple(out)


def dim_ms_full_binary(depth: int) -> int:
    if depth < 1:
        raise InvalidParam(f"depth must be at least 1, got {depth}")
    if depth in _BINARY_SMALL_DIMS:
        return _BINARY_SMALL_DIMS[depth]
    return 13 << (depth - 4)


def build_binary_basis(depth: int, check: bool = True) -> tuple[int, ...]:
    """A minimum outer multiset basis of the full binary tree of this depth.

    From depth 4 on, the three seed bases are pushed down one level at a
    time; minimality beyond depth 4 follows from the recursion argument and
    is not re-checked by search.  ``check`` validates every composition.
    """
    if depth < 1:
        raise InvalidParam(f"depth must be at least 1, got {depth}")
    if depth in SMALL_BINARY_BASES:
        return _zero_based(SMALL_BINARY_BASES[depth])
    seeds = tuple(_zero_based(s) for s in DEPTH4_SEEDS)
    for level in range(4, depth):
        seeds = recursion_step(FullAryTree.build(2, level), seeds, check=check)
    return seeds[0]


def _catalog_at(
    t: FullAryTree,
    size: int,
    budget: Budget,
    threads: int,
    found: dict[int, tuple[int, ...]],
) -> None:
    classes = twin_partition(t).nontrivial()
    ecc = t.depth
    leaf_row = t.distances.d[t.root] == ecc
    stream = sweep(t.distances, size, Notion.OUTER_MULTISET, classes, budget=budget, threads=threads)
    try:
        for cands, ok in stream:
            hits = cands[ok]
            if not len(hits):
                continue
            mults = leaf_row[hits].sum(axis=1)
            for row, mu in zip(hits, mults):
                found.setdefault(int(mu), tuple(int(v) for v in row))
    finally:
        stream.close()


def algorithm1(
    delta: int,
    max_depth: int | None = None,
    max_candidates: int | None = None,
    threads: int = 1,
) -> tuple[int, BasisCatalog]:
    """Smallest depth whose tree has ``delta + 1`` minimum bases with distinct root multiplicities.

    At each depth the size sweep starts at ``delta`` times the previous
    dimension (1 at depth 1).  Within the first size that has any basis the
    whole size class is swept, and the lexicographically first basis for
    each root multiplicity is kept.
    """
    if delta < 2:
        raise InvalidParam(f"delta must be at least 2, got {delta}")
    budget = Budget(max_candidates)
    dims: list[tuple[int, int]] = []
    last: BasisCatalog | None = None
    lo = 1
    depth = 1
    while True:
        if max_depth is not None and depth > max_depth:
            partial = _partial(delta, depth - 1, last, dims)
            raise DepthLimitExceeded(f"no certifying catalog up to depth {max_depth}", partial)
        t = FullAryTree.build(delta, depth)
        found: dict[int, tuple[int, ...]] = {}
        size = lo
        while True:
            _catalog_at(t, size, budget, threads, found)
            if budget.exhausted:
                partial = _catalog(delta, depth, found, dims)
                raise SearchBudgetExceeded(
                    f"budget of {max_candidates} candidates exhausted at depth {depth}, size {size}",
                    partial,
                )
            if found:
                break
            # the sweep from the composition bound always succeeds within
            # delta sizes for delta = 2; keep climbing otherwise
            size += 1
        dims.append((depth, size))
        last = _catalog(delta, depth, found, dims)
        if last.certifies_recursion:
            return depth, last
        lo = delta * size
        depth += 1


def _catalog(delta: int, depth: int, found: dict[int, tuple[int, ...]], dims) -> BasisCatalog:
    order = sorted(found.items(), key=lambda kv: kv[1])
    return BasisCatalog(
        delta,
        depth,
        tuple(b for _, b in order),
        tuple(m for m, _ in order),
        tuple(dims),
    )


def _partial(delta: int, depth: int, last: "BasisCatalog | None", dims) -> BasisCatalog:
    if last is not None:
        return last
    return BasisCatalog(delta, depth, (), (), tuple(dims))
