"""Deterministic exhaustive sweep over fixed-size landmark sets.

Candidates of one size are produced in lexicographic order of their sorted
vertex tuples.  Twin pruning is built into the enumeration: a set that leaves
out two members of the same twin class can never resolve (the two twins keep
identical representations), so such sets are never generated.

Candidates are evaluated in chunks by a vectorized kernel.  Each vertex's
representation is packed into one ``int64``; duplicates are then found by
sorting the keys of every candidate row.  Chunks can be fanned out over a
thread pool, but results are always consumed in enumeration order, so
callers see the same stream for any worker count.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .graph import DistanceMatrix
from .resolvability import Notion, is_resolving

__all__ = ["Budget", "twin_feasible_combinations", "BatchKernel", "sweep", "resolve_threads"]

TAIL = 14
CHUNK_ROWS = 1 << 14
# elements per gathered (rows, size, n) block inside the kernel
_KERNEL_BLOCK = 1 << 22
_PACK_LIMIT = 1 << 62


def resolve_threads(threads: int | None) -> int:
    if not threads:
        return os.cpu_count() or 1
    return max(1, int(threads))


class Budget:
    """Caps the total number of candidates handed to the kernel."""

    def __init__(self, max_candidates: int | None = None):
        self.max_candidates = max_candidates
        self.used = 0
        self.exhausted = False

    def take(self, chunks: Iterator[np.ndarray]) -> Iterator[np.ndarray]:
        for chunk in chunks:
            if self.max_candidates is not None:
                room = self.max_candidates - self.used
                if room <= 0:
                    self.exhausted = True
                    return
                if len(chunk) > room:
                    chunk = chunk[:room]
                    self.exhausted = True
            self.used += len(chunk)
            yield chunk
            if self.exhausted:
                return


def twin_feasible_combinations(
    n: int,
    size: int,
    classes: Sequence[Sequence[int]] = (),
    chunk_rows: int = CHUNK_ROWS,
) -> Iterator[np.ndarray]:
    """Yield ``(rows, size)`` arrays of ``size``-subsets of ``range(n)``.

    Subsets come in lexicographic order and every subset omits at most one
    member of each class in ``classes``.
    """
    if size < 0 or size > n:
        return
    class_of = np.full(n, -1, dtype=np.int64)
    for c, members in enumerate(classes):
        class_of[list(members)] = c
    k = len(classes)
    t = min(n, TAIL)
    h = n - t

    # classes with members on both sides of the head/tail split
    tail_classes = sorted({int(c) for c in class_of[h:] if c >= 0})
    straddling = [c for c in tail_classes if (class_of[:h] == c).any()]
    tail_sizes = np.array([(class_of[h:] == c).sum() for c in tail_classes], dtype=np.int64)

    tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def table(r: int) -> tuple[np.ndarray, np.ndarray]:
        if r not in tables:
            if r:
                combos = np.array(list(combinations(range(t), r)), dtype=np.int64)
            else:
                combos = np.zeros((1, 0), dtype=np.int64)
            member = class_of[h:][combos]
            inside = np.zeros((len(combos), len(tail_classes)), dtype=np.int64)
            for j, c in enumerate(tail_classes):
                inside[:, j] = (member == c).sum(axis=1)
            tables[r] = (combos + h, tail_sizes[None, :] - inside)
        return tables[r]

    filtered: dict[tuple, np.ndarray] = {}

    def tail_block(r: int, head_excluded: np.ndarray) -> np.ndarray:
        key = (r,) + tuple(int(head_excluded[c]) for c in straddling)
        if key not in filtered:
            combos, excluded = table(r)
            allowed = np.array([1 - head_excluded[c] for c in tail_classes], dtype=np.int64)
            ok = (excluded <= allowed[None, :]).all(axis=1)
            filtered[key] = combos[ok]
        return filtered[key]

    excluded = np.zeros(max(k, 1), dtype=np.int64)
    # members of each vertex's class at positions >= i, for the vertex at i
    remaining = np.zeros(n, dtype=np.int64)
    seen = np.zeros(max(k, 1), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        if class_of[i] >= 0:
            seen[class_of[i]] += 1
            remaining[i] = seen[class_of[i]]
    prefix: list[int] = []
    pending: list[np.ndarray] = []
    pending_rows = 0

    def head(i: int, need: int) -> Iterator[np.ndarray]:
        # ``need``: vertices at positions >= i that must still be picked so
        # that no class loses two members; with this and the room check every
        # visited node has at least one completion
        if len(prefix) + need > size or size - len(prefix) > n - i:
            return
        if i == h:
            block = tail_block(size - len(prefix), excluded)
            if len(block):
                if prefix:
                    pre = np.broadcast_to(np.array(prefix, dtype=np.int64), (len(block), len(prefix)))
                    block = np.hstack([pre, block])
                yield block
            return
        c = class_of[i]
        if len(prefix) < size:
            prefix.append(i)
            drop = c >= 0 and (excluded[c] or remaining[i] >= 2)
            yield from head(i + 1, need - drop)
            prefix.pop()
        if c < 0 or excluded[c] == 0:
            if c >= 0:
                excluded[c] += 1
            yield from head(i + 1, need)
            if c >= 0:
                excluded[c] -= 1

    for block in head(0, sum(len(c) - 1 for c in classes)):
        pending.append(block)
        pending_rows += len(block)
        if pending_rows >= chunk_rows:
            yield np.concatenate(pending)
            pending, pending_rows = [], 0
    if pending:
        yield np.concatenate(pending)


class BatchKernel:
    """Evaluates a resolvability notion on many same-size landmark sets at once."""

    def __init__(self, dm: DistanceMatrix, notion: "Notion | str", size: int):
        self.dm = dm
        self.notion = Notion.parse(notion)
        self.size = size
        d = dm.d.astype(np.int64)
        diam = dm.diameter
        self.table: np.ndarray | None = None
        self.weights: np.ndarray | None = None
        if self.notion.is_multiset:
            base = size + 1
            if base ** (diam + 1) < _PACK_LIMIT:
                # key(u) = sum over landmarks of base**d(u, w): the base-(size+1)
                # digits of the key are the distance multiplicities
                self.table = (base ** np.arange(diam + 1, dtype=np.int64))[d]
        else:
            base = diam + 1
            if base**size < _PACK_LIMIT:
                self.table = d
                self.weights = base ** np.arange(size, dtype=np.int64)

    def __call__(self, cands: np.ndarray) -> np.ndarray:
        cands = np.asarray(cands, dtype=np.int64)
        if len(cands) == 0:
            return np.zeros(0, dtype=bool)
        if self.table is None:
            return np.array([is_resolving(self.dm, row, self.notion) for row in cands], dtype=bool)
        n = self.dm.n
        step = max(1, _KERNEL_BLOCK // max(1, self.size * n))
        out = np.empty(len(cands), dtype=bool)
        for lo in range(0, len(cands), step):
            out[lo : lo + step] = self._packed(cands[lo : lo + step])
        return out

    def _packed(self, cands: np.ndarray) -> np.ndarray:
        n = self.dm.n
        if self.size == 0:
            keys = np.zeros((len(cands), n), dtype=np.int64)
        elif self.weights is None:
            keys = self.table[cands].sum(axis=1)
        else:
            keys = np.einsum("bsn,s->bn", self.table[cands], self.weights)
        if self.notion.is_outer:
            # members get distinct negative sentinels so they never collide
            np.put_along_axis(keys, cands, -1 - cands, axis=1)
        keys.sort(axis=1)
        return ~(keys[:, 1:] == keys[:, :-1]).any(axis=1)


def _chunks_in_order(kernel, chunks: Iterator[np.ndarray], threads: int):
    if threads <= 1:
        for chunk in chunks:
            yield chunk, kernel(chunk)
        return
    pool = ThreadPoolExecutor(max_workers=threads)
    inflight: deque = deque()
    try:
        for chunk in chunks:
            inflight.append((chunk, pool.submit(kernel, chunk)))
            if len(inflight) >= 2 * threads:
                head, fut = inflight.popleft()
                yield head, fut.result()
        while inflight:
            head, fut = inflight.popleft()
            yield head, fut.result()
    finally:
        pool.shutdown(wait=True, cancel_futures=True)


def sweep(
    dm: DistanceMatrix,
    size: int,
    notion: "Notion | str",
    classes: Sequence[Sequence[int]] = (),
    budget: Budget | None = None,
    threads: int = 1,
    chunk_rows: int = CHUNK_ROWS,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Stream ``(candidates, resolving_mask)`` pairs for every ``size``-subset.

    The stream is in lexicographic candidate order regardless of ``threads``.
    Closing the generator early cancels outstanding work.
    """
    kernel = BatchKernel(dm, notion, size)
    chunks = twin_feasible_combinations(dm.n, size, classes, chunk_rows)
    if budget is not None:
        chunks = budget.take(chunks)
    yield from _chunks_in_order(kernel, chunks, resolve_threads(threads))
