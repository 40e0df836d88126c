"""Simple connected graphs, dense hop-distance matrices and twin classes.

Vertex ids are 0-based everywhere inside the package.  Files, CLI flags and
reports use 1-based labels; the conversion happens only in the I/O helpers
(:func:`parse_graph`, :func:`serialize_graph`) and in the CLI.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import DisconnectedGraph, InvalidDescriptor, InvalidEdge, ParseError

__all__ = [
    "Graph",
    "FullAryTree",
    "DistanceMatrix",
    "TwinKind",
    "TwinPartition",
    "build_graph",
    "all_pairs_distances",
    "eccentricity",
    "twin_partition",
    "family",
    "parse_graph",
    "serialize_graph",
]


@dataclass(frozen=True)
class Graph:
    """Immutable simple connected undirected graph on vertices ``0..n-1``."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def distances(self) -> "DistanceMatrix":
        return all_pairs_distances(self)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return build_graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()])


@dataclass(frozen=True)
class FullAryTree(Graph):
    """Full ``delta``-ary tree of the given depth, labelled breadth-first.

    The root is vertex 0 and the children of vertex ``k`` are
    ``delta*k + 1 .. delta*k + delta``, which is the 0-based form of the
    ascending breadth-first labelling (root labelled 1 externally).
    """

    delta: int = 2
    depth: int = 1

    root = 0

    @classmethod
    def build(cls, delta: int, depth: int) -> "FullAryTree":
        if delta < 2 or depth < 0:
            raise InvalidDescriptor(f"tree needs delta >= 2 and depth >= 0, got {delta},{depth}")
        n = tree_order(delta, depth)
        internal = tree_order(delta, depth - 1) if depth > 0 else 0
        edges = [(k, delta * k + c) for k in range(internal) for c in range(1, delta + 1)]
        g = build_graph(n, edges)
        return cls(n=g.n, adjacency=g.adjacency, delta=delta, depth=depth)

    def level(self, t: int) -> range:
        """Vertex ids at distance ``t`` from the root."""
        start = tree_order(self.delta, t - 1) if t > 0 else 0
        return range(start, start + self.delta**t)

    def depth_of(self, v: int) -> int:
        t = 0
        while v >= tree_order(self.delta, t):
            t += 1
        return t

    @cached_property
    def depths(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        for t in range(self.depth + 1):
            r = self.level(t)
            out[r.start : r.stop] = t
        return out

    @property
    def leaves(self) -> range:
        return self.level(self.depth)

    def branch_map(self, k: int) -> np.ndarray:
        """Order-preserving isomorphism from the depth-(depth-1) tree onto branch ``k``.

        Entry ``u`` is the id, in this tree, of the image of vertex ``u`` of
        the one-level-shallower tree under the map onto the subtree rooted at
        the ``k``-th child of the root.
        """
        if self.depth < 1 or not 0 <= k < self.delta:
            raise ValueError(f"no branch {k} in a depth-{self.depth} tree")
        sub = tree_order(self.delta, self.depth - 1)
        out = np.empty(sub, dtype=np.int64)
        for t in range(self.depth):
            width = self.delta**t
            src = tree_order(self.delta, t - 1) if t > 0 else 0
            dst = tree_order(self.delta, t) + k * width
            out[src : src + width] = np.arange(dst, dst + width)
        return out


def tree_order(delta: int, depth: int) -> int:
    """Number of vertices of a full ``delta``-ary tree of the given depth."""
    if depth < 0:
        return 0
    return (delta ** (depth + 1) - 1) // (delta - 1)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Dense all-pairs hop distances; ``d[u, v]`` is a small unsigned integer."""

    d: np.ndarray

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @cached_property
    def diameter(self) -> int:
        return int(self.d.max()) if self.d.size else 0

    def __getitem__(self, key):
        return self.d[key]


class TwinKind(str, Enum):
    TRUE = "true-twin"
    FALSE = "false-twin"
    SINGLETON = "singleton"


@dataclass(frozen=True)
class TwinPartition:
    classes: tuple[tuple[int, ...], ...]
    kinds: tuple[TwinKind, ...]

    def nontrivial(self) -> list[tuple[int, ...]]:
        return [c for c in self.classes if len(c) > 1]

    def class_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.classes) for v in c}


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a connected simple graph; duplicate edges are merged."""
    if n < 1:
        raise InvalidEdge(f"a graph needs at least one vertex, got n={n}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidEdge(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise InvalidEdge(f"self-loop at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    if not all(seen):
        missing = seen.index(False)
        raise DisconnectedGraph(f"graph is not connected (vertex {missing} unreachable from 0)")
    return Graph(n=n, adjacency=tuple(tuple(sorted(s)) for s in nbrs))


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    n = g.n
    rows = [u for u in range(n) for _ in g.adjacency[u]]
    cols = [v for u in range(n) for v in g.adjacency[u]]
    adj = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    d = shortest_path(adj, method="D", directed=False, unweighted=True)
    if np.isinf(d).any():
        raise DisconnectedGraph("graph is not connected")
    out = d.astype(np.uint16)
    out.setflags(write=False)
    return DistanceMatrix(out)


def eccentricity(dm: DistanceMatrix, v: int) -> int:
    return int(dm.d[v].max())


def twin_partition(g: Graph) -> TwinPartition:
    """Maximal twin classes, ordered by smallest member."""
    by_open: dict[tuple[int, ...], list[int]] = {}
    by_closed: dict[tuple[int, ...], list[int]] = {}
    for v in range(g.n):
        by_open.setdefault(g.adjacency[v], []).append(v)
        by_closed.setdefault(tuple(sorted(g.adjacency[v] + (v,))), []).append(v)
    assigned: dict[int, tuple[tuple[int, ...], TwinKind]] = {}
    for members in by_open.values():
        if len(members) > 1:
            cls = tuple(members)
            for v in cls:
                assigned[v] = (cls, TwinKind.FALSE)
    for members in by_closed.values():
        if len(members) > 1:
            cls = tuple(members)
            for v in cls:
                # a vertex cannot have both a false twin and a true twin
                assert v not in assigned
                assigned[v] = (cls, TwinKind.TRUE)
    classes: list[tuple[int, ...]] = []
    kinds: list[TwinKind] = []
    for v in range(g.n):
        cls, kind = assigned.get(v, ((v,), TwinKind.SINGLETON))
        if cls[0] == v:
            classes.append(cls)
            kinds.append(kind)
    return TwinPartition(tuple(classes), tuple(kinds))


_DESCRIPTOR = re.compile(r"^\s*([a-z]+)\s*:\s*([0-9,\s]+)$")


def parse_descriptor(descriptor: str) -> tuple[str, tuple[int, ...]]:
    m = _DESCRIPTOR.match(descriptor)
    if not m:
        raise InvalidDescriptor(f"cannot parse family descriptor {descriptor!r}")
    try:
        args = tuple(int(x) for x in m.group(2).split(","))
    except ValueError:
        raise InvalidDescriptor(f"bad sizes in {descriptor!r}") from None
    return m.group(1), args


def family(descriptor: str) -> Graph:
    """Canonical instance of a named family, e.g. ``"cycle:7"`` or ``"tree:2,4"``.

    Families: ``path:n``, ``cycle:n``, ``complete:n``, ``kpartite:r1,...,rk``,
    ``wheel:n`` (hub 0 joined to the cycle ``1..n``), ``tree:delta,depth``.
    """
    name, args = parse_descriptor(descriptor)

    def one() -> int:
        if len(args) != 1:
            raise InvalidDescriptor(f"{name} takes exactly one size, got {descriptor!r}")
        return args[0]

    if name == "path":
        n = one()
        if n < 1:
            raise InvalidDescriptor("path needs n >= 1")
        return build_graph(n, [(i, i + 1) for i in range(n - 1)])
    if name == "cycle":
        n = one()
        if n < 3:
            raise InvalidDescriptor("cycle needs n >= 3")
        return build_graph(n, [(i, (i + 1) % n) for i in range(n)])
    if name == "complete":
        n = one()
        if n < 1:
            raise InvalidDescriptor("complete needs n >= 1")
        return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if name == "kpartite":
        if len(args) < 2 or min(args) < 1:
            raise InvalidDescriptor("kpartite needs at least two parts of size >= 1")
        part = [p for p, r in enumerate(args) for _ in range(r)]
        n = len(part)
        return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if part[i] != part[j]])
    if name == "wheel":
        n = one()
        if n < 3:
            raise InvalidDescriptor("wheel needs a rim of at least 3 vertices")
        rim = [(i, i % n + 1) for i in range(1, n + 1)]
        return build_graph(n + 1, [(0, i) for i in range(1, n + 1)] + rim)
    if name == "tree":
        if len(args) != 2:
            raise InvalidDescriptor("tree takes delta,depth")
        delta, depth = args
        if delta < 2 or depth < 1:
            raise InvalidDescriptor("tree needs delta >= 2 and depth >= 1")
        return FullAryTree.build(delta, depth)
    raise InvalidDescriptor(f"unknown family {name!r}")


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: header ``n m`` then ``m`` lines ``u v`` (1-based)."""
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            if a < 1 or b < 0:
                raise ParseError(f"bad header {line!r}", lineno)
            header = (a, b)
            continue
        n = header[0]
        if not (1 <= a <= n and 1 <= b <= n):
            raise ParseError(f"vertex id out of range 1..{n} in {line!r}", lineno)
        if a == b:
            raise ParseError(f"self-loop {line!r}", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise ParseError(f"duplicate edge {line!r}", lineno)
        seen.add(key)
        edges.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing header line 'n m'")
    if len(edges) != header[1]:
        raise ParseError(f"header announces {header[1]} edges, found {len(edges)}")
    return build_graph(header[0], edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"
