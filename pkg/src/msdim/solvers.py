"""Lower bounds, exact dimension searches and closed forms for named families."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import Iterable

from .errors import InvalidParam, SearchBudgetExceeded
from .graph import Graph, parse_descriptor, twin_partition
from .resolvability import Notion, is_resolving
from .search import Budget, sweep

__all__ = [
    "f",
    "f_prime",
    "lower_bound_twins",
    "BoundReport",
    "bound_report",
    "DimensionResult",
    "dim_exact",
    "dim_ms_exact",
    "minimum_resolving_set",
    "dim_ms_closed_form",
    "strict_gap_check",
]

log = logging.getLogger(__name__)


def _check_nd(n: int, d: int) -> None:
    if n < 2 or d < 1:
        raise InvalidParam(f"need n >= 2 and d >= 1, got n={n}, d={d}")


def f(n: int, d: int) -> int:
    """Smallest k >= 1 with k + d**k >= n."""
    _check_nd(n, d)
    k = 1
    while k + d**k < n:
        k += 1
    return k


def f_prime(n: int, d: int) -> int:
    """Smallest k >= 1 with k + C(k+d-1, d-1) >= n.

    ``C(k+d-1, d-1)`` counts the multisets of size ``k`` drawn from ``d``
    distance values, i.e. the distinct multiset representations available
    to the vertices outside a ``k``-set in a graph of diameter ``d``.
    """
    _check_nd(n, d)
    k = 1
    while k + comb(k + d - 1, d - 1) < n:
        k += 1
    return k


def lower_bound_twins(g: Graph) -> int:
    """Sum over twin classes of (class size - 1)."""
    return sum(len(c) - 1 for c in twin_partition(g).classes)


@dataclass(frozen=True)
class BoundReport:
    twin_bound: int
    fprime_bound: int
    dim_bound: int | None = None

    @property
    def best(self) -> int:
        vals = [self.twin_bound, self.fprime_bound, 1]
        if self.dim_bound is not None:
            vals.append(self.dim_bound)
        return max(vals)


def bound_report(g: Graph, dim: int | None = None) -> BoundReport:
    if g.n < 2:
        raise InvalidParam("bounds are defined for non-trivial graphs only")
    return BoundReport(
        twin_bound=lower_bound_twins(g),
        fprime_bound=f_prime(g.n, g.distances.diameter),
        dim_bound=dim,
    )


@dataclass(frozen=True)
class DimensionResult:
    """Outcome of a dimension computation.

    ``value`` is ``None`` when only the interval ``[lower, upper]`` is known
    (budget exhausted); ``witness`` then certifies ``upper``.
    """

    notion: Notion
    value: int | None
    witness: tuple[int, ...]
    method: str
    bounds: tuple[tuple[str, int], ...] = ()
    lower: int = 0
    upper: int = 0
    candidates: int = 0

    @property
    def status(self) -> str:
        return "exact" if self.value is not None else "interval"


def minimum_resolving_set(
    g: Graph,
    notion: "Notion | str",
    start: int = 1,
    *,
    max_candidates: int | None = None,
    threads: int = 1,
    upper_hint: Iterable[int] | None = None,
    bounds: tuple[tuple[str, int], ...] = (),
) -> DimensionResult:
    """Sweep sizes upward from ``start`` and return the first resolving set found.

    Every size below ``start`` must already be excluded by a valid lower
    bound.  Within a size candidates are visited in lexicographic order, so
    the witness is the lexicographically least minimum resolving set.
    """
    notion = Notion.parse(notion)
    n = g.n
    if n < 2:
        raise InvalidParam("dimension searches need a non-trivial graph")
    dm = g.distances
    classes = twin_partition(g).nontrivial()
    budget = Budget(max_candidates)
    evaluated = 0
    start = max(1, start)
    for size in range(start, n):
        stream = sweep(dm, size, notion, classes, budget=budget, threads=threads)
        try:
            for cands, ok in stream:
                if ok.any():
                    i = int(ok.argmax())
                    witness = tuple(int(v) for v in cands[i])
                    return DimensionResult(
                        notion, size, witness, "search", bounds, size, size, evaluated + i + 1
                    )
                evaluated += len(cands)
        finally:
            stream.close()
        if budget.exhausted:
            upper_witness = tuple(range(n - 1))
            if upper_hint is not None:
                hint = tuple(sorted(set(int(v) for v in upper_hint)))
                if len(hint) < n - 1 and is_resolving(dm, hint, notion):
                    upper_witness = hint
            partial = DimensionResult(
                notion, None, upper_witness, "search", bounds, size, len(upper_witness), evaluated
            )
            raise SearchBudgetExceeded(
                f"budget of {max_candidates} candidates exhausted at size {size}", partial
            )
        log.debug("size %d excluded after %d candidates", size, evaluated)
    # V minus one vertex always resolves, so the sweep cannot fall through
    raise AssertionError("size n-1 must resolve")


def dim_exact(g: Graph, *, max_candidates: int | None = None, threads: int = 1) -> DimensionResult:
    """Metric dimension with the lexicographically least minimum witness."""
    if g.n < 2:
        raise InvalidParam("dimension searches need a non-trivial graph")
    bounds = (
        ("twins", lower_bound_twins(g)),
        ("f", f(g.n, g.distances.diameter)),
        ("trivial", 1),
    )
    start = max(v for _, v in bounds)
    return minimum_resolving_set(
        g, Notion.RESOLVING, start, max_candidates=max_candidates, threads=threads, bounds=bounds
    )


def dim_ms_exact(
    g: Graph,
    *,
    max_candidates: int | None = None,
    threads: int = 1,
    upper_hint: Iterable[int] | None = None,
) -> DimensionResult:
    """Outer multiset dimension by a bound-seeded, twin-pruned size sweep."""
    rep = bound_report(g)
    bounds = (("twins", rep.twin_bound), ("f_prime", rep.fprime_bound), ("trivial", 1))
    return minimum_resolving_set(
        g,
        Notion.OUTER_MULTISET,
        rep.best,
        max_candidates=max_candidates,
        threads=threads,
        upper_hint=upper_hint,
        bounds=bounds,
    )


def _closed(value: int, witness: Iterable[int]) -> DimensionResult:
    w = tuple(sorted(witness))
    return DimensionResult(Notion.OUTER_MULTISET, value, w, "closed-form", (), value, value)


def dim_ms_closed_form(descriptor: str) -> DimensionResult | None:
    """Outer multiset dimension of a covered family, or ``None`` if not covered.

    Covered: paths, cycles, complete graphs, complete multipartite graphs with
    equal parts, and full binary trees.  The witness is built for the
    canonical labelling produced by :func:`msdim.graph.family`.
    """
    name, args = parse_descriptor(descriptor)
    if name == "path" and len(args) == 1 and args[0] >= 2:
        return _closed(1, [0])
    if name == "cycle" and len(args) == 1 and args[0] >= 3:
        n = args[0]
        if n <= 5:
            return _closed(n - 1, range(n - 1))
        return _closed(3, [0, 2, 3])
    if name == "complete" and len(args) == 1 and args[0] >= 2:
        n = args[0]
        return _closed(n - 1, range(n - 1))
    if name == "kpartite" and len(args) >= 2 and len(set(args)) == 1 and args[0] >= 1:
        # parts of size 1 give a complete graph, which has the same value
        n = sum(args)
        return _closed(n - 1, range(n - 1))
    if name == "tree" and len(args) == 2 and args[0] == 2 and args[1] >= 1:
        from .trees import build_binary_basis, dim_ms_full_binary

        depth = args[1]
        return _closed(dim_ms_full_binary(depth), build_binary_basis(depth))
    return None


def strict_gap_check(g: Graph) -> bool:
    """True when dim(G) < f'(n, diam), which forces dim_ms(G) > dim(G)."""
    return dim_exact(g).value < f_prime(g.n, g.distances.diameter)
