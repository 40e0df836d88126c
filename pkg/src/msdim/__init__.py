"""Exact outer multiset dimension of graphs, with tree and 3-SAT gadget tooling."""

from .errors import *  # noqa: F401,F403
from .graph import (
    DistanceMatrix,
    FullAryTree,
    Graph,
    TwinPartition,
    all_pairs_distances,
    build_graph,
    family,
    parse_graph,
    serialize_graph,
    twin_partition,
)
from .resolvability import MultisetRepr, Notion, is_resolving, multiset_repr, vector_repr
from .solvers import (
    BoundReport,
    DimensionResult,
    bound_report,
    dim_exact,
    dim_ms_closed_form,
    dim_ms_exact,
    f,
    f_prime,
    lower_bound_twins,
    strict_gap_check,
)

__version__ = "0.1.0"
