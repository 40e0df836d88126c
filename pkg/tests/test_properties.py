"""Property-based checks of the invariants tying the notions and bounds together."""

import random

import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from msdim.graph import Graph, build_graph, twin_partition
from msdim.resolvability import Notion, is_resolving, multiset_repr, vector_repr
from msdim.solvers import dim_exact, dim_ms_exact, f_prime, lower_bound_twins

from helpers import random_connected, to_nx
from oracles import naive_dim, naive_dim_ms, naive_is_resolving, naive_twin_bound


@st.composite
def connected_graphs(draw, min_n=2, max_n=10) -> Graph:
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    edges = {(p, v) for v, p in zip(range(1, n), parents)}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=2 * n)) if pairs else []
    return build_graph(n, edges | set(extra))


@st.composite
def graph_and_set(draw, max_n=10):
    g = draw(connected_graphs(max_n=max_n))
    S = draw(st.sets(st.integers(0, g.n - 1), max_size=g.n))
    return g, sorted(S)


def hierarchy_holds(g: Graph, S) -> bool:
    d = g.distances
    ms = is_resolving(d, S, Notion.MULTISET)
    oms = is_resolving(d, S, Notion.OUTER_MULTISET)
    ors = is_resolving(d, S, Notion.OUTER_RESOLVING)
    rs = is_resolving(d, S, Notion.RESOLVING)
    return (not ms or oms) and (not oms or ors) and ors == rs


@settings(max_examples=400, deadline=None)
@given(graph_and_set())
def test_hierarchy(gs):
    assert hierarchy_holds(*gs)


def test_hierarchy_ten_thousand_pairs():
    rng = random.Random(2024)
    pairs = 0
    while pairs < 10_000:
        G = random_connected(rng.randint(2, 10), rng)
        g = build_graph(G.number_of_nodes(), list(G.edges))
        for _ in range(20):
            S = rng.sample(range(g.n), rng.randint(0, g.n))
            assert hierarchy_holds(g, S)
            pairs += 1


@settings(max_examples=200, deadline=None)
@given(graph_and_set(max_n=8))
def test_predicates_match_definitions(gs):
    g, S = gs
    G = to_nx(g)
    for notion in Notion:
        assert is_resolving(g.distances, S, notion) == naive_is_resolving(G, S, notion.value)


@settings(max_examples=150, deadline=None)
@given(connected_graphs(min_n=2))
def test_all_but_one_vertex_resolves(g):
    for v in range(g.n):
        rest = [u for u in range(g.n) if u != v]
        assert is_resolving(g.distances, rest, Notion.OUTER_MULTISET)


@settings(max_examples=200, deadline=None)
@given(graph_and_set())
def test_twins_cannot_both_stay_outside(gs):
    g, S = gs
    inside = set(S)
    for cls in twin_partition(g).nontrivial():
        outside = [v for v in cls if v not in inside]
        if len(outside) >= 2:
            assert not is_resolving(g.distances, S, Notion.OUTER_MULTISET)


@settings(max_examples=200, deadline=None)
@given(graph_and_set(), st.randoms(use_true_random=False))
def test_representations_under_landmark_permutation(gs, rnd):
    g, S = gs
    if not S:
        return
    shuffled = list(S)
    rnd.shuffle(shuffled)
    d = g.distances
    for u in range(g.n):
        assert multiset_repr(d, u, S) == multiset_repr(d, u, shuffled)
        vec = dict(zip(S, vector_repr(d, u, S)))
        assert vector_repr(d, u, shuffled) == tuple(vec[w] for w in shuffled)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=8), st.randoms(use_true_random=False))
def test_dimension_is_relabeling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    a, b = dim_ms_exact(g), dim_ms_exact(h)
    assert a.value == b.value
    # the image of a basis is a basis of the relabeled graph
    assert is_resolving(h.distances, [perm[v] for v in a.witness], Notion.OUTER_MULTISET)


@settings(max_examples=80, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(connected_graphs(max_n=8))
def test_bounds_and_oracle(g):
    res = dim_ms_exact(g)
    dim = dim_exact(g).value
    G = to_nx(g)
    assert 1 <= res.value <= g.n - 1
    assert res.value >= dim
    assert res.value >= lower_bound_twins(g)
    assert res.value >= f_prime(g.n, g.distances.diameter)
    assert lower_bound_twins(g) == naive_twin_bound(G)
    assert res.value == naive_dim_ms(G)
    assert dim == naive_dim(G)


@settings(max_examples=100, deadline=None)
@given(connected_graphs(max_n=7))
def test_dimension_one_iff_path(g):
    G = to_nx(g)
    is_path = nx.is_tree(G) and max(d for _, d in G.degree) <= 2
    assert (dim_ms_exact(g).value == 1) == is_path


@settings(max_examples=100, deadline=None)
@given(connected_graphs(max_n=8))
def test_twin_partition_is_a_partition(g):
    part = twin_partition(g)
    flat = sorted(v for c in part.classes for v in c)
    assert flat == list(range(g.n))
    for cls in part.nontrivial():
        u = cls[0]
        for v in cls[1:]:
            open_eq = set(g.neighbors(u)) == set(g.neighbors(v))
            closed_eq = set(g.neighbors(u)) | {u} == set(g.neighbors(v)) | {v}
            assert open_eq or closed_eq
