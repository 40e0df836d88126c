import random

import networkx as nx
import numpy as np
import pytest

from msdim.errors import DisconnectedGraph, InvalidDescriptor, InvalidEdge, ParseError
from msdim.graph import (
    FullAryTree,
    TwinKind,
    all_pairs_distances,
    build_graph,
    eccentricity,
    family,
    parse_graph,
    serialize_graph,
    tree_order,
    twin_partition,
)

from helpers import random_connected, to_nx


def test_build_path_and_cycle():
    p3 = build_graph(3, [(0, 1), (1, 2)])
    assert p3.adjacency == ((1,), (0, 2), (1,))
    c4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert all(c4.degree(v) == 2 for v in range(4))
    assert c4.m == 4


def test_build_merges_duplicates():
    g = build_graph(2, [(0, 1), (1, 0), (0, 1)])
    assert g.m == 1


@pytest.mark.parametrize(
    "n, edges, err",
    [
        (4, [(0, 1), (2, 3)], DisconnectedGraph),
        (3, [(0, 3)], InvalidEdge),
        (3, [(1, 1), (0, 1), (1, 2)], InvalidEdge),
        (0, [], InvalidEdge),
    ],
)
def test_build_errors(n, edges, err):
    with pytest.raises(err):
        build_graph(n, edges)


def test_distances_small():
    assert all_pairs_distances(family("path:3")).d[0, 2] == 2
    assert family("cycle:6").distances.d[0, 3] == 3
    assert family("wheel:5").distances.diameter == 2


def test_distance_matrix_is_read_only():
    d = family("path:4").distances.d
    with pytest.raises(ValueError):
        d[0, 1] = 5


def test_eccentricity():
    assert eccentricity(family("path:3").distances, 1) == 1
    t = family("tree:2,4")
    assert eccentricity(t.distances, t.root) == 4
    k5 = family("complete:5").distances
    assert {eccentricity(k5, v) for v in range(5)} == {1}


def test_twin_partition_examples():
    k4 = twin_partition(family("complete:4"))
    assert k4.classes == ((0, 1, 2, 3),) and k4.kinds == (TwinKind.TRUE,)
    k22 = twin_partition(family("kpartite:2,2"))
    assert k22.classes == ((0, 1), (2, 3))
    assert set(k22.kinds) == {TwinKind.FALSE}
    p4 = twin_partition(family("path:4"))
    assert p4.classes == ((0,), (1,), (2,), (3,))
    assert p4.nontrivial() == []


def test_twin_partition_tree_leaves():
    t = FullAryTree.build(2, 3)
    pairs = twin_partition(t).nontrivial()
    assert pairs == [(7, 8), (9, 10), (11, 12), (13, 14)]


def test_twin_classes_follow_relabeling():
    rng = random.Random(7)
    for _ in range(50):
        G = random_connected(rng.randint(3, 9), rng, p=0.5)
        g = build_graph(G.number_of_nodes(), list(G.edges))
        perm = list(range(g.n))
        rng.shuffle(perm)
        h = g.relabel(perm)
        mapped = {frozenset(perm[v] for v in c) for c in twin_partition(g).classes}
        assert mapped == {frozenset(c) for c in twin_partition(h).classes}


def test_family_tree_labels():
    t = family("tree:2,4")
    assert isinstance(t, FullAryTree)
    assert t.n == 31 == tree_order(2, 4)
    assert t.degree(t.root) == 2
    assert list(t.leaves) == list(range(15, 31))
    # label k (1-based) has children 2k and 2k+1
    for k in range(1, 16):
        assert set(t.neighbors(k - 1)) >= {2 * k - 1, 2 * k}


@pytest.mark.parametrize("delta, depth", [(2, 1), (2, 4), (3, 1), (3, 3), (4, 2)])
def test_full_tree_invariants(delta, depth):
    t = FullAryTree.build(delta, depth)
    assert t.n == (delta ** (depth + 1) - 1) // (delta - 1)
    for v in range(t.n):
        k = t.depth_of(v)
        expected_degree = delta if v == t.root else (1 if k == depth else delta + 1)
        assert t.degree(v) == expected_degree
        assert eccentricity(t.distances, v) == (depth if k == 0 else depth + k)
    assert (t.distances.d[t.root, list(t.leaves)] == depth).all()


def test_branch_map_is_an_isomorphism_onto_branch():
    big = FullAryTree.build(3, 3)
    small = FullAryTree.build(3, 2)
    for k in range(3):
        phi = big.branch_map(k)
        assert phi[0] == k + 1
        for u, v in small.edges():
            assert phi[v] in big.neighbors(phi[u])
        assert list(phi) == sorted(phi)


def test_family_shapes():
    assert family("wheel:5").n == 6 and family("wheel:5").degree(0) == 5
    octa = family("kpartite:2,2,2")
    assert octa.n == 6 and all(octa.degree(v) == 4 for v in range(6))
    assert nx.is_isomorphic(to_nx(octa), nx.octahedral_graph())
    assert family("complete:1").n == 1


@pytest.mark.parametrize("bad", ["cycle:2", "tree:1,3", "tree:2,0", "kpartite:3", "moon:3", "path", "path:x"])
def test_family_errors(bad):
    with pytest.raises(InvalidDescriptor):
        family(bad)


def test_parse_and_serialize():
    g = parse_graph("3 2\n1 2\n2 3\n")
    assert g.adjacency == ((1,), (0, 2), (1,))
    text = "# comment\n4 3\n  3 2\n\n1 2\n4 3 \n"
    assert serialize_graph(parse_graph(text)) == "4 3\n1 2\n2 3\n3 4\n"
    assert serialize_graph(parse_graph(serialize_graph(g))) == serialize_graph(g)


@pytest.mark.parametrize(
    "text, line",
    [
        ("2 1\n1 3\n", 2),
        ("2 1\n1 1\n", 2),
        ("3 2\n1 2\n2 1\n", 3),
        ("3 2\n1 2\nx 3\n", 3),
        ("3 2 1\n", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_parse_edge_count_mismatch_and_connectivity():
    with pytest.raises(ParseError):
        parse_graph("3 3\n1 2\n2 3\n")
    with pytest.raises(DisconnectedGraph):
        parse_graph("4 2\n1 2\n3 4\n")


def test_distance_axioms_random():
    rng = random.Random(11)
    for _ in range(40):
        G = random_connected(rng.randint(2, 12), rng)
        d = build_graph(G.number_of_nodes(), list(G.edges)).distances.d.astype(int)
        n = len(d)
        assert (np.diag(d) == 0).all()
        assert (d == d.T).all()
        assert (d + np.eye(n, dtype=int) >= 1).all()
        assert (d[:, None, :] <= d[:, :, None] + d[None, :, :]).all()
        nx_d = dict(nx.all_pairs_shortest_path_length(G))
        assert all(d[u, v] == nx_d[u][v] for u in range(n) for v in range(n))
