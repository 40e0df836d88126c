"""Conversions between networkx graphs and package graphs for tests."""

from __future__ import annotations

import random

import networkx as nx

from msdim.graph import Graph, build_graph


def from_nx(G: nx.Graph) -> Graph:
    index = {v: i for i, v in enumerate(sorted(G.nodes))}
    return build_graph(len(index), [(index[u], index[v]) for u, v in G.edges])


def to_nx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges())
    return G


def connected_atlas(max_n: int, min_n: int = 2) -> list[nx.Graph]:
    return [
        G
        for G in nx.graph_atlas_g()
        if min_n <= G.number_of_nodes() <= max_n and nx.is_connected(G)
    ]


def random_connected(n: int, rng: random.Random, p: float | None = None) -> nx.Graph:
    while True:
        G = nx.gnp_random_graph(n, p if p is not None else rng.uniform(0.2, 0.7), seed=rng.randrange(1 << 30))
        if nx.is_connected(G):
            return G
