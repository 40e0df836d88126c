import random
from itertools import combinations

import pytest

from msdim.errors import DepthLimitExceeded, InvalidParam, PremiseViolation, SearchBudgetExceeded
from msdim.graph import FullAryTree
from msdim.resolvability import Notion, is_resolving
from msdim.solvers import dim_ms_exact
from msdim.trees import (
    SMALL_BINARY_BASES,
    DEPTH4_SEEDS,
    BasisCatalog,
    algorithm1,
    build_binary_basis,
    compose_bases,
    dim_ms_full_binary,
    recursion_step,
    root_multiplicity,
    same_depth_resolving,
)

T4 = FullAryTree.build(2, 4)
S1, S2, S3 = (tuple(sorted(v - 1 for v in s)) for s in DEPTH4_SEEDS)


def test_root_multiplicities_of_seeds():
    assert [root_multiplicity(T4, s) for s in (S1, S2, S3)] == [10, 9, 11]


def test_root_multiplicity_counts_leaves():
    rng = random.Random(1)
    for delta, depth in [(2, 2), (2, 4), (3, 2), (3, 3)]:
        t = FullAryTree.build(delta, depth)
        leaves = set(t.leaves)
        for _ in range(50):
            S = rng.sample(range(t.n), rng.randint(1, t.n))
            assert root_multiplicity(t, S) == len(leaves & set(S))


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_same_depth_criterion_exhaustive(depth):
    t = FullAryTree.build(2, depth)
    dm = t.distances
    limit = min(t.n, {1: 3, 2: 4, 3: 7}[depth])
    for k in range(0, limit + 1):
        for S in combinations(range(t.n), k):
            assert same_depth_resolving(t, S) == is_resolving(dm, S, Notion.OUTER_MULTISET), S


def test_same_depth_criterion_random_larger():
    rng = random.Random(2)
    for delta, depth in [(2, 3), (3, 2), (2, 4)]:
        t = FullAryTree.build(delta, depth)
        for _ in range(300):
            S = rng.sample(range(t.n), rng.randint(1, t.n - 1))
            assert same_depth_resolving(t, S) == is_resolving(t.distances, S, Notion.OUTER_MULTISET)


def test_same_depth_empty_set():
    assert not same_depth_resolving(FullAryTree.build(2, 1), [])
    t = FullAryTree.build(2, 2)
    # two sibling leaves of one branch and one leaf of the other
    S = [3, 4, 5]
    assert same_depth_resolving(t, S) == is_resolving(t.distances, S, "outer-multiset")


def test_compose_seeds_into_depth_five():
    out = compose_bases(T4, [S2, S3])
    t5 = FullAryTree.build(2, 5)
    assert len(out) == 26
    assert is_resolving(t5.distances, out, Notion.OUTER_MULTISET)
    assert root_multiplicity(t5, out) == 20


def test_compose_small_bases():
    t2 = FullAryTree.build(2, 2)
    a, b = (tuple(v - 1 for v in s) for s in [(2, 4, 6), (4, 5, 6)])
    assert [root_multiplicity(t2, a), root_multiplicity(t2, b)] == [2, 3]
    out = compose_bases(t2, [a, b], dimension=3)
    t3 = FullAryTree.build(2, 3)
    assert len(out) == 6 == dim_ms_exact(t3).value
    assert is_resolving(t3.distances, out, Notion.OUTER_MULTISET)


def test_compose_ternary_needs_distinct_multiplicities():
    # on T_2^3 every outer multiset resolving set of one size shares at most
    # two root multiplicities, so three branches always collide
    t = FullAryTree.build(3, 2)
    a = (0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11)
    b = (1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12)
    assert [root_multiplicity(t, a), root_multiplicity(t, b)] == [8, 9]
    with pytest.raises(PremiseViolation, match="collide"):
        compose_bases(t, [a, b, a])
    with pytest.raises(PremiseViolation, match="expected 3"):
        compose_bases(t, [a, b])


@pytest.mark.parametrize(
    "bases, message",
    [
        ([S1, S1], "collide"),
        ([S1], "expected 2"),
        ([S1, S2[:-1]], "different sizes"),
        ([S1, tuple(range(13))], "not an outer"),
    ],
)
def test_compose_premise_violations(bases, message):
    with pytest.raises(PremiseViolation, match=message):
        compose_bases(T4, bases)


def test_compose_rejects_depth_one_and_wrong_dimension():
    with pytest.raises(PremiseViolation):
        compose_bases(FullAryTree.build(2, 1), [(1,), (2,)])
    with pytest.raises(PremiseViolation):
        compose_bases(T4, [S1, S2], dimension=12)


def test_recursion_step_keeps_premise():
    level5 = recursion_step(T4, [S1, S2, S3])
    t5 = FullAryTree.build(2, 5)
    mults = [root_multiplicity(t5, b) for b in level5]
    assert mults == [20, 21, 19]
    assert all(len(b) == 26 for b in level5)


@pytest.mark.parametrize("depth, want", [(1, 1), (2, 3), (3, 6), (4, 13), (5, 26), (6, 52), (9, 416)])
def test_dim_ms_full_binary(depth, want):
    assert dim_ms_full_binary(depth) == want


@pytest.mark.parametrize("depth", range(1, 8))
def test_build_binary_basis(depth):
    b = build_binary_basis(depth)
    t = FullAryTree.build(2, depth)
    assert len(b) == dim_ms_full_binary(depth)
    assert is_resolving(t.distances, b, Notion.OUTER_MULTISET)


def test_build_binary_basis_depth4_is_s1():
    assert build_binary_basis(4) == S1
    assert build_binary_basis(5) == compose_bases(T4, [S2, S3])


def test_small_bases_are_minimum():
    for depth, labels in SMALL_BINARY_BASES.items():
        t = FullAryTree.build(2, depth)
        res = dim_ms_exact(t)
        assert res.value == len(labels)
        assert res.witness == tuple(v - 1 for v in labels)


def test_bad_depths():
    with pytest.raises(InvalidParam):
        dim_ms_full_binary(0)
    with pytest.raises(InvalidParam):
        build_binary_basis(0)
    with pytest.raises(InvalidParam):
        algorithm1(1)


def test_algorithm1_binary():
    n, cat = algorithm1(2)
    assert n == 4 and cat.depth == 4
    assert sorted(cat.root_multiplicities) == [9, 10, 11]
    assert cat.dims == ((1, 1), (2, 3), (3, 6), (4, 13))
    assert cat.certifies_recursion
    for b in cat.bases:
        assert len(b) == 13 and is_resolving(T4.distances, b, Notion.OUTER_MULTISET)
    js = cat.to_json()
    assert js["bases"][0] == [v + 1 for v in cat.bases[0]]
    assert js["multiplicities"] == list(cat.root_multiplicities)


def test_algorithm1_depth_limit():
    with pytest.raises(DepthLimitExceeded) as info:
        algorithm1(2, max_depth=3)
    part = info.value.partial
    assert isinstance(part, BasisCatalog)
    assert part.depth == 3 and part.root_multiplicities == (5,)
    assert part.dims == ((1, 1), (2, 3), (3, 6))


def test_algorithm1_budget():
    with pytest.raises(SearchBudgetExceeded) as info:
        algorithm1(3, max_candidates=50)
    assert isinstance(info.value.partial, BasisCatalog)


def test_algorithm1_thread_independent():
    with pytest.raises(DepthLimitExceeded) as one:
        algorithm1(2, max_depth=3, threads=1)
    with pytest.raises(DepthLimitExceeded) as many:
        algorithm1(2, max_depth=3, threads=3)
    assert one.value.partial == many.value.partial
