from collections import deque
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from mstci.enumeration import prufer_decode
from mstci.graph import (
    GraphError,
    TreeError,
    all_tree_cycles,
    build_graph,
    closest_point,
    closest_point_sets,
    complete_graph,
    cycle_graph,
    fundamental_cycle,
    path_graph,
    star_tree,
    tree_from_pairs,
    tree_path,
    validate_spanning_tree,
)


def bfs_distances(t, source):
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in t.tree_neighbors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


@st.composite
def labeled_trees(draw, max_n=12):
    n = draw(st.integers(3, max_n))
    seq = draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))
    extra = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    tree = prufer_decode(seq, n)
    pairs = set(tree) | {(min(a, b), max(a, b)) for a, b in extra if a != b}
    g = build_graph(n, sorted(pairs))
    root = draw(st.integers(0, n - 1))
    return g, tree_from_pairs(g, tree, root)


def test_build_k4(k4):
    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 2), (0, 3), (1, 3)])
    assert g.m == 6
    assert set(g.edges) == set(k4.edges)


@pytest.mark.parametrize(
    "n, pairs, fragment",
    [
        (4, [(0, 0)], "self-loop"),
        (4, [(0, 1), (1, 0)], "duplicate"),
        (3, [(0, 3)], "out of range"),
        (3, [(-1, 2)], "out of range"),
    ],
)
def test_build_rejects(n, pairs, fragment):
    with pytest.raises(GraphError, match=fragment):
        build_graph(n, pairs)


def test_h5_degrees(h5):
    assert h5.degrees() == [4, 2, 4, 3, 3]


def test_edge_indices_follow_input_order():
    g = build_graph(4, [(2, 3), (1, 0), (0, 2)])
    assert g.edges == ((2, 3), (0, 1), (0, 2))
    assert g.edge_index(1, 0) == 1
    assert g.edge_index(0, 1) == 1


@pytest.mark.parametrize("n, m", [(1, 0), (3, 3), (4, 6), (9, 36)])
def test_complete_graph(n, m):
    assert complete_graph(n).m == m


def test_validate_path_tree(k4):
    t = validate_spanning_tree(k4, [k4.edge_index(0, 1), k4.edge_index(1, 2), k4.edge_index(2, 3)], 0)
    assert t.depth == (0, 1, 2, 3)
    assert t.parent == (-1, 0, 1, 2)


@pytest.mark.parametrize(
    "pairs, fragment",
    [
        ([(0, 1), (0, 2), (1, 2)], "cycle"),
        ([(0, 1), (0, 2)], "2 edges"),
        ([(0, 1), (1, 2), (2, 3), (0, 3)], "4 edges"),
    ],
)
def test_validate_rejects(k4, pairs, fragment):
    with pytest.raises(TreeError, match=fragment):
        tree_from_pairs(k4, pairs)


def test_validate_rejects_split_edge_set():
    # with n-1 edges, a disconnected set necessarily contains a cycle
    g = build_graph(5, [(0, 1), (1, 2), (0, 2), (3, 4), (2, 3)])
    with pytest.raises(TreeError, match="cycle"):
        tree_from_pairs(g, [(0, 1), (1, 2), (0, 2), (3, 4)])


def test_validate_rejects_foreign_pair(h5):
    with pytest.raises(TreeError, match="no edge"):
        tree_from_pairs(h5, [(0, 1), (1, 3), (0, 2), (0, 4)])


def test_validate_h5_t2(h5):
    t = tree_from_pairs(h5, [(0, 2), (0, 3), (0, 4), (1, 2)], 0)
    assert t.parent[1] == 2
    assert t.depth == (0, 2, 1, 1, 1)


def test_tree_path(k4_path, k5):
    g = k4_path.graph
    assert [g.edges[i] for i in tree_path(k4_path, 0, 3)] == [(0, 1), (1, 2), (2, 3)]
    assert tree_path(k4_path, 2, 2) == []
    star = star_tree(k5, 0)
    assert {k5.edges[i] for i in tree_path(star, 1, 2)} == {(0, 1), (0, 2)}


def test_fundamental_cycle(k4_path, k5, k5_path):
    g = k4_path.graph
    c = fundamental_cycle(k4_path, g.edge_index(0, 3))
    assert {g.edges[i] for i in c.path_edges} == {(0, 1), (1, 2), (2, 3)}
    assert c.length == 4
    assert fundamental_cycle(star_tree(k5, 0), k5.edge_index(1, 2)).length == 3
    assert fundamental_cycle(k5_path, k5.edge_index(0, 4)).length == 5
    with pytest.raises(TreeError):
        fundamental_cycle(k4_path, g.edge_index(0, 1))


def test_all_tree_cycles(k4, k4_path, c4, k5):
    assert len(all_tree_cycles(k4, k4_path)) == 3
    t = tree_from_pairs(c4, [(0, 1), (1, 2), (2, 3)])
    (only,) = all_tree_cycles(c4, t)
    assert only.length == 4
    cycles = all_tree_cycles(k5, star_tree(k5, 0))
    assert len(cycles) == 6 and all(c.length == 3 for c in cycles)
    assert [c.cycle_edge for c in cycles] == sorted(c.cycle_edge for c in cycles)


def test_closest_point_examples(k5, k5_path):
    star = star_tree(k5, 0)
    tri = fundamental_cycle(star, k5.edge_index(1, 2))
    assert closest_point(star, 3, tri) == 0
    assert closest_point(star, 1, tri) == 1
    c = fundamental_cycle(k5_path, k5.edge_index(2, 4))
    assert closest_point(k5_path, 0, c) == 2


def test_closest_point_sets_examples(k5, k5_path):
    star = star_tree(k5, 0)
    tri = fundamental_cycle(star, k5.edge_index(1, 2))
    assert closest_point_sets(k5, star, tri) == {1: set(), 0: {3, 4}, 2: set()}
    full = fundamental_cycle(k5_path, k5.edge_index(0, 4))
    assert all(not s for s in closest_point_sets(k5, k5_path, full).values())


def test_star_tree(k5, h5):
    assert len(star_tree(k5, 0).edges) == 4
    assert star_tree(h5, 0).root == 0
    with pytest.raises(GraphError, match="no star tree"):
        star_tree(h5, 1)


def test_graph_helpers():
    assert cycle_graph(5).degrees() == [2] * 5
    assert path_graph(4).m == 3
    g, remap = complete_graph(4).without_edges([0])
    assert g.m == 5 and remap[1] == 0


@settings(max_examples=60, deadline=None)
@given(labeled_trees())
def test_fundamental_cycles_are_simple(data):
    g, t = data
    for c in all_tree_cycles(g, t):
        degree = {}
        for i in list(c.path_edges) + [c.cycle_edge]:
            for x in g.edges[i]:
                degree[x] = degree.get(x, 0) + 1
        assert set(degree.values()) == {2}
        assert c.length >= 3
    assert len(all_tree_cycles(g, t)) == g.m - g.n + 1


@settings(max_examples=60, deadline=None)
@given(labeled_trees())
def test_closest_point_is_unique_minimum(data):
    g, t = data
    for c in all_tree_cycles(g, t):
        on_cycle = c.vertices(g)
        for v in range(g.n):
            dist = bfs_distances(t, v)
            best = min(dist[x] for x in on_cycle)
            winners = [x for x in on_cycle if dist[x] == best]
            assert winners == [closest_point(t, v, c)]


@settings(max_examples=60, deadline=None)
@given(labeled_trees())
def test_closest_point_sets_partition(data):
    g, t = data
    for c in all_tree_cycles(g, t):
        sets = closest_point_sets(g, t, c)
        assert set(sets) == c.vertices(g)
        members = [x for s in sets.values() for x in s]
        assert len(members) == len(set(members)) == g.n - c.length


@settings(max_examples=40, deadline=None)
@given(labeled_trees(), st.integers(0, 100))
def test_rerooting_keeps_paths(data, pick):
    g, t = data
    other = t.rerooted(pick % g.n)
    assert other.edges == t.edges
    for u, w in combinations(range(g.n), 2):
        assert set(t.path(u, w)) == set(other.path(u, w))


def test_is_connected_with_exclusions():
    g = cycle_graph(4)
    assert g.is_connected(1 << 0)
    assert not g.is_connected((1 << 0) | (1 << 2))
