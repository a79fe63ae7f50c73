"""Graph, spanning-tree and fundamental-cycle model.

Edges are identified by their dense index in ``Graph.edges``. Sets of edges
(tree edges, cycle paths) are kept as Python ints used as bitmasks so that
intersection tests are a single ``&``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed graph input."""


class TreeError(GraphError):
    """An edge set that is not a spanning tree of its host graph."""


def _key(u: int, w: int) -> tuple[int, int]:
    return (u, w) if u < w else (w, u)


class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Immutable once built. ``edges[i]`` is the (sorted) vertex pair of edge ``i``.
    """

    __slots__ = ("n", "edges", "adjacency", "_index")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        index: dict[tuple[int, int], int] = {}
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        normalized = []
        for u, w in edges:
            u, w = int(u), int(w)
            if not (0 <= u < n and 0 <= w < n):
                raise GraphError(f"vertex out of range in pair ({u}, {w}) for n={n}")
            if u == w:
                raise GraphError(f"self-loop ({u}, {w})")
            key = _key(u, w)
            if key in index:
                raise GraphError(f"duplicate edge ({u}, {w})")
            i = len(normalized)
            index[key] = i
            normalized.append(key)
            adjacency[u].append((w, i))
            adjacency[w].append((u, i))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(normalized)
        self.adjacency = tuple(tuple(a) for a in adjacency)
        self._index = index

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def edge_index(self, u: int, w: int) -> int:
        try:
            return self._index[_key(u, w)]
        except KeyError:
            raise GraphError(f"no edge ({u}, {w})") from None

    def has_edge(self, u: int, w: int) -> bool:
        return _key(u, w) in self._index

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def neighbors(self, u: int) -> list[int]:
        return [w for w, _ in self.adjacency[u]]

    def edge_mask(self, indices: Iterable[int]) -> int:
        mask = 0
        for i in indices:
            mask |= 1 << i
        return mask

    def is_connected(self, excluded_mask: int = 0) -> bool:
        """Connectivity, optionally ignoring the edges in ``excluded_mask``."""
        if self.n <= 1:
            return True
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for w, i in self.adjacency[u]:
                if not seen[w] and not (excluded_mask >> i) & 1:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        return count == self.n

    def without_edges(self, indices: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """New graph lacking ``indices``; also returns the old->new index map."""
        drop = set(indices)
        keep = [i for i in range(self.m) if i not in drop]
        remap = {old: new for new, old in enumerate(keep)}
        return Graph(self.n, [self.edges[i] for i in keep]), remap

    def with_edges(self, pairs: Iterable[tuple[int, int]]) -> "Graph":
        """New graph with ``pairs`` appended; existing indices are preserved."""
        return Graph(self.n, list(self.edges) + list(pairs))


def build_graph(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, list(pairs))


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs at least one vertex")
    return Graph(n, list(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle graph needs at least three vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(n: int, center: int = 0) -> Graph:
    return Graph(n, [(center, u) for u in range(n) if u != center])


class SpanningTree:
    """A spanning tree of ``graph`` given by edge indices, viewed from ``root``.

    ``parent[u]`` / ``parent_edge[u]`` are -1 at the root.
    """

    __slots__ = ("graph", "edges", "mask", "root", "parent", "parent_edge", "depth", "_tree_adj")

    def __init__(self, graph: Graph, edges: Iterable[int], root: int = 0):
        edges = frozenset(int(i) for i in edges)
        n = graph.n
        if not 0 <= root < max(n, 1):
            raise TreeError(f"root {root} out of range")
        for i in edges:
            if not 0 <= i < graph.m:
                raise TreeError(f"edge index {i} not in graph")
        if len(edges) != n - 1:
            raise TreeError(f"not a spanning tree: {len(edges)} edges, expected {n - 1}")
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        dsu = list(range(n))

        def find(x: int) -> int:
            while dsu[x] != x:
                dsu[x] = dsu[dsu[x]]
                x = dsu[x]
            return x

        for i in sorted(edges):
            u, w = graph.edges[i]
            ru, rw = find(u), find(w)
            if ru == rw:
                raise TreeError("not a spanning tree: edge set contains a cycle")
            dsu[ru] = rw
            adj[u].append((w, i))
            adj[w].append((u, i))

        parent = [-1] * n
        parent_edge = [-1] * n
        depth = [-1] * n
        if n:
            depth[root] = 0
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w, i in adj[u]:
                    if i == parent_edge[u]:
                        continue
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    parent_edge[w] = i
                    queue.append(w)
            if min(depth) < 0:
                raise TreeError("not a spanning tree: edge set is disconnected")

        self.graph = graph
        self.edges = edges
        self.mask = graph.edge_mask(edges)
        self.root = root
        self.parent = tuple(parent)
        self.parent_edge = tuple(parent_edge)
        self.depth = tuple(depth)
        self._tree_adj = tuple(tuple(a) for a in adj)

    def __repr__(self) -> str:
        return f"SpanningTree({sorted(self.graph.edges[i] for i in self.edges)}, root={self.root})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpanningTree) and self.graph == other.graph and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def rerooted(self, root: int) -> "SpanningTree":
        return SpanningTree(self.graph, self.edges, root)

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.graph.edges[i] for i in self.edges)

    def contains(self, e: int) -> bool:
        return (self.mask >> e) & 1 == 1

    def non_tree_edges(self) -> list[int]:
        return [i for i in range(self.graph.m) if not (self.mask >> i) & 1]

    def degree(self, u: int) -> int:
        return len(self._tree_adj[u])

    def tree_neighbors(self, u: int) -> list[int]:
        return [w for w, _ in self._tree_adj[u]]

    def children(self, u: int) -> list[int]:
        return [w for w, _ in self._tree_adj[u] if w != self.parent[u]]

    def lca(self, u: int, w: int) -> int:
        depth, parent = self.depth, self.parent
        while depth[u] > depth[w]:
            u = parent[u]
        while depth[w] > depth[u]:
            w = parent[w]
        while u != w:
            u, w = parent[u], parent[w]
        return u

    def distance(self, u: int, w: int) -> int:
        return self.depth[u] + self.depth[w] - 2 * self.depth[self.lca(u, w)]

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when ``a`` lies on the root path of ``b`` (``a == b`` included)."""
        depth, parent = self.depth, self.parent
        while depth[b] > depth[a]:
            b = parent[b]
        return a == b

    def comparable(self, a: int, b: int) -> bool:
        return self.is_ancestor(a, b) or self.is_ancestor(b, a)

    def path(self, u: int, w: int) -> list[int]:
        """Edge indices of the tree path from ``u`` to ``w``, in walking order."""
        depth, parent, pedge = self.depth, self.parent, self.parent_edge
        up: list[int] = []
        down: list[int] = []
        while depth[u] > depth[w]:
            up.append(pedge[u])
            u = parent[u]
        while depth[w] > depth[u]:
            down.append(pedge[w])
            w = parent[w]
        while u != w:
            up.append(pedge[u])
            down.append(pedge[w])
            u, w = parent[u], parent[w]
        down.reverse()
        return up + down

    def path_vertices(self, u: int, w: int) -> list[int]:
        a = self.lca(u, w)
        left = [u]
        while left[-1] != a:
            left.append(self.parent[left[-1]])
        right = [w]
        while right[-1] != a:
            right.append(self.parent[right[-1]])
        return left + right[-2::-1]


@dataclass(frozen=True)
class TreeCycle:
    """The cycle a non-tree edge closes with its tree path.

    ``ends`` are the cycle-edge endpoints; ``path_edges`` the tree path between
    them in walking order; ``mask`` the same path as a bitmask.
    """

    cycle_edge: int
    ends: tuple[int, int]
    path_edges: tuple[int, ...]
    mask: int

    @property
    def length(self) -> int:
        return len(self.path_edges) + 1

    def vertices(self, graph: Graph) -> set[int]:
        out = set(self.ends)
        for i in self.path_edges:
            out.update(graph.edges[i])
        return out


def validate_spanning_tree(g: Graph, edge_set: Iterable[int], root: int = 0) -> SpanningTree:
    return SpanningTree(g, edge_set, root)


def tree_from_pairs(g: Graph, pairs: Iterable[tuple[int, int]], root: int = 0) -> SpanningTree:
    try:
        indices = [g.edge_index(u, w) for u, w in pairs]
    except GraphError as exc:
        raise TreeError(f"not a spanning tree: {exc}") from None
    return SpanningTree(g, indices, root)


def tree_path(t: SpanningTree, u: int, w: int) -> list[int]:
    return t.path(u, w)


def fundamental_cycle(t: SpanningTree, e: int) -> TreeCycle:
    if t.contains(e):
        raise TreeError(f"edge {e} is a tree edge and induces no cycle")
    u, w = t.graph.edges[e]
    path = t.path(u, w)
    mask = 0
    for i in path:
        mask |= 1 << i
    return TreeCycle(e, (u, w), tuple(path), mask)


def all_tree_cycles(g: Graph, t: SpanningTree) -> list[TreeCycle]:
    return [fundamental_cycle(t, e) for e in range(g.m) if not (t.mask >> e) & 1]


def closest_point(t: SpanningTree, v: int, c: TreeCycle) -> int:
    """Vertex of ``c`` nearest to ``v`` in the tree.

    The cycle's vertices are the tree path between the cycle-edge ends, so the
    nearest one is the median of ``v`` and the two ends: the deepest of their
    pairwise lowest common ancestors.
    """
    u, w = c.ends
    return max((t.lca(u, w), t.lca(u, v), t.lca(w, v)), key=t.depth.__getitem__)


def closest_point_sets(g: Graph, t: SpanningTree, c: TreeCycle) -> dict[int, set[int]]:
    on_cycle = c.vertices(g)
    sets: dict[int, set[int]] = {x: set() for x in t.path_vertices(*c.ends)}
    for v in range(g.n):
        if v not in on_cycle:
            sets[closest_point(t, v, c)].add(v)
    return sets


def star_tree(g: Graph, center: int) -> SpanningTree:
    if g.degree(center) != g.n - 1:
        raise GraphError(f"graph admits no star tree at vertex {center}")
    return SpanningTree(g, [i for _, i in g.adjacency[center]], center)


def universal_vertices(g: Graph) -> list[int]:
    return [u for u in range(g.n) if g.degree(u) == g.n - 1]
