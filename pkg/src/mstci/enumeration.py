"""Tree spaces: spanning trees of a graph, labeled and free trees, random trees,
and exact / local-search minimisation of the tree intersection number."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence

import numpy as np

from .graph import Graph, GraphError, SpanningTree, fundamental_cycle
from .intersection import tree_intersection_number

DEFAULT_TREE_CAP = 10**6

Edge = tuple[int, int]


class CapExceeded(RuntimeError):
    """The requested exhaustive computation is larger than the configured cap."""


# Spanning trees

def all_spanning_trees(g: Graph, root: int = 0) -> Iterator[SpanningTree]:
    """Every spanning tree of ``g`` exactly once.

    Edges are decided in index order: an edge is contracted (kept) when it
    joins two components of the partial forest, and deleted only while the
    remaining graph stays connected, i.e. while it is not a bridge.
    """
    if not g.is_connected():
        raise GraphError("graph is disconnected; it has no spanning tree")
    n = g.n
    if n <= 1:
        yield SpanningTree(g, [], 0)
        return
    chosen: list[int] = []

    def rec(i: int, comp: list[int], excluded: int) -> Iterator[SpanningTree]:
        if len(chosen) == n - 1:
            yield SpanningTree(g, chosen, root)
            return
        u, w = g.edges[i]
        cu, cw = comp[u], comp[w]
        if cu != cw:
            chosen.append(i)
            yield from rec(i + 1, [cu if c == cw else c for c in comp], excluded)
            chosen.pop()
            if g.is_connected(excluded | (1 << i)):
                yield from rec(i + 1, comp, excluded | (1 << i))
        else:
            yield from rec(i + 1, comp, excluded | (1 << i))

    yield from rec(0, list(range(n)), 0)


def kirchhoff_count(g: Graph) -> int:
    """Number of spanning trees: a Laplacian cofactor by fraction-free elimination."""
    n = g.n
    if n <= 1:
        return 1 if n == 1 else 0
    lap = [[0] * n for _ in range(n)]
    for u, w in g.edges:
        lap[u][u] += 1
        lap[w][w] += 1
        lap[u][w] -= 1
        lap[w][u] -= 1
    a = [row[1:] for row in lap[1:]]
    size = n - 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[size - 1][size - 1]


# Labeled and free trees

def prufer_decode(seq: Sequence[int], n: Optional[int] = None) -> list[Edge]:
    n = len(seq) + 2 if n is None else n
    if n < 2 or len(seq) != n - 2:
        raise ValueError(f"a Prüfer sequence for {n} vertices has length {n - 2}")
    for x in seq:
        if not 0 <= x < n:
            raise ValueError(f"label {x} out of range for {n} vertices")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [u for u in range(n) if degree[u] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, x), max(leaf, x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a, b = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((a, b))
    return sorted(edges)


def _adjacency(n: int, edges: Sequence[Edge]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, w in edges:
        adj[u].append(w)
        adj[w].append(u)
    return adj


def prufer_encode(n: int, edges: Sequence[Edge]) -> list[int]:
    if len(edges) != n - 1:
        raise ValueError("not a tree")
    adj = [set(a) for a in _adjacency(n, edges)]
    leaves = [u for u in range(n) if len(adj[u]) == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(n - 2):
        leaf = heapq.heappop(leaves)
        (x,) = adj[leaf]
        seq.append(x)
        adj[x].discard(leaf)
        adj[leaf].clear()
        if len(adj[x]) == 1:
            heapq.heappush(leaves, x)
    return seq


def tree_centers(n: int, edges: Sequence[Edge]) -> list[int]:
    if n <= 2:
        return list(range(n))
    adj = _adjacency(n, edges)
    degree = [len(a) for a in adj]
    layer = [u for u in range(n) if degree[u] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for u in layer:
            for w in adj[u]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def rooted_code(adj: Sequence[Sequence[int]], root: int) -> str:
    """AHU string of the tree rooted at ``root``."""
    order = [root]
    parent = {root: -1}
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    codes: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(codes[w] for w in adj[u] if w != parent[u])
        codes[u] = "(" + "".join(kids) + ")"
    return codes[root]


def canonical_code(n: int, edges: Sequence[Edge]) -> str:
    """Isomorphism-invariant code of a free tree, rooted at its center(s)."""
    if n == 0:
        return ""
    adj = _adjacency(n, edges)
    return min(rooted_code(adj, c) for c in tree_centers(n, edges))


@lru_cache(maxsize=None)
def _free_trees(n: int) -> tuple[tuple[Edge, ...], ...]:
    if n == 1:
        return ((),)
    seen: dict[str, tuple[Edge, ...]] = {}
    for seq in product(range(n), repeat=n - 2):
        edges = prufer_decode(seq, n)
        code = canonical_code(n, edges)
        if code not in seen:
            seen[code] = tuple(edges)
    return tuple(seen.values())


def all_free_trees(n: int) -> list[list[Edge]]:
    """One labeled representative per isomorphism class of trees on ``n`` vertices."""
    if n < 1:
        raise ValueError("trees need at least one vertex")
    return [list(t) for t in _free_trees(n)]


def random_tree(n: int, rng: np.random.Generator, leaf_constrained: Optional[int] = None) -> list[Edge]:
    """Random-attachment tree: each new vertex joins a uniformly chosen earlier one.

    With ``leaf_constrained=v`` the vertex ``v`` is attached last, so it is a leaf.
    """
    if n < 2:
        raise ValueError("random trees need at least two vertices")
    order = [u for u in range(n) if u != leaf_constrained]
    if leaf_constrained is not None:
        order.append(leaf_constrained)
    edges = []
    for pos in range(1, n):
        other = order[int(rng.integers(pos))]
        u = order[pos]
        edges.append((min(u, other), max(u, other)))
    return sorted(edges)


# Spanning tree graph and minimisation

def st_moves(g: Graph, t: SpanningTree) -> Iterator[tuple[int, int, SpanningTree]]:
    """``(removed, inserted, neighbor)`` for every single edge replacement."""
    for e_in in t.non_tree_edges():
        cycle = fundamental_cycle(t, e_in)
        for e_out in sorted(cycle.path_edges):
            yield e_out, e_in, SpanningTree(g, (t.edges - {e_out}) | {e_in}, t.root)


def st_neighbors(g: Graph, t: SpanningTree) -> Iterator[SpanningTree]:
    for _, _, nb in st_moves(g, t):
        yield nb


@dataclass
class Minimization:
    best_value: int
    minimizers: list[SpanningTree]
    explored: int
    steps: int = 0
    trace: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "best_value": self.best_value,
            "minimizers": [t.pairs() for t in self.minimizers],
            "explored": self.explored,
            "steps": self.steps,
            "trace": list(self.trace),
        }


def exact_minimize(g: Graph, cap: int = DEFAULT_TREE_CAP) -> Minimization:
    total = kirchhoff_count(g)
    if total == 0:
        raise GraphError("graph is disconnected; it has no spanning tree")
    if total > cap:
        raise CapExceeded(f"{total} spanning trees exceeds cap {cap}; use local search instead")
    best: Optional[int] = None
    minimizers: list[SpanningTree] = []
    explored = 0
    for t in all_spanning_trees(g):
        explored += 1
        value = tree_intersection_number(g, t)
        if best is None or value < best:
            best, minimizers = value, [t]
        elif value == best:
            minimizers.append(t)
    assert best is not None
    return Minimization(best, minimizers, explored)


def local_search(g: Graph, t0: SpanningTree, max_steps: Optional[int] = None) -> Minimization:
    """Steepest descent over single edge replacements.

    Ties between equally good moves go to the lowest removed edge index, then
    the lowest inserted edge index. Stops when no move strictly improves.
    """
    current = t0
    value = tree_intersection_number(g, current)
    trace = [value]
    explored = 1
    steps = 0
    while max_steps is None or steps < max_steps:
        best = None
        for e_out, e_in, nb in st_moves(g, current):
            explored += 1
            v = tree_intersection_number(g, nb)
            if v < value and (best is None or (v, e_out, e_in) < best[0]):
                best = ((v, e_out, e_in), nb)
        if best is None:
            break
        (value, _, _), current = best
        trace.append(value)
        steps += 1
    return Minimization(value, [current], explored, steps, trace)
