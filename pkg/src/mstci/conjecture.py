"""Star-tree conjecture machinery: interbranch edges, principal subtrees, reduced
instances, and the exhaustive and randomised counterexample searches.

Reduced instances always use vertex 0 as the star center ``v``.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .enumeration import all_free_trees, random_tree
from .graph import (
    Graph,
    GraphError,
    SpanningTree,
    TreeError,
    all_tree_cycles,
    closest_point,
    fundamental_cycle,
    star_tree,
)
from .intersection import (
    count_intersecting_pairs,
    cycle_intersection_number,
    edge_removal_delta,
    star_cycle_intersection,
    star_tree_intersection,
    star_value_from_degrees,
    tree_intersection_number,
)

CENTER = 0
DEFAULT_MAX_NODES = 9
DEFAULT_MAX_CANDIDATES = 30
DEFAULT_DENSITIES = (0.1, 0.5, 0.9)

Edge = tuple[int, int]


class SearchError(ValueError):
    pass


# Interbranch edges and principal subtrees

def is_interbranch(g: Graph, t: SpanningTree, e: int, v: Optional[int] = None) -> bool:
    v = t.root if v is None else v
    u, w = g.edges[e]
    if v in (u, w):
        raise TreeError(f"edge ({u}, {w}) touches the center {v}")
    return closest_point(t, v, fundamental_cycle(t, e)) not in (u, w)


def interbranch_set(g: Graph, t: SpanningTree, v: Optional[int] = None) -> set[int]:
    v = t.root if v is None else v
    return {e for e in t.non_tree_edges() if v not in g.edges[e] and is_interbranch(g, t, e, v)}


def principal_subtrees(t: SpanningTree, v: Optional[int] = None) -> list[tuple[int, frozenset[int]]]:
    """``(w, vertices)`` for each tree neighbor ``w`` of ``v``; ``vertices`` includes ``v``."""
    if v is not None and v != t.root:
        t = t.rerooted(v)
    out = []
    for w in sorted(t.children(t.root)):
        members = {t.root, w}
        stack = [w]
        while stack:
            for x in t.children(stack.pop()):
                members.add(x)
                stack.append(x)
        out.append((w, frozenset(members)))
    return out


def _induced(g: Graph, t: SpanningTree, vertices: Iterable[int]) -> tuple[Graph, SpanningTree]:
    keep = sorted(vertices)
    relabel = {x: i for i, x in enumerate(keep)}
    pairs = [(relabel[a], relabel[b]) for a, b in g.edges if a in relabel and b in relabel]
    sub = Graph(len(keep), pairs)
    tree_pairs = [g.edges[i] for i in t.edges]
    sub_tree = SpanningTree(
        sub,
        [sub.edge_index(relabel[a], relabel[b]) for a, b in tree_pairs if a in relabel and b in relabel],
        relabel[t.root] if t.root in relabel else 0,
    )
    return sub, sub_tree


def partition_check(g: Graph, t: SpanningTree, v: Optional[int] = None) -> bool:
    """The tree's intersection number splits over its principal subtrees."""
    v = t.root if v is None else v
    if interbranch_set(g, t, v):
        raise ValueError("partition identity requires a tree without interbranch cycle-edges")
    whole = tree_intersection_number(g, t)
    parts = 0
    for _, members in principal_subtrees(t, v):
        sub, sub_tree = _induced(g, t.rerooted(v), members)
        parts += tree_intersection_number(sub, sub_tree)
    return whole == parts


def reduction_lemma_check(g: Graph, t: SpanningTree, v: Optional[int] = None) -> bool:
    """Per-edge inequalities behind removing interbranch cycle-edges.

    Removes the interbranch edges one at a time (lowest index first). At each
    step the edge's cycle in ``t`` must meet at least as many cycles as its
    triangle in the star, and both trees must obey the edge-removal identity.
    The gap between the two trees can then only shrink.
    """
    v = t.root if v is None else v
    star = star_tree(g, v)
    pending = sorted(interbranch_set(g, t, v), key=lambda e: g.edges[e])
    cur_g, cur_t, cur_s = g, t, star
    gap = tree_intersection_number(g, t) - tree_intersection_number(g, star)
    for u, w in (g.edges[e] for e in pending):
        e = cur_g.edge_index(u, w)
        cycles = all_tree_cycles(cur_g, cur_t)
        in_tree = cycle_intersection_number(cycles, next(c for c in cycles if c.cycle_edge == e))
        in_star = star_cycle_intersection(cur_g, v, e)
        if in_tree < in_star:
            return False
        rest_t, own_t = edge_removal_delta(cur_g, cur_t, e)
        rest_s, own_s = edge_removal_delta(cur_g, cur_s, e)
        if own_t != in_tree or own_s != in_star:
            return False
        if rest_t != tree_intersection_number(cur_g, cur_t) - own_t:
            return False
        if rest_s != tree_intersection_number(cur_g, cur_s) - own_s:
            return False
        nxt, remap = cur_g.without_edges([e])
        cur_t = SpanningTree(nxt, [remap[i] for i in cur_t.edges], v)
        cur_s = SpanningTree(nxt, [remap[i] for i in cur_s.edges], v)
        cur_g = nxt
        new_gap = rest_t - rest_s
        if new_gap > gap:
            return False
        gap = new_gap
    return True


# Intrinsic-invariant construction

@dataclass(frozen=True)
class IntrinsicConstruction:
    n: int
    g: Graph
    h: Graph
    t1_pairs: tuple[Edge, ...]
    t2_pairs: tuple[Edge, ...]
    g_t1: int
    g_t2: int
    h_t1: int
    h_t2: int
    h_cycle_t1: int
    h_cycle_t2: int

    @property
    def holds(self) -> bool:
        return self.g_t1 < self.g_t2 and self.h_t1 == self.h_t2


def intrinsic_invariant_construction(n: int) -> IntrinsicConstruction:
    """K_n against K_n with one vertex cut down to degree 2.

    Vertex 0 is the star center, vertex 1 the almost disconnected vertex and
    vertex 2 its other neighbor. T1 is the star; T2 re-hangs vertex 1 from 2.
    """
    if n <= 4:
        raise ValueError("construction needs more than four vertices")
    everything = list(combinations(range(n), 2))
    g = Graph(n, everything)
    h = Graph(n, [p for p in everything if not (p[0] == 1 and p[1] >= 3)])
    t1 = [(0, x) for x in range(1, n)]
    t2 = [(0, x) for x in range(2, n)] + [(1, 2)]

    def value(host: Graph, pairs: Sequence[Edge]) -> int:
        return tree_intersection_number(host, SpanningTree(host, [host.edge_index(*p) for p in pairs], 0))

    def cycle_value(host: Graph, pairs: Sequence[Edge], edge: Edge) -> int:
        tree = SpanningTree(host, [host.edge_index(*p) for p in pairs], 0)
        cycles = all_tree_cycles(host, tree)
        idx = host.edge_index(*edge)
        return cycle_intersection_number(cycles, next(c for c in cycles if c.cycle_edge == idx))

    return IntrinsicConstruction(
        n,
        g,
        h,
        tuple(t1),
        tuple(t2),
        value(g, t1),
        value(g, t2),
        value(h, t1),
        value(h, t2),
        cycle_value(h, t1, (1, 2)),
        cycle_value(h, t2, (0, 1)),
    )


# Reduced instances

@dataclass(frozen=True)
class ReducedInstance:
    """Universal center 0, a candidate tree with the center as a leaf, the
    non-interbranch candidate cycle-edges, and the subset ``phi`` present."""

    n: int
    tree_edges: tuple[Edge, ...]
    candidates: tuple[Edge, ...]
    phi: tuple[Edge, ...]

    def graph(self) -> Graph:
        tree = set(self.tree_edges)
        star = [(CENTER, x) for x in range(1, self.n) if (CENTER, x) not in tree]
        return Graph(self.n, list(self.tree_edges) + star + list(self.phi))

    def tree(self) -> SpanningTree:
        g = self.graph()
        return SpanningTree(g, range(len(self.tree_edges)), CENTER)

    def values(self) -> tuple[int, int]:
        """``(∩ of the candidate tree, ∩ of the star)``, both by pairwise count."""
        g = self.graph()
        return (
            tree_intersection_number(g, SpanningTree(g, range(len(self.tree_edges)), CENTER)),
            tree_intersection_number(g, star_tree(g, CENTER)),
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "tree": [list(p) for p in self.tree_edges],
            "candidates": [list(p) for p in self.candidates],
            "phi": [list(p) for p in self.phi],
        }


def candidate_edges(n: int, tree_edges: Sequence[Edge], v: int = CENTER) -> list[Edge]:
    """Non-tree pairs avoiding ``v`` whose ends are ancestor and descendant
    in the tree rooted at ``v``."""
    host = Graph(n, list(combinations(range(n), 2)))
    t = SpanningTree(host, [host.edge_index(*p) for p in tree_edges], v)
    tree = {tuple(sorted(p)) for p in tree_edges}
    return [
        (a, b)
        for a, b in combinations(range(n), 2)
        if v not in (a, b) and (a, b) not in tree and t.comparable(a, b)
    ]


def generate_graph_alg1(w: int, tprime: Sequence[Edge], n_prime: Optional[int] = None) -> ReducedInstance:
    """Host a tree on ``n'`` vertices under a new center joined to ``w``.

    Tree vertices are shifted up by one so the center is vertex 0.
    """
    n_prime = len(tprime) + 1 if n_prime is None else n_prime
    if not 0 <= w < n_prime:
        raise ValueError(f"vertex {w} not in the tree")
    n = n_prime + 1
    tree = sorted([(a + 1, b + 1) for a, b in tprime] + [(CENTER, w + 1)])
    return ReducedInstance(n, tuple(tree), tuple(candidate_edges(n, tree)), ())


class _Family:
    """All instances sharing one candidate tree; ``phi`` varies as a bitmask
    over ``candidates``.

    The pairwise intersection table of every cycle that can occur is built
    once from path bitmasks; an instance's count is then a sum over the rows
    selected by ``phi``.
    """

    def __init__(self, base: ReducedInstance):
        self.base = base
        full = ReducedInstance(base.n, base.tree_edges, base.candidates, base.candidates)
        g = full.graph()
        t = SpanningTree(g, range(len(base.tree_edges)), CENTER)
        star_masks = [fundamental_cycle(t, i).mask for i in t.non_tree_edges() if CENTER in g.edges[i]]
        cand_masks = [fundamental_cycle(t, g.edge_index(*p)).mask for p in base.candidates]
        self.fixed_pairs = count_intersecting_pairs(star_masks)
        self.hit_fixed = [sum(1 for s in star_masks if s & c) for c in cand_masks]
        self.lower = []
        for j, c in enumerate(cand_masks):
            bits = 0
            for i in range(j):
                if cand_masks[i] & c:
                    bits |= 1 << i
            self.lower.append(bits)
        self.base_degrees = [base.n - 1] + [1] * (base.n - 1)
        for a, b in base.tree_edges:
            if CENTER not in (a, b):
                self.base_degrees[a] += 1
                self.base_degrees[b] += 1

    def evaluate(self, phi: int) -> tuple[int, int]:
        value = self.fixed_pairs
        degrees = list(self.base_degrees)
        j = 0
        bits = phi
        while bits:
            if bits & 1:
                value += self.hit_fixed[j] + (self.lower[j] & phi).bit_count()
                a, b = self.base.candidates[j]
                degrees[a] += 1
                degrees[b] += 1
            bits >>= 1
            j += 1
        return value, star_value_from_degrees(degrees, CENTER)

    def instance(self, phi: int) -> ReducedInstance:
        chosen = tuple(p for j, p in enumerate(self.base.candidates) if (phi >> j) & 1)
        return ReducedInstance(self.base.n, self.base.tree_edges, self.base.candidates, chosen)


@dataclass
class SearchOutcome:
    mode: str
    n: int
    instances: int = 0
    equalities: int = 0
    counterexamples: list[ReducedInstance] = field(default_factory=list)
    min_margin: Optional[int] = None
    seed: Optional[int] = None
    samples: Optional[int] = None
    densities: Optional[tuple[float, ...]] = None
    wall_time: float = 0.0

    def record(self, tree_value: int, star_value: int) -> bool:
        """Count one instance; True when it breaks the conjecture."""
        self.instances += 1
        margin = tree_value - star_value
        if self.min_margin is None or margin < self.min_margin:
            self.min_margin = margin
        if margin == 0:
            self.equalities += 1
        return margin < 0

    def merge(self, other: "SearchOutcome") -> "SearchOutcome":
        self.instances += other.instances
        self.equalities += other.equalities
        self.counterexamples = sorted(
            self.counterexamples + other.counterexamples,
            key=lambda r: (r.tree_edges, r.phi),
        )
        if other.min_margin is not None and (self.min_margin is None or other.min_margin < self.min_margin):
            self.min_margin = other.min_margin
        return self

    def as_dict(self, timing: bool = True) -> dict:
        out = {
            "mode": self.mode,
            "nodes": self.n,
            "instances": self.instances,
            "counterexamples": [c.as_dict() for c in self.counterexamples],
            "equalities": self.equalities,
            "min_margin": self.min_margin,
        }
        if self.seed is not None:
            out["seed"] = self.seed
            out["samples"] = self.samples
            out["densities"] = list(self.densities or ())
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def _confirm(outcome: SearchOutcome, inst: ReducedInstance, fast: tuple[int, int]) -> None:
    exact = inst.values()
    if exact != fast:
        raise RuntimeError(f"cached count {fast} disagrees with pairwise count {exact} on {inst}")
    outcome.counterexamples.append(inst)


def _search_family(args: tuple[int, tuple[Edge, ...], int, int]) -> SearchOutcome:
    n_prime, tprime, w, max_candidates = args
    base = generate_graph_alg1(w, tprime, n_prime)
    if len(base.candidates) > max_candidates:
        raise SearchError(f"{len(base.candidates)} candidate edges exceeds cap {max_candidates}")
    family = _Family(base)
    out = SearchOutcome("exhaustive", base.n)
    for phi in range(1 << len(base.candidates)):
        values = family.evaluate(phi)
        if out.record(*values):
            _confirm(out, family.instance(phi), values)
    return out


def _map(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def counterexample_search(
    n: int,
    max_nodes: int = DEFAULT_MAX_NODES,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    jobs: int = 1,
) -> SearchOutcome:
    """Every reduced instance on ``n`` vertices: each free tree on ``n-1``
    vertices, each attachment vertex, each subset of candidate edges."""
    if n < 4:
        raise SearchError("exhaustive search needs at least four vertices")
    if n > max_nodes:
        raise SearchError(f"{n} vertices exceeds cap {max_nodes}")
    start = time.perf_counter()
    items = [(n - 1, tuple(tp), w, max_candidates) for tp in all_free_trees(n - 1) for w in range(n - 1)]
    total = SearchOutcome("exhaustive", n)
    for part in _map(_search_family, items, jobs):
        total.merge(part)
    total.wall_time = time.perf_counter() - start
    return total


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for sample ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def random_instance_family(n: int, rng: np.random.Generator) -> ReducedInstance:
    tree = random_tree(n, rng, leaf_constrained=CENTER)
    return ReducedInstance(n, tuple(tree), tuple(candidate_edges(n, tree)), ())


def _search_sample(args: tuple[int, int, int, tuple[float, ...]]) -> SearchOutcome:
    n, seed, index, densities = args
    rng = sample_rng(seed, index)
    family = _Family(random_instance_family(n, rng))
    out = SearchOutcome("random", n)
    size = len(family.base.candidates)
    for p in densities:
        draws = rng.random(size) < p
        phi = 0
        for j in np.flatnonzero(draws):
            phi |= 1 << int(j)
        values = family.evaluate(phi)
        if out.record(*values):
            _confirm(out, family.instance(phi), values)
    return out


def counterexample_random_search(
    n: int,
    k: int,
    densities: Sequence[float] = DEFAULT_DENSITIES,
    seed: int = 0,
    jobs: int = 1,
) -> SearchOutcome:
    """``k`` random reduced trees, one Bernoulli draw of candidate edges per density."""
    if n < 4:
        raise SearchError("random search needs at least four vertices")
    if k < 1:
        raise SearchError("sample count must be positive")
    densities = tuple(float(p) for p in densities)
    if not densities or any(not 0.0 < p <= 1.0 for p in densities):
        raise SearchError(f"densities must lie in (0, 1], got {densities}")
    start = time.perf_counter()
    items = [(n, seed, i, densities) for i in range(k)]
    total = SearchOutcome("random", n, seed=seed, samples=k, densities=densities)
    for part in _map(_search_sample, items, jobs):
        total.merge(part)
    total.wall_time = time.perf_counter() - start
    return total


def verify_counterexample(inst: ReducedInstance) -> bool:
    tree_value, star_value = inst.values()
    if star_value != star_tree_intersection(inst.graph(), CENTER):
        raise GraphError("star formula disagrees with pairwise count")
    return tree_value < star_value
