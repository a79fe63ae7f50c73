"""Seeded property suites run by ``mstci verify``.

Each suite returns one ``Check`` per property; a failing check carries the
offending instance in instance-file form so it can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

import networkx as nx
import numpy as np

from . import conjecture as cj
from .enumeration import (
    all_free_trees,
    all_spanning_trees,
    kirchhoff_count,
    random_tree,
    st_neighbors,
)
from .graph import (
    Graph,
    SpanningTree,
    all_tree_cycles,
    closest_point_sets,
    complete_graph,
    star_tree,
)
from .instance_io import format_instance
from .intersection import (
    complete_graph_cycle_formula,
    cycle_intersection_number,
    edge_removal_delta,
    star_cycle_intersection,
    star_value_from_degree_norm,
    star_value_from_degrees,
    tree_intersection_number,
)


@dataclass
class Check:
    name: str
    passed: bool
    cases: int
    failing_instance: Optional[str] = None

    def as_dict(self) -> dict:
        out = {"property": self.name, "passed": self.passed, "cases": self.cases}
        if self.failing_instance is not None:
            out["failing_instance"] = self.failing_instance
        return out


# Random instance generators

def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    tree = set(random_tree(n, rng))
    extra = [pr for pr in combinations(range(n), 2) if pr not in tree and rng.random() < p]
    return Graph(n, sorted(tree) + extra)


def random_universal_graph(n: int, p: float, rng: np.random.Generator, center: int = 0) -> Graph:
    star = [(min(center, x), max(center, x)) for x in range(n) if x != center]
    others = [pr for pr in combinations(range(n), 2) if center not in pr and rng.random() < p]
    return Graph(n, star + others)


def random_spanning_tree(g: Graph, rng: np.random.Generator, root: int = 0) -> SpanningTree:
    """Kruskal over a random edge order (not uniform over spanning trees)."""
    dsu = list(range(g.n))

    def find(x: int) -> int:
        while dsu[x] != x:
            dsu[x] = dsu[dsu[x]]
            x = dsu[x]
        return x

    chosen = []
    for i in rng.permutation(g.m):
        u, w = g.edges[int(i)]
        ru, rw = find(u), find(w)
        if ru != rw:
            dsu[ru] = rw
            chosen.append(int(i))
    return SpanningTree(g, chosen, root)


def random_branching_instance(n: int, p: float, rng: np.random.Generator) -> tuple[Graph, SpanningTree]:
    """Universal center 0, a random tree (center of any degree) and a random
    subset of the ancestor-descendant pairs, so no interbranch cycle-edges."""
    tree = random_tree(n, rng)
    extra = [pr for pr in cj.candidate_edges(n, tree) if rng.random() < p]
    tree_set = set(tree)
    star = [(0, x) for x in range(1, n) if (0, x) not in tree_set]
    g = Graph(n, tree + star + extra)
    return g, SpanningTree(g, range(len(tree)), 0)


def _instance(g: Graph, t: Optional[SpanningTree] = None) -> str:
    return format_instance(g, t.pairs() if t is not None else None)


def _rng(seed: int, stream: int) -> np.random.Generator:
    return cj.sample_rng(seed, stream)


# Suites

def star_cycle_values(sizes=range(4, 10)) -> Check:
    for n in sizes:
        g = complete_graph(n)
        t = star_tree(g, 0)
        cycles = all_tree_cycles(g, t)
        if any(cycle_intersection_number(cycles, c) != 2 * (n - 3) for c in cycles):
            return Check("star cycles of K_n meet 2(n-3) others", False, n, _instance(g, t))
    return Check("star cycles of K_n meet 2(n-3) others", True, len(sizes))


def complete_formula_exhaustive(sizes=range(4, 7)) -> Check:
    cases = 0
    for n in sizes:
        g = complete_graph(n)
        for t in all_spanning_trees(g):
            cycles = all_tree_cycles(g, t)
            for c in cycles:
                cases += 1
                q = [len(s) for s in closest_point_sets(g, t, c).values()]
                if complete_graph_cycle_formula(n, c.length, q) != cycle_intersection_number(cycles, c):
                    return Check("complete-graph cycle formula matches pairwise count", False, cases, _instance(g, t))
    return Check("complete-graph cycle formula matches pairwise count", True, cases)


def star_degree_formulas(seed: int, samples: int = 200, n_range=(5, 30)) -> Check:
    rng = _rng(seed, 1)
    for _ in range(samples):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        g = random_universal_graph(n, float(rng.uniform(0.05, 0.95)), rng)
        t = star_tree(g, 0)
        oracle = tree_intersection_number(g, t)
        d = g.degrees()
        if not (star_value_from_degrees(d, 0) == star_value_from_degree_norm(d, g.m) == oracle):
            return Check("star degree formulas match pairwise count", False, samples, _instance(g, t))
        cycles = all_tree_cycles(g, t)
        for c in cycles:
            if star_cycle_intersection(g, 0, c.cycle_edge) != cycle_intersection_number(cycles, c):
                return Check("star degree formulas match pairwise count", False, samples, _instance(g, t))
    return Check("star degree formulas match pairwise count", True, samples)


def local_minimum(seed: int, samples: int = 100, max_n: int = 15) -> Check:
    rng = _rng(seed, 2)
    for _ in range(samples):
        n = int(rng.integers(4, max_n + 1))
        g = random_universal_graph(n, float(rng.uniform(0.1, 0.9)), rng)
        star = star_tree(g, 0)
        base = tree_intersection_number(g, star)
        for nb in st_neighbors(g, star):
            if tree_intersection_number(g, nb) < base:
                return Check("star is a local minimum", False, samples, _instance(g, nb))
    return Check("star is a local minimum", True, samples)


def edge_removal(seed: int, samples: int = 1000, max_n: int = 12) -> Check:
    rng = _rng(seed, 3)
    done = 0
    while done < samples:
        n = int(rng.integers(3, max_n + 1))
        g = random_connected_graph(n, float(rng.uniform(0.1, 0.8)), rng)
        t = random_spanning_tree(g, rng)
        off = t.non_tree_edges()
        if not off:
            continue
        done += 1
        e = off[int(rng.integers(len(off)))]
        rest, own = edge_removal_delta(g, t, e)
        if rest != tree_intersection_number(g, t) - own:
            return Check("edge removal drops exactly the cycle's count", False, done, _instance(g, t))
    return Check("edge removal drops exactly the cycle's count", True, samples)


def partition(seed: int, samples: int = 200, max_n: int = 10) -> Check:
    rng = _rng(seed, 4)
    for _ in range(samples):
        n = int(rng.integers(3, max_n + 1))
        g, t = random_branching_instance(n, float(rng.uniform(0.1, 0.9)), rng)
        if not cj.partition_check(g, t, 0):
            return Check("intersection number splits over principal subtrees", False, samples, _instance(g, t))
    return Check("intersection number splits over principal subtrees", True, samples)


def reduction(seed: int, samples: int = 200, max_n: int = 10) -> Check:
    rng = _rng(seed, 5)
    for _ in range(samples):
        n = int(rng.integers(4, max_n + 1))
        g = random_universal_graph(n, float(rng.uniform(0.2, 0.9)), rng)
        t = random_spanning_tree(g, rng)
        if not cj.reduction_lemma_check(g, t, 0):
            return Check("interbranch removal keeps the gap", False, samples, _instance(g, t))
    return Check("interbranch removal keeps the gap", True, samples)


def intrinsic(sizes=range(5, 9)) -> Check:
    for n in sizes:
        c = cj.intrinsic_invariant_construction(n)
        if not (c.holds and c.h_cycle_t1 == c.h_cycle_t2 == n - 3):
            return Check("tree order differs between K_n and its cut-down copy", False, n, format_instance(c.h, c.t2_pairs))
    return Check("tree order differs between K_n and its cut-down copy", True, len(sizes))


def spanning_tree_counts(seed: int, samples: int = 100, max_n: int = 9) -> Check:
    rng = _rng(seed, 6)
    for _ in range(samples):
        n = int(rng.integers(2, max_n + 1))
        g = random_connected_graph(n, float(rng.uniform(0.0, 0.5)), rng)
        if sum(1 for _ in all_spanning_trees(g)) != kirchhoff_count(g):
            return Check("spanning tree enumeration matches Kirchhoff count", False, samples, _instance(g))
    return Check("spanning tree enumeration matches Kirchhoff count", True, samples)


def free_tree_counts(max_n: int = 8) -> Check:
    for n in range(1, max_n + 1):
        expected = 1 if n == 1 else sum(1 for _ in nx.nonisomorphic_trees(n))
        if len(all_free_trees(n)) != expected:
            return Check("free tree classes match an independent generator", False, n)
    return Check("free tree classes match an independent generator", True, max_n)


SUITES: dict[str, Callable[[int], list[Check]]] = {
    "formulas": lambda seed: [star_cycle_values(), complete_formula_exhaustive(), star_degree_formulas(seed)],
    "local-min": lambda seed: [local_minimum(seed)],
    "edge-removal": lambda seed: [edge_removal(seed)],
    "partition": lambda seed: [partition(seed)],
    "reduction": lambda seed: [reduction(seed)],
    "intrinsic": lambda seed: [intrinsic()],
    "enumeration": lambda seed: [spanning_tree_counts(seed), free_tree_counts()],
}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return suite(seed)
