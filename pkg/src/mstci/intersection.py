"""Intersection predicates and numbers for the tree-cycles of a spanning tree.

``tree_intersection_number`` (pairwise, exhaustive) is the reference count
every closed form in this module is checked against.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .graph import (
    Graph,
    GraphError,
    SpanningTree,
    TreeCycle,
    TreeError,
    all_tree_cycles,
    fundamental_cycle,
)


class CycleClass(enum.Enum):
    INTERNAL = "internal"
    EXTERNAL = "external"
    TRANSIT = "transit"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class CycleEntry:
    cycle_edge: int
    ends: tuple[int, int]
    length: int
    intersections: int
    internal: int
    external: int
    transit: int


@dataclass
class IntersectionReport:
    per_cycle: list[CycleEntry] = field(default_factory=list)
    total: int = 0

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "cycles": [
                {
                    "cycle_edge": list(e.ends),
                    "length": e.length,
                    "intersections": e.intersections,
                    "internal": e.internal,
                    "external": e.external,
                    "transit": e.transit,
                }
                for e in self.per_cycle
            ],
        }


def cycles_intersect(c1: TreeCycle, c2: TreeCycle) -> bool:
    return c1.cycle_edge != c2.cycle_edge and (c1.mask & c2.mask) != 0


def cycle_intersection_number(cycles: Sequence[TreeCycle], c: TreeCycle) -> int:
    return sum(1 for other in cycles if cycles_intersect(c, other))


def count_intersecting_pairs(masks: Sequence[int]) -> int:
    total = 0
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if a & b:
                total += 1
    return total


def tree_intersection_number(g: Graph, t: SpanningTree) -> int:
    return count_intersecting_pairs([c.mask for c in all_tree_cycles(g, t)])


def classify(g: Graph, c: TreeCycle, c2: TreeCycle) -> CycleClass:
    """Class of ``c2`` relative to ``c``; ``c2`` must be a different cycle."""
    if c.cycle_edge == c2.cycle_edge:
        raise ValueError("a cycle is not classified against itself")
    if not c.mask & c2.mask:
        return CycleClass.DISJOINT
    on_c = c.vertices(g)
    inside = (c2.ends[0] in on_c) + (c2.ends[1] in on_c)
    return (CycleClass.TRANSIT, CycleClass.EXTERNAL, CycleClass.INTERNAL)[inside]


def intersection_report(g: Graph, t: SpanningTree) -> IntersectionReport:
    cycles = all_tree_cycles(g, t)
    entries = []
    for c in cycles:
        counts = {cls: 0 for cls in CycleClass}
        for other in cycles:
            if other.cycle_edge != c.cycle_edge:
                counts[classify(g, c, other)] += 1
        hits = counts[CycleClass.INTERNAL] + counts[CycleClass.EXTERNAL] + counts[CycleClass.TRANSIT]
        entries.append(
            CycleEntry(
                c.cycle_edge,
                c.ends,
                c.length,
                hits,
                counts[CycleClass.INTERNAL],
                counts[CycleClass.EXTERNAL],
                counts[CycleClass.TRANSIT],
            )
        )
    total2 = sum(e.intersections for e in entries)
    return IntersectionReport(entries, total2 // 2)


def complete_graph_cycle_formula(n: int, k: int, q: Sequence[int]) -> int:
    """Intersection number of a length-``k`` tree-cycle when the host is K_n.

    ``q`` holds the closest-point-set sizes of the cycle's vertices. Only
    meaningful for complete host graphs.
    """
    if not 3 <= k <= n:
        raise ValueError(f"cycle length {k} outside [3, {n}]")
    q = list(q)
    if q and len(q) != k:
        raise ValueError(f"expected {k} closest-point-set sizes, got {len(q)}")
    if sum(q) != n - k:
        raise ValueError(f"closest-point-set sizes sum to {sum(q)}, expected {n - k}")
    internal = (k - 3) * k // 2
    external = (n - k) * (k - 1)
    transit2 = sum(x * (n - k - x) for x in q)
    return internal + external + transit2 // 2


def star_cycle_intersection(g: Graph, center: int, e: int) -> int:
    u, w = g.edges[e]
    if center in (u, w):
        raise TreeError(f"edge ({u}, {w}) is a star tree edge")
    if g.degree(center) != g.n - 1:
        raise GraphError(f"graph admits no star tree at vertex {center}")
    return g.degree(u) + g.degree(w) - 4


def star_tree_intersection(g: Graph, center: int) -> int:
    """Tree intersection number of the star at ``center``, from degrees alone.

    Evaluates both the per-vertex sum and the degree-norm form and insists
    they agree.
    """
    if g.degree(center) != g.n - 1:
        raise GraphError(f"graph admits no star tree at vertex {center}")
    d = g.degrees()
    by_vertex = star_value_from_degrees(d, center)
    norm = star_value_from_degree_norm(d, g.m)
    if by_vertex != norm:
        raise ArithmeticError(f"star formulas disagree: {by_vertex} != {norm}")
    return by_vertex


def star_value_from_degrees(degrees: Sequence[int], center: int) -> int:
    return sum((x - 1) * (x - 2) for u, x in enumerate(degrees) if u != center) // 2


def star_value_from_degree_norm(degrees: Sequence[int], m: int) -> int:
    n = len(degrees)
    return (sum(x * x for x in degrees) - 6 * m - (n - 1) * (n - 6)) // 2


def edge_removal_delta(g: Graph, t: SpanningTree, e: int) -> tuple[int, int]:
    """``(∩ of t in g minus e, ∩ of e's cycle)``, both by pairwise count."""
    if t.contains(e):
        raise TreeError(f"edge {e} is a tree edge; removing it disconnects the tree")
    cycles = all_tree_cycles(g, t)
    own = next(c for c in cycles if c.cycle_edge == e)
    reduced, remap = g.without_edges([e])
    t2 = SpanningTree(reduced, [remap[i] for i in t.edges], t.root)
    return tree_intersection_number(reduced, t2), cycle_intersection_number(cycles, own)


def transitless_tree(g: Graph, cycle: Sequence[int], drop: int = 0, hub: int | None = None) -> tuple[SpanningTree, TreeCycle]:
    """Spanning tree in which ``cycle`` is a tree-cycle with no transit cycles.

    ``cycle`` lists the vertices in cyclic order; the edge from ``cycle[drop]``
    to its successor becomes the cycle-edge, and every off-cycle vertex hangs
    directly off ``hub`` (default ``cycle[0]``). Needs those edges in ``g``.
    """
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        raise ValueError("cycle must list at least three distinct vertices")
    hub = cycle[0] if hub is None else hub
    if hub not in cycle:
        raise ValueError(f"hub {hub} is not on the cycle")
    closing = (cycle[drop % k], cycle[(drop + 1) % k])
    ring = [(cycle[i], cycle[(i + 1) % k]) for i in range(k)]
    on_cycle = set(cycle)
    pairs = [p for p in ring if p != closing] + [(hub, x) for x in range(g.n) if x not in on_cycle]
    t = SpanningTree(g, [g.edge_index(a, b) for a, b in pairs], hub)
    return t, fundamental_cycle(t, g.edge_index(*closing))
