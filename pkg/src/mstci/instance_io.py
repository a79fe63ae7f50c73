"""Plain-text instance files and read-only graph6 input.

Instance file::

    n 5
    0 1
    0 2
    ...
    tree
    0 1
    ...

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from typing import Optional, Sequence

import networkx as nx

from .graph import Graph, GraphError

Edge = tuple[int, int]


class InstanceParseError(GraphError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_instance(text: str) -> tuple[Graph, Optional[list[Edge]]]:
    n: Optional[int] = None
    edges: list[Edge] = []
    tree: Optional[list[Edge]] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "n" or not fields[1].isdigit():
                raise InstanceParseError("expected header 'n <count>'", lineno)
            n = int(fields[1])
            continue
        if fields == ["tree"]:
            if tree is not None:
                raise InstanceParseError("second 'tree' marker", lineno)
            tree = []
            continue
        if len(fields) != 2 or not all(f.isdigit() for f in fields):
            raise InstanceParseError(f"expected 'u w', got {line!r}", lineno)
        pair = (int(fields[0]), int(fields[1]))
        if max(pair) >= n:
            raise InstanceParseError(f"vertex out of range in {line!r}", lineno)
        (edges if tree is None else tree).append(pair)
    if n is None:
        raise InstanceParseError("empty instance file")
    try:
        g = Graph(n, edges)
    except GraphError as exc:
        raise InstanceParseError(str(exc)) from None
    return g, tree


def read_instance(path: str) -> tuple[Graph, Optional[list[Edge]]]:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def format_instance(g: Graph, tree: Optional[Sequence[Edge]] = None) -> str:
    """Canonical text: edges sorted with the smaller endpoint first."""
    lines = [f"n {g.n}"]
    lines += [f"{u} {w}" for u, w in sorted(g.edges)]
    if tree is not None:
        lines.append("tree")
        lines += [f"{u} {w}" for u, w in sorted((min(p), max(p)) for p in tree)]
    return "\n".join(lines) + "\n"


def parse_graph6(text: str) -> list[Graph]:
    graphs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            nxg = nx.from_graph6_bytes(line.encode("ascii"))
        except (nx.NetworkXError, ValueError, IndexError, UnicodeEncodeError) as exc:
            raise InstanceParseError(f"bad graph6 string: {exc}", lineno) from None
        graphs.append(Graph(nxg.number_of_nodes(), sorted((min(e), max(e)) for e in nxg.edges())))
    return graphs
