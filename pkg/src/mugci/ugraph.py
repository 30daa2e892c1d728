"""Undirected graphs whose nodes carry sets of elements.

Separation is always evaluated on the element graph: multi-element nodes are
expanded so that two elements are adjacent iff they share a node or sit in
adjacent nodes.  This single rule covers plain graphs, multi-element nodes,
and repeated elements uniformly.  All transformations are pure and return
new graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .errors import (
    CoverageGap,
    EmptyPart,
    InvalidOverlap,
    MissingElements,
    SameNode,
    SelfLoop,
    UnknownNode,
)


@dataclass(frozen=True)
class ElementGraph:
    """Simple graph with one vertex per element."""

    vertices: frozenset
    edges: frozenset

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for edge in self.edges:
            a, b = tuple(edge)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def separated(self, x: frozenset, z: frozenset, y: frozenset) -> bool:
        """True iff removing z leaves no path from any x-vertex to any y-vertex."""
        adj = self.adjacency()
        stack = [v for v in x]
        visited = set(stack)
        while stack:
            v = stack.pop()
            if v in y:
                return False
            for nb in adj[v]:
                if nb not in z and nb not in visited:
                    visited.add(nb)
                    stack.append(nb)
        return True


def _as_edge(pair) -> frozenset:
    edge = frozenset(pair)
    if len(edge) != 2:
        raise SelfLoop(f"edge endpoints must differ: {sorted(pair)}")
    return edge


class UGraph:
    """Undirected graph over integer node ids, each holding an element set."""

    __slots__ = ("_nodes", "_edges")

    def __init__(self, nodes: Mapping[int, Iterable[str]], edges: Iterable = ()):
        node_map = {int(n): frozenset(es) for n, es in nodes.items()}
        for n, es in node_map.items():
            if not es:
                raise ValueError(f"node {n} carries no elements")
        edge_set = set()
        for pair in edges:
            edge = _as_edge(pair)
            for endpoint in edge:
                if endpoint not in node_map:
                    raise UnknownNode(f"edge endpoint {endpoint} is not a node")
            edge_set.add(edge)
        self._nodes = node_map
        self._edges = frozenset(edge_set)

    @classmethod
    def from_singletons(cls, elements: Iterable[str], element_edges: Iterable = ()):
        """Build a one-element-per-node graph; ids follow sorted element order."""
        names = sorted(set(elements))
        ids = {e: i for i, e in enumerate(names)}
        edges = [(ids[a], ids[b]) for a, b in element_edges]
        return cls({ids[e]: {e} for e in names}, edges)

    @property
    def nodes(self) -> dict[int, frozenset]:
        return dict(self._nodes)

    @property
    def edges(self) -> frozenset:
        return self._edges

    @property
    def elements(self) -> frozenset:
        out: set[str] = set()
        for es in self._nodes.values():
            out |= es
        return frozenset(out)

    def node_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self._nodes))

    def neighbors(self, n: int) -> frozenset:
        if n not in self._nodes:
            raise UnknownNode(f"no node {n}")
        return frozenset(next(iter(e - {n})) for e in self._edges if n in e)

    def nodes_with_element(self, element: str) -> tuple[int, ...]:
        return tuple(sorted(n for n, es in self._nodes.items() if element in es))

    def _fresh_id(self) -> int:
        return max(self._nodes, default=-1) + 1

    def expand(self) -> ElementGraph:
        """Collapse to one vertex per element.

        Elements are adjacent iff they co-occur in a node or occur in
        adjacent nodes; repeated elements merge their neighborhoods.
        """
        edges = set()
        for es in self._nodes.values():
            for a, b in combinations(sorted(es), 2):
                edges.add(frozenset((a, b)))
        for edge in self._edges:
            n1, n2 = tuple(edge)
            for a in self._nodes[n1]:
                for b in self._nodes[n2]:
                    if a != b:
                        edges.add(frozenset((a, b)))
        return ElementGraph(self.elements, frozenset(edges))

    def separates(self, x: Iterable[str], z: Iterable[str], y: Iterable[str]) -> bool:
        """Whether z blocks every element-graph path between x and y.

        Expects a canonicalized triple whose elements all occur in the graph.
        """
        x, z, y = frozenset(x), frozenset(z), frozenset(y)
        missing = (x | z | y) - self.elements
        if missing:
            raise MissingElements(f"graph lacks {', '.join(sorted(missing))}")
        if x & y or x & z or y & z:
            raise InvalidOverlap("separation queries take a canonicalized triple")
        return self.expand().separated(x, z, y)

    def add_arcs(self, arcs: Iterable) -> "UGraph":
        """Return a copy with the given node-id pairs added as edges."""
        new_edges = set(self._edges)
        for pair in arcs:
            edge = _as_edge(pair)
            for endpoint in edge:
                if endpoint not in self._nodes:
                    raise UnknownNode(f"no node {endpoint}")
            new_edges.add(edge)
        return UGraph(self._nodes, new_edges)

    def delete_node(self, n: int) -> "UGraph":
        """Remove a node after pairwise connecting its former neighbors.

        The fill-in keeps every path that ran through the deleted node, so
        no separation appears that the original graph did not have.
        """
        if n not in self._nodes:
            raise UnknownNode(f"no node {n}")
        nbrs = sorted(self.neighbors(n))
        edges = {e for e in self._edges if n not in e}
        edges.update(frozenset((a, b)) for a, b in combinations(nbrs, 2))
        nodes = {k: v for k, v in self._nodes.items() if k != n}
        return UGraph(nodes, edges)

    def merge_nodes(self, n1: int, n2: int) -> "UGraph":
        """Replace two nodes by one carrying the union of their elements."""
        if n1 == n2:
            raise SameNode("merge requires two distinct nodes")
        for n in (n1, n2):
            if n not in self._nodes:
                raise UnknownNode(f"no node {n}")
        merged = self._fresh_id()
        nbrs = (self.neighbors(n1) | self.neighbors(n2)) - {n1, n2}
        nodes = {k: v for k, v in self._nodes.items() if k not in (n1, n2)}
        nodes[merged] = self._nodes[n1] | self._nodes[n2]
        edges = {e for e in self._edges if n1 not in e and n2 not in e}
        edges.update(frozenset((merged, v)) for v in nbrs)
        return UGraph(nodes, edges)

    def split_node(self, n: int, part1: Iterable[str], part2: Iterable[str]) -> "UGraph":
        """Replace a node by two adjacent parts that jointly cover it.

        Parts may overlap; both inherit every former neighbor, and the edge
        between them keeps shared elements on a common path.
        """
        if n not in self._nodes:
            raise UnknownNode(f"no node {n}")
        p1, p2 = frozenset(part1), frozenset(part2)
        if not p1 or not p2:
            raise EmptyPart("both split parts must be non-empty")
        if p1 | p2 != self._nodes[n]:
            raise CoverageGap("split parts must cover the node's elements exactly")
        a = self._fresh_id()
        b = a + 1
        nbrs = self.neighbors(n)
        nodes = {k: v for k, v in self._nodes.items() if k != n}
        nodes[a] = p1
        nodes[b] = p2
        edges = {e for e in self._edges if n not in e}
        edges.add(frozenset((a, b)))
        for v in nbrs:
            edges.add(frozenset((a, v)))
            edges.add(frozenset((b, v)))
        return UGraph(nodes, edges)

    def validate_element_paths(self) -> list[tuple[str, int, int]]:
        """Report repeated elements that can be separated from themselves.

        For each element held by several nodes, returns every pair of those
        nodes joined by a simple path with an intermediate node lacking the
        element.  An empty list means the repetition is benign.
        """
        adj = {n: sorted(self.neighbors(n)) for n in self._nodes}
        violations = []
        carriers: dict[str, list[int]] = {}
        for n in sorted(self._nodes):
            for e in self._nodes[n]:
                carriers.setdefault(e, []).append(n)
        for e in sorted(carriers):
            holders = carriers[e]
            if len(holders) < 2:
                continue
            for a, b in combinations(holders, 2):
                if self._has_gap_path(adj, a, b, e):
                    violations.append((e, a, b))
        return violations

    def _has_gap_path(self, adj, start: int, goal: int, element: str) -> bool:
        # Depth-first over simple paths; exponential in the worst case but
        # this is a diagnostic for hand-sized graphs.
        def walk(current: int, gap_seen: bool, on_path: frozenset) -> bool:
            for nb in adj[current]:
                if nb == goal:
                    if gap_seen:
                        return True
                    continue
                if nb in on_path:
                    continue
                if walk(nb, gap_seen or element not in self._nodes[nb], on_path | {nb}):
                    return True
            return False

        return walk(start, False, frozenset((start,)))

    def key(self) -> tuple:
        """Canonical serialization; equal keys mean element-wise identical graphs."""
        labels = {n: tuple(sorted(es)) for n, es in self._nodes.items()}
        nodes_part = tuple(sorted(labels.values()))
        edges_part = tuple(
            sorted(tuple(sorted((labels[a], labels[b]))) for a, b in map(tuple, self._edges))
        )
        return (nodes_part, edges_part)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((frozenset(self._nodes.items()), self._edges))

    def __repr__(self) -> str:
        nodes = "; ".join(
            f"{n}={{{','.join(sorted(es))}}}" for n, es in sorted(self._nodes.items())
        )
        edges = ", ".join(f"{a}-{b}" for a, b in sorted(map(lambda e: tuple(sorted(e)), self._edges)))
        return f"UGraph({nodes} | {edges})"
