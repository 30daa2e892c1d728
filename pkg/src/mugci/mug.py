"""Dependency models made of multiple undirected graphs.

A statement is satisfied when some member graph contains all of its elements
and witnesses the separation.  Transformations never mutate: they append the
transformed graph (deduplicated by canonical key), so the satisfied set can
only grow along a derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Union

from .errors import StatementNotSatisfied, UnknownElement, WrongElementSet
from .model import (
    ENUMERATION_GUARD,
    CanonicalStatement,
    Universe,
    enumerate_canonical,
)
from .ugraph import UGraph


class Mug:
    """An ordered, duplicate-free collection of undirected graphs."""

    __slots__ = ("_universe", "_graphs", "_index")

    def __init__(self, universe: Universe, graphs: Iterable[UGraph] = ()):
        self._universe = universe
        self._graphs: tuple[UGraph, ...] = ()
        self._index: dict[tuple, int] = {}
        for g in graphs:
            extra = g.elements - frozenset(universe)
            if extra:
                raise UnknownElement(
                    f"graph uses elements outside the universe: {', '.join(sorted(extra))}"
                )
            key = g.key()
            if key not in self._index:
                self._index[key] = len(self._graphs)
                self._graphs = self._graphs + (g,)

    @property
    def universe(self) -> Universe:
        return self._universe

    @property
    def graphs(self) -> tuple[UGraph, ...]:
        return self._graphs

    def state_key(self) -> tuple:
        """Order-insensitive identity of the graph multiset (for search dedup)."""
        return tuple(sorted(self._index))

    def witness(self, s: CanonicalStatement) -> int | None:
        """Index of the first graph satisfying s, or None.

        A graph that does not contain every element of the statement is
        never a witness.
        """
        needed = s.elements
        for i, g in enumerate(self._graphs):
            if needed <= g.elements and g.separates(s.x, s.z, s.y):
                return i
        return None

    def satisfies(self, s: CanonicalStatement) -> bool:
        return self.witness(s) is not None

    def enumerate_satisfied(
        self, max_elements: int = ENUMERATION_GUARD
    ) -> frozenset:
        """All canonical statements over the universe satisfied by some graph."""
        return frozenset(
            s
            for s in enumerate_canonical(self._universe, max_elements)
            if self.witness(s) is not None
        )

    def with_graph(self, g: UGraph) -> tuple["Mug", int]:
        """Append a graph, deduplicating by key; returns (mug, graph index)."""
        key = g.key()
        existing = self._index.get(key)
        if existing is not None:
            return self, existing
        return Mug(self._universe, self._graphs + (g,)), len(self._graphs)

    def _graph_at(self, gi: int) -> UGraph:
        if not 0 <= gi < len(self._graphs):
            raise IndexError(f"no graph at index {gi}")
        return self._graphs[gi]

    def combined(self, s: CanonicalStatement, gi: int) -> tuple["Mug", int]:
        """Graph combination: the one transformation that adds statements.

        Requires s to be satisfied somewhere in the model and graph ``gi``
        to cover exactly one side of s plus its conditioning set.  The new
        graph copies ``gi``, adds a fresh single-element node for each
        element of the other side, and cliques those new nodes together with
        every node carrying a conditioning element.
        """
        base = self._graph_at(gi)
        if self.witness(s) is None:
            raise StatementNotSatisfied(f"model does not satisfy {s}")
        elements = base.elements
        if elements == s.x | s.z:
            added_side = s.y
        elif elements == s.y | s.z:
            added_side = s.x
        else:
            raise WrongElementSet(
                f"graph {gi} covers {sorted(elements)}, not one side of {s} plus z"
            )
        nodes = base.nodes
        edges = set(base.edges)
        next_id = max(nodes, default=-1) + 1
        new_ids = []
        for e in sorted(added_side):
            nodes[next_id] = frozenset((e,))
            new_ids.append(next_id)
            next_id += 1
        anchors = [n for n in sorted(base.nodes) if base.nodes[n] & s.z]
        for a, b in combinations(new_ids + anchors, 2):
            edges.add(frozenset((a, b)))
        return self.with_graph(UGraph(nodes, edges))

    def with_arcs_added(self, gi: int, arcs: Iterable) -> tuple["Mug", int]:
        return self.with_graph(self._graph_at(gi).add_arcs(arcs))

    def with_node_deleted(self, gi: int, n: int) -> tuple["Mug", int]:
        return self.with_graph(self._graph_at(gi).delete_node(n))

    def with_nodes_merged(self, gi: int, n1: int, n2: int) -> tuple["Mug", int]:
        return self.with_graph(self._graph_at(gi).merge_nodes(n1, n2))

    def with_node_split(
        self, gi: int, n: int, part1: Iterable[str], part2: Iterable[str]
    ) -> tuple["Mug", int]:
        return self.with_graph(self._graph_at(gi).split_node(n, part1, part2))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mug):
            return NotImplemented
        return self._universe == other._universe and self._graphs == other._graphs

    def __hash__(self) -> int:
        return hash((self._universe, self._graphs))

    def __repr__(self) -> str:
        return f"Mug({len(self._graphs)} graphs over {self._universe!r})"


@dataclass(frozen=True)
class Delete:
    graph: int
    node: int


@dataclass(frozen=True)
class AddArcs:
    graph: int
    arcs: tuple


@dataclass(frozen=True)
class Merge:
    graph: int
    node1: int
    node2: int


@dataclass(frozen=True)
class Split:
    graph: int
    node: int
    part1: frozenset
    part2: frozenset


@dataclass(frozen=True)
class Combine:
    statement: CanonicalStatement
    graph: int


Move = Union[Delete, AddArcs, Merge, Split, Combine]


def append_transformed(m: Mug, move: Move) -> tuple[Mug, int]:
    """Apply a transformation descriptor; returns (new mug, result graph index)."""
    if isinstance(move, Delete):
        return m.with_node_deleted(move.graph, move.node)
    if isinstance(move, AddArcs):
        return m.with_arcs_added(move.graph, move.arcs)
    if isinstance(move, Merge):
        return m.with_nodes_merged(move.graph, move.node1, move.node2)
    if isinstance(move, Split):
        return m.with_node_split(move.graph, move.node, move.part1, move.part2)
    if isinstance(move, Combine):
        return m.combined(move.statement, move.graph)
    raise TypeError(f"not a transformation descriptor: {move!r}")
