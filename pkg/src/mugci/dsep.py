"""Directed models, deterministic propagation, moral graphs, and join trees.

The separation test for a directed graph runs in four stages: prune to the
query elements and their ancestors, reroute the children of unobserved
deterministic elements to draw from their parents instead, moralize, and
test plain separation in the resulting undirected graph.
"""

from __future__ import annotations

import heapq
from itertools import combinations
from typing import Iterable, Mapping

from .errors import CyclicGraph, InvalidOrder
from .model import (
    TRIVIALLY_TRUE,
    Statement,
    Universe,
    canonicalize,
    format_set,
)
from .ugraph import UGraph


class DiGraph:
    """Acyclic directed graph over elements, with a deterministic-node flag."""

    __slots__ = ("_universe", "_arcs", "_deterministic", "_order")

    def __init__(
        self,
        universe: Universe,
        arcs: Iterable[tuple[str, str]] = (),
        deterministic: Iterable[str] = (),
    ):
        self._universe = universe
        arc_set = set()
        for a, b in arcs:
            universe.require((a, b))
            if a == b:
                raise CyclicGraph(f"self-arc on {a}")
            arc_set.add((a, b))
        self._arcs = frozenset(arc_set)
        det = frozenset(deterministic)
        universe.require(det)
        self._deterministic = det
        self._order = self._toposort()

    def _toposort(self) -> tuple[str, ...]:
        indegree = {v: 0 for v in self._universe}
        for _, b in self._arcs:
            indegree[b] += 1
        ready = [v for v in self._universe if indegree[v] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for a, b in self._arcs:
                if a == v:
                    indegree[b] -= 1
                    if indegree[b] == 0:
                        heapq.heappush(ready, b)
        if len(order) != len(self._universe):
            raise CyclicGraph("arcs contain a directed cycle")
        return tuple(order)

    @property
    def universe(self) -> Universe:
        return self._universe

    @property
    def arcs(self) -> frozenset:
        return self._arcs

    @property
    def deterministic(self) -> frozenset:
        return self._deterministic

    def parents(self, v: str) -> frozenset:
        self._universe.require((v,))
        return frozenset(a for a, b in self._arcs if b == v)

    def children(self, v: str) -> frozenset:
        self._universe.require((v,))
        return frozenset(b for a, b in self._arcs if a == v)

    def topological_order(self) -> tuple[str, ...]:
        """Parents before children; ties broken lexicographically."""
        return self._order

    def ancestors(self, seed: Iterable[str]) -> frozenset:
        """All elements with a directed path into the seed set (seed excluded)."""
        seed = frozenset(seed)
        self._universe.require(seed)
        reached: set[str] = set()
        frontier = list(seed)
        while frontier:
            v = frontier.pop()
            for p in self.parents(v):
                if p not in reached and p not in seed:
                    reached.add(p)
                    frontier.append(p)
        return frozenset(reached)

    def ancestral_prune(self, keep: Iterable[str]) -> "DiGraph":
        """Induced subgraph on keep plus all of its ancestors."""
        keep = frozenset(keep)
        self._universe.require(keep)
        kept = keep | self.ancestors(keep)
        arcs = [(a, b) for a, b in self._arcs if a in kept and b in kept]
        return DiGraph(Universe(kept), arcs, self._deterministic & kept)

    def det_propagate(self, z: Iterable[str]) -> "DiGraph":
        """Reroute children of unobserved deterministic elements.

        Visits elements in graph order; each deterministic element outside z
        has every outgoing arc replaced by arcs from its current parents, so
        earlier propagations cascade into later ones.  Observed deterministic
        elements (members of z) are left untouched.
        """
        z = frozenset(z)
        arcs = set(self._arcs)
        for v in self._order:
            if v not in self._deterministic or v in z:
                continue
            parents = sorted(a for a, b in arcs if b == v)
            for c in sorted(b for a, b in arcs if a == v):
                arcs.discard((v, c))
                arcs.update((p, c) for p in parents)
        return DiGraph(self._universe, arcs, self._deterministic)

    def moralize(self) -> UGraph:
        """Drop arc directions and marry every pair of co-parents."""
        edges = {tuple(sorted(arc)) for arc in self._arcs}
        for v in self._universe:
            for a, b in combinations(sorted(self.parents(v)), 2):
                edges.add((a, b))
        return UGraph.from_singletons(self._universe, edges)

    def d_separated(
        self, x: Iterable[str], z: Iterable[str], y: Iterable[str]
    ) -> bool:
        """Four-stage separation test; handles deterministic elements.

        Raises for elements outside the universe or sides overlapping
        outside z; trivial queries (an empty side) hold vacuously.
        """
        x, z, y = frozenset(x), frozenset(z), frozenset(y)
        self._universe.require(x | z | y)
        c = canonicalize(Statement(x, z, y))
        if c is TRIVIALLY_TRUE:
            return True
        pruned = self.ancestral_prune(c.x | c.z | c.y)
        propagated = pruned.det_propagate(c.z)
        return propagated.moralize().separates(c.x, c.z, c.y)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiGraph):
            return NotImplemented
        return (
            self._universe == other._universe
            and self._arcs == other._arcs
            and self._deterministic == other._deterministic
        )

    def __hash__(self) -> int:
        return hash((self._universe, self._arcs, self._deterministic))

    def __repr__(self) -> str:
        arcs = ", ".join(f"{a}->{b}" for a, b in sorted(self._arcs))
        return f"DiGraph({arcs}; det={format_set(self._deterministic)})"


class JoinTree:
    """Tree of element clusters; sepsets default to neighbor intersections."""

    __slots__ = ("_clusters", "_links", "_sepsets")

    def __init__(
        self,
        clusters: Mapping[int, Iterable[str]],
        links: Iterable[tuple[int, int]] = (),
        sepsets: Mapping[tuple[int, int], Iterable[str]] | None = None,
    ):
        self._clusters = {int(c): frozenset(es) for c, es in clusters.items()}
        self._links = frozenset(frozenset(l) for l in links)
        if sepsets is None:
            computed = {}
            for link in self._links:
                a, b = sorted(link)
                if a in self._clusters and b in self._clusters:
                    computed[(a, b)] = self._clusters[a] & self._clusters[b]
            self._sepsets = computed
        else:
            self._sepsets = {
                tuple(sorted(k)): frozenset(v) for k, v in sepsets.items()
            }

    @property
    def clusters(self) -> dict[int, frozenset]:
        return dict(self._clusters)

    @property
    def links(self) -> frozenset:
        return self._links

    def sepset(self, a: int, b: int) -> frozenset:
        return self._sepsets[tuple(sorted((a, b)))]

    def validate(self) -> list[str]:
        """Diagnostics: empty means a structurally valid join tree.

        Checks that links reference clusters and form a tree, that each
        sepset equals its endpoint intersection, and that every element's
        clusters form a connected subtree (running intersection).
        """
        violations = []
        adjacency: dict[int, set[int]] = {c: set() for c in self._clusters}
        well_formed = []
        for link in sorted(self._links, key=sorted):
            a, b = sorted(link)
            if a not in self._clusters or b not in self._clusters:
                violations.append(f"link {a}-{b} references a missing cluster")
                continue
            adjacency[a].add(b)
            adjacency[b].add(a)
            well_formed.append((a, b))

        if self._clusters:
            start = min(self._clusters)
            seen = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for nb in adjacency[v]:
                    if nb not in seen:
                        seen.add(nb)
                        stack.append(nb)
            is_tree = (
                len(seen) == len(self._clusters)
                and len(well_formed) == len(self._clusters) - 1
            )
            if not is_tree:
                violations.append("links do not form a tree over the clusters")

        for a, b in well_formed:
            expected = self._clusters[a] & self._clusters[b]
            actual = self._sepsets.get((a, b))
            if actual != expected:
                shown = format_set(actual) if actual is not None else "missing"
                violations.append(
                    f"sepset {a}-{b} is {shown}, endpoint intersection is "
                    f"{format_set(expected)}"
                )

        every_element = sorted(set().union(*self._clusters.values())) if self._clusters else []
        for e in every_element:
            holders = [c for c in sorted(self._clusters) if e in self._clusters[c]]
            if len(holders) < 2:
                continue
            seen = {holders[0]}
            stack = [holders[0]]
            while stack:
                v = stack.pop()
                for nb in adjacency[v]:
                    if nb not in seen and e in self._clusters[nb]:
                        seen.add(nb)
                        stack.append(nb)
            if not set(holders) <= seen:
                violations.append(
                    f"element {e} appears in clusters not connected through "
                    f"clusters containing it"
                )
        return violations

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JoinTree):
            return NotImplemented
        return (
            self._clusters == other._clusters
            and self._links == other._links
            and self._sepsets == other._sepsets
        )

    def __repr__(self) -> str:
        parts = "; ".join(
            f"{c}={format_set(es)}" for c, es in sorted(self._clusters.items())
        )
        return f"JoinTree({parts})"


def validate_join_tree(tree: JoinTree) -> list[str]:
    return tree.validate()


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def build_join_tree(
    g: UGraph, order: Iterable[str]
) -> tuple[UGraph, JoinTree]:
    """Elimination-order fill-in, maximal cliques, max-weight spanning tree.

    The graph must have exactly one single-element node per element.  Any
    elimination order works; bad orders just produce more fill-in.  The
    returned tree always satisfies the running intersection property.
    """
    node_of = {}
    for n, es in g.nodes.items():
        if len(es) != 1:
            raise ValueError("join-tree construction needs single-element nodes")
        (e,) = es
        if e in node_of:
            raise ValueError(f"element {e} appears in more than one node")
        node_of[e] = n
    order = tuple(order)
    if sorted(order) != sorted(node_of):
        raise InvalidOrder("order must be a permutation of the graph's elements")

    adjacency = {e: set() for e in node_of}
    for edge in g.expand().edges:
        a, b = tuple(edge)
        adjacency[a].add(b)
        adjacency[b].add(a)

    fill = []
    cliques = []
    eliminated: set[str] = set()
    for v in order:
        nbrs = sorted(adjacency[v] - eliminated)
        cliques.append(frozenset((v, *nbrs)))
        for a, b in combinations(nbrs, 2):
            if b not in adjacency[a]:
                adjacency[a].add(b)
                adjacency[b].add(a)
                fill.append((a, b))
        eliminated.add(v)

    chordal = g.add_arcs((node_of[a], node_of[b]) for a, b in fill)

    unique = list(dict.fromkeys(cliques))
    maximal = sorted(
        (c for c in unique if not any(c < d for d in unique)),
        key=lambda c: tuple(sorted(c)),
    )
    clusters = {i: c for i, c in enumerate(maximal)}

    candidates = sorted(
        combinations(range(len(maximal)), 2),
        key=lambda ij: (
            -len(maximal[ij[0]] & maximal[ij[1]]),
            tuple(sorted(maximal[ij[0]])),
            tuple(sorted(maximal[ij[1]])),
        ),
    )
    uf = _UnionFind(range(len(maximal)))
    links = [(i, j) for i, j in candidates if uf.union(i, j)]
    return chordal, JoinTree(clusters, links)
