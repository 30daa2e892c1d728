"""Turning axiom chains into checked graph-transformation scripts.

A chain step justified by symmetry, decomposition, or weak union needs no
graph work: any graph witnessing the premise already witnesses the
conclusion.  A contraction step is realized graphically by reducing a
witness of the second premise to exactly the premise's elements (node
deletions) and then applying graph combination with the first premise.
Replay therefore yields, for every statement in the closure, a script of
deletions and combinations ending in a model that satisfies it.  A bounded
breadth-first search over the same two move kinds is available when no
chain is supplied.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import (
    ModelError,
    PremiseNotSatisfied,
    ReducedGraphLosesSeparation,
)
from .graphoid import AxiomStep, first_invalid_step
from .model import (
    CanonicalStatement,
    Statement,
    TriviallyTrue,
    Universe,
    canonicalize,
    statement_key,
)
from .mug import Combine, Delete, Move, Mug, append_transformed
from .ugraph import UGraph


@dataclass(frozen=True)
class MoveScript:
    """A replayable transformation sequence ending in satisfaction of target."""

    initial: Mug
    moves: tuple[Move, ...]
    target: CanonicalStatement


@dataclass(frozen=True)
class Exhausted:
    """Search gave up within its bounds; carries frontier statistics."""

    states_explored: int
    depth_reached: int


def witness_graph(s: CanonicalStatement) -> UGraph:
    """Single-element-node graph encoding exactly one statement.

    Cliques over x+z and over y+z, nothing across: z separates x from y,
    and the satisfied set equals the closure of s restricted to its
    elements (no unintended independence sneaks in).
    """
    members = sorted(s.elements)
    left = s.x | s.z
    right = s.y | s.z
    edges = [
        (a, b)
        for a, b in combinations(members, 2)
        if {a, b} <= left or {a, b} <= right
    ]
    return UGraph.from_singletons(members, edges)


def singletonize(g: UGraph) -> UGraph:
    """Rebuild a graph with one node per element, preserving separations."""
    eg = g.expand()
    return UGraph.from_singletons(eg.vertices, (tuple(sorted(e)) for e in eg.edges))


def initial_mug(
    universe: Universe,
    statements: Iterable[CanonicalStatement] = (),
    graphs: Iterable[UGraph] = (),
) -> Mug:
    """Model seeding: declared graphs (singletonized) then statement witnesses."""
    members = [singletonize(g) for g in graphs]
    members += [witness_graph(s) for s in statements]
    return Mug(universe, members)


def _contraction_parts(s1, s2, conclusion):
    """Recover (x, z, y, w) with s2 = I(x,z,y), s1 = I(x, z+y, w)."""
    for x, y in ((s2.x, s2.y), (s2.y, s2.x)):
        if s2.z | y != s1.z:
            continue
        for a, b in ((s1.x, s1.y), (s1.y, s1.x)):
            if a != x:
                continue
            if canonicalize(Statement(x, s2.z, y | b)) == conclusion:
                return x, s2.z, y, b
    raise ValueError(f"{conclusion} is not a contraction of {s1} and {s2}")


def replay_chain(m0: Mug, chain: Iterable[AxiomStep]) -> MoveScript:
    """Construct a move script realizing a verified axiom chain.

    Every ``given`` statement must be satisfied by the starting model.  The
    model is singletonized first; multi-element nodes carry no extra
    separation information, so this is loss-free.
    """
    steps = tuple(chain)
    if not steps:
        raise ValueError("empty chain")
    m0 = Mug(m0.universe, [singletonize(g) for g in m0.graphs])
    givens = tuple(st.conclusion for st in steps if st.rule == "given")
    for g in givens:
        if m0.witness(g) is None:
            raise PremiseNotSatisfied(f"initial model does not satisfy {g}")
    bad = first_invalid_step(steps, givens)
    if bad is not None:
        raise ValueError(f"chain does not verify at step {bad}")

    m = m0
    moves: list[Move] = []
    for step in steps:
        if step.rule != "contraction":
            # The premise's witness graph witnesses the conclusion as well.
            if m.witness(step.conclusion) is None:
                raise ReducedGraphLosesSeparation(
                    f"{step.rule} conclusion {step.conclusion} lost its witness"
                )
            continue
        s1 = steps[step.premises[0]].conclusion
        s2 = steps[step.premises[1]].conclusion
        x, z, y, _w = _contraction_parts(s1, s2, step.conclusion)
        kept = x | z | y
        gi = m.witness(s2)
        if gi is None:
            raise PremiseNotSatisfied(f"model lost premise {s2}")
        for e in sorted(m.graphs[gi].elements - kept):
            node = m.graphs[gi].nodes_with_element(e)[0]
            move = Delete(gi, node)
            m, gi = append_transformed(m, move)
            moves.append(move)
        if not m.graphs[gi].separates(x, z, y):
            raise ReducedGraphLosesSeparation(
                f"reduction broke {s2} while replaying {step.conclusion}"
            )
        move = Combine(s1, gi)
        m, _ = append_transformed(m, move)
        moves.append(move)
        if m.witness(step.conclusion) is None:
            raise ReducedGraphLosesSeparation(
                f"combination failed to realize {step.conclusion}"
            )
    return MoveScript(m0, tuple(moves), steps[-1].conclusion)


def _combine_candidates(m: Mug, gi: int) -> list[Combine]:
    g = m.graphs[gi]
    inside = sorted(g.elements)
    outside = sorted(set(m.universe) - g.elements)
    if not outside:
        return []
    out = []
    for xmask in range(1, 1 << len(inside)):
        x = frozenset(e for i, e in enumerate(inside) if xmask >> i & 1)
        z = frozenset(inside) - x
        for ymask in range(1, 1 << len(outside)):
            y = frozenset(e for i, e in enumerate(outside) if ymask >> i & 1)
            c = canonicalize(Statement(x, z, y))
            if isinstance(c, TriviallyTrue):
                continue
            if m.witness(c) is not None:
                out.append(Combine(c, gi))
    out.sort(key=lambda mv: statement_key(mv.statement))
    return out


def _search_moves(m: Mug) -> list[Move]:
    moves: list[Move] = []
    for gi, g in enumerate(m.graphs):
        moves.extend(Delete(gi, n) for n in sorted(g.nodes))
        moves.extend(_combine_candidates(m, gi))
    return moves


def search(
    m0: Mug, target: CanonicalStatement, max_moves: int, max_graphs: int
) -> MoveScript | Exhausted:
    """Breadth-first search for a deletion/combination script reaching target.

    States are deduplicated by their graph-key multiset; successor moves are
    ordered by graph index, deletions before combinations, so the result is
    the deterministic shortest script within the bounds.
    """
    if max_moves <= 0 or max_graphs <= 0:
        raise ValueError("search bounds must be positive")
    if m0.witness(target) is not None:
        return MoveScript(m0, (), target)
    visited = {m0.state_key()}
    queue: deque[tuple[Mug, tuple[Move, ...]]] = deque([(m0, ())])
    explored = 0
    depth_reached = 0
    while queue:
        m, path = queue.popleft()
        explored += 1
        if len(path) >= max_moves:
            continue
        for move in _search_moves(m):
            try:
                m2, _ = append_transformed(m, move)
            except ModelError:
                continue
            if len(m2.graphs) > max_graphs:
                continue
            key = m2.state_key()
            if key in visited:
                continue
            visited.add(key)
            path2 = path + (move,)
            depth_reached = max(depth_reached, len(path2))
            if m2.witness(target) is not None:
                return MoveScript(m0, path2, target)
            queue.append((m2, path2))
    return Exhausted(states_explored=explored, depth_reached=depth_reached)


def first_failing_move(script: MoveScript) -> int | None:
    """None if the script replays cleanly and satisfies its target.

    Otherwise the index of the failing move, or ``len(moves)`` when replay
    succeeds but the target is not satisfied at the end.
    """
    m = script.initial
    for i, move in enumerate(script.moves):
        try:
            m, _ = append_transformed(m, move)
        except (ModelError, IndexError, ValueError):
            return i
    if m.witness(script.target) is None:
        return len(script.moves)
    return None


def verify_script(script: MoveScript) -> bool:
    """Replay the script through the model layer and check final satisfaction."""
    return first_failing_move(script) is None


def replay_final(script: MoveScript) -> Mug:
    """The model obtained after applying every move of a valid script."""
    m = script.initial
    for move in script.moves:
        m, _ = append_transformed(m, move)
    return m
