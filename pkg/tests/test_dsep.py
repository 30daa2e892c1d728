from itertools import permutations

import pytest

from mugci import (
    DiGraph,
    JoinTree,
    UGraph,
    Universe,
    build_join_tree,
    validate_join_tree,
)
from mugci.errors import CyclicGraph, InvalidOrder, UnknownElement


def double_det_cascade():
    # two deterministic elements feeding x; conditioning on z reroutes both
    u = Universe(["v", "w", "x", "y", "z"])
    arcs = [("z", "w"), ("w", "y"), ("v", "y"), ("w", "x"), ("y", "x")]
    return DiGraph(u, arcs, deterministic={"w", "y"})


def observed_det_model():
    # the deterministic element itself is observed; no propagation
    u = Universe(["w", "x", "y", "z"])
    return DiGraph(u, [("x", "z"), ("z", "y"), ("z", "w")], deterministic={"z"})


def leaf_collider_model():
    # v is a collider child of x and y; w hangs above z
    u = Universe(["v", "w", "x", "y", "z"])
    arcs = [("w", "z"), ("z", "x"), ("z", "y"), ("x", "v"), ("y", "v")]
    return DiGraph(u, arcs)


def chest_fragment():
    u = Universe(["b", "d", "e", "l", "t"])
    return DiGraph(u, [("t", "e"), ("l", "e"), ("e", "d"), ("b", "d")])


# -- construction ---------------------------------------------------------------


def test_cycles_rejected():
    u = Universe(["a", "b"])
    with pytest.raises(CyclicGraph):
        DiGraph(u, [("a", "b"), ("b", "a")])
    with pytest.raises(CyclicGraph):
        DiGraph(u, [("a", "a")])


def test_unknown_members_rejected():
    u = Universe(["a", "b"])
    with pytest.raises(UnknownElement):
        DiGraph(u, [("a", "q")])
    with pytest.raises(UnknownElement):
        DiGraph(u, deterministic={"q"})


def test_topological_order_breaks_ties_lexicographically():
    u = Universe(["a", "b", "c"])
    d = DiGraph(u, [("c", "a")])
    assert d.topological_order() == ("b", "c", "a")


# -- ancestral pruning ------------------------------------------------------------


def test_prune_drops_leaf_descendants():
    d = leaf_collider_model()
    pruned = d.ancestral_prune({"x", "y", "z"})
    assert set(pruned.universe) == {"w", "x", "y", "z"}
    assert pruned.arcs == frozenset({("w", "z"), ("z", "x"), ("z", "y")})


def test_prune_to_full_universe_is_identity():
    d = leaf_collider_model()
    pruned = d.ancestral_prune(set(d.universe))
    assert pruned == d


def test_prune_to_nothing_is_empty():
    pruned = leaf_collider_model().ancestral_prune(set())
    assert len(pruned.universe) == 0 and pruned.arcs == frozenset()


def test_prune_checks_membership():
    with pytest.raises(UnknownElement):
        leaf_collider_model().ancestral_prune({"nope"})


# -- deterministic propagation -----------------------------------------------------


def test_propagation_reproduces_quoted_replacements():
    d = double_det_cascade()
    result = d.det_propagate({"z"})
    assert result.arcs == frozenset(
        {("z", "w"), ("z", "y"), ("v", "y"), ("z", "x"), ("v", "x")}
    )


def test_observed_deterministic_element_untouched():
    d = observed_det_model()
    assert d.det_propagate({"z"}).arcs == d.arcs


def test_parentless_deterministic_element_drops_children_arcs():
    u = Universe(["a", "b"])
    d = DiGraph(u, [("a", "b")], deterministic={"a"})
    result = d.det_propagate(set())
    assert result.arcs == frozenset()


def test_propagation_without_deterministic_elements_is_identity():
    d = leaf_collider_model()
    assert d.det_propagate(set()) == d
    assert d.det_propagate({"z"}) == d


def test_propagation_output_is_acyclic():
    # construction revalidates; a cascade through two det elements stays a DAG
    u = Universe(["a", "b", "c", "d"])
    d = DiGraph(u, [("a", "b"), ("b", "c"), ("c", "d")], deterministic={"b", "c"})
    result = d.det_propagate(set())
    assert result.arcs == frozenset({("a", "b"), ("a", "c"), ("a", "d")})


# -- moralization -------------------------------------------------------------------


def test_moralization_marries_exactly_the_two_parent_pairs():
    moral = chest_fragment().moralize()
    skeleton = {
        frozenset("te"), frozenset("le"), frozenset("ed"), frozenset("bd")
    }
    marriages = {frozenset("tl"), frozenset("eb")}
    assert moral.expand().edges == skeleton | marriages


def test_moralize_arcless_graph_has_no_edges():
    u = Universe(["a", "b"])
    assert DiGraph(u).moralize().expand().edges == frozenset()


def test_moralize_collider_forms_triangle():
    u = Universe(["a", "b", "c"])
    moral = DiGraph(u, [("a", "c"), ("b", "c")]).moralize()
    assert moral.expand().edges == {
        frozenset("ac"), frozenset("bc"), frozenset("ab")
    }


def test_moral_graph_contains_the_skeleton():
    d = double_det_cascade()
    moral_edges = d.moralize().expand().edges
    for a, b in d.arcs:
        assert frozenset((a, b)) in moral_edges


# -- d-separation -------------------------------------------------------------------


def test_collider_blocked_only_when_unobserved():
    u = Universe(["x", "y", "z"])
    d = DiGraph(u, [("x", "z"), ("y", "z")])
    assert not d.d_separated({"x"}, {"z"}, {"y"})
    assert d.d_separated({"x"}, set(), {"y"})


def test_pruning_enables_separation():
    d = leaf_collider_model()
    assert d.d_separated({"x"}, {"z"}, {"y"})
    assert not d.moralize().separates({"x"}, {"z"}, {"y"})


def test_propagated_model_separations():
    d = double_det_cascade()
    assert d.d_separated({"w"}, {"z"}, {"v", "x", "y"})
    assert not d.d_separated({"x"}, {"z"}, {"y"})


def test_observed_deterministic_separation_needs_the_exemption():
    d = observed_det_model()
    assert d.d_separated({"x"}, {"z"}, {"y", "w"})
    forced = d.det_propagate(set()).moralize()
    assert not forced.separates({"x"}, {"z"}, {"y", "w"})


def test_d_separated_validates_inputs():
    d = observed_det_model()
    with pytest.raises(UnknownElement):
        d.d_separated({"q"}, set(), {"x"})
    assert d.d_separated(set(), {"z"}, {"x"})  # trivial query holds


# -- join trees ---------------------------------------------------------------------


def good_tree():
    return JoinTree({0: {"e", "l", "t"}, 1: {"b", "d", "e"}}, [(0, 1)])


def test_valid_join_tree_passes():
    assert validate_join_tree(good_tree()) == []
    assert good_tree().sepset(0, 1) == frozenset("e")


def test_single_cluster_tree_is_valid():
    assert validate_join_tree(JoinTree({0: {"a", "b"}})) == []


def test_running_intersection_violation_detected():
    broken = JoinTree(
        {0: {"e", "l", "t"}, 1: {"b", "d"}, 2: {"d", "e"}},
        [(0, 1), (1, 2)],
    )
    assert any("element e" in v for v in broken.validate())


def test_wrong_sepset_detected():
    t = JoinTree(
        {0: {"a", "b"}, 1: {"b", "c"}},
        [(0, 1)],
        sepsets={(0, 1): {"a"}},
    )
    assert any(v.startswith("sepset") for v in t.validate())


def test_non_tree_links_detected():
    t = JoinTree({0: {"a"}, 1: {"a"}, 2: {"a"}}, [(0, 1)])
    assert any("tree" in v for v in t.validate())


def test_missing_cluster_link_detected():
    t = JoinTree({0: {"a"}}, [(0, 5)])
    assert any("missing cluster" in v for v in t.validate())


# -- join tree construction -----------------------------------------------------------


def test_tree_shaped_graph_needs_no_fill_for_leaf_first_orders():
    g = UGraph.from_singletons("abcd", [("a", "b"), ("b", "c"), ("b", "d")])
    for order in (("a", "c", "d", "b"), ("d", "c", "a", "b"), ("c", "a", "d", "b")):
        chordal, tree = build_join_tree(g, order)
        assert chordal == g
        assert sorted(map(sorted, tree.clusters.values())) == [
            ["a", "b"], ["b", "c"], ["b", "d"]
        ]
        assert tree.validate() == []


def test_four_cycle_gets_one_chord_and_two_triangles():
    g = UGraph.from_singletons("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    chordal, tree = build_join_tree(g, ("a", "b", "c", "d"))
    extra = chordal.expand().edges - g.expand().edges
    assert extra == {frozenset("bd")}
    assert sorted(map(sorted, tree.clusters.values())) == [
        ["a", "b", "d"], ["b", "c", "d"]
    ]
    assert tree.validate() == []


def test_chest_moral_graph_fill_in_over_all_orders():
    moral = chest_fragment().moralize()
    chord_counts = {}
    base_edges = moral.expand().edges
    for order in permutations("bdelt"):
        chordal, tree = build_join_tree(moral, order)
        assert tree.validate() == []
        chord_counts[order] = len(chordal.expand().edges - base_edges)
    assert min(chord_counts.values()) == 0
    # some orders introduce exactly one chord; the l-b fill-in is among them
    ones = [o for o, n in chord_counts.items() if n == 1]
    assert ones
    single_chords = set()
    for order in ones:
        chordal, _ = build_join_tree(moral, order)
        (chord,) = chordal.expand().edges - base_edges
        single_chords.add(chord)
    assert frozenset("lb") in single_chords


def test_build_join_tree_validates_order():
    g = UGraph.from_singletons("ab", [("a", "b")])
    with pytest.raises(InvalidOrder):
        build_join_tree(g, ("a",))
    with pytest.raises(InvalidOrder):
        build_join_tree(g, ("a", "a"))
    with pytest.raises(ValueError):
        build_join_tree(UGraph({0: {"a", "b"}}), ("a", "b"))


def test_disconnected_graph_still_yields_a_tree():
    g = UGraph.from_singletons("abcd", [("a", "b"), ("c", "d")])
    _, tree = build_join_tree(g, ("a", "b", "c", "d"))
    assert tree.validate() == []
    assert len(tree.links) == len(tree.clusters) - 1
