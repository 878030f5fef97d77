"""Structural machinery: hypergraphs, GYO, triangulation, lifting."""

from __future__ import annotations

import itertools

import pytest

from conftest import (
    assert_clique_intersection_by_paths,
    make_path3,
    make_solo,
    random_game,
    random_tree_decomposition,
)
from nashmrf.game import GraphicalGame
from nashmrf.generators import generate_game
from nashmrf.structure import (
    CliqueTree,
    Graph,
    Hypergraph,
    HypertreeDecomposition,
    InvalidDecompositionError,
    TreeDecomposition,
    check_clique_tree,
    check_join_tree,
    check_tree_decomposition,
    clique_tree_from_chordal,
    game_graph,
    game_hypergraph,
    grahams_algorithm,
    join_tree_as_hypertree,
    lift_hypertree_decomposition,
    lift_tree_decomposition,
    primal_graph,
    triangulate,
    validate_hypertree_decomposition,
)


def test_game_hypergraph_fixtures(coord2, solo, path3):
    assert game_hypergraph(path3).hyperedges == ((1, 2), (1, 2, 3), (2, 3))
    assert game_hypergraph(coord2).hyperedges == ((1, 2),)
    assert game_hypergraph(solo).hyperedges == ((1,),)


def test_primal_graph():
    assert primal_graph(Hypergraph((1, 2, 3), ((1, 2, 3),))).edges == ((1, 2), (1, 3), (2, 3))
    assert primal_graph(Hypergraph((1, 2, 3), ((1, 2), (2, 3)))).edges == ((1, 2), (2, 3))
    path3 = make_path3()
    assert primal_graph(game_hypergraph(path3)).edges == ((1, 2), (1, 3), (2, 3))


def test_primal_graph_contains_game_edges():
    for seed in range(20):
        game = random_game(seed)
        primal = primal_graph(game_hypergraph(game))
        assert set(game.edges) <= set(primal.edges)


def test_graham_path3():
    result = grahams_algorithm(Hypergraph((1, 2, 3), ((1, 2), (1, 2, 3), (2, 3))))
    assert result.acyclic
    tree = result.join_tree
    assert tree.nodes == ((1, 2), (1, 2, 3), (2, 3))
    # both two-cliques hang off the middle hyperedge
    assert set(tree.edges) == {(0, 1), (1, 2)}


def test_graham_triangle_is_cyclic():
    result = grahams_algorithm(Hypergraph((1, 2, 3), ((1, 2), (2, 3), (1, 3))))
    assert not result.acyclic
    assert result.join_tree is None


def test_graham_single_hyperedge():
    result = grahams_algorithm(Hypergraph((1,), ((1,),)))
    assert result.acyclic
    assert result.join_tree.nodes == ((1,),)
    assert result.join_tree.edges == ()


def test_graham_join_tree_path_condition():
    for seed in range(30):
        game = random_game(seed)
        h = game_hypergraph(game)
        result = grahams_algorithm(h)
        if result.acyclic:
            check_join_tree(result.join_tree, h)
            assert_clique_intersection_by_paths(result.join_tree)


def test_tree_games_have_acyclic_hypergraphs():
    for seed in range(50):
        game = generate_game("tree", 2 + seed % 9, seed=seed)
        assert grahams_algorithm(game_hypergraph(game)).acyclic


def test_disconnected_hypergraph_gets_connected_join_tree():
    h = Hypergraph((1, 2, 3, 4), ((1, 2), (3, 4)))
    result = grahams_algorithm(h)
    assert result.acyclic
    assert len(result.join_tree.edges) == 1
    assert_clique_intersection_by_paths(result.join_tree)


def test_triangulate_c4_min_fill():
    c4 = Graph((1, 2, 3, 4), ((1, 2), (2, 3), (3, 4), (1, 4)))
    chordal, order = triangulate(c4, "min-fill")
    assert len(set(chordal.edges) - set(c4.edges)) == 1
    tree = clique_tree_from_chordal(chordal, order)
    assert tree.width == 3


def test_triangulate_already_chordal():
    k3 = Graph((1, 2, 3), ((1, 2), (2, 3), (1, 3)))
    chordal, _ = triangulate(k3, "min-fill")
    assert chordal.edges == k3.edges
    path = Graph((1, 2, 3), ((1, 2), (2, 3)))
    chordal, _ = triangulate(path, "min-fill")
    assert chordal.edges == path.edges


@pytest.mark.parametrize("strategy", ["min-fill", "min-degree", "exact-small"])
def test_triangulation_output_is_chordal_supergraph(strategy):
    for seed in range(12):
        game = random_game(seed)
        graph = primal_graph(game_hypergraph(game))
        chordal, order = triangulate(graph, strategy)
        assert set(graph.edges) <= set(chordal.edges)
        tree = clique_tree_from_chordal(chordal, order)  # rejects non-PEO orders
        check_clique_tree(tree, chordal)


def test_exact_small_matches_known_treewidth():
    path = Graph(tuple(range(1, 7)), tuple((i, i + 1) for i in range(1, 6)))
    chordal, order = triangulate(path, "exact-small")
    assert clique_tree_from_chordal(chordal, order).width == 2
    cycle = Graph(tuple(range(1, 8)), tuple((i, i + 1) for i in range(1, 7)) + ((1, 7),))
    chordal, order = triangulate(cycle, "exact-small")
    assert clique_tree_from_chordal(chordal, order).width == 3
    k5 = Graph(tuple(range(1, 6)), tuple(itertools.combinations(range(1, 6), 2)))
    chordal, order = triangulate(k5, "exact-small")
    assert clique_tree_from_chordal(chordal, order).width == 5


def test_exact_small_cap():
    big = Graph(tuple(range(1, 14)), tuple((i, i + 1) for i in range(1, 13)))
    with pytest.raises(ValueError, match="exact-small"):
        triangulate(big, "exact-small")


def test_unknown_strategy_rejected():
    with pytest.raises(ValueError, match="strategy"):
        triangulate(Graph((1,), ()), "fancy")


def test_clique_tree_from_chordal_examples():
    k3 = Graph((1, 2, 3), ((1, 2), (2, 3), (1, 3)))
    tree = clique_tree_from_chordal(k3, (1, 2, 3))
    assert tree.nodes == ((1, 2, 3),) and tree.width == 3
    path = Graph((1, 2, 3), ((1, 2), (2, 3)))
    tree = clique_tree_from_chordal(path, (1, 3, 2))
    assert tree.nodes == ((1, 2), (2, 3)) and tree.edges == ((0, 1),) and tree.width == 2
    chorded = Graph((1, 2, 3, 4), ((1, 2), (2, 3), (3, 4), (1, 4), (1, 3)))
    tree = clique_tree_from_chordal(chorded, (2, 4, 1, 3))
    assert tree.nodes == ((1, 2, 3), (1, 3, 4)) and tree.width == 3


def test_clique_tree_rejects_non_chordal():
    c4 = Graph((1, 2, 3, 4), ((1, 2), (2, 3), (3, 4), (1, 4)))
    with pytest.raises(ValueError, match="elimination order"):
        clique_tree_from_chordal(c4, (1, 2, 3, 4))


def test_clique_tree_disconnected_graph():
    g = Graph((1, 2, 3, 4), ((1, 2), (3, 4)))
    tree = clique_tree_from_chordal(g, (1, 2, 3, 4))
    assert len(tree.nodes) == 2 and len(tree.edges) == 1
    check_clique_tree(tree, g)
    assert_clique_intersection_by_paths(tree)


def test_lift_tree_decomposition_path3(path3):
    td = TreeDecomposition(((1, 2), (2, 3)), ((0, 1),))
    lifted = lift_tree_decomposition(td, path3)
    assert lifted.nodes == ((1, 2, 3), (1, 2, 3))
    assert lifted.width == 3 <= (td.width + 1) * 3
    assert_clique_intersection_by_paths(lifted)


def test_lift_tree_decomposition_solo(solo):
    td = TreeDecomposition(((1,),), ())
    lifted = lift_tree_decomposition(td, solo)
    assert lifted.nodes == ((1,),) and lifted.width == 1


def test_lift_tree_decomposition_star():
    star = GraphicalGame.build([2] * 4, [(1, 2), (1, 3), (1, 4)], lambda p, v: 0)
    td = TreeDecomposition(((1, 2), (1, 3), (1, 4)), ((0, 1), (1, 2)))
    lifted = lift_tree_decomposition(td, star)
    assert all(node == (1, 2, 3, 4) for node in lifted.nodes)
    assert lifted.width == 4 <= (td.width + 1) * 4


def test_lift_rejects_invalid_decomposition(path3):
    missing_edge = TreeDecomposition(((1, 2), (3,)), ((0, 1),))
    with pytest.raises(InvalidDecompositionError):
        lift_tree_decomposition(missing_edge, path3)
    disconnected_vertex = TreeDecomposition(((1, 2), (2, 3), (1, 2)), ((0, 1), (1, 2)))
    with pytest.raises(InvalidDecompositionError):
        check_tree_decomposition(disconnected_vertex, game_graph(path3))


def test_lift_bound_on_random_inputs():
    checked = 0
    for seed in range(40):
        game = random_game(seed)
        if game.n < 2:
            continue
        td = random_tree_decomposition(game, seed)
        check_tree_decomposition(td, game_graph(game))
        lifted = lift_tree_decomposition(td, game)
        max_hood = max(len(game.neighborhood(p)) for p in game.players)
        assert lifted.width <= (td.width + 1) * max_hood
        check_clique_tree(lifted, primal_graph(game_hypergraph(game)))
        checked += 1
    assert checked > 20


def test_validate_hypertree_decomposition_examples():
    h = Hypergraph((1, 2), ((1, 2),))
    good = HypertreeDecomposition(((1, 2),), (((1, 2),),), (), 0)
    assert validate_hypertree_decomposition(good, h)

    h3 = Hypergraph((1, 2, 3), ((1, 2), (2, 3), (1, 3)))
    broken_connectivity = HypertreeDecomposition(
        ((1, 2), (2, 3), (1, 3)),
        (((1, 2),), ((2, 3),), ((1, 3), (1, 2))),
        ((0, 1), (1, 2)),
        0,
    )
    report = validate_hypertree_decomposition(broken_connectivity, h3)
    assert not report and report.violated_condition == 2

    bad_cover = HypertreeDecomposition(((1, 2, 3),), (((1, 2),),), (), 0)
    report = validate_hypertree_decomposition(bad_cover, Hypergraph((1, 2, 3), ((1, 2), (3,))))
    assert not report and report.violated_condition == 3


def test_validate_hypertree_condition_one_and_four():
    h = Hypergraph((1, 2, 3), ((1, 2), (2, 3)))
    no_cover = HypertreeDecomposition(((1, 2),), (((1, 2),),), (), 0)
    report = validate_hypertree_decomposition(no_cover, h)
    assert report.violated_condition == 1
    # vertex 2 is dropped at the root but reappears below through lambda
    descendant = HypertreeDecomposition(
        ((1,), (1, 2), (2, 3)),
        (((1, 2),), ((1, 2),), ((2, 3),)),
        ((0, 1), (1, 2)),
        0,
    )
    report = validate_hypertree_decomposition(descendant, h)
    assert report.violated_condition == 4


def test_validate_hypertree_rejects_unknown_hyperedge():
    h = Hypergraph((1, 2), ((1, 2),))
    bad = HypertreeDecomposition(((1, 2),), (((1, 3),),), (), 0)
    with pytest.raises(ValueError, match="not a hyperedge"):
        validate_hypertree_decomposition(bad, h)


def test_lift_hypertree_from_join_tree(path3):
    h = game_hypergraph(path3)
    join = grahams_algorithm(h).join_tree
    htd = join_tree_as_hypertree(join)
    assert validate_hypertree_decomposition(htd, h)
    lifted = lift_hypertree_decomposition(htd, path3)
    assert sorted(lifted.nodes) == [(1, 2), (1, 2, 3), (2, 3)]
    max_hood = max(len(path3.neighborhood(p)) for p in path3.players)
    assert lifted.width <= htd.width * max_hood


def test_lift_hypertree_single_hyperedge(solo):
    htd = HypertreeDecomposition(((1,),), (((1,),),), (), 0)
    lifted = lift_hypertree_decomposition(htd, solo)
    assert lifted.nodes == ((1,),)


def test_lift_hypertree_rejects_invalid(path3):
    bad = HypertreeDecomposition(((1, 2),), (((1, 2),),), (), 0)
    with pytest.raises(InvalidDecompositionError, match="condition 1"):
        lift_hypertree_decomposition(bad, path3)


def test_check_clique_tree_catches_violations():
    broken = CliqueTree(((1, 2), (2, 3), (1, 3)), ((0, 1), (1, 2)))
    with pytest.raises(ValueError, match="connected subtree"):
        check_clique_tree(broken)
    forest = CliqueTree(((1, 2), (2, 3)), ())
    with pytest.raises(ValueError, match="tree"):
        check_clique_tree(forest)
