"""Shared fixtures and oracles for the test suite.

The four named fixtures are small enough to verify by hand or exhaustive
enumeration; `random_game` produces the seeded family used across the
suite (n <= 7, at most 3 strategies, max degree 3, payoffs in [0, 9]).
"""

from __future__ import annotations

import itertools

import pytest

from nashmrf.game import GraphicalGame
from nashmrf.generators import generate_game
from nashmrf.structure import CliqueTree, TreeDecomposition, clique_tree_from_chordal, Graph


def make_coord2() -> GraphicalGame:
    """Two players on one edge, payoff 1 iff strategies match."""
    return GraphicalGame.build([2, 2], [(1, 2)], lambda p, v: 1 if v[0] == v[1] else 0)


def make_pennies() -> GraphicalGame:
    """Matching pennies: player 1 wants equality, player 2 wants inequality."""

    def pay(p, v):
        equal = v[0] == v[1]
        return (1 if equal else 0) if p == 1 else (0 if equal else 1)

    return GraphicalGame.build([2, 2], [(1, 2)], pay)


def make_solo() -> GraphicalGame:
    """One isolated player with strategies a (utility 2) and b (utility 1)."""
    return GraphicalGame.build([("a", "b")], [], lambda p, v: 2 if v[0] == 0 else 1)


def make_path3() -> GraphicalGame:
    """Path 1-2-3; utility is the count of neighbors matching own strategy."""

    def pay(p, v):
        if p == 2:
            return (1 if v[0] == v[1] else 0) + (1 if v[2] == v[1] else 0)
        return 1 if v[0] == v[1] else 0

    return GraphicalGame.build([2, 2, 2], [(1, 2), (2, 3)], pay)


def make_path_coordination(n: int) -> GraphicalGame:
    """Path coordination: match your left neighbor (player 1 matches player 2).

    Exactly two equilibria (all zeros, all ones), so counts stay small no
    matter how long the path is.
    """

    def pay(p, v):
        if p == 1:
            return 1 if v[0] == v[1] else 0
        return 1 if v[1] == v[0] else 0

    return GraphicalGame.build([2] * n, [(i, i + 1) for i in range(1, n)], pay)


@pytest.fixture
def coord2() -> GraphicalGame:
    return make_coord2()


@pytest.fixture
def pennies() -> GraphicalGame:
    return make_pennies()


@pytest.fixture
def solo() -> GraphicalGame:
    return make_solo()


@pytest.fixture
def path3() -> GraphicalGame:
    return make_path3()


def fixture_games() -> dict[str, GraphicalGame]:
    return {
        "COORD2": make_coord2(),
        "PENNIES": make_pennies(),
        "SOLO": make_solo(),
        "PATH3": make_path3(),
    }


def random_game(seed: int) -> GraphicalGame:
    """Seeded random game: n <= 7, |S_p| <= 3, max degree <= 3, payoffs 0..9."""
    family = ("random-bounded-degree", "tree", "cycle")[seed % 3]
    n = 1 + seed % 7
    return generate_game(family, n, seed=seed, strategies=(1, 3), max_degree=3)


def all_profiles(game: GraphicalGame):
    return itertools.product(*(range(k) for k in game.strategy_counts))


def tree_paths(tree: CliqueTree) -> dict[tuple[int, int], list[int]]:
    """Unique node path for every node pair, by BFS from each node."""
    neighbors = tree.neighbors()
    paths: dict[tuple[int, int], list[int]] = {}
    for start in range(len(tree.nodes)):
        parent: dict[int, int] = {start: -1}
        queue = [start]
        for u in queue:
            for w in neighbors[u]:
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        for end in range(start + 1, len(tree.nodes)):
            path = [end]
            while path[-1] != start:
                path.append(parent[path[-1]])
            paths[(start, end)] = path[::-1]
    return paths


def assert_clique_intersection_by_paths(tree: CliqueTree) -> None:
    """Def 2.4 style check by explicit enumeration of every node pair's path."""
    node_sets = [set(c) for c in tree.nodes]
    for (i, j), path in tree_paths(tree).items():
        needed = node_sets[i] & node_sets[j]
        for k in path:
            assert needed <= node_sets[k], (
                f"intersection of nodes {i} and {j} not contained in node {k} on their path"
            )


def random_tree_decomposition(game: GraphicalGame, seed: int) -> TreeDecomposition:
    """Valid decomposition of the game graph from a random elimination order."""
    import numpy as np

    rng = np.random.Generator(np.random.Philox(seed))
    vertices = list(game.players)
    order = [vertices[int(i)] for i in rng.permutation(len(vertices))]
    adj = {v: set() for v in vertices}
    for u, v in game.edges:
        adj[u].add(v)
        adj[v].add(u)
    fill = []
    work = {v: set(adj[v]) for v in vertices}
    for v in order:
        neighbors = sorted(work[v])
        for a, b in itertools.combinations(neighbors, 2):
            if b not in work[a]:
                work[a].add(b)
                work[b].add(a)
                fill.append((a, b))
        for u in neighbors:
            work[u].discard(v)
        del work[v]
    chordal = Graph(tuple(vertices), tuple(game.edges) + tuple(fill))
    return clique_tree_from_chordal(chordal, order).as_tree_decomposition()
