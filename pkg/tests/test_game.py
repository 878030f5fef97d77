"""Game core: payoffs, best responses, equilibrium checks, brute force."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import all_profiles, fixture_games, random_game
from nashmrf.game import (
    GraphicalGame,
    NeighborhoodAssignment,
    best_response_set,
    brute_force_equilibria,
    is_pure_nash,
    payoff,
)


def test_payoff_lookups(coord2, pennies, solo):
    assert payoff(coord2, 1, (0, 0)) == 1
    assert payoff(pennies, 2, (0, 0)) == 0
    assert payoff(solo, 1, (0,)) == 2


def test_payoff_errors(coord2):
    with pytest.raises(ValueError):
        payoff(coord2, 3, (0, 0))
    with pytest.raises(ValueError):
        payoff(coord2, 1, (0, 0, 0))
    with pytest.raises(ValueError):
        payoff(coord2, 1, (0, 2))


def test_best_response_sets(coord2, pennies, solo):
    assert best_response_set(coord2, 1, {2: 0}) == {0}
    assert best_response_set(pennies, 2, {1: 0}) == {1}
    assert best_response_set(solo, 1, {}) == {0}


def test_best_response_accepts_assignment_forms(coord2):
    by_mapping = best_response_set(coord2, 1, {2: 1})
    by_tuple = best_response_set(coord2, 1, (1,))
    by_object = best_response_set(coord2, 1, NeighborhoodAssignment((2,), (1,)))
    assert by_mapping == by_tuple == by_object == {1}


def test_best_response_arity_mismatch(coord2):
    with pytest.raises(ValueError):
        best_response_set(coord2, 1, {1: 0})
    with pytest.raises(ValueError):
        best_response_set(coord2, 1, (0, 1))


def test_is_pure_nash(coord2, pennies):
    assert is_pure_nash(coord2, (0, 0))
    assert not is_pure_nash(coord2, (0, 1))
    assert not is_pure_nash(pennies, (1, 0))


def test_brute_force_fixtures(coord2, pennies, path3):
    assert brute_force_equilibria(coord2) == [(0, 0), (1, 1)]
    assert brute_force_equilibria(pennies) == []
    assert brute_force_equilibria(path3) == [(0, 0, 0), (1, 1, 1)]


def test_brute_force_cap():
    game = GraphicalGame.build([4] * 3, [], lambda p, v: 0)
    with pytest.raises(ValueError):
        brute_force_equilibria(game, cap=63)


def test_isolated_player_best_response_is_global_argmax(solo):
    assert best_response_set(solo, 1, {}) == {0}
    assert is_pure_nash(solo, (0,))
    assert not is_pure_nash(solo, (1,))


def test_singleton_strategy_sets_are_trivially_satisfied():
    game = GraphicalGame.build([1, 2], [(1, 2)], lambda p, v: v[0] + v[1])
    assert best_response_set(game, 1, {2: 0}) == {0}
    assert brute_force_equilibria(game) == [(0, 1)]


def test_constructor_rejects_bad_edges():
    with pytest.raises(ValueError, match="self-loop"):
        GraphicalGame((("0",),), ((1, 1),), ((0,),))
    with pytest.raises(ValueError, match="duplicate edge"):
        GraphicalGame((("0",), ("0",)), ((1, 2), (2, 1)), ((0,), (0,)))
    with pytest.raises(ValueError, match="unknown player"):
        GraphicalGame((("0",),), ((1, 2),), ((0,),))


def test_constructor_rejects_bad_tables():
    with pytest.raises(ValueError, match="entries"):
        GraphicalGame((("0", "1"), ("0", "1")), ((1, 2),), ((1, 0, 0), (1, 0, 0, 1)))
    with pytest.raises(ValueError, match="negative"):
        GraphicalGame((("0", "1"),), (), ((1, -1),))
    with pytest.raises(ValueError, match="empty strategy set"):
        GraphicalGame(((), ("0",)), (), ((), ("0",)))


def test_neighborhood_contains_self(path3):
    assert path3.neighborhood(1) == (1, 2)
    assert path3.neighborhood(2) == (1, 2, 3)
    assert path3.neighborhood(3) == (2, 3)


def test_brute_force_matches_pointwise_check():
    for seed in range(12):
        game = random_game(seed)
        found = set(brute_force_equilibria(game))
        for s in all_profiles(game):
            assert (s in found) == is_pure_nash(game, s)


def test_best_response_members_attain_identical_maximum():
    for name, game in fixture_games().items():
        for p in game.players:
            others = tuple(q for q in game.neighborhood(p) if q != p)
            shape = game.shape(others)
            for context in shape.assignments():
                assignment = dict(zip(others, context))
                best = best_response_set(game, p, assignment)
                assert best, (name, p, context)
                scores = {
                    t: payoff(game, p, _embed(game, p, assignment, t))
                    for t in range(game.strategy_count(p))
                }
                top = max(scores.values())
                assert best == {t for t, u in scores.items() if u == top}


def _embed(game, p, assignment, t):
    profile = [0] * game.n
    for q, v in assignment.items():
        profile[q - 1] = v
    profile[p - 1] = t
    return tuple(profile)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), shift=st.integers(1, 50), player=st.integers(0, 100))
def test_argmax_invariant_under_constant_shift(seed, shift, player):
    game = random_game(seed)
    p = 1 + player % game.n
    shifted = GraphicalGame(
        game.strategy_labels,
        game.edges,
        tuple(
            tuple(x + shift for x in table) if q == p - 1 else table
            for q, table in enumerate(game.payoffs)
        ),
    )
    assert brute_force_equilibria(game) == brute_force_equilibria(shifted)
    others = tuple(q for q in game.neighborhood(p) if q != p)
    shape = game.shape(others)
    for context in shape.assignments():
        assignment = dict(zip(others, context))
        assert best_response_set(game, p, assignment) == best_response_set(
            shifted, p, assignment
        )
