"""Graphical games: payoffs, best responses, and the brute-force oracle.

A graphical game places players on an undirected graph; each player's
payoff depends only on the strategies inside its closed neighborhood
N(p) = {p} plus graph neighbors.  Payoff tables are dense, indexed over
N(p) sorted by ascending player id (see :mod:`nashmrf.indexing`), and
utilities are nonnegative integers so best-response comparisons are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .indexing import Shape

Profile = tuple[int, ...]

BRUTE_FORCE_CAP = 10_000_000


@dataclass(frozen=True)
class NeighborhoodAssignment:
    """Strategy indices for an ascending tuple of players."""

    players: tuple[int, ...]
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.players) != len(self.values):
            raise ValueError("players and values must have equal length")
        if any(self.players[i] >= self.players[i + 1] for i in range(len(self.players) - 1)):
            raise ValueError("players must be listed in ascending id order")

    def as_mapping(self) -> dict[int, int]:
        return dict(zip(self.players, self.values))


@dataclass(frozen=True)
class GraphicalGame:
    """Immutable graphical game on players 1..n.

    ``strategy_labels[p-1]`` holds player p's strategy labels (indices are
    used everywhere else); ``payoffs[p-1]`` is the dense utility table of
    player p over its sorted closed neighborhood.
    """

    strategy_labels: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[int, int], ...]
    payoffs: tuple[tuple[int, ...], ...]
    neighborhoods: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self) -> None:
        n = len(self.strategy_labels)
        if n == 0:
            raise ValueError("a game needs at least one player")
        for p, labels in enumerate(self.strategy_labels, start=1):
            if len(labels) < 1:
                raise ValueError(f"player {p} has an empty strategy set")
            if len(set(labels)) != len(labels):
                raise ValueError(f"player {p} has duplicate strategy labels")
        seen = set()
        adjacency: list[set[int]] = [set() for _ in range(n + 1)]
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop edge ({u},{v}) is not allowed")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u},{v}) references an unknown player")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add(key)
            adjacency[u].add(v)
            adjacency[v].add(u)
        hoods = tuple(tuple(sorted(adjacency[p] | {p})) for p in range(1, n + 1))
        object.__setattr__(self, "neighborhoods", hoods)
        if len(self.payoffs) != n:
            raise ValueError("one payoff table per player is required")
        for p in range(1, n + 1):
            expected = 1
            for q in hoods[p - 1]:
                expected *= len(self.strategy_labels[q - 1])
            table = self.payoffs[p - 1]
            if len(table) != expected:
                raise ValueError(
                    f"payoff table of player {p} has {len(table)} entries, expected {expected}"
                )
            for value in table:
                if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                    raise ValueError(f"player {p} has a non-integer or negative utility")

    @classmethod
    def build(
        cls,
        strategies: Sequence[int] | Sequence[Sequence[str]],
        edges: Iterable[tuple[int, int]],
        payoff: Callable[[int, tuple[int, ...]], int],
    ) -> "GraphicalGame":
        """Construct a game from strategy counts (or label lists) and a payoff rule.

        ``payoff(p, values)`` receives the strategy indices of sorted N(p).
        """
        labels: list[tuple[str, ...]] = []
        for spec in strategies:
            if isinstance(spec, int):
                labels.append(tuple(str(i) for i in range(spec)))
            else:
                labels.append(tuple(spec))
        n = len(labels)
        edge_list = tuple(sorted((u, v) if u < v else (v, u) for u, v in edges))
        adjacency: list[set[int]] = [set() for _ in range(n + 1)]
        for u, v in edge_list:
            adjacency[u].add(v)
            adjacency[v].add(u)
        tables = []
        for p in range(1, n + 1):
            hood = tuple(sorted(adjacency[p] | {p}))
            shape = Shape(hood, tuple(len(labels[q - 1]) for q in hood))
            tables.append(tuple(int(payoff(p, values)) for values in shape.assignments()))
        return cls(tuple(labels), edge_list, tuple(tables))

    @property
    def n(self) -> int:
        return len(self.strategy_labels)

    @property
    def players(self) -> range:
        return range(1, self.n + 1)

    def strategy_count(self, p: int) -> int:
        return len(self.strategy_labels[p - 1])

    @property
    def strategy_counts(self) -> tuple[int, ...]:
        return tuple(len(labels) for labels in self.strategy_labels)

    def neighborhood(self, p: int) -> tuple[int, ...]:
        """Sorted N(p), always containing p itself."""
        self._check_player(p)
        return self.neighborhoods[p - 1]

    def shape(self, members: Sequence[int]) -> Shape:
        mem = tuple(members)
        try:
            cache = self._shape_cache
        except AttributeError:
            cache = {}
            object.__setattr__(self, "_shape_cache", cache)
        shape = cache.get(mem)
        if shape is None:
            shape = Shape(mem, tuple(self.strategy_count(q) for q in mem))
            cache[mem] = shape
        return shape

    def profile_count(self) -> int:
        total = 1
        for labels in self.strategy_labels:
            total *= len(labels)
        return total

    def _check_player(self, p: int) -> None:
        if not (isinstance(p, int) and 1 <= p <= self.n):
            raise ValueError(f"invalid player id {p!r}")

    def _check_profile(self, s: Sequence[int]) -> None:
        if len(s) != self.n:
            raise ValueError(f"profile has {len(s)} entries, expected {self.n}")
        for p, v in enumerate(s, start=1):
            if not 0 <= v < self.strategy_count(p):
                raise ValueError(f"strategy index {v} invalid for player {p}")


def _coerce_values(
    players: tuple[int, ...],
    assignment: Mapping[int, int] | NeighborhoodAssignment | Sequence[int],
) -> tuple[int, ...]:
    """Normalize the accepted assignment forms to a value tuple over ``players``."""
    if isinstance(assignment, NeighborhoodAssignment):
        if assignment.players != players:
            raise ValueError(
                f"assignment covers {assignment.players}, expected exactly {players}"
            )
        return assignment.values
    if isinstance(assignment, Mapping):
        if set(assignment) != set(players):
            raise ValueError(
                f"assignment covers {sorted(assignment)}, expected exactly {list(players)}"
            )
        return tuple(assignment[q] for q in players)
    values = tuple(assignment)
    if len(values) != len(players):
        raise ValueError(f"assignment has {len(values)} values, expected {len(players)}")
    return values


def payoff(game: GraphicalGame, p: int, s: Sequence[int]) -> int:
    """Utility of player p at profile s: a pure table lookup over N(p)."""
    game._check_player(p)
    game._check_profile(s)
    hood = game.neighborhood(p)
    shape = game.shape(hood)
    return game.payoffs[p - 1][shape.index(tuple(s[q - 1] for q in hood))]


def best_response_set(
    game: GraphicalGame,
    p: int,
    neighbors: Mapping[int, int] | NeighborhoodAssignment | Sequence[int],
) -> frozenset[int]:
    """All strategies of p maximizing its payoff against fixed neighbor play.

    Never empty: strategy sets are finite and nonempty, ties keep every
    maximizer.
    """
    game._check_player(p)
    hood = game.neighborhood(p)
    others = tuple(q for q in hood if q != p)
    values = _coerce_values(others, neighbors)
    for q, v in zip(others, values):
        if not 0 <= v < game.strategy_count(q):
            raise ValueError(f"strategy index {v} invalid for player {q}")
    shape = game.shape(hood)
    pos = shape.position(p)
    table = game.payoffs[p - 1]
    full = list(values[:pos]) + [0] + list(values[pos:])
    base = shape.index(tuple(full))
    stride = shape.strides[pos]
    scores = [table[base + t * stride] for t in range(game.strategy_count(p))]
    best = max(scores)
    return frozenset(t for t, u in enumerate(scores) if u == best)


def best_response_tables(game: GraphicalGame) -> tuple[tuple[int, ...], ...]:
    """Per player, a dense table over assignments of N(p)\\{p} holding best
    responses as bitmasks.

    Shared by the MRF reduction, the brute-force oracle, and the samplers;
    bit t of entry c is set iff strategy t is a best response in context c.
    """
    out = []
    for p in game.players:
        hood = game.neighborhood(p)
        shape = game.shape(hood)
        pos = shape.position(p)
        own_stride = shape.strides[pos]
        size_p = game.strategy_count(p)
        table = game.payoffs[p - 1]
        # enumerate contexts in their own index order, tracking the base
        # index into the full table directly via the full-table strides
        context_strides = [s for i, s in enumerate(shape.strides) if i != pos]
        context_sizes = [s for i, s in enumerate(shape.sizes) if i != pos]
        masks = []
        for values in itertools.product(*(range(s) for s in context_sizes)):
            base = sum(v * s for v, s in zip(values, context_strides))
            scores = [table[base + t * own_stride] for t in range(size_p)]
            best = max(scores)
            mask = 0
            for t, u in enumerate(scores):
                if u == best:
                    mask |= 1 << t
            masks.append(mask)
        out.append(tuple(masks))
    return tuple(out)


def is_pure_nash(game: GraphicalGame, s: Sequence[int]) -> bool:
    """True iff no player can gain by a unilateral deviation at s."""
    game._check_profile(s)
    for p in game.players:
        hood = game.neighborhood(p)
        others = tuple(q for q in hood if q != p)
        context = tuple(s[q - 1] for q in others)
        if s[p - 1] not in best_response_set(game, p, context):
            return False
    return True


def brute_force_equilibria(game: GraphicalGame, cap: int = BRUTE_FORCE_CAP) -> list[Profile]:
    """Exhaustive oracle: every pure Nash equilibrium in lexicographic order.

    Used to validate all inference paths; refuses profile spaces above ``cap``.
    """
    total = game.profile_count()
    if total > cap:
        raise ValueError(f"profile space of size {total} exceeds the cap {cap}")
    br_tables = best_response_tables(game)
    checks = []
    for p in game.players:
        hood = game.neighborhood(p)
        others = tuple(q for q in hood if q != p)
        context_shape = game.shape(others)
        checks.append((p, others, context_shape, br_tables[p - 1]))
    found: list[Profile] = []
    for s in itertools.product(*(range(k) for k in game.strategy_counts)):
        ok = True
        for p, others, context_shape, masks in checks:
            context = tuple(s[q - 1] for q in others)
            if not masks[context_shape.index(context)] >> s[p - 1] & 1:
                ok = False
                break
        if ok:
            found.append(s)
    return found
