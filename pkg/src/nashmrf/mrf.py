"""Reduction frontend: from a graphical game to a Markov random field.

Each player contributes an indicator over its neighborhood that is 1 when
the player best-responds and eps otherwise; players sharing a neighborhood
share one clique whose potential is the product of their indicators.  The
unnormalized density (normalization fixed to 1) then factors as the
product of the clique potentials and collapses to eps**U(x) where U(x)
counts the players violating best response at x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .game import (
    GraphicalGame,
    NeighborhoodAssignment,
    _coerce_values,
    best_response_set,
    best_response_tables,
)
from .indexing import Shape
from .semiring import Semiring
from .structure import Graph, game_hypergraph, primal_graph


@dataclass(frozen=True)
class PotentialTable:
    """Dense table of semiring values over an ascending player subset."""

    members: tuple[int, ...]
    entries: tuple

    def shape(self, sizes: Sequence[int]) -> Shape:
        return Shape(self.members, tuple(sizes[q - 1] for q in self.members))


@dataclass(frozen=True)
class MarkovRandomField:
    """MRF(G, eps): primal graph, one potential per significant clique."""

    graph: Graph
    sizes: tuple[int, ...]
    cliques: tuple[tuple[int, ...], ...]
    potentials: tuple[PotentialTable, ...]
    epsilon: float
    semiring: Semiring

    @property
    def n(self) -> int:
        return len(self.sizes)


def _check_epsilon(epsilon: float) -> None:
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")


def indicator_f(
    game: GraphicalGame,
    p: int,
    x: Mapping[int, int] | NeighborhoodAssignment | Sequence[int],
    epsilon: float,
) -> float:
    """1 if p's strategy in x best-responds to its neighbors, else epsilon.

    ``x`` must cover exactly N(p); values are only ever 1 or epsilon, so no
    rounding is involved.
    """
    _check_epsilon(epsilon)
    game._check_player(p)
    hood = game.neighborhood(p)
    values = _coerce_values(hood, x)
    shape = game.shape(hood)
    shape.index(values)  # validates the ranges
    pos = shape.position(p)
    context = tuple(v for i, v in enumerate(values) if i != pos)
    return 1 if values[pos] in best_response_set(game, p, context) else epsilon


def build_mrf(game: GraphicalGame, epsilon: float, semiring: Semiring) -> MarkovRandomField:
    """Construct MRF(game, epsilon) with potentials in the given semiring.

    Boolean and Counting instances demand epsilon = 0; players with equal
    neighborhoods are merged into a single clique whose potential is the
    semiring product of their indicators.
    """
    _check_epsilon(epsilon)
    if semiring.requires_zero_epsilon and epsilon != 0:
        raise ValueError(f"the {semiring.name} semiring requires epsilon = 0")
    hypergraph = game_hypergraph(game)
    graph = primal_graph(hypergraph)
    owners: dict[tuple[int, ...], list[int]] = {he: [] for he in hypergraph.hyperedges}
    for p in game.players:
        owners[game.neighborhood(p)].append(p)
    br_tables = best_response_tables(game)
    sizes = game.strategy_counts
    times = semiring.times
    violated = semiring.indicator(False)
    potentials = []
    for clique in hypergraph.hyperedges:
        shape = game.shape(clique)
        k = len(clique)
        entries = [semiring.one] * shape.size
        for p in owners[clique]:
            pos = shape.position(p)
            masks = br_tables[p - 1]
            # context table strides (clique minus p), aligned to clique positions
            positions = [i for i in range(k) if i != pos]
            cstrides = [1] * len(positions)
            for i in range(len(positions) - 2, -1, -1):
                cstrides[i] = cstrides[i + 1] * shape.sizes[positions[i + 1]]
            for idx, values in enumerate(itertools.product(*(range(s) for s in shape.sizes))):
                ctx = 0
                for cpos, cstride in zip(positions, cstrides):
                    ctx += values[cpos] * cstride
                if not masks[ctx] >> values[pos] & 1:
                    entries[idx] = times(entries[idx], violated)
        potentials.append(PotentialTable(clique, tuple(entries)))
    return MarkovRandomField(
        graph=graph,
        sizes=sizes,
        cliques=hypergraph.hyperedges,
        potentials=tuple(potentials),
        epsilon=epsilon,
        semiring=semiring,
    )


def density_exponent(mrf: MarkovRandomField, x: Sequence[int]) -> int:
    """Exponent k with p_eps(x) = eps**k; requires a max-product MRF."""
    if mrf.semiring.name != "max-product":
        raise ValueError("exponents are only tracked by the max-product semiring")
    return _combine(mrf, x)


def unnormalized_density(mrf: MarkovRandomField, x: Sequence[int]):
    """Product of all clique potentials at x (Z fixed to 1).

    Returns a bool, int, or float according to the MRF's semiring; for
    max-product this is eps**U(x) with the count of violating players in
    the exponent.
    """
    return mrf.semiring.number(_combine(mrf, x), mrf.epsilon)


def _combine(mrf: MarkovRandomField, x: Sequence[int]):
    if len(x) != mrf.n:
        raise ValueError(f"profile has {len(x)} entries, expected {mrf.n}")
    times = mrf.semiring.times
    acc = mrf.semiring.one
    for pot in mrf.potentials:
        shape = pot.shape(mrf.sizes)
        acc = times(acc, pot.entries[shape.index(tuple(x[q - 1] for q in pot.members))])
    return acc
