"""Solver backend: existence, counting, succinct description, enumeration.

A pipeline run reduces the game to its epsilon-0 MRF, builds a clique tree
from the configured source, calibrates, and reads the answers off the
beliefs: any nonzero entry certifies existence, the root total is the
exact equilibrium count, and the per-clique Counting marginals form the
succinct description (every nonzero entry extends to a full equilibrium).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator

from .game import GraphicalGame, Profile
from .junction import (
    CalibratedTree,
    EvidenceCounter,
    LoadedCliqueTree,
    MapResult,
    calibrate,
    load_potentials,
    map_solve,
)
from .mrf import build_mrf
from .semiring import BOOLEAN, COUNTING, MAX_PRODUCT, Semiring
from .structure import (
    TRIANGULATION_STRATEGIES,
    CliqueTree,
    HypertreeDecomposition,
    InvalidDecompositionError,
    TreeDecomposition,
    clique_tree_from_chordal,
    game_hypergraph,
    grahams_algorithm,
    lift_hypertree_decomposition,
    lift_tree_decomposition,
    primal_graph,
    triangulate,
)

SOURCES = (
    "graham-join-tree",
    "lift-tree-decomposition",
    "lift-hypertree-decomposition",
    "triangulate-primal",
)


@dataclass(frozen=True)
class PipelineStrategy:
    """How to obtain the clique tree and how much to enumerate.

    ``enumeration_limit`` of 0 skips enumeration entirely, None enumerates
    everything; the lift sources require a matching ``decomposition``.
    """

    source: str = "graham-join-tree"
    triangulation: str = "min-fill"
    enumeration_limit: int | None = 0
    decomposition: TreeDecomposition | HypertreeDecomposition | None = None

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise ValueError(f"unknown decomposition source {self.source!r}")
        if self.triangulation not in TRIANGULATION_STRATEGIES:
            raise ValueError(f"unknown triangulation strategy {self.triangulation!r}")
        if self.enumeration_limit is not None and self.enumeration_limit < 0:
            raise ValueError("enumeration limit must be nonnegative")


@dataclass
class SolveStats:
    source: str
    fallback: str | None
    width: int
    nodes: int
    messages: int
    timings: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SuccinctDescription:
    """Counting marginal per significant clique plus the exact total count."""

    cliques: tuple[tuple[int, ...], ...]
    tables: tuple[tuple[int, ...], ...]
    count: int
    existence: bool


@dataclass(frozen=True)
class SolveResult:
    existence: bool
    count: int
    description: SuccinctDescription
    equilibria: tuple[Profile, ...] | None
    stats: SolveStats


def build_clique_tree(
    game: GraphicalGame, strategy: PipelineStrategy
) -> tuple[CliqueTree, str, str | None]:
    """Clique tree per the strategy's source; returns (tree, source used, notice).

    The graham-join-tree source falls back to triangulating the primal
    graph when the hypergraph is cyclic, reporting the fallback in the
    notice.
    """
    source = strategy.source
    fallback = None
    if source == "graham-join-tree":
        result = grahams_algorithm(game_hypergraph(game))
        if result.acyclic:
            assert result.join_tree is not None
            return result.join_tree, source, None
        fallback = (
            "hypergraph is cyclic; falling back to "
            f"triangulate-primal({strategy.triangulation})"
        )
        source = "triangulate-primal"
    if source == "triangulate-primal":
        graph = primal_graph(game_hypergraph(game))
        chordal, order = triangulate(graph, strategy.triangulation)
        return clique_tree_from_chordal(chordal, order), source, fallback
    if source == "lift-tree-decomposition":
        if not isinstance(strategy.decomposition, TreeDecomposition):
            raise InvalidDecompositionError(
                "lift-tree-decomposition requires a supplied tree decomposition"
            )
        return lift_tree_decomposition(strategy.decomposition, game), source, None
    if not isinstance(strategy.decomposition, HypertreeDecomposition):
        raise InvalidDecompositionError(
            "lift-hypertree-decomposition requires a supplied hypertree decomposition"
        )
    return lift_hypertree_decomposition(strategy.decomposition, game), source, None


def _prepare(
    game: GraphicalGame, strategy: PipelineStrategy, semiring: Semiring, epsilon: float = 0.0
) -> tuple[LoadedCliqueTree, SolveStats]:
    t0 = time.perf_counter()
    tree, source, fallback = build_clique_tree(game, strategy)
    t1 = time.perf_counter()
    mrf = build_mrf(game, epsilon, semiring)
    loaded = load_potentials(tree, mrf)
    t2 = time.perf_counter()
    stats = SolveStats(
        source=source,
        fallback=fallback,
        width=tree.width,
        nodes=len(tree.nodes),
        messages=0,
        timings={"structure": t1 - t0, "reduction": t2 - t1},
    )
    return loaded, stats


def _calibrated_counting(
    game: GraphicalGame, strategy: PipelineStrategy
) -> tuple[CalibratedTree, SolveStats]:
    loaded, stats = _prepare(game, strategy, COUNTING)
    t0 = time.perf_counter()
    cal = calibrate(loaded)
    stats.messages = cal.message_count
    stats.timings["calibration"] = time.perf_counter() - t0
    return cal, stats


def _description_from(cal: CalibratedTree, game: GraphicalGame) -> SuccinctDescription:
    loaded = cal.loaded
    count = 0
    for value in cal.beliefs[cal.root]:
        count += value
    tables = []
    cliques = game_hypergraph(game).hyperedges
    for clique in cliques:
        node = loaded.assignment[clique]
        shape = game.shape(clique)
        proj = loaded.shapes[node].projection(shape)
        out = [0] * shape.size
        belief = cal.beliefs[node]
        for idx in range(len(belief)):
            out[proj[idx]] += belief[idx]
        tables.append(tuple(out))
    return SuccinctDescription(
        cliques=cliques, tables=tuple(tables), count=count, existence=count > 0
    )


def solve(game: GraphicalGame, strategy: PipelineStrategy | None = None) -> SolveResult:
    """Full Counting-semiring run: existence, exact count, description.

    Enumerates equilibria up to the strategy's limit (0 skips, None is
    unbounded); enumerated profiles come out in lexicographic order.
    """
    strategy = strategy or PipelineStrategy()
    cal, stats = _calibrated_counting(game, strategy)
    description = _description_from(cal, game)
    equilibria: tuple[Profile, ...] | None = None
    if strategy.enumeration_limit != 0:
        t0 = time.perf_counter()
        equilibria = tuple(_extend(game, cal.loaded, strategy.enumeration_limit))
        stats.timings["enumeration"] = time.perf_counter() - t0
    return SolveResult(
        existence=description.existence,
        count=description.count,
        description=description,
        equilibria=equilibria,
        stats=stats,
    )


def boolean_solve(
    game: GraphicalGame, strategy: PipelineStrategy | None = None
) -> tuple[bool, SolveStats]:
    """Existence via the one-bit Boolean semiring, with run statistics."""
    strategy = strategy or PipelineStrategy()
    loaded, stats = _prepare(game, strategy, BOOLEAN)
    t0 = time.perf_counter()
    cal = calibrate(loaded)
    stats.messages = cal.message_count
    stats.timings["calibration"] = time.perf_counter() - t0
    return any(cal.beliefs[cal.root]), stats


def decide_existence(game: GraphicalGame, strategy: PipelineStrategy | None = None) -> bool:
    """True iff the game has a pure Nash equilibrium (Boolean calibration)."""
    return boolean_solve(game, strategy)[0]


def succinct_description(
    game: GraphicalGame, strategy: PipelineStrategy | None = None
) -> SuccinctDescription:
    """Counting marginal tables of every significant clique plus the count."""
    strategy = strategy or PipelineStrategy()
    cal, _ = _calibrated_counting(game, strategy)
    return _description_from(cal, game)


def map_configuration(
    game: GraphicalGame, epsilon: float, strategy: PipelineStrategy | None = None
) -> tuple[MapResult, SolveStats]:
    """Max-product pipeline: best density value and a maximizing profile."""
    strategy = strategy or PipelineStrategy()
    loaded, stats = _prepare(game, strategy, MAX_PRODUCT, epsilon)
    t0 = time.perf_counter()
    result = map_solve(loaded, epsilon)
    stats.messages = len(loaded.tree.nodes) - 1
    stats.timings["map"] = time.perf_counter() - t0
    return result, stats


def enumerate_equilibria(
    game: GraphicalGame,
    strategy: PipelineStrategy | None = None,
    limit: int | None = None,
) -> Iterator[Profile]:
    """Stream every pure Nash equilibrium in lexicographic profile order.

    Fixes players in id order, keeping only partial profiles whose clamped
    extension count stays positive; exactness of the count makes the search
    backtrack-free, so the delay per equilibrium is polynomial in the
    calibrated tree size.
    """
    strategy = strategy or PipelineStrategy()
    if limit is not None and limit < 0:
        raise ValueError("enumeration limit must be nonnegative")
    loaded, _ = _prepare(game, strategy, COUNTING)
    yield from _extend(game, loaded, limit)


def _extend(
    game: GraphicalGame, loaded: LoadedCliqueTree, limit: int | None
) -> Iterator[Profile]:
    if limit == 0:
        return
    counter = EvidenceCounter(loaded)
    if not counter.count({}):
        return
    n = game.n
    sizes = game.strategy_counts
    assigned: dict[int, int] = {}
    chosen: list[int] = []
    emitted = 0
    candidate = 0
    while True:
        depth = len(chosen)
        if depth == n:
            yield tuple(chosen)
            emitted += 1
            if limit is not None and emitted >= limit:
                return
            candidate = chosen.pop() + 1
            del assigned[n]
            continue
        p = depth + 1
        found = False
        for v in range(candidate, sizes[depth]):
            assigned[p] = v
            if counter.count(assigned):
                chosen.append(v)
                candidate = 0
                found = True
                break
            del assigned[p]
        if not found:
            if not chosen:
                return
            candidate = chosen.pop() + 1
            del assigned[depth]
