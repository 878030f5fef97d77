"""Pure Nash equilibria of graphical games via Markov random field inference.

The solver reduces a graphical game to an MRF whose density is 1 exactly
on equilibria, then runs semiring junction-tree calibration: Boolean for
existence, Counting for exact counts and succinct per-clique marginals,
max-product for MAP configurations.  Metropolis sampling and simulated
annealing cover instances too entangled for exact inference.
"""

__version__ = "0.1.0"

from .equilibria import (
    PipelineStrategy,
    SolveResult,
    SuccinctDescription,
    decide_existence,
    enumerate_equilibria,
    map_configuration,
    solve,
    succinct_description,
)
from .game import (
    GraphicalGame,
    NeighborhoodAssignment,
    best_response_set,
    brute_force_equilibria,
    is_pure_nash,
    payoff,
)
from .generators import generate_game
from .heuristics import (
    ChainConfig,
    ChainReport,
    metropolis_sample,
    simulated_anneal,
    unsatisfied_count,
)
from .junction import calibrate, clique_marginal, load_potentials, map_solve
from .mrf import MarkovRandomField, build_mrf, indicator_f, unnormalized_density
from .semiring import BOOLEAN, COUNTING, MAX_PRODUCT, Semiring
from .structure import (
    CliqueTree,
    Graph,
    Hypergraph,
    HypertreeDecomposition,
    TreeDecomposition,
    clique_tree_from_chordal,
    game_hypergraph,
    grahams_algorithm,
    lift_hypertree_decomposition,
    lift_tree_decomposition,
    primal_graph,
    triangulate,
    validate_hypertree_decomposition,
)

__all__ = [
    "BOOLEAN",
    "COUNTING",
    "MAX_PRODUCT",
    "ChainConfig",
    "ChainReport",
    "CliqueTree",
    "Graph",
    "GraphicalGame",
    "Hypergraph",
    "HypertreeDecomposition",
    "MarkovRandomField",
    "NeighborhoodAssignment",
    "PipelineStrategy",
    "Semiring",
    "SolveResult",
    "SuccinctDescription",
    "TreeDecomposition",
    "best_response_set",
    "brute_force_equilibria",
    "build_mrf",
    "calibrate",
    "clique_marginal",
    "clique_tree_from_chordal",
    "decide_existence",
    "enumerate_equilibria",
    "game_hypergraph",
    "generate_game",
    "grahams_algorithm",
    "indicator_f",
    "is_pure_nash",
    "lift_hypertree_decomposition",
    "lift_tree_decomposition",
    "load_potentials",
    "map_configuration",
    "map_solve",
    "metropolis_sample",
    "payoff",
    "primal_graph",
    "simulated_anneal",
    "solve",
    "succinct_description",
    "triangulate",
    "unnormalized_density",
    "unsatisfied_count",
]
