"""Stochastic search: Metropolis sampling of the soft density and annealing.

The chain walks strategy profiles with a symmetric single-player proposal
(uniform player, uniform alternative strategy) and acceptance probability
min(1, eps**dU), so its stationary distribution is proportional to
eps**U(x) where U counts unsatisfied players; configurations decay
exponentially in U.  Annealing runs the same chain over a strictly
decreasing epsilon schedule and keeps the best profile seen.

All randomness comes from numpy's counter-based Philox generator, so a
seed pins the full trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .game import GraphicalGame, Profile, best_response_tables


@dataclass(frozen=True)
class ChainConfig:
    """Single-stage chain parameters; ``start`` defaults to the all-zeros profile."""

    epsilon: float = 0.2
    steps: int = 10_000
    seed: int = 0
    start: Profile | None = None
    paranoid: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")


@dataclass(frozen=True)
class ChainReport:
    """Outcome of a chain run; ``visits`` maps each U level to time spent there."""

    best_profile: Profile
    best_unsatisfied: int
    final_profile: Profile
    visits: dict[int, int] = field(default_factory=dict)
    steps: int = 0
    accepted: int = 0
    pne_hit_step: int | None = None

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.steps if self.steps else 0.0

    @property
    def hit_equilibrium(self) -> bool:
        return self.pne_hit_step is not None


class _Energy:
    """Per-player satisfaction bits with O(|N(p)|) updates per move.

    Flipping player p can only change the satisfaction of players whose
    neighborhood contains p, which for symmetric edges is exactly N(p).
    """

    def __init__(self, game: GraphicalGame):
        self.game = game
        self.masks = best_response_tables(game)
        self.context_shapes = []
        for p in game.players:
            others = tuple(q for q in game.neighborhood(p) if q != p)
            self.context_shapes.append((others, game.shape(others)))

    def satisfied(self, p: int, profile: Sequence[int]) -> bool:
        others, shape = self.context_shapes[p - 1]
        idx = shape.index(tuple(profile[q - 1] for q in others))
        return bool(self.masks[p - 1][idx] >> profile[p - 1] & 1)

    def unsatisfied(self, profile: Sequence[int]) -> int:
        return sum(0 if self.satisfied(p, profile) else 1 for p in self.game.players)


def unsatisfied_count(game: GraphicalGame, s: Sequence[int]) -> int:
    """Number of players whose strategy in s is not a best response."""
    game._check_profile(s)
    return _Energy(game).unsatisfied(s)


def _run_chain(
    game: GraphicalGame,
    stages: Sequence[tuple[float, int]],
    rng: np.random.Generator,
    start: Profile,
    paranoid: bool,
    stop_at_equilibrium: bool,
) -> ChainReport:
    energy = _Energy(game)
    sizes = game.strategy_counts
    proposable = [p for p in game.players if sizes[p - 1] >= 2]
    state = list(start)
    sat = [energy.satisfied(p, state) for p in game.players]
    current_u = sat.count(False)

    best_u = current_u
    best_profile = tuple(state)
    visits: dict[int, int] = {}
    accepted = 0
    taken = 0
    pne_hit = 0 if current_u == 0 else None

    for eps, steps in stages:
        if stop_at_equilibrium and pne_hit is not None:
            break
        for _ in range(steps):
            taken += 1
            if proposable:
                p = proposable[int(rng.integers(len(proposable)))]
                alt = int(rng.integers(sizes[p - 1] - 1))
                if alt >= state[p - 1]:
                    alt += 1
                old = state[p - 1]
                state[p - 1] = alt
                affected = game.neighborhood(p)
                new_sat = {q: energy.satisfied(q, state) for q in affected}
                delta = sum(
                    (0 if new_sat[q] else 1) - (0 if sat[q - 1] else 1) for q in affected
                )
                if delta <= 0 or rng.random() < eps**delta:
                    accepted += 1
                    current_u += delta
                    for q, bit in new_sat.items():
                        sat[q - 1] = bit
                    if paranoid:
                        assert current_u == energy.unsatisfied(state), (
                            "incremental U diverged from recomputation"
                        )
                else:
                    state[p - 1] = old
            visits[current_u] = visits.get(current_u, 0) + 1
            if current_u < best_u:
                best_u = current_u
                best_profile = tuple(state)
            if current_u == 0 and pne_hit is None:
                pne_hit = taken
            if stop_at_equilibrium and pne_hit is not None:
                break

    return ChainReport(
        best_profile=best_profile,
        best_unsatisfied=best_u,
        final_profile=tuple(state),
        visits=visits,
        steps=taken,
        accepted=accepted,
        pne_hit_step=pne_hit,
    )


def metropolis_sample(game: GraphicalGame, cfg: ChainConfig) -> ChainReport:
    """Run one Metropolis chain; fully deterministic given the seed.

    Players with a single strategy are never proposed; if every player is
    fixed the chain is constant and only accumulates visit statistics.
    """
    start = cfg.start if cfg.start is not None else tuple([0] * game.n)
    game._check_profile(start)
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    return _run_chain(
        game,
        [(cfg.epsilon, cfg.steps)],
        rng,
        tuple(start),
        cfg.paranoid,
        stop_at_equilibrium=False,
    )


def default_schedule(n: int) -> list[tuple[float, int]]:
    """Geometric decay 0.5 * 0.8**k over 10 stages, stage length scaled by n."""
    steps = max(1000, 100 * n)
    return [(0.5 * 0.8**k, steps) for k in range(10)]


def simulated_anneal(
    game: GraphicalGame,
    schedule: Sequence[tuple[float, int]] | None = None,
    seed: int = 0,
    start: Profile | None = None,
) -> ChainReport:
    """Anneal over a strictly decreasing epsilon schedule, carrying the state.

    Stops early once an equilibrium (U = 0) is visited; the report carries
    the best profile over all stages.
    """
    if schedule is None:
        schedule = default_schedule(game.n)
    if not schedule:
        raise ValueError("annealing schedule must not be empty")
    for eps, steps in schedule:
        if not 0 < eps < 1:
            raise ValueError(f"schedule epsilon {eps} outside (0, 1)")
        if steps < 0:
            raise ValueError("schedule steps must be nonnegative")
    epsilons = [eps for eps, _ in schedule]
    if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
        raise ValueError("schedule epsilons must be strictly decreasing")
    start_profile = start if start is not None else tuple([0] * game.n)
    game._check_profile(start_profile)
    rng = np.random.Generator(np.random.Philox(seed))
    return _run_chain(
        game, list(schedule), rng, tuple(start_profile), False, stop_at_equilibrium=True
    )
