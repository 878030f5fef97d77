"""Seeded random game families for testing and the `gen` subcommand."""

from __future__ import annotations

import math

import numpy as np

from .game import GraphicalGame

FAMILIES = ("tree", "cycle", "grid", "random-bounded-degree")


def _family_edges(
    family: str, n: int, rng: np.random.Generator, max_degree: int
) -> list[tuple[int, int]]:
    if family == "tree":
        # uniform random recursive tree
        return [(int(rng.integers(1, v)), v) for v in range(2, n + 1)]
    if family == "cycle":
        if n == 1:
            return []
        if n == 2:
            return [(1, 2)]
        return [(v, v + 1) for v in range(1, n)] + [(1, n)]
    if family == "grid":
        rows = max(1, math.isqrt(n))
        while n % rows:
            rows -= 1
        cols = n // rows
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c + 1
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return edges
    if family == "random-bounded-degree":
        pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
        degree = [0] * (n + 1)
        edges = []
        for i in rng.permutation(len(pairs)):
            u, v = pairs[int(i)]
            if degree[u] < max_degree and degree[v] < max_degree and rng.random() < 0.5:
                degree[u] += 1
                degree[v] += 1
                edges.append((u, v))
        return edges
    raise ValueError(f"unknown family {family!r}")


def generate_game(
    family: str,
    n: int,
    seed: int = 0,
    strategies: int | tuple[int, int] = 2,
    max_degree: int = 3,
    payoff_range: tuple[int, int] = (0, 9),
) -> GraphicalGame:
    """Random game of the given family, fully determined by the seed.

    ``strategies`` is either a fixed per-player count or an inclusive
    (low, high) range sampled per player; payoffs are uniform integers in
    the inclusive ``payoff_range``.
    """
    if n < 1:
        raise ValueError("a game needs at least one player")
    lo, hi = payoff_range
    if lo < 0 or hi < lo:
        raise ValueError(f"bad payoff range {payoff_range}")
    rng = np.random.Generator(np.random.Philox(seed))
    edges = _family_edges(family, n, rng, max_degree)
    if isinstance(strategies, tuple):
        s_lo, s_hi = strategies
        if s_lo < 1 or s_hi < s_lo:
            raise ValueError(f"bad strategy range {strategies}")
        counts = [int(rng.integers(s_lo, s_hi + 1)) for _ in range(n)]
    else:
        if strategies < 1:
            raise ValueError("players need at least one strategy")
        counts = [strategies] * n
    return GraphicalGame.build(
        counts, edges, lambda p, values: int(rng.integers(lo, hi + 1))
    )
