"""Command-line front door.

Subcommands: decide, count, enumerate, marginals, map, sample, anneal,
gen, validate.  Results are line-delimited JSON on stdout, written once.
Exit codes: 0 success (and "exists"/"valid" for decide/validate), 1 for a
negative decide/validate verdict, 2 for input or usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any

from . import __version__
from .documents import (
    DocumentError,
    digest,
    emit_game,
    emit_records,
    parse_decomposition,
    parse_game,
)
from .equilibria import (
    SOURCES,
    PipelineStrategy,
    SolveStats,
    boolean_solve,
    map_configuration,
    solve,
)
from .game import GraphicalGame, is_pure_nash
from .generators import FAMILIES, generate_game
from .heuristics import ChainConfig, ChainReport, metropolis_sample, simulated_anneal
from .mrf import build_mrf
from .semiring import COUNTING
from .structure import (
    TRIANGULATION_STRATEGIES,
    HypertreeDecomposition,
    InvalidDecompositionError,
    TreeDecomposition,
    check_tree_decomposition,
    game_graph,
    game_hypergraph,
    validate_hypertree_decomposition,
)

TOOL = f"nashmrf {__version__}"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from None


def _header(command: str, input_digest: str | None) -> dict[str, Any]:
    return {
        "record": "header",
        "format": "pne-result",
        "version": 1,
        "tool": TOOL,
        "command": command,
        "input": input_digest,
    }


def _stats_record(stats: SolveStats, timing: bool) -> dict[str, Any]:
    record: dict[str, Any] = {
        "record": "stats",
        "source": stats.source,
        "width": stats.width,
        "nodes": stats.nodes,
        "messages": stats.messages,
    }
    if timing:
        record["wall_ms"] = round(sum(stats.timings.values()) * 1000.0, 3)
    return record


def _labels(game: GraphicalGame, profile: tuple[int, ...]) -> list[str]:
    return [game.strategy_labels[p - 1][v] for p, v in enumerate(profile, start=1)]


def _strategy_from(args: argparse.Namespace, limit: int | None = 0) -> PipelineStrategy:
    decomposition = None
    if args.decomposition:
        decomposition = parse_decomposition(_read(args.decomposition), args.decomposition)
    if args.strategy.startswith("lift-") and decomposition is None:
        raise DocumentError(f"--strategy {args.strategy} requires --decomposition")
    return PipelineStrategy(
        source=args.strategy,
        triangulation=args.triangulation,
        enumeration_limit=limit,
        decomposition=decomposition,
    )


def _potential_records(game: GraphicalGame) -> list[dict[str, Any]]:
    mrf = build_mrf(game, 0.0, COUNTING)
    return [
        {"record": "potential", "clique": list(pot.members), "entries": list(pot.entries)}
        for pot in mrf.potentials
    ]


def _parse_start(game: GraphicalGame, text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    labels = text.split(",")
    if len(labels) != game.n:
        raise DocumentError(f"--start lists {len(labels)} strategies, expected {game.n}")
    profile = []
    for p, label in enumerate(labels, start=1):
        try:
            profile.append(game.strategy_labels[p - 1].index(label))
        except ValueError:
            raise DocumentError(
                f"--start: unknown strategy label {label!r} for player {p}"
            ) from None
    return tuple(profile)


def _chain_record(game: GraphicalGame, report: ChainReport) -> dict[str, Any]:
    return {
        "record": "chain",
        "best_unsatisfied": report.best_unsatisfied,
        "best_profile": _labels(game, report.best_profile),
        "steps": report.steps,
        "accepted": report.accepted,
        "visits": {str(u): c for u, c in sorted(report.visits.items())},
        "pne_hit_step": report.pne_hit_step,
    }


def _cmd_decide(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    text = _read(args.game)
    game = parse_game(text, args.game)
    exists, stats = boolean_solve(game, _strategy_from(args))
    records = [_header("decide", digest(text))]
    if stats.fallback:
        records.append({"record": "notice", "text": stats.fallback})
    records.append({"record": "existence", "value": exists})
    records.append(_stats_record(stats, args.timing))
    return (0 if exists else 1), records


def _solve_records(
    args: argparse.Namespace, command: str, limit: int | None
) -> tuple[GraphicalGame, Any, list[dict[str, Any]]]:
    text = _read(args.game)
    game = parse_game(text, args.game)
    result = solve(game, _strategy_from(args, limit))
    records = [_header(command, digest(text))]
    if result.stats.fallback:
        records.append({"record": "notice", "text": result.stats.fallback})
    records.append({"record": "existence", "value": result.existence})
    records.append({"record": "count", "value": str(result.count)})
    if args.dump_potentials:
        records.extend(_potential_records(game))
    return game, result, records


def _cmd_count(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    _, result, records = _solve_records(args, "count", 0)
    records.append(_stats_record(result.stats, args.timing))
    return 0, records


def _cmd_enumerate(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    game, result, records = _solve_records(args, "enumerate", args.limit)
    for i, profile in enumerate(result.equilibria or ()):
        records.append({"record": "equilibrium", "index": i, "profile": _labels(game, profile)})
    records.append(_stats_record(result.stats, args.timing))
    return 0, records


def _cmd_marginals(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    _, result, records = _solve_records(args, "marginals", 0)
    description = result.description
    for clique, table in zip(description.cliques, description.tables):
        records.append(
            {"record": "marginal", "clique": list(clique), "counts": [str(x) for x in table]}
        )
    records.append(_stats_record(result.stats, args.timing))
    return 0, records


def _cmd_map(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    text = _read(args.game)
    game = parse_game(text, args.game)
    result, stats = map_configuration(game, args.epsilon, _strategy_from(args))
    records = [_header("map", digest(text))]
    if stats.fallback:
        records.append({"record": "notice", "text": stats.fallback})
    records.append(
        {
            "record": "map",
            "epsilon": args.epsilon,
            "value": result.value,
            "profile": _labels(game, result.argmax),
            "equilibrium": is_pure_nash(game, result.argmax),
        }
    )
    records.append(_stats_record(stats, args.timing))
    return 0, records


def _cmd_sample(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    text = _read(args.game)
    game = parse_game(text, args.game)
    cfg = ChainConfig(
        epsilon=args.epsilon,
        steps=args.steps,
        seed=args.seed,
        start=_parse_start(game, args.start),
    )
    report = metropolis_sample(game, cfg)
    return 0, [_header("sample", digest(text)), _chain_record(game, report)]


def _parse_schedule(text: str | None) -> list[tuple[float, int]] | None:
    if text is None:
        return None
    schedule = []
    for part in text.split(","):
        try:
            eps, steps = part.split(":")
            schedule.append((float(eps), int(steps)))
        except ValueError:
            raise DocumentError(f"--schedule: cannot parse stage {part!r}") from None
    return schedule


def _cmd_anneal(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    text = _read(args.game)
    game = parse_game(text, args.game)
    report = simulated_anneal(
        game,
        schedule=_parse_schedule(args.schedule),
        seed=args.seed,
        start=_parse_start(game, args.start),
    )
    return 0, [_header("anneal", digest(text)), _chain_record(game, report)]


def _parse_strategies(text: str) -> int | tuple[int, int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return (int(lo), int(hi))
    return int(text)


def _cmd_gen(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    game = generate_game(
        args.family,
        args.n,
        seed=args.seed,
        strategies=_parse_strategies(args.strategies),
        max_degree=args.max_degree,
        payoff_range=(0, args.payoff_max),
    )
    sys.stdout.write(emit_game(game))
    return 0, []


def _cmd_validate(args: argparse.Namespace) -> tuple[int, list[dict[str, Any]]]:
    text = _read(args.game)
    game = parse_game(text, args.game)
    decomposition = parse_decomposition(_read(args.decomposition), args.decomposition)
    records = [_header("validate", digest(text))]
    if isinstance(decomposition, TreeDecomposition):
        try:
            check_tree_decomposition(decomposition, game_graph(game))
            records.append({"record": "validation", "valid": True, "kind": "tree-decomposition"})
            return 0, records
        except InvalidDecompositionError as exc:
            records.append(
                {
                    "record": "validation",
                    "valid": False,
                    "kind": "tree-decomposition",
                    "detail": str(exc),
                }
            )
            return 1, records
    report = validate_hypertree_decomposition(decomposition, game_hypergraph(game))
    records.append(
        {
            "record": "validation",
            "valid": report.valid,
            "kind": "hypertree-decomposition",
            "condition": report.violated_condition,
            "detail": report.detail,
        }
    )
    return (0 if report.valid else 1), records


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("game", help="game document path, or - for stdin")
    parser.add_argument(
        "--strategy", choices=SOURCES, default="graham-join-tree", help="clique tree source"
    )
    parser.add_argument(
        "--triangulation",
        choices=TRIANGULATION_STRATEGIES,
        default="min-fill",
        help="triangulation heuristic for the primal graph",
    )
    parser.add_argument(
        "--decomposition", metavar="FILE", help="decomposition document for lift-* sources"
    )
    parser.add_argument(
        "--dump-potentials", action="store_true", help="include MRF potential tables"
    )
    parser.add_argument(
        "--timing", action="store_true", help="include wall time in the stats record"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nashmrf",
        description="Pure Nash equilibria of graphical games via MRF inference.",
    )
    parser.add_argument("--version", action="version", version=TOOL)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide whether a pure Nash equilibrium exists")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("count", help="count pure Nash equilibria exactly")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("enumerate", help="list pure Nash equilibria lexicographically")
    _add_solver_flags(p)
    p.add_argument("--limit", type=int, default=None, help="stop after this many equilibria")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("marginals", help="per-clique equilibrium marginal tables")
    _add_solver_flags(p)
    p.set_defaults(func=_cmd_marginals)

    p = sub.add_parser("map", help="max-product most likely configuration")
    _add_solver_flags(p)
    p.add_argument("--epsilon", type=float, default=0.5, help="soft penalty in [0,1)")
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("sample", help="Metropolis chain over strategy profiles")
    p.add_argument("game", help="game document path, or - for stdin")
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", help="comma-separated strategy labels")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("anneal", help="simulated annealing toward an equilibrium")
    p.add_argument("game", help="game document path, or - for stdin")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--schedule", help="stages as eps:steps,eps:steps,...")
    p.add_argument("--start", help="comma-separated strategy labels")
    p.set_defaults(func=_cmd_anneal)

    p = sub.add_parser("gen", help="generate a random structured game document")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategies", default="2", help="count, or lo:hi range per player")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--payoff-max", type=int, default=9)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("validate", help="check a decomposition document against a game")
    p.add_argument("game", help="game document path, or - for stdin")
    p.add_argument("--decomposition", metavar="FILE", required=True)
    p.set_defaults(func=_cmd_validate)

    return parser


def run(argv: list[str]) -> int:
    """Parse argv, execute, emit one document on stdout, return the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, records = args.func(args)
    except (DocumentError, InvalidDecompositionError) as exc:
        print(f"nashmrf: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"nashmrf: error: {exc}", file=sys.stderr)
        return 2
    if records:
        sys.stdout.write(emit_records(records))
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
