"""Line-delimited JSON documents for games, decompositions, and results.

Each document is UTF-8 text, one JSON object per line, tagged by a
``record`` field; the first line must be a header carrying ``format`` and
``version``.  Payoff and marginal tables are listed in the same
mixed-radix order as the in-memory tables, so documents diff cleanly and
round-trip bit-exactly.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Iterable

from .game import GraphicalGame
from .structure import HypertreeDecomposition, TreeDecomposition

GAME_FORMAT = "graphical-game"
RESULT_FORMAT = "pne-result"
DECOMPOSITION_FORMAT = "decomposition"
FORMAT_VERSION = 1


class DocumentError(ValueError):
    """Malformed document; the message carries line-precise context."""


def _dump(obj: dict[str, Any]) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def emit_records(records: Iterable[dict[str, Any]]) -> str:
    return "".join(_dump(r) + "\n" for r in records)


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _parse_lines(text: str, source: str, expected_format: str) -> list[tuple[int, dict]]:
    records: list[tuple[int, dict]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{source}:{lineno}: not valid JSON ({exc.msg})") from None
        if not isinstance(obj, dict) or "record" not in obj:
            raise DocumentError(f"{source}:{lineno}: expected an object with a 'record' field")
        records.append((lineno, obj))
    if not records:
        raise DocumentError(f"{source}: empty document")
    lineno, header = records[0]
    if header["record"] != "header":
        raise DocumentError(f"{source}:{lineno}: first record must be the header")
    if header.get("format") != expected_format:
        raise DocumentError(
            f"{source}:{lineno}: format {header.get('format')!r}, expected {expected_format!r}"
        )
    if header.get("version") != FORMAT_VERSION:
        raise DocumentError(
            f"{source}:{lineno}: unsupported version {header.get('version')!r}"
        )
    return records[1:]


def _field(obj: dict, key: str, source: str, lineno: int) -> Any:
    if key not in obj:
        raise DocumentError(f"{source}:{lineno}: missing field {key!r}")
    return obj[key]


def parse_game(text: str, source: str = "<game>") -> GraphicalGame:
    """Read a game document, validating structure with line-precise errors."""
    strategies: dict[int, tuple[str, ...]] = {}
    edges: list[tuple[int, int]] = []
    edge_keys: set[tuple[int, int]] = set()
    payoffs: dict[int, tuple[int, ...]] = {}
    payoff_lines: dict[int, int] = {}
    for lineno, obj in _parse_lines(text, source, GAME_FORMAT):
        kind = obj["record"]
        if kind == "player":
            pid = _field(obj, "id", source, lineno)
            labels = _field(obj, "strategies", source, lineno)
            if not isinstance(pid, int) or pid < 1:
                raise DocumentError(f"{source}:{lineno}: player id must be a positive integer")
            if pid in strategies:
                raise DocumentError(f"{source}:{lineno}: duplicate player {pid}")
            if (
                not isinstance(labels, list)
                or not labels
                or not all(isinstance(s, str) for s in labels)
            ):
                raise DocumentError(
                    f"{source}:{lineno}: strategies must be a nonempty list of strings"
                )
            if len(set(labels)) != len(labels):
                raise DocumentError(f"{source}:{lineno}: duplicate strategy label")
            strategies[pid] = tuple(labels)
        elif kind == "edge":
            u = _field(obj, "u", source, lineno)
            v = _field(obj, "v", source, lineno)
            if not isinstance(u, int) or not isinstance(v, int):
                raise DocumentError(f"{source}:{lineno}: edge endpoints must be integers")
            if u == v:
                raise DocumentError(f"{source}:{lineno}: self-loop edge ({u},{v})")
            key = (u, v) if u < v else (v, u)
            if key in edge_keys:
                raise DocumentError(f"{source}:{lineno}: duplicate edge ({u},{v})")
            edge_keys.add(key)
            edges.append(key)
        elif kind == "payoff":
            pid = _field(obj, "player", source, lineno)
            table = _field(obj, "table", source, lineno)
            if pid in payoffs:
                raise DocumentError(f"{source}:{lineno}: duplicate payoff table for player {pid}")
            if not isinstance(table, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in table
            ):
                raise DocumentError(
                    f"{source}:{lineno}: payoff table must list nonnegative integers"
                )
            payoffs[pid] = tuple(table)
            payoff_lines[pid] = lineno
        else:
            raise DocumentError(f"{source}:{lineno}: unknown record type {kind!r}")
    n = len(strategies)
    if sorted(strategies) != list(range(1, n + 1)):
        raise DocumentError(f"{source}: player ids must be exactly 1..{n}")
    for u, v in edges:
        if v > n:
            raise DocumentError(f"{source}: edge ({u},{v}) references an unknown player")
    missing = [p for p in range(1, n + 1) if p not in payoffs]
    if missing:
        raise DocumentError(f"{source}: missing payoff table for player {missing[0]}")
    try:
        return GraphicalGame(
            tuple(strategies[p] for p in range(1, n + 1)),
            tuple(sorted(edges)),
            tuple(payoffs[p] for p in range(1, n + 1)),
        )
    except ValueError as exc:
        msg = str(exc)
        for pid, lineno in payoff_lines.items():
            if f"player {pid} " in msg:
                raise DocumentError(f"{source}:{lineno}: {msg}") from None
        raise DocumentError(f"{source}: {msg}") from None


def emit_game(game: GraphicalGame) -> str:
    records: list[dict[str, Any]] = [
        {"record": "header", "format": GAME_FORMAT, "version": FORMAT_VERSION}
    ]
    for p in game.players:
        records.append(
            {"record": "player", "id": p, "strategies": list(game.strategy_labels[p - 1])}
        )
    for u, v in game.edges:
        records.append({"record": "edge", "u": u, "v": v})
    for p in game.players:
        records.append({"record": "payoff", "player": p, "table": list(game.payoffs[p - 1])})
    return emit_records(records)


def parse_decomposition(
    text: str, source: str = "<decomposition>"
) -> TreeDecomposition | HypertreeDecomposition:
    """Read a decomposition document; the header's ``kind`` selects the type."""
    body = _parse_lines(text, source, DECOMPOSITION_FORMAT)
    header_line = text.splitlines()[0] if text.splitlines() else ""
    kind = json.loads(header_line).get("kind") if header_line.strip() else None
    if kind not in ("tree-decomposition", "hypertree-decomposition"):
        raise DocumentError(f"{source}: header kind must name a decomposition type")
    nodes: dict[int, tuple[int, ...]] = {}
    lam: dict[int, tuple[tuple[int, ...], ...]] = {}
    edges: list[tuple[int, int]] = []
    root: int | None = None
    for lineno, obj in body:
        rec = obj["record"]
        if rec == "node":
            nid = _field(obj, "id", source, lineno)
            vertices = _field(obj, "vertices", source, lineno)
            if not isinstance(nid, int) or nid in nodes:
                raise DocumentError(f"{source}:{lineno}: bad or duplicate node id")
            if not isinstance(vertices, list) or not all(isinstance(v, int) for v in vertices):
                raise DocumentError(f"{source}:{lineno}: vertices must be a list of integers")
            nodes[nid] = tuple(vertices)
            if kind == "hypertree-decomposition":
                hyperedges = _field(obj, "hyperedges", source, lineno)
                if not isinstance(hyperedges, list) or not all(
                    isinstance(h, list) and all(isinstance(v, int) for v in h)
                    for h in hyperedges
                ):
                    raise DocumentError(
                        f"{source}:{lineno}: hyperedges must be a list of vertex lists"
                    )
                lam[nid] = tuple(tuple(h) for h in hyperedges)
        elif rec == "tree_edge":
            u = _field(obj, "u", source, lineno)
            v = _field(obj, "v", source, lineno)
            edges.append((u, v))
        elif rec == "root":
            root = _field(obj, "id", source, lineno)
        else:
            raise DocumentError(f"{source}:{lineno}: unknown record type {rec!r}")
    if sorted(nodes) != list(range(len(nodes))):
        raise DocumentError(f"{source}: node ids must be exactly 0..{len(nodes) - 1}")
    ordered = tuple(nodes[i] for i in range(len(nodes)))
    try:
        if kind == "tree-decomposition":
            return TreeDecomposition(ordered, tuple(edges))
        return HypertreeDecomposition(
            chi=ordered,
            lam=tuple(lam.get(i, ()) for i in range(len(nodes))),
            edges=tuple(edges),
            root=root if root is not None else 0,
        )
    except ValueError as exc:
        raise DocumentError(f"{source}: {exc}") from None


def emit_decomposition(obj: TreeDecomposition | HypertreeDecomposition) -> str:
    if isinstance(obj, TreeDecomposition):
        records: list[dict[str, Any]] = [
            {
                "record": "header",
                "format": DECOMPOSITION_FORMAT,
                "version": FORMAT_VERSION,
                "kind": "tree-decomposition",
            }
        ]
        for i, bag in enumerate(obj.bags):
            records.append({"record": "node", "id": i, "vertices": list(bag)})
        for u, v in obj.edges:
            records.append({"record": "tree_edge", "u": u, "v": v})
        return emit_records(records)
    records = [
        {
            "record": "header",
            "format": DECOMPOSITION_FORMAT,
            "version": FORMAT_VERSION,
            "kind": "hypertree-decomposition",
        }
    ]
    for i in range(len(obj.chi)):
        records.append(
            {
                "record": "node",
                "id": i,
                "vertices": list(obj.chi[i]),
                "hyperedges": [list(h) for h in obj.lam[i]],
            }
        )
    for u, v in obj.edges:
        records.append({"record": "tree_edge", "u": u, "v": v})
    records.append({"record": "root", "id": obj.root})
    return emit_records(records)
