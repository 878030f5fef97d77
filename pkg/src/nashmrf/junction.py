"""Semiring message passing on loaded clique trees.

Potentials are loaded onto a clique tree (one owning node per significant
clique, all-ones tables elsewhere), then calibrated by a single collect
and distribute sweep; exactly 2*(nodes-1) messages are sent and no
divisions are performed, so any commutative semiring works.  The same
collect machinery powers MAP traceback and evidence-clamped counting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

from .game import NeighborhoodAssignment, _coerce_values
from .indexing import Shape
from .mrf import MarkovRandomField
from .semiring import MAX_PRODUCT, Semiring
from .structure import CliqueTree


@dataclass(frozen=True)
class LoadedCliqueTree:
    """Clique tree with one dense semiring table per node.

    ``assignment`` records which node received each significant clique; the
    entrywise product of all node tables equals the MRF density.
    """

    tree: CliqueTree
    sizes: tuple[int, ...]
    shapes: tuple[Shape, ...]
    tables: tuple[tuple, ...]
    assignment: dict[tuple[int, ...], int]
    semiring: Semiring


@dataclass(frozen=True)
class CalibratedTree:
    """Beliefs and directed separator messages after a two-pass sweep."""

    loaded: LoadedCliqueTree
    root: int
    beliefs: tuple[tuple, ...]
    messages: dict[tuple[int, int], tuple]
    separators: dict[tuple[int, int], Shape]

    @property
    def message_count(self) -> int:
        return len(self.messages)


class MapResult(NamedTuple):
    value: float
    argmax: tuple[int, ...]


def _covering_node(nodes: Sequence[tuple[int, ...]], clique: tuple[int, ...]) -> int | None:
    """Smallest-id node whose member set contains ``clique``."""
    holder: dict[int, list[int]] = {}
    for i, node in enumerate(nodes):
        for v in node:
            holder.setdefault(v, []).append(i)
    return _covering_node_with(holder, nodes, clique)


def _covering_node_with(
    holder: Mapping[int, list[int]],
    nodes: Sequence[tuple[int, ...]],
    clique: tuple[int, ...],
) -> int | None:
    if not clique:
        return 0 if nodes else None
    candidates = None
    for v in clique:
        ids = holder.get(v)
        if not ids:
            return None
        if candidates is None or len(ids) < len(candidates):
            candidates = ids
    want = set(clique)
    for i in candidates:  # ascending, so the first hit is the smallest id
        if want <= set(nodes[i]):
            return i
    return None


def load_potentials(tree: CliqueTree, mrf: MarkovRandomField) -> LoadedCliqueTree:
    """Assign every significant clique to exactly one containing node.

    A node whose member set equals the clique is preferred (smallest id
    among equals), otherwise the smallest-id containing node is used.
    Nodes without assigned cliques keep the all-ones table; fails if some
    significant clique fits in no node, since such a tree cannot carry the
    MRF.
    """
    semiring = mrf.semiring
    shapes = tuple(
        Shape(node, tuple(mrf.sizes[q - 1] for q in node)) for node in tree.nodes
    )
    tables = [[semiring.one] * shape.size for shape in shapes]
    holder: dict[int, list[int]] = {}
    exact: dict[tuple[int, ...], int] = {}
    for i, node in enumerate(tree.nodes):
        exact.setdefault(node, i)
        for v in node:
            holder.setdefault(v, []).append(i)
    assignment: dict[tuple[int, ...], int] = {}
    times = semiring.times
    for pot in mrf.potentials:
        target = exact.get(pot.members)
        if target is None:
            target = _covering_node_with(holder, tree.nodes, pot.members)
        if target is None:
            raise ValueError(f"significant clique {pot.members} is not covered by any tree node")
        assignment[pot.members] = target
        proj = shapes[target].projection(pot.shape(mrf.sizes))
        entries = pot.entries
        tables[target] = list(map(times, tables[target], map(entries.__getitem__, proj)))
    return LoadedCliqueTree(
        tree=tree,
        sizes=mrf.sizes,
        shapes=shapes,
        tables=tuple(tuple(t) for t in tables),
        assignment=assignment,
        semiring=semiring,
    )


def default_root(tree: CliqueTree) -> int:
    """Deterministic root: the node with the smallest member id."""
    return min(range(len(tree.nodes)), key=lambda i: (tree.nodes[i][0], tree.nodes[i], i))


def _rooted_order(tree: CliqueTree, root: int) -> tuple[list[int], list[int]]:
    """BFS preorder and parent array; reversed preorder is bottom-up."""
    neighbors = tree.neighbors()
    parent = [-1] * len(tree.nodes)
    order = [root]
    seen = {root}
    for u in order:
        for w in neighbors[u]:
            if w not in seen:
                seen.add(w)
                parent[w] = u
                order.append(w)
    if len(order) != len(tree.nodes):
        raise ValueError("clique tree is not connected")
    return order, parent


def _separator_shapes(
    loaded: LoadedCliqueTree,
) -> tuple[dict[tuple[int, int], Shape], dict[tuple[int, int], list[int]]]:
    """Per directed edge: separator shape and node-to-separator projection."""
    seps: dict[tuple[int, int], Shape] = {}
    projs: dict[tuple[int, int], list[int]] = {}
    for i, j in loaded.tree.edges:
        members = tuple(sorted(set(loaded.tree.nodes[i]) & set(loaded.tree.nodes[j])))
        shape = Shape(members, tuple(loaded.sizes[q - 1] for q in members))
        seps[(i, j)] = seps[(j, i)] = shape
        projs[(i, j)] = loaded.shapes[i].projection(shape)
        projs[(j, i)] = loaded.shapes[j].projection(shape)
    return seps, projs


def _product(semiring: Semiring, table: Sequence, msg: Sequence, proj: Sequence[int]) -> list:
    return list(map(semiring.times, table, map(msg.__getitem__, proj)))


def _marginalize(semiring: Semiring, table: Sequence, proj: Sequence[int], out_size: int) -> list:
    plus = semiring.plus
    out = [semiring.zero] * out_size
    for j, value in zip(proj, table):
        out[j] = plus(out[j], value)
    return out


def calibrate(loaded: LoadedCliqueTree, root: int | None = None) -> CalibratedTree:
    """Two-pass collect/distribute calibration.

    After the sweep every node's belief is the semiring marginal of the
    loaded product onto that node; the result does not depend on the root
    (tested as a property), which is only a scheduling choice.
    """
    tree = loaded.tree
    n = len(tree.nodes)
    if n == 0:
        raise ValueError("cannot calibrate an empty tree")
    if root is None:
        root = default_root(tree)
    order, parent = _rooted_order(tree, root)
    children: list[list[int]] = [[] for _ in range(n)]
    for u in order[1:]:
        children[parent[u]].append(u)
    seps, projs = _separator_shapes(loaded)
    semiring = loaded.semiring

    messages: dict[tuple[int, int], tuple] = {}
    collect: list[list] = [list(loaded.tables[u]) for u in range(n)]
    for u in reversed(order):
        for w in children[u]:
            msg = messages[(w, u)]
            collect[u] = _product(semiring, collect[u], msg, projs[(u, w)])
        p = parent[u]
        if p >= 0:
            sep = seps[(u, p)]
            messages[(u, p)] = tuple(
                _marginalize(semiring, collect[u], projs[(u, p)], sep.size)
            )

    beliefs: list[tuple] = [()] * n
    for u in order:
        p = parent[u]
        base = collect[u]
        if p >= 0:
            base = _product(semiring, base, messages[(p, u)], projs[(u, p)])
        beliefs[u] = tuple(base)
        kids = children[u]
        if not kids:
            continue
        # prefix/suffix products leave out one child message without division
        start = loaded.tables[u]
        if p >= 0:
            start = _product(semiring, start, messages[(p, u)], projs[(u, p)])
        prefix = [list(start)]
        for w in kids[:-1]:
            prefix.append(_product(semiring, prefix[-1], messages[(w, u)], projs[(u, w)]))
        suffix: list[list | None] = [None] * len(kids)
        running: list | None = None
        for i in range(len(kids) - 1, -1, -1):
            suffix[i] = running
            msg = messages[(kids[i], u)]
            proj = projs[(u, kids[i])]
            running = (
                _product(semiring, running, msg, proj)
                if running is not None
                else _product(semiring, [semiring.one] * loaded.shapes[u].size, msg, proj)
            )
        for i, w in enumerate(kids):
            table = prefix[i]
            if suffix[i] is not None:
                table = [semiring.times(a, b) for a, b in zip(table, suffix[i])]
            sep = seps[(u, w)]
            messages[(u, w)] = tuple(_marginalize(semiring, table, projs[(u, w)], sep.size))

    return CalibratedTree(
        loaded=loaded,
        root=root,
        beliefs=tuple(beliefs),
        messages=messages,
        separators=seps,
    )


def clique_marginal(
    cal: CalibratedTree,
    clique: Sequence[int],
    y: Mapping[int, int] | NeighborhoodAssignment | Sequence[int],
):
    """Marginal of the calibrated distribution on ``clique`` at assignment y.

    In the Counting semiring this is the number of full profiles extending
    y whose density is 1; the clique must fit inside some tree node.
    """
    members = tuple(sorted(clique))
    values = _coerce_values(members, y)
    table = clique_marginal_table(cal, members)
    shape = Shape(members, tuple(cal.loaded.sizes[q - 1] for q in members))
    return table[shape.index(values)]


def clique_marginal_table(cal: CalibratedTree, clique: Sequence[int]) -> tuple:
    """Dense marginal table over ``clique``, marginalized from a covering node."""
    members = tuple(sorted(clique))
    loaded = cal.loaded
    node = _covering_node(loaded.tree.nodes, members)
    if node is None:
        raise ValueError(f"clique {members} is not covered by any tree node")
    shape = Shape(members, tuple(loaded.sizes[q - 1] for q in members))
    proj = loaded.shapes[node].projection(shape)
    return tuple(_marginalize(loaded.semiring, cal.beliefs[node], proj, shape.size))


def map_solve(loaded: LoadedCliqueTree, epsilon: float) -> MapResult:
    """Max-product value and a maximizing profile.

    The value is eps**k for the smallest attainable count k of violating
    players, so it is 1 exactly when a pure Nash equilibrium exists.  Ties
    are resolved deterministically: the root picks its lexicographically
    smallest optimal assignment, then children extend root-to-leaf, each
    picking its lexicographically smallest consistent optimum.
    """
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    if loaded.semiring.name != "max-product":
        raise ValueError("map_solve requires a max-product loaded tree")
    tree = loaded.tree
    n = len(tree.nodes)
    root = default_root(tree)
    order, parent = _rooted_order(tree, root)
    children: list[list[int]] = [[] for _ in range(n)]
    for u in order[1:]:
        children[parent[u]].append(u)
    seps, projs = _separator_shapes(loaded)
    semiring = loaded.semiring

    collect: list[list] = [list(loaded.tables[u]) for u in range(n)]
    up_msgs: dict[int, tuple] = {}
    for u in reversed(order):
        for w in children[u]:
            collect[u] = _product(semiring, collect[u], up_msgs[w], projs[(u, w)])
        p = parent[u]
        if p >= 0:
            up_msgs[u] = tuple(
                _marginalize(semiring, collect[u], projs[(u, p)], seps[(u, p)].size)
            )

    root_belief = collect[root]
    best = min(root_belief)
    chosen = [0] * n
    chosen[root] = root_belief.index(best)

    profile: dict[int, int] = {}
    for q, v in zip(tree.nodes[root], loaded.shapes[root].values(chosen[root])):
        profile[q] = v
    for u in order:
        for w in children[u]:
            sep_idx = projs[(u, w)][chosen[u]]
            proj_w = projs[(w, u)]
            table = collect[w]
            best_idx = None
            for idx in range(len(table)):
                if proj_w[idx] == sep_idx and (
                    best_idx is None or table[idx] < table[best_idx]
                ):
                    best_idx = idx
            chosen[w] = best_idx  # type: ignore[assignment]
            for q, v in zip(tree.nodes[w], loaded.shapes[w].values(chosen[w])):
                profile[q] = v

    argmax = tuple(profile[q] for q in sorted(profile))
    return MapResult(value=semiring.number(best, epsilon), argmax=argmax)


class EvidenceCounter:
    """Counts density-1 extensions of partial profiles on a loaded tree.

    Each player is clamped at its smallest-id covering node; one collect
    pass per query, no state is kept between queries.
    """

    def __init__(self, loaded: LoadedCliqueTree):
        if loaded.semiring.name == "max-product":
            raise ValueError("evidence counting needs the boolean or counting semiring")
        self.loaded = loaded
        tree = loaded.tree
        self.root = default_root(tree)
        self.order, self.parent = _rooted_order(tree, self.root)
        self.children: list[list[int]] = [[] for _ in tree.nodes]
        for u in self.order[1:]:
            self.children[self.parent[u]].append(u)
        self.seps, self.projs = _separator_shapes(loaded)
        holder: dict[int, list[int]] = {}
        for i, node in enumerate(tree.nodes):
            for v in node:
                holder.setdefault(v, []).append(i)
        self.node_of_player = {p: ids[0] for p, ids in holder.items()}
        # value of player p at each table index of its designated node
        self._value_arrays: dict[int, list[int]] = {}
        for p, u in self.node_of_player.items():
            shape = loaded.shapes[u]
            pos = shape.position(p)
            stride, size = shape.strides[pos], shape.sizes[pos]
            self._value_arrays[p] = [(idx // stride) % size for idx in range(shape.size)]

    def count(self, assignment: Mapping[int, int]):
        """Semiring total over full profiles consistent with ``assignment``."""
        loaded = self.loaded
        semiring = loaded.semiring
        zero = semiring.zero
        clamped: dict[int, list[tuple[list[int], int]]] = {}
        for p, v in assignment.items():
            u = self.node_of_player[p]
            clamped.setdefault(u, []).append((self._value_arrays[p], v))
        tables: dict[int, list] = {}
        for u in self.order:
            table = list(loaded.tables[u])
            for values, v in clamped.get(u, ()):
                for idx in range(len(table)):
                    if values[idx] != v:
                        table[idx] = zero
            tables[u] = table
        for u in reversed(self.order):
            p = self.parent[u]
            if p < 0:
                continue
            msg = _marginalize(semiring, tables[u], self.projs[(u, p)], self.seps[(u, p)].size)
            tables[p] = _product(semiring, tables[p], msg, self.projs[(p, u)])
        total = semiring.zero
        plus = semiring.plus
        for value in tables[self.root]:
            total = plus(total, value)
        return total
