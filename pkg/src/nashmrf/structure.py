"""Structural side of the solver: hypergraphs, acyclicity, and clique trees.

Covers the game's neighborhood hypergraph and primal graph, Graham/GYO
acyclicity with join-tree extraction, triangulation heuristics plus an
exact small-graph elimination search, clique trees of chordal graphs, and
the lifting of tree and hypertree decompositions to clique trees of the
primal graph.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .game import GraphicalGame

EXACT_SMALL_CAP = 12

TRIANGULATION_STRATEGIES = ("min-fill", "min-degree", "exact-small")


class InvalidDecompositionError(ValueError):
    """A supplied decomposition fails its defining conditions."""


def _normalize_edges(edges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop ({u},{v}) is not allowed")
        out.add((u, v) if u < v else (v, u))
    return tuple(sorted(out))


@dataclass(frozen=True)
class Graph:
    """Undirected, loop-free graph over integer vertices."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        edges = _normalize_edges(self.edges)
        vset = set(self.vertices)
        for u, v in edges:
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u},{v}) references an unknown vertex")
        object.__setattr__(self, "edges", edges)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class Hypergraph:
    """Set of nonempty hyperedges covering every vertex; duplicates removed."""

    vertices: tuple[int, ...]
    hyperedges: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        seen = set()
        edges = []
        for h in self.hyperedges:
            if len(h) == 0:
                raise ValueError("hyperedges must be nonempty")
            key = tuple(sorted(set(h)))
            if key not in seen:
                seen.add(key)
                edges.append(key)
        edges.sort(key=lambda h: (h[0], len(h), h))
        object.__setattr__(self, "hyperedges", tuple(edges))
        covered = set(itertools.chain.from_iterable(self.hyperedges))
        if covered - set(self.vertices):
            raise ValueError("hyperedge references a vertex outside the vertex set")
        if set(self.vertices) - covered:
            raise ValueError("every vertex must appear in at least one hyperedge")


@dataclass(frozen=True)
class CliqueTree:
    """Tree of vertex subsets with the clique-intersection property.

    ``width`` is the size of the largest node set.  Node sets need not be
    distinct; edges are pairs of node indices.
    """

    nodes: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(tuple(sorted(set(c))) for c in self.nodes))
        edges = []
        for i, j in self.edges:
            if i == j or not (0 <= i < len(self.nodes)) or not (0 <= j < len(self.nodes)):
                raise ValueError(f"bad tree edge ({i},{j})")
            edges.append((i, j) if i < j else (j, i))
        object.__setattr__(self, "edges", tuple(sorted(set(edges))))

    @property
    def width(self) -> int:
        return max((len(c) for c in self.nodes), default=0)

    def neighbors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.nodes]
        for i, j in self.edges:
            out[i].append(j)
            out[j].append(i)
        return out

    def as_tree_decomposition(self) -> "TreeDecomposition":
        return TreeDecomposition(self.nodes, self.edges)


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags plus tree edges; ``width`` is max bag size minus one."""

    bags: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bags", tuple(tuple(sorted(set(b))) for b in self.bags))
        edges = []
        for i, j in self.edges:
            if i == j or not (0 <= i < len(self.bags)) or not (0 <= j < len(self.bags)):
                raise ValueError(f"bad tree edge ({i},{j})")
            edges.append((i, j) if i < j else (j, i))
        object.__setattr__(self, "edges", tuple(sorted(set(edges))))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


@dataclass(frozen=True)
class HypertreeDecomposition:
    """Rooted tree with per-node vertex labels chi and hyperedge labels lam."""

    chi: tuple[tuple[int, ...], ...]
    lam: tuple[tuple[tuple[int, ...], ...], ...]
    edges: tuple[tuple[int, int], ...]
    root: int

    def __post_init__(self) -> None:
        if len(self.chi) != len(self.lam):
            raise ValueError("chi and lam must label the same nodes")
        if not self.chi:
            raise ValueError("a hypertree decomposition needs at least one node")
        if not (0 <= self.root < len(self.chi)):
            raise ValueError(f"root {self.root} is not a node")
        object.__setattr__(self, "chi", tuple(tuple(sorted(set(c))) for c in self.chi))
        object.__setattr__(
            self, "lam", tuple(tuple(sorted(tuple(sorted(set(h))) for h in lv)) for lv in self.lam)
        )
        edges = []
        for i, j in self.edges:
            if i == j or not (0 <= i < len(self.chi)) or not (0 <= j < len(self.chi)):
                raise ValueError(f"bad tree edge ({i},{j})")
            edges.append((i, j) if i < j else (j, i))
        object.__setattr__(self, "edges", tuple(sorted(set(edges))))

    @property
    def width(self) -> int:
        return max(len(lv) for lv in self.lam)

    def neighbors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in self.chi]
        for i, j in self.edges:
            out[i].append(j)
            out[j].append(i)
        return out


@dataclass(frozen=True)
class AcyclicityResult:
    """Outcome of Graham's algorithm; the join tree exists iff acyclic."""

    acyclic: bool
    join_tree: CliqueTree | None


@dataclass(frozen=True)
class ValidationReport:
    """Result of a Def-style decomposition check; falsy when a condition fails."""

    valid: bool
    violated_condition: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.valid


def game_graph(game: GraphicalGame) -> Graph:
    return Graph(tuple(game.players), game.edges)


def game_hypergraph(game: GraphicalGame) -> Hypergraph:
    """Hyperedge per player neighborhood, set-equal duplicates merged."""
    return Hypergraph(tuple(game.players), tuple(game.neighborhoods))


def primal_graph(h: Hypergraph) -> Graph:
    """Connect two vertices iff some hyperedge contains both."""
    edges = set()
    for he in h.hyperedges:
        for a, b in itertools.combinations(he, 2):
            edges.add((a, b))
    return Graph(h.vertices, tuple(edges))


def _is_tree(n_nodes: int, edges: Sequence[tuple[int, int]]) -> bool:
    if n_nodes == 0:
        return False
    if len(edges) != n_nodes - 1:
        return False
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n_nodes


def grahams_algorithm(h: Hypergraph) -> AcyclicityResult:
    """Decide acyclicity by GYO reduction and build a join tree on success.

    Repeatedly strips vertices occurring in exactly one live hyperedge and
    absorbs hyperedges whose remaining vertices are contained in another
    live hyperedge; acyclic iff a single empty hyperedge remains.  Each
    absorbed hyperedge is attached to its smallest-index witness, which
    makes the output deterministic for a given hyperedge ordering.
    """
    m = len(h.hyperedges)
    if m == 0:
        return AcyclicityResult(True, CliqueTree((), ()))
    members = [set(he) for he in h.hyperedges]
    occ: dict[int, set[int]] = {}
    for e, he in enumerate(h.hyperedges):
        for v in he:
            occ.setdefault(v, set()).add(e)
    live = [True] * m
    alive = m
    vertex_queue = deque(v for v in sorted(occ) if len(occ[v]) == 1)
    edge_queue = deque(range(m))
    queued = [True] * m
    parent: list[int | None] = [None] * m

    def strip_vertices() -> None:
        while vertex_queue:
            v = vertex_queue.popleft()
            owners = occ.get(v)
            if owners is None or len(owners) != 1:
                continue
            (e,) = owners
            members[e].discard(v)
            del occ[v]
            if not queued[e]:
                queued[e] = True
                edge_queue.append(e)

    strip_vertices()
    while edge_queue:
        e = edge_queue.popleft()
        queued[e] = False
        if not live[e]:
            continue
        witness: int | None = None
        if not members[e]:
            if alive > 1:
                witness = min(w for w in range(m) if live[w] and w != e)
        else:
            pivot = min(members[e], key=lambda v: (len(occ[v]), v))
            candidates = sorted(occ[pivot] - {e})
            for w in candidates:
                if members[e] <= members[w]:
                    witness = w
                    break
        if witness is None:
            continue
        live[e] = False
        alive -= 1
        parent[e] = witness
        for v in members[e]:
            owners = occ[v]
            owners.discard(e)
            if len(owners) == 1:
                vertex_queue.append(v)
        strip_vertices()

    if alive != 1:
        return AcyclicityResult(False, None)
    tree_edges = tuple((e, p) for e, p in enumerate(parent) if p is not None)
    return AcyclicityResult(True, CliqueTree(h.hyperedges, tree_edges))


def check_join_tree(tree: CliqueTree, h: Hypergraph) -> None:
    """Verify nodes are exactly the hyperedges and the path condition holds."""
    if sorted(tree.nodes) != sorted(h.hyperedges):
        raise ValueError("join tree nodes differ from the hyperedge set")
    check_clique_tree(tree)


# ---------------------------------------------------------------------------
# Triangulation


def _greedy_elimination(g: Graph, key_kind: str) -> tuple[tuple[int, ...], set[tuple[int, int]]]:
    adj = g.adjacency()

    def fill_key(v: int) -> int:
        neighbors = list(adj[v])
        missing = 0
        for i in range(len(neighbors)):
            ai = adj[neighbors[i]]
            for j in range(i + 1, len(neighbors)):
                if neighbors[j] not in ai:
                    missing += 1
        return missing

    def key_of(v: int) -> int:
        return fill_key(v) if key_kind == "fill" else len(adj[v])

    version = {v: 0 for v in g.vertices}
    heap: list[tuple[int, int, int]] = [(key_of(v), v, 0) for v in g.vertices]
    heapq.heapify(heap)
    order: list[int] = []
    fill: set[tuple[int, int]] = set()
    remaining = set(g.vertices)
    while remaining:
        k, v, ver = heapq.heappop(heap)
        if v not in remaining or ver != version[v]:
            continue
        order.append(v)
        remaining.discard(v)
        neighbors = sorted(adj[v])
        dirty: set[int] = set(neighbors)
        for i in range(len(neighbors)):
            a = neighbors[i]
            for j in range(i + 1, len(neighbors)):
                b = neighbors[j]
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
                    fill.add((a, b))
                    # a fresh edge can change fill counts two hops away
                    dirty.update(adj[a])
                    dirty.update(adj[b])
        for u in neighbors:
            adj[u].discard(v)
        del adj[v]
        for u in dirty:
            if u in remaining:
                version[u] += 1
                heapq.heappush(heap, (key_of(u), u, version[u]))
    return tuple(order), fill


def _exact_elimination(g: Graph) -> tuple[tuple[int, ...], set[tuple[int, int]]]:
    """Exhaustive elimination-order search minimizing the largest created clique."""
    vertices = list(g.vertices)
    n = len(vertices)
    index = {v: i for i, v in enumerate(vertices)}
    adj_bits = [0] * n
    for u, v in g.edges:
        adj_bits[index[u]] |= 1 << index[v]
        adj_bits[index[v]] |= 1 << index[u]
    full = (1 << n) - 1

    def reach_degree(v: int, eliminated: int) -> int:
        # vertices outside `eliminated` reachable from v through eliminated ones
        seen = 1 << v
        stack = [v]
        out = 0
        while stack:
            u = stack.pop()
            cand = adj_bits[u] & ~seen
            seen |= cand
            rest = cand
            while rest:
                low = rest & -rest
                w = low.bit_length() - 1
                rest ^= low
                if eliminated >> w & 1:
                    stack.append(w)
                else:
                    out += 1
        return out

    best: dict[int, int] = {full: 0}
    masks_by_count: list[list[int]] = [[] for _ in range(n + 1)]
    for mask in range(full + 1):
        masks_by_count[mask.bit_count()].append(mask)
    for count in range(n - 1, -1, -1):
        for mask in masks_by_count[count]:
            value = None
            rest = full & ~mask
            while rest:
                low = rest & -rest
                v = low.bit_length() - 1
                rest ^= low
                cand = max(reach_degree(v, mask), best[mask | (1 << v)])
                if value is None or cand < value:
                    value = cand
            best[mask] = value  # type: ignore[assignment]

    order_idx: list[int] = []
    mask = 0
    while mask != full:
        target = best[mask]
        for v in range(n):
            if mask >> v & 1:
                continue
            if max(reach_degree(v, mask), best[mask | (1 << v)]) == target:
                order_idx.append(v)
                mask |= 1 << v
                break
    order = tuple(vertices[i] for i in order_idx)

    adj = g.adjacency()
    fill: set[tuple[int, int]] = set()
    for v in order:
        neighbors = sorted(adj[v])
        for i in range(len(neighbors)):
            a = neighbors[i]
            for j in range(i + 1, len(neighbors)):
                b = neighbors[j]
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
                    fill.add((a, b))
        for u in neighbors:
            adj[u].discard(v)
        del adj[v]
    return order, fill


def triangulate(
    g: Graph, strategy: str = "min-fill", exact_cap: int = EXACT_SMALL_CAP
) -> tuple[Graph, tuple[int, ...]]:
    """Chordal supergraph of g plus the elimination order witnessing it.

    ``min-fill`` and ``min-degree`` are greedy with ties broken by smallest
    vertex id; ``exact-small`` searches all elimination orders (graphs of at
    most ``exact_cap`` vertices) and returns a true treewidth witness.
    """
    if strategy not in TRIANGULATION_STRATEGIES:
        raise ValueError(f"unknown triangulation strategy {strategy!r}")
    if strategy == "exact-small":
        if len(g.vertices) > exact_cap:
            raise ValueError(
                f"exact-small handles at most {exact_cap} vertices, got {len(g.vertices)}"
            )
        order, fill = _exact_elimination(g)
    else:
        order, fill = _greedy_elimination(g, "fill" if strategy == "min-fill" else "degree")
    chordal = Graph(g.vertices, g.edges + tuple(fill))
    return chordal, order


def _check_peo(g: Graph, order: Sequence[int]) -> None:
    if sorted(order) != list(g.vertices):
        raise ValueError("elimination order must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    adj = g.adjacency()
    for v in order:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        if not later:
            continue
        pivot = min(later, key=lambda u: pos[u])
        missing = [u for u in later if u != pivot and u not in adj[pivot]]
        if missing:
            raise ValueError(
                f"not a perfect elimination order: {v}'s later neighbors "
                f"{pivot} and {missing[0]} are not adjacent"
            )


def clique_tree_from_chordal(g: Graph, order: Sequence[int]) -> CliqueTree:
    """Clique tree over the maximal cliques of a chordal graph.

    Rejects inputs where ``order`` is not a perfect elimination order, which
    in particular rejects non-chordal graphs.  The tree is a maximum-weight
    spanning tree of the clique intersection graph, components joined by
    empty separators.
    """
    if not g.vertices:
        raise ValueError("cannot build a clique tree of an empty graph")
    _check_peo(g, order)
    pos = {v: i for i, v in enumerate(order)}
    adj = g.adjacency()
    candidate: dict[int, frozenset[int]] = {}
    for v in g.vertices:
        candidate[v] = frozenset([v] + [u for u in adj[v] if pos[u] > pos[v]])
    maximal: list[frozenset[int]] = []
    seen: set[frozenset[int]] = set()
    for v in order:
        c = candidate[v]
        if any(pos[u] < pos[v] and c <= candidate[u] for u in adj[v]):
            continue
        if c not in seen:
            seen.add(c)
            maximal.append(c)
    nodes = tuple(sorted(tuple(sorted(c)) for c in maximal))
    holder: dict[int, list[int]] = {}
    for i, node in enumerate(nodes):
        for v in node:
            holder.setdefault(v, []).append(i)
    pairs: dict[tuple[int, int], int] = {}
    for ids in holder.values():
        for i, j in itertools.combinations(ids, 2):
            pairs[(i, j)] = pairs.get((i, j), 0) + 1
    parent = list(range(len(nodes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges: list[tuple[int, int]] = []
    for (i, j), weight in sorted(pairs.items(), key=lambda kv: (-kv[1], kv[0])):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            edges.append((i, j))
    for i in range(1, len(nodes)):
        ri, r0 = find(i), find(0)
        if ri != r0:
            parent[ri] = r0
            edges.append((0, i))
    return CliqueTree(nodes, tuple(edges))


# ---------------------------------------------------------------------------
# Validation and lifting


def check_clique_tree(tree: CliqueTree, graph: Graph | None = None) -> None:
    """Verify the clique-tree invariants, raising on the first violation.

    The clique-intersection property is checked through its equivalent
    per-vertex connected-subtree form; pass ``graph`` to also require vertex
    and edge coverage.
    """
    if not tree.nodes:
        if graph is not None and graph.vertices:
            raise ValueError("empty tree cannot cover a nonempty graph")
        return
    if not _is_tree(len(tree.nodes), tree.edges):
        raise ValueError("clique tree edges do not form a tree")
    neighbors = tree.neighbors()
    holder: dict[int, list[int]] = {}
    for i, node in enumerate(tree.nodes):
        for v in node:
            holder.setdefault(v, []).append(i)
    for v, ids in holder.items():
        seen = {ids[0]}
        stack = [ids[0]]
        id_set = set(ids)
        while stack:
            u = stack.pop()
            for w in neighbors[u]:
                if w in id_set and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != id_set:
            raise ValueError(f"vertex {v} does not induce a connected subtree")
    if graph is not None:
        missing = set(graph.vertices) - set(holder)
        if missing:
            raise ValueError(f"vertex {min(missing)} is not covered by any node")
        node_sets = [set(c) for c in tree.nodes]
        for u, v in graph.edges:
            if not any(u in c and v in c for c in node_sets):
                raise ValueError(f"edge ({u},{v}) is not inside any node")


def check_tree_decomposition(td: TreeDecomposition, g: Graph) -> None:
    """Verify td is a valid tree decomposition of g, raising otherwise."""
    try:
        check_clique_tree(CliqueTree(td.bags, td.edges), g)
    except ValueError as exc:
        raise InvalidDecompositionError(str(exc)) from None


def lift_tree_decomposition(td: TreeDecomposition, game: GraphicalGame) -> CliqueTree:
    """Clique tree of the primal graph from a decomposition of the game graph.

    Each bag is replaced by the union of the neighborhoods of its players;
    the resulting width never exceeds (width(td)+1) * max |N(p)|.
    """
    check_tree_decomposition(td, game_graph(game))
    lifted = []
    for bag in td.bags:
        merged: set[int] = set()
        for p in bag:
            merged.update(game.neighborhood(p))
        lifted.append(tuple(sorted(merged)))
    tree = CliqueTree(tuple(lifted), td.edges)
    max_hood = max(len(game.neighborhood(p)) for p in game.players)
    bound = (td.width + 1) * max_hood
    if tree.width > bound:
        raise AssertionError(f"lifted width {tree.width} exceeds the bound {bound}")
    return tree


def validate_hypertree_decomposition(
    htd: HypertreeDecomposition, h: Hypergraph
) -> ValidationReport:
    """Check the four hypertree-decomposition conditions in their stated order.

    Returns a falsy report naming the first violated condition; tree-shape
    or unknown-hyperedge problems are malformed input and raise instead.
    """
    if not _is_tree(len(htd.chi), htd.edges):
        raise ValueError("hypertree decomposition edges do not form a tree")
    hyperedges = {he for he in h.hyperedges}
    for v, lv in enumerate(htd.lam):
        for he in lv:
            if he not in hyperedges:
                raise ValueError(f"node {v} lists {he} which is not a hyperedge")

    chi_sets = [set(c) for c in htd.chi]
    lam_unions = [set(itertools.chain.from_iterable(lv)) for lv in htd.lam]

    for he in h.hyperedges:
        if not any(set(he) <= c for c in chi_sets):
            return ValidationReport(False, 1, f"hyperedge {he} not covered by any chi")

    neighbors = htd.neighbors()
    holder: dict[int, list[int]] = {}
    for i, c in enumerate(htd.chi):
        for n in c:
            holder.setdefault(n, []).append(i)
    for n in h.vertices:
        ids = holder.get(n, [])
        if not ids:
            continue
        id_set = set(ids)
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            u = stack.pop()
            for w in neighbors[u]:
                if w in id_set and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != id_set:
            return ValidationReport(False, 2, f"vertex {n} does not induce a connected subtree")

    for v in range(len(htd.chi)):
        if not chi_sets[v] <= lam_unions[v]:
            return ValidationReport(False, 3, f"chi of node {v} is not covered by its lambda")

    # chi of the subtree under v, against the descendant condition
    children: list[list[int]] = [[] for _ in htd.chi]
    order = [htd.root]
    seen_nodes = {htd.root}
    for u in order:
        for w in neighbors[u]:
            if w not in seen_nodes:
                seen_nodes.add(w)
                children[u].append(w)
                order.append(w)
    subtree_chi = [set(c) for c in chi_sets]
    for u in reversed(order):
        for w in children[u]:
            subtree_chi[u] |= subtree_chi[w]
    for v in range(len(htd.chi)):
        if not (subtree_chi[v] & lam_unions[v]) <= chi_sets[v]:
            return ValidationReport(False, 4, f"descendant condition fails at node {v}")
    return ValidationReport(True)


def lift_hypertree_decomposition(
    htd: HypertreeDecomposition, game: GraphicalGame
) -> CliqueTree:
    """Clique tree of the primal graph from a hypertree decomposition of H(G).

    Node sets are the chi labels with directions dropped; width never
    exceeds width(htd) * max |N(p)|.
    """
    h = game_hypergraph(game)
    report = validate_hypertree_decomposition(htd, h)
    if not report:
        raise InvalidDecompositionError(
            f"condition {report.violated_condition} violated: {report.detail}"
        )
    tree = CliqueTree(htd.chi, htd.edges)
    max_hood = max(len(game.neighborhood(p)) for p in game.players)
    bound = htd.width * max_hood
    if tree.width > bound:
        raise AssertionError(f"lifted width {tree.width} exceeds the bound {bound}")
    return tree


def join_tree_as_hypertree(tree: CliqueTree, root: int = 0) -> HypertreeDecomposition:
    """View a join tree as a width-1 hypertree decomposition (chi = lambda node)."""
    return HypertreeDecomposition(
        chi=tree.nodes,
        lam=tuple((node,) for node in tree.nodes),
        edges=tree.edges,
        root=root,
    )
