"""Tree decompositions, exact treewidth, and balanced 1-separations.

The balanced machinery follows the classic balanced-separator theorem:
every tree decomposition has a node t0 and a split of the tree into two
subtrees meeting only at t0 whose bag unions (outside the t0 bag) both
hold between a third and two thirds of the remaining vertices.  Splits
iterate into a 1-separation sequence: k parts with pairwise weight ratio
at most 3 and per-part boundary at most floor(log_{4/3} 3k) nodes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

from .graph import Edge, Graph, GraphError, edge_key


class TreeDecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    tree: Graph
    bags: tuple[tuple[int, tuple[int, ...]], ...]  # (tree node, sorted bag)

    @staticmethod
    def build(tree: Graph, bags) -> "TreeDecomposition":
        bag_map = {int(t): tuple(sorted(set(b))) for t, b in dict(bags).items()}
        if set(bag_map) != set(tree.vertices):
            raise TreeDecompositionError("bags must be indexed exactly by tree nodes")
        return TreeDecomposition(tree, tuple(sorted(bag_map.items())))

    @cached_property
    def bag(self) -> dict[int, tuple[int, ...]]:
        return dict(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for _, b in self.bags), default=1) - 1

    def weight(self, nodes) -> int:
        """Number of distinct vertices in the bags of the given tree nodes."""
        out: set[int] = set()
        for t in nodes:
            out.update(self.bag[t])
        return len(out)

    def to_json_obj(self) -> dict:
        return {"tree_edges": [list(e) for e in self.tree.edges],
                "bags": {str(t): list(b) for t, b in self.bags}}

    @staticmethod
    def from_json_obj(obj: dict) -> "TreeDecomposition":
        bags = {int(t): b for t, b in obj["bags"].items()}
        tree = Graph.build(bags.keys(), obj["tree_edges"])
        return TreeDecomposition.build(tree, bags)


def validate(graph: Graph, td: TreeDecomposition) -> tuple[bool, str | None]:
    """Check the three tree-decomposition axioms; on failure name the
    violated one."""
    if td.tree.n and not td.tree.is_connected():
        return False, "tree is not connected"
    if td.tree.m != max(td.tree.n - 1, 0):
        return False, "tree has a cycle"
    covered = set()
    for _, b in td.bags:
        covered.update(b)
    if covered != set(graph.vertices):
        return False, "axiom 1: bag union does not cover the vertex set"
    for u, v in graph.edges:
        if not any(u in b and v in b for _, b in td.bags):
            return False, f"axiom 2: edge ({u}, {v}) is in no bag"
    # axiom 3 (running intersection): the nodes holding each vertex form a subtree
    for x in covered:
        holders = [t for t, b in td.bags if x in b]
        sub = td.tree.subgraph(holders)
        if not sub.is_connected():
            return False, f"axiom 3: bags containing {x} are not connected in the tree"
    return True, None


# ---------------------------------------------------------------------------
# Computing decompositions
# ---------------------------------------------------------------------------


def _fill_neighbors(adj: dict[int, set[int]], v: int) -> int:
    nbrs = adj[v]
    missing = 0
    for a, b in itertools.combinations(nbrs, 2):
        if b not in adj[a]:
            missing += 1
    return missing


def _eliminate(adj: dict[int, set[int]], v: int):
    nbrs = adj.pop(v)
    for a in nbrs:
        adj[a] |= nbrs - {a}
        adj[a].discard(v)


def _decomposition_from_order(graph: Graph, order: list[int]) -> TreeDecomposition:
    """Standard construction: bag(v) = v plus its fill-graph neighbors at
    elimination time; bag(v) hangs off the bag of its first-eliminated
    fill neighbor."""
    adj = {v: set(graph.neighbors(v)) for v in graph.vertices}
    position = {v: i for i, v in enumerate(order)}
    bags: dict[int, tuple[int, ...]] = {}
    parents: dict[int, int] = {}
    for i, v in enumerate(order):
        nbrs = set(adj[v])
        bags[i] = tuple(sorted(nbrs | {v}))
        if nbrs:
            parent = min(nbrs, key=lambda w: position[w])
            parents[i] = position[parent]
        _eliminate(adj, v)
    edges = [(child, parent) for child, parent in parents.items()]
    if not bags:
        bags[0] = ()
    # connect any forest pieces (disconnected graphs) arbitrarily in order
    tree = Graph.build(bags.keys(), edges)
    comps = tree.components()
    extra = []
    roots = sorted(min(c) for c in comps)
    for a, b in zip(roots, roots[1:]):
        extra.append((a, b))
    tree = Graph.build(bags.keys(), list(tree.edges) + extra)
    return TreeDecomposition.build(tree, bags)


def min_fill_order(graph: Graph) -> list[int]:
    adj = {v: set(graph.neighbors(v)) for v in graph.vertices}
    order = []
    while adj:
        v = min(adj, key=lambda u: (_fill_neighbors(adj, u), len(adj[u]), u))
        order.append(v)
        _eliminate(adj, v)
    return order


def _exact_treewidth_order(graph: Graph) -> list[int]:
    """Exact elimination order by dynamic programming over vertex subsets
    (the Bodlaender-Fomin-Koster-Kratsch-Thilikos recurrence).  Feasible
    to around 20 vertices."""
    vertices = list(graph.vertices)
    n = len(vertices)
    pos = {v: i for i, v in enumerate(vertices)}
    adj_bits = [0] * n
    for u, v in graph.edges:
        adj_bits[pos[u]] |= 1 << pos[v]
        adj_bits[pos[v]] |= 1 << pos[u]
    full = (1 << n) - 1

    def cost_of(v: int, eliminated: int) -> int:
        # neighbors of v in the fill graph after eliminating `eliminated`:
        # vertices reachable from v through eliminated vertices
        seen = 1 << v
        stack = [v]
        nbrs = 0
        while stack:
            u = stack.pop()
            cand = adj_bits[u] & ~seen
            seen |= cand
            direct = cand & ~eliminated
            nbrs |= direct
            through = cand & eliminated
            while through:
                w = (through & -through).bit_length() - 1
                stack.append(w)
                through &= through - 1
        return bin(nbrs).count("1")

    best: dict[int, int] = {0: 0}
    choice: dict[int, int] = {}
    # iterate subsets by popcount so predecessors exist
    by_count: list[list[int]] = [[] for _ in range(n + 1)]
    for s in range(1 << n):
        by_count[bin(s).count('1')].append(s)
    for size in range(1, n + 1):
        for s in by_count[size]:
            val = None
            pick = -1
            rest = s
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                prev = best[s & ~(1 << v)]
                c = max(prev, cost_of(v, s & ~(1 << v)))
                if val is None or c < val:
                    val, pick = c, v
            best[s] = val
            choice[s] = pick
    order_idx = []
    s = full
    while s:
        v = choice[s]
        order_idx.append(v)
        s &= ~(1 << v)
    order_idx.reverse()
    return [vertices[i] for i in order_idx]


EXACT_VERTEX_CAP = 25


def compute_tree_decomposition(graph: Graph, mode: str = "exact") -> tuple[TreeDecomposition, bool]:
    """A valid tree decomposition; (decomposition, is_exact).

    Exact mode minimizes width by subset DP and is capped at
    ``EXACT_VERTEX_CAP`` vertices; beyond the cap (or in heuristic mode)
    a min-fill-in ordering is used and only validity is guaranteed.
    """
    if mode not in ("exact", "heuristic"):
        raise TreeDecompositionError(f"unknown mode {mode!r}")
    if graph.n == 0:
        td = TreeDecomposition.build(Graph.build([0], []), {0: ()})
        return td, True
    if mode == "exact" and graph.n <= EXACT_VERTEX_CAP:
        order = _exact_treewidth_order(graph)
        exact = True
    else:
        order = min_fill_order(graph)
        exact = False
    td = _decomposition_from_order(graph, order)
    ok, why = validate(graph, td)
    assert ok, f"constructed decomposition failed validation: {why}"
    return td, exact


# ---------------------------------------------------------------------------
# Balanced separations
# ---------------------------------------------------------------------------


def _branches(tree: Graph, t0: int) -> list[list[int]]:
    """Node sets of the components of tree - t0."""
    rest = tree.subgraph([t for t in tree.vertices if t != t0])
    return [sorted(c) for c in rest.components()]


def balanced_1_separation(td: TreeDecomposition) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Subtrees (T1, T2) overlapping exactly in a node t0 with both bag
    unions minus the t0 bag weighing in [1/3, 2/3] of |V(H) - V_t0|.

    Scans candidate nodes in id order and groups branches greedily;
    deterministic.  The balanced separator theorem guarantees a feasible
    node exists.
    """
    tree = td.tree
    if tree.n == 1:
        t0 = tree.vertices[0]
        return (t0,), (t0,), t0
    all_vertices: set[int] = set()
    for _, b in td.bags:
        all_vertices.update(b)
    for t0 in tree.vertices:
        bag0 = set(td.bag[t0])
        branches = _branches(tree, t0)
        weights = []
        for br in branches:
            w: set[int] = set()
            for t in br:
                w.update(td.bag[t])
            weights.append(len(w - bag0))
        total = len(all_vertices - bag0)
        if total == 0:
            group = branches[:len(branches) // 2] or []
            t1 = tuple(sorted({t0} | {t for br in group for t in br}))
            t2 = tuple(sorted(set(tree.vertices) - set(t1) | {t0}))
            return t1, t2, t0
        lo = (total + 2) // 3          # ceil(total/3)
        hi = (2 * total) // 3          # floor(2 total/3)
        if any(w > hi for w in weights):
            continue
        # greedy: add branches heaviest-first until reaching lo
        idx = sorted(range(len(branches)), key=lambda i: -weights[i])
        acc = 0
        group = []
        for i in idx:
            if acc >= lo:
                break
            acc += weights[i]
            group.append(i)
        if not (lo <= acc <= hi):
            continue
        side1 = {t0} | {t for i in group for t in branches[i]}
        side2 = {t0} | {t for i in range(len(branches)) if i not in group
                        for t in branches[i]}
        return tuple(sorted(side1)), tuple(sorted(side2)), t0
    raise AssertionError("no balanced 1-separation found; theorem violated")


@dataclass(frozen=True)
class SeparationSequence:
    """Subtrees T_1..T_k covering the decomposition tree, pairwise sharing
    at most one node, with balanced bag weights."""

    td: TreeDecomposition
    parts: tuple[tuple[int, ...], ...]

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(self.td.weight(p) for p in self.parts)

    def boundary_sizes(self) -> tuple[int, ...]:
        out = []
        for i, p in enumerate(self.parts):
            others = set()
            for j, q in enumerate(self.parts):
                if j != i:
                    others.update(q)
            out.append(len(set(p) & others))
        return tuple(out)

    def pairwise_intersections_ok(self) -> bool:
        return all(len(set(a) & set(b)) <= 1
                   for a, b in itertools.combinations(self.parts, 2))


def balanced_separation_sequence(graph: Graph, td: TreeDecomposition,
                                 k: int) -> SeparationSequence:
    """Split the decomposition tree into k parts with pairwise weight
    ratio at most 3 and per-part boundary at most floor(log_{4/3} 3k).

    Requires every bag to hold at most |V(G)|/(4k) vertices.  Follows the
    inductive construction: repeatedly split the heaviest part with a
    balanced 1-separation.
    """
    if k < 1:
        raise TreeDecompositionError("k must be at least 1")
    nv = graph.n
    for t, b in td.bags:
        if len(b) * 4 * k > nv:
            raise TreeDecompositionError(
                f"hypothesis violated: bag {t} has {len(b)} > |V|/(4k) "
                f"= {nv}/(4*{k}) vertices")
    parts: list[tuple[int, ...]] = [tuple(td.tree.vertices)]
    while len(parts) < k:
        parts.sort(key=lambda p: (td.weight(p), p))
        heavy = parts.pop()
        sub_tree = td.tree.subgraph(heavy)
        sub_td = TreeDecomposition.build(sub_tree, {t: td.bag[t] for t in heavy})
        t1, t2, _ = balanced_1_separation(sub_td)
        parts.append(t1)
        parts.append(t2)
    seq = SeparationSequence(td, tuple(sorted(parts)))
    limit = math.floor(math.log(3 * k) / math.log(4 / 3))
    weights = seq.weights
    assert all(wa <= 3 * wb for wa in weights for wb in weights), \
        "weight ratio property violated"
    assert all(b <= limit for b in seq.boundary_sizes()), \
        "boundary size property violated"
    assert seq.pairwise_intersections_ok(), "parts share more than one node"
    return seq
