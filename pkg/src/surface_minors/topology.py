"""Classification and surgery of cycles in an embedded graph.

Sides of a cycle, separating / contractible status, Int/Ext, cutting
along cycles, homotopy of cycle pairs, relative orientation, planar
flipping, and the two-face cycle construction around an interior edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .graph import Edge, Graph, GraphError, bridges_on, edge_key
from .embedding import (Dart, Embedding, EmbeddingError, FaceWalk, check_cycle,
                        _cyclic_rotations)


class TopologyError(ValueError):
    """Cycle surgery applied outside its preconditions."""


@dataclass(frozen=True)
class CycleClassification:
    """Status of a cycle in an embedding.

    ``contractible`` implies ``separating`` implies two-sided; the disk
    side names which side bounds a disk (Int) when contractible.
    """

    sidedness: str              # "one-sided" | "two-sided"
    separating: bool
    contractible: bool
    disk_side: str              # "left" | "right" | "none"


@dataclass(frozen=True)
class CutPiece:
    graph: Graph
    embedding: Embedding
    # vertex of the piece -> vertex of the original graph
    origin: dict[int, int]

    def __hash__(self):  # pragma: no cover - pieces are not dict keys
        return id(self)


@dataclass(frozen=True)
class CutResult:
    """Result of cutting along a cycle.

    For a two-sided cycle the cut graph carries two copies of it; for a
    one-sided cycle a single doubled cycle of twice the length.
    ``copies`` lists the copies as vertex tuples of the cut graph, and
    ``origin`` maps cut-graph vertices back to the original graph.
    """

    graph: Graph
    embedding: Embedding
    origin: dict[int, int]
    copies: tuple[tuple[int, ...], ...]
    left_ids: dict[int, int]    # original C-vertex -> left/first copy id
    right_ids: dict[int, int]   # original C-vertex -> right/second copy id

    def __hash__(self):  # pragma: no cover
        return id(self)

    def pieces(self) -> list[CutPiece]:
        out = []
        for comp in self.graph.components():
            sub = self.graph.subgraph(comp)
            emb = induced_embedding(self.embedding, sub)
            out.append(CutPiece(sub, emb, {v: self.origin[v] for v in comp}))
        return out


def induced_embedding(emb: Embedding, sub: Graph) -> Embedding:
    """Restrict rotations and signatures to a subgraph."""
    rotation = {}
    for v in sub.vertices:
        keep = set(sub.neighbors(v))
        rotation[v] = [w for w in emb.rot[v] if w in keep]
    signature = {e: emb.sig[e] for e in sub.edges}
    return Embedding.build(sub, rotation, signature)


def induced_genus(emb: Embedding, sub: Graph) -> int:
    """Euler genus of the induced embedding, summed per component."""
    total = 0
    for comp in sub.components():
        piece = sub.subgraph(comp)
        total += induced_embedding(emb, piece).euler_genus()
    return total


def _cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    return [edge_key(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def _normalize_on_cycle(emb: Embedding, cycle: tuple[int, ...],
                        leave_negative_last: bool = False) -> Embedding:
    """Local changes confined to V(C) making every signature on C positive
    (two-sided C), or every one positive except the closing edge
    (one-sided C with ``leave_negative_last``)."""
    l = len(cycle)
    sig = emb.sig
    want_neg = {(_cycle_edges(cycle)[l - 1]) if leave_negative_last else None}
    flips: dict[int, bool] = {cycle[0]: False}
    for i in range(1, l):
        e = edge_key(cycle[i - 1], cycle[i])
        cur = sig[e] < 0
        flips[cycle[i]] = flips[cycle[i - 1]] ^ cur ^ (e in want_neg)
    closing = edge_key(cycle[l - 1], cycle[0])
    check = flips[cycle[l - 1]] ^ flips[cycle[0]] ^ (sig[closing] < 0) ^ (closing in want_neg)
    assert not check, "cycle signature parity does not admit this normal form"
    vs = {v for v, f in flips.items() if f}
    return emb.local_change_set(vs) if vs else emb


@dataclass(frozen=True)
class CycleAnalysis:
    """classify_cycle's full output: the classification plus the data the
    other operations need (normalized embedding, per-end sides, pieces)."""

    graph: Graph
    embedding: Embedding            # original
    normalized: Embedding           # equivalent, C-positive for two-sided C
    cycle: tuple[int, ...]
    classification: CycleClassification
    # (vertex-on-C, neighbor) -> "left"/"right" for every non-C edge end
    end_side: dict[tuple[int, int], str]
    cut: CutResult | None           # None for one-sided cycles
    left_genus: int | None
    right_genus: int | None

    def __hash__(self):  # pragma: no cover
        return id(self)

    @property
    def is_contractible(self) -> bool:
        return self.classification.contractible

    def int_side(self) -> str:
        if not self.classification.contractible:
            raise TopologyError("Int/Ext: cycle is not contractible")
        return self.classification.disk_side

    def side_vertices(self, side: str) -> frozenset[int]:
        assert self.cut is not None
        root = (self.cut.left_ids if side == "left" else self.cut.right_ids)[self.cycle[0]]
        for comp in self.cut.graph.components():
            if root in comp:
                return frozenset(self.cut.origin[v] for v in comp)
        raise AssertionError("cut piece without its cycle copy")

    def side_edges(self, side: str) -> frozenset[Edge]:
        assert self.cut is not None
        ids = self.cut.left_ids if side == "left" else self.cut.right_ids
        root = ids[self.cycle[0]]
        for comp in self.cut.graph.components():
            if root in comp:
                sub = self.cut.graph.subgraph(comp)
                return frozenset(edge_key(self.cut.origin[u], self.cut.origin[v])
                                 for u, v in sub.edges)
        raise AssertionError("cut piece without its cycle copy")

    def int_subgraph(self) -> Graph:
        """Int(C) = C together with the bridges on its disk side."""
        side = self.int_side()
        edges = self.side_edges(side)
        verts = self.side_vertices(side)
        return self.graph.edge_subgraph(edges, extra_vertices=verts)

    def ext_subgraph(self) -> Graph:
        side = self.int_side()
        other = "right" if side == "left" else "left"
        edges = self.side_edges(other)
        verts = self.side_vertices(other)
        return self.graph.edge_subgraph(edges, extra_vertices=verts)

    def interior_vertices(self) -> frozenset[int]:
        """Vertices strictly inside C (in int, not on C)."""
        return self.side_vertices(self.int_side()) - set(self.cycle)

    def faces_inside(self) -> tuple[FaceWalk, ...]:
        """The faces of (G, Pi) lying strictly inside C, as walks over
        original vertex ids.  The cut cap is removed, and so is the
        degenerate disk face equal to C itself (present exactly when the
        interior is empty), so a cycle bounding a disk has no inside
        faces."""
        side = self.int_side()
        faces = [f for f in self.faces_on_side(side)
                 if not f.edge_set <= set(_cycle_edges(self.cycle))]
        return tuple(faces)

    def faces_on_side(self, side: str) -> tuple[FaceWalk, ...]:
        """Original faces whose region lies on the given side of C: the
        side piece's faces with one instance of the cut cap removed."""
        assert self.cut is not None
        ids = (self.cut.left_ids if side == "left" else self.cut.right_ids)
        root = ids[self.cycle[0]]
        for piece in self.cut.pieces():
            if root in piece.graph.vertices:
                cap = _cap_key(self.cycle, ids)
                mapped = []
                cap_dropped = False
                for w in piece.embedding.faces():
                    if not cap_dropped and w.key == cap:
                        cap_dropped = True
                        continue
                    mapped.append(FaceWalk(tuple((piece.origin[a], piece.origin[b])
                                                 for a, b in w.darts)))
                assert cap_dropped, "cut piece lost its boundary cap"
                return tuple(sorted(mapped, key=lambda f: f.key))
        raise AssertionError("cut piece without its cycle copy")


def _cap_key(cycle: tuple[int, ...], ids: dict[int, int]) -> tuple[Dart, ...]:
    seq = [ids[v] for v in cycle]
    darts = tuple((seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq)))
    return FaceWalk(darts).key


def _interval_sides(emb: Embedding, cycle: tuple[int, ...],
                    pair_at_closing: bool = True) -> dict[tuple[int, int], str]:
    """Per edge-end sides along a cycle whose signature is positive on all
    edges (or all but the closing edge).

    At the i-th cycle vertex the ends strictly between the incoming and
    the outgoing cycle edge in rotation order are on the left; the rest
    are on the right.  ``(v, w) -> side`` for every non-cycle end (v on
    C, w the neighbor)."""
    l = len(cycle)
    side: dict[tuple[int, int], str] = {}
    for i, v in enumerate(cycle):
        prev_v = cycle[(i - 1) % l]
        next_v = cycle[(i + 1) % l]
        order = emb.rot[v]
        k = len(order)
        start = order.index(prev_v)
        j = (start + 1) % k
        current = "left"
        while order[j] != prev_v:
            if order[j] == next_v:
                current = "right"
            else:
                side[(v, order[j])] = current
            j = (j + 1) % k
    return side


def classify_cycle(graph: Graph, emb: Embedding, cycle: Sequence[int],
                   outer_face: FaceWalk | None = None) -> CycleAnalysis:
    """Classify a cycle: sidedness, separating, contractible, disk side.

    Signatures on the cycle are normalized internally by local changes
    confined to its vertices (the embedding is replaced by an equivalent
    one).  For a contractible cycle in a genus-0 embedding both sides
    bound disks; the side containing the designated outer face (default:
    the lexicographically smallest facial walk) is taken as Ext.
    """
    if emb.graph != graph:
        raise TopologyError("classify_cycle: embedding is for a different graph")
    cyc = check_cycle(graph, cycle)
    if emb.cycle_signature(cyc) < 0:
        cls = CycleClassification("one-sided", False, False, "none")
        norm = _normalize_on_cycle(emb, cyc, leave_negative_last=True)
        return CycleAnalysis(graph, emb, norm, cyc, cls,
                             _interval_sides(norm, cyc), None, None, None)

    norm = _normalize_on_cycle(emb, cyc)
    end_side = _interval_sides(norm, cyc)
    cut = _cut_two_sided(norm, cyc, end_side)
    comps = cut.graph.components()
    left_root = cut.left_ids[cyc[0]]
    right_root = cut.right_ids[cyc[0]]
    separating = not any(left_root in c and right_root in c for c in comps)

    left_genus = right_genus = None
    contractible = False
    disk_side = "none"
    if separating:
        left_genus = _side_genus(cut, left_root)
        right_genus = _side_genus(cut, right_root)
        contractible = left_genus == 0 or right_genus == 0
        if contractible:
            if left_genus == 0 and right_genus == 0:
                # sphere: Ext is the side holding the outer face
                outer = outer_face.key if outer_face is not None \
                    else min(f.key for f in emb.faces())
                disk_side = _side_without_face(cut, cyc, outer)
            else:
                disk_side = "left" if left_genus == 0 else "right"
    cls = CycleClassification("two-sided", separating, contractible, disk_side)
    return CycleAnalysis(graph, emb, norm, cyc, cls, end_side, cut,
                         left_genus, right_genus)


def _side_genus(cut: CutResult, root: int) -> int:
    for piece in cut.pieces():
        if root in piece.graph.vertices:
            return sum(induced_embedding(piece.embedding, piece.graph.subgraph(c)).euler_genus()
                       for c in piece.graph.components())
    raise AssertionError("missing cut piece")


def _side_without_face(cut: CutResult, cycle: tuple[int, ...],
                       outer_key: tuple[Dart, ...]) -> str:
    """Which side is the disk (Int): the one NOT containing the outer face."""
    for side, ids in (("left", cut.left_ids), ("right", cut.right_ids)):
        root = ids[cycle[0]]
        for piece in cut.pieces():
            if root not in piece.graph.vertices:
                continue
            cap = _cap_key(cycle, ids)
            cap_dropped = False
            for w in piece.embedding.faces():
                if not cap_dropped and w.key == cap:
                    cap_dropped = True
                    continue
                mapped = FaceWalk(tuple((piece.origin[a], piece.origin[b])
                                        for a, b in w.darts))
                if mapped.key == outer_key:
                    return "right" if side == "left" else "left"
    # both sides edge-empty and the outer face is C itself: Int defaults left
    return "left"


def _cut_two_sided(norm: Embedding, cycle: tuple[int, ...],
                   end_side: dict[tuple[int, int], str]) -> CutResult:
    """Cut along a two-sided cycle with positive signatures: left ends stay
    on the original vertex ids, right ends move to fresh copies."""
    graph = norm.graph
    l = len(cycle)
    base = max(graph.vertices) + 1
    right = {v: base + i for i, v in enumerate(cycle)}
    left = {v: v for v in cycle}
    cset = set(cycle)
    cyc_edges = set(_cycle_edges(cycle))

    def end_at(v: int, w: int) -> int:
        # the id the (v, w) end attaches to in the cut graph (v on C)
        return left[v] if end_side[(v, w)] == "left" else right[v]

    vertices = list(graph.vertices) + [right[v] for v in cycle]
    edges = []
    for u, v in graph.edges:
        if (u, v) in cyc_edges:
            continue
        a, b = u, v
        if u in cset:
            a = end_at(u, v)
        if v in cset:
            b = end_at(v, u)
        edges.append((a, b))
    for i in range(l):
        u, v = cycle[i], cycle[(i + 1) % l]
        edges.append((left[u], left[v]))
        edges.append((right[u], right[v]))
    cut_graph = Graph.build(vertices, edges)

    rotation: dict[int, list[int]] = {}
    signature: dict[tuple[int, int], int] = {}
    for v in graph.vertices:
        if v not in cset:
            rotation[v] = [w if w not in cset else
                           (left[w] if end_side[(w, v)] == "left" else right[w])
                           for w in norm.rot[v]]
    for i, v in enumerate(cycle):
        prev_v = cycle[(i - 1) % l]
        next_v = cycle[(i + 1) % l]
        order = norm.rot[v]
        k = len(order)
        start = order.index(prev_v)
        seq = [order[(start + j) % k] for j in range(k)]  # starts at prev_v
        lrot: list[int] = [left[prev_v]]
        rrot: list[int] = [right[prev_v]]
        passed_next = False
        for w in seq[1:]:
            if w == next_v:
                lrot.append(left[next_v])
                rrot.append(right[next_v])
                passed_next = True
            elif not passed_next:
                lrot.append(_other_end(w, v, cset, left, right, end_side))
            else:
                rrot.append(_other_end(w, v, cset, left, right, end_side))
        rotation[left[v]] = lrot
        rotation[right[v]] = rrot

    for u, v in graph.edges:
        if (u, v) in cyc_edges:
            continue
        a, b = u, v
        if u in cset:
            a = end_at(u, v)
        if v in cset:
            b = end_at(v, u)
        signature[edge_key(a, b)] = norm.sig[(u, v)]
    for i in range(l):
        u, v = cycle[i], cycle[(i + 1) % l]
        signature[edge_key(left[u], left[v])] = 1
        signature[edge_key(right[u], right[v])] = 1

    emb = Embedding.build(cut_graph, rotation, signature)
    origin = {v: v for v in graph.vertices}
    origin.update({right[v]: v for v in cycle})
    copies = (tuple(left[v] for v in cycle), tuple(right[v] for v in cycle))
    return CutResult(cut_graph, emb, origin, copies, left, right)


def _other_end(w: int, v: int, cset: set, left: dict, right: dict,
               end_side: dict) -> int:
    """Map the neighbor w as seen from the cut copy of v."""
    if w not in cset:
        return w
    # w is another cycle vertex reached by a chord (v, w): the chord's end
    # at w goes to the side recorded for (w, v)
    return left[w] if end_side[(w, v)] == "left" else right[w]


def _cut_one_sided(norm: Embedding, cycle: tuple[int, ...],
                   end_side: dict[tuple[int, int], str]) -> CutResult:
    """Cut along a one-sided cycle normalized to a single negative closing
    edge.  The cycle is replaced by one doubled cycle of twice the length
    whose two seam edges keep the negative signature."""
    graph = norm.graph
    l = len(cycle)
    base = max(graph.vertices) + 1
    bar = {v: base + i for i, v in enumerate(cycle)}
    cset = set(cycle)
    cyc_edges = set(_cycle_edges(cycle))

    def end_at(v: int, w: int) -> int:
        return v if end_side[(v, w)] == "left" else bar[v]

    vertices = list(graph.vertices) + [bar[v] for v in cycle]
    edges = []
    for u, v in graph.edges:
        if (u, v) in cyc_edges:
            continue
        a, b = u, v
        if u in cset:
            a = end_at(u, v)
        if v in cset:
            b = end_at(v, u)
        edges.append((a, b))
    # doubled cycle: v0 e1 v1 ... v_{l-1} e_l bar0 bare1 bar1 ... bar_{l-1} bare_l v0
    for i in range(l - 1):
        edges.append((cycle[i], cycle[i + 1]))
        edges.append((bar[cycle[i]], bar[cycle[i + 1]]))
    edges.append((cycle[l - 1], bar[cycle[0]]))   # e_l seam
    edges.append((bar[cycle[l - 1]], cycle[0]))   # bar e_l seam
    cut_graph = Graph.build(vertices, edges)

    rotation: dict[int, list[int]] = {}
    signature: dict[tuple[int, int], int] = {}
    for v in graph.vertices:
        if v not in cset:
            rotation[v] = [w if w not in cset else
                           (w if end_side[(w, v)] == "left" else bar[w])
                           for w in norm.rot[v]]
    for i, v in enumerate(cycle):
        prev_v = cycle[(i - 1) % l]
        next_v = cycle[(i + 1) % l]
        order = norm.rot[v]
        k = len(order)
        start = order.index(prev_v)
        seq = [order[(start + j) % k] for j in range(k)]
        # neighbor ids on the plain copy and the barred copy of v
        if i == 0:
            plain_prev, plain_next = bar[cycle[l - 1]], cycle[1] if l > 1 else bar[cycle[l - 1]]
            bar_prev, bar_next = cycle[l - 1], bar[cycle[1]]
        elif i == l - 1:
            plain_prev, plain_next = cycle[i - 1], bar[cycle[0]]
            bar_prev, bar_next = bar[cycle[i - 1]], cycle[0]
        else:
            plain_prev, plain_next = cycle[i - 1], cycle[i + 1]
            bar_prev, bar_next = bar[cycle[i - 1]], bar[cycle[i + 1]]
        lrot: list[int] = [plain_prev]
        rrot: list[int] = [bar_prev]
        passed_next = False
        for w in seq[1:]:
            if w == next_v:
                lrot.append(plain_next)
                rrot.append(bar_next)
                passed_next = True
            elif not passed_next:
                lrot.append(_other_end_onesided(w, v, cset, bar, end_side))
            else:
                rrot.append(_other_end_onesided(w, v, cset, bar, end_side))
        rotation[v] = lrot
        rotation[bar[v]] = rrot

    for u, v in graph.edges:
        if (u, v) in cyc_edges:
            continue
        a, b = u, v
        if u in cset:
            a = end_at(u, v)
        if v in cset:
            b = end_at(v, u)
        signature[edge_key(a, b)] = norm.sig[(u, v)]
    for i in range(l - 1):
        signature[edge_key(cycle[i], cycle[i + 1])] = 1
        signature[edge_key(bar[cycle[i]], bar[cycle[i + 1]])] = 1
    signature[edge_key(cycle[l - 1], bar[cycle[0]])] = -1
    signature[edge_key(bar[cycle[l - 1]], cycle[0])] = -1

    emb = Embedding.build(cut_graph, rotation, signature)
    origin = {v: v for v in graph.vertices}
    origin.update({bar[v]: v for v in cycle})
    doubled = tuple(list(cycle) + [bar[v] for v in cycle])
    return CutResult(cut_graph, emb, origin, (doubled,),
                     {v: v for v in cycle}, bar)


def _other_end_onesided(w: int, v: int, cset: set, bar: dict,
                        end_side: dict) -> int:
    if w not in cset:
        return w
    return w if end_side[(w, v)] == "left" else bar[w]


def cut_along(graph: Graph, emb: Embedding, cycle: Sequence[int]) -> CutResult:
    """Cut the embedded graph along a cycle.

    Two-sided: the cycle is doubled, left-side ends on one copy, right on
    the other.  One-sided: the cycle is replaced by a single doubled
    cycle of twice the length.  Cutting a separating cycle splits the
    genus additively; a noncontractible nonseparating cut strictly drops
    the total genus.
    """
    analysis = classify_cycle(graph, emb, cycle)
    return cut_for_analysis(analysis)


def cut_for_analysis(analysis: CycleAnalysis) -> CutResult:
    if analysis.classification.sidedness == "two-sided":
        assert analysis.cut is not None
        return analysis.cut
    return _cut_one_sided(analysis.normalized, analysis.cycle, analysis.end_side)


def total_genus(cut: CutResult) -> int:
    return sum(piece.embedding.euler_genus() for piece in cut.pieces())


# ---------------------------------------------------------------------------
# Homotopy
# ---------------------------------------------------------------------------


def _shared_structure(graph: Graph, c1: tuple[int, ...], c2: tuple[int, ...]):
    """Components of the intersection of two cycles, each as (vertex set,
    edge set)."""
    v_shared = set(c1) & set(c2)
    e_shared = set(_cycle_edges(c1)) & set(_cycle_edges(c2))
    sub = Graph.build(v_shared, [e for e in e_shared])
    return [(comp, {e for e in e_shared if e[0] in comp and e[1] in comp})
            for comp in sub.components()]


def _is_path_component(vertices: frozenset[int], edges: set[Edge]) -> bool:
    if len(edges) != len(vertices) - 1:
        return False
    deg: dict[int, int] = {v: 0 for v in vertices}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return all(d <= 2 for d in deg.values())


def are_homotopic(graph: Graph, emb: Embedding,
                  c1: Sequence[int], c2: Sequence[int]):
    """Whether two two-sided cycles are homotopic: cutting along both
    leaves a component containing exactly one copy of each with induced
    genus 0.  Returns that component as a subgraph of the original graph
    (Int(C1 u C2)), or None.

    The cycles must be disjoint or share a single path (possibly one
    vertex); the cut of the second cycle follows the side on which it
    touches the first, so a transversal crossing is rejected.
    """
    cyc1 = check_cycle(graph, c1)
    cyc2 = check_cycle(graph, c2)
    if emb.cycle_signature(cyc1) < 0 or emb.cycle_signature(cyc2) < 0:
        raise TopologyError("are_homotopic: both cycles must be two-sided")
    if set(cyc1) == set(cyc2) and set(_cycle_edges(cyc1)) == set(_cycle_edges(cyc2)):
        raise TopologyError("are_homotopic: the cycles coincide")
    shared = _shared_structure(graph, cyc1, cyc2)
    if len(shared) > 1:
        raise TopologyError(
            f"are_homotopic: cycles share {len(shared)} separate pieces "
            f"({sorted(sorted(c) for c, _ in shared)}); allowed is one path")
    if shared and not _is_path_component(*shared[0]):
        raise TopologyError("are_homotopic: shared intersection is not a path")

    analysis1 = classify_cycle(graph, emb, cyc1)
    cut1 = cut_for_analysis(analysis1)
    lifted = _lift_cycle(cut1, analysis1, cyc2)
    if lifted is None:
        raise TopologyError("are_homotopic: cycles cross transversally")
    analysis2 = classify_cycle(cut1.graph, cut1.embedding, lifted)
    cut2 = cut_for_analysis(analysis2)
    origin = {v: cut1.origin[cut2.origin[v]] for v in cut2.graph.vertices}

    candidates = []
    for comp in cut2.graph.components():
        piece = cut2.graph.subgraph(comp)
        n1 = _count_copies(piece, cut2, cut1, cyc1)
        n2 = _count_copies2(piece, cut2, cyc2)
        if n1 == 1 and n2 == 1:
            pemb = induced_embedding(cut2.embedding, piece)
            if sum(induced_embedding(pemb, piece.subgraph(c)).euler_genus()
                   for c in piece.components()) == 0:
                candidates.append((len(pemb.faces()), piece, comp))
    if not candidates:
        return None
    candidates.sort(key=lambda t: (t[0], sorted(t[2])))
    _, piece, comp = candidates[0]
    verts = {origin[v] for v in comp}
    edges = {edge_key(origin[u], origin[v]) for u, v in piece.edges
             if origin[u] != origin[v]}
    return graph.edge_subgraph(edges, extra_vertices=verts)


def _count_copies(piece: Graph, cut2: CutResult, cut1: CutResult,
                  cyc1: tuple[int, ...]) -> int:
    """Copies of the first cycle present in a component of the second cut."""
    count = 0
    for copy in cut1.copies:
        # a copy of C1 may itself have been duplicated by the second cut;
        # count the images of this copy's cycle that survive in the piece
        count += _count_cycle_images(piece, cut2, copy)
    return count


def _count_cycle_images(piece: Graph, cut: CutResult, cycle_ids: tuple[int, ...]) -> int:
    l = len(cycle_ids)
    candidates = [[] for _ in range(l)]
    for i, v in enumerate(cycle_ids):
        for w in piece.vertices:
            if cut.origin[w] == v:
                candidates[i].append(w)
    total = 0
    for combo in itertools.product(*candidates):
        if len(set(combo)) != l:
            continue
        ok = all(piece.has_edge(combo[i], combo[(i + 1) % l]) for i in range(l))
        if ok:
            total += 1
    return total


def _count_copies2(piece: Graph, cut2: CutResult, cyc2: tuple[int, ...]) -> int:
    count = 0
    for copy in cut2.copies:
        if all(v in piece.vertices for v in copy):
            l = len(copy)
            if all(piece.has_edge(copy[i], copy[(i + 1) % l]) for i in range(l)):
                count += 1
    return count


def _lift_cycle(cut: CutResult, analysis: CycleAnalysis,
                cyc2: tuple[int, ...]) -> tuple[int, ...] | None:
    """Express the second cycle in the cut graph of the first.

    Vertices of C2 off the first cycle map to themselves.  Ends touching
    the first cycle follow their recorded side; the shared path's run of
    vertices must be entered and left on the same side, otherwise the
    cycles cross and None is returned.
    """
    cset = set(analysis.cycle)
    l = len(cyc2)
    # determine the side for each C2-vertex lying on C1
    sides: dict[int, str] = {}
    for i, v in enumerate(cyc2):
        if v not in cset:
            continue
        for j in (i - 1, i + 1):
            w = cyc2[j % l]
            if w not in cset or edge_key(v, w) not in analysis.graph.edge_set:
                continue
            if edge_key(v, w) in set(_cycle_edges(analysis.cycle)):
                continue  # shared edge: side comes from elsewhere
            # non-shared C2-edge end at v
            s = analysis.end_side.get((v, w))
            if s is not None:
                if v in sides and sides[v] != s:
                    return None
                sides[v] = s
        # C2-edges from v leaving C1 entirely
        for j in (i - 1, i + 1):
            w = cyc2[j % l]
            if w in cset:
                continue
            s = analysis.end_side.get((v, w))
            if s is not None:
                if v in sides and sides[v] != s:
                    return None
                sides[v] = s
    # propagate one side across the shared run (shared edges have no ends)
    decided = set(sides.values())
    if len(decided) > 1:
        return None
    side = decided.pop() if decided else "left"
    ids = cut.left_ids if side == "left" else cut.right_ids
    lifted = tuple(ids.get(v, v) if v in cset else v for v in cyc2)
    # validate the lift is a cycle of the cut graph
    try:
        check_cycle(cut.graph, lifted)
    except EmbeddingError:
        return None
    return lifted


# ---------------------------------------------------------------------------
# Relative orientation
# ---------------------------------------------------------------------------


def _oriented_faces(emb: Embedding) -> list[tuple[Dart, ...]]:
    """Directed facial walks of one coherent orientation of a connected
    genus-0 all-positive embedding: the traversal orbits that never flip
    the reading sense."""
    norm = emb.normalize_signatures()
    if any(s < 0 for _, s in norm.signature):
        raise TopologyError("oriented faces: embedding is not orientable")
    from .embedding import _compile
    comp = _compile(norm)
    walks = []
    edges = norm.graph.edges
    for orbit in comp.orbits():
        if all(s & 1 == 0 for s in orbit):  # states in the forward sense
            darts = []
            for s in orbit:
                d = s >> 1
                u, v = edges[d >> 1]
                darts.append((u, v) if d & 1 == 0 else (v, u))
            walks.append(tuple(darts))
    return walks


def _cycle_direction_bit(faces: list[tuple[Dart, ...]],
                         cycle_orig: tuple[int, ...],
                         origin: dict[int, int]) -> bool | None:
    """Find the cap face that is exactly the cycle and report whether its
    walk agrees with the cycle's reference direction (smallest vertex to
    its smaller neighbor)."""
    l = len(cycle_orig)
    want = set(cycle_orig)
    for walk in faces:
        mapped = [origin[a] for a, _ in walk]
        if len(walk) == l and set(mapped) == want and len(set(mapped)) == l:
            seq = tuple(mapped)
            ref = _reference_direction(cycle_orig)
            if _cyclic_rotations(seq) == _cyclic_rotations(ref):
                return True
            if _cyclic_rotations(seq) == _cyclic_rotations(tuple(reversed(ref))):
                return False
    return None


def _reference_direction(cycle: tuple[int, ...]) -> tuple[int, ...]:
    l = len(cycle)
    i = cycle.index(min(cycle))
    nxt, prv = cycle[(i + 1) % l], cycle[(i - 1) % l]
    seq = cycle[i:] + cycle[:i]
    if nxt <= prv:
        return seq
    return (seq[0],) + tuple(reversed(seq[1:]))


def _relative_orientation_bit(graph: Graph, emb: Embedding,
                              c1: tuple[int, ...], c2: tuple[int, ...]) -> bool:
    """In the genus-0 piece between the cycles, fix the global orientation
    by C1's reference walk and read off C2's induced direction."""
    region = are_homotopic(graph, emb, c1, c2)
    if region is None:
        raise TopologyError("relative orientation: cycles bound no common cylinder")
    # rebuild the cylinder piece with its two caps by cutting both cycles
    analysis1 = classify_cycle(graph, emb, c1)
    cut1 = cut_for_analysis(analysis1)
    lifted = _lift_cycle(cut1, analysis1, c2)
    assert lifted is not None
    analysis2 = classify_cycle(cut1.graph, cut1.embedding, lifted)
    cut2 = cut_for_analysis(analysis2)
    origin = {v: cut1.origin[cut2.origin[v]] for v in cut2.graph.vertices}
    best = None
    for comp in cut2.graph.components():
        piece = cut2.graph.subgraph(comp)
        if _count_copies(piece, cut2, cut1, c1) == 1 and _count_copies2(piece, cut2, c2) == 1:
            pemb = induced_embedding(cut2.embedding, piece)
            if piece.is_connected() and pemb.euler_genus() == 0:
                nf = len(pemb.faces())
                if best is None or nf < best[0]:
                    best = (nf, piece, pemb)
    if best is None:
        raise TopologyError("relative orientation: cylinder piece not found")
    _, piece, pemb = best
    faces = _oriented_faces(pemb)
    bit1 = _cycle_direction_bit(faces, c1, {v: origin[v] for v in piece.vertices})
    bit2 = _cycle_direction_bit(faces, c2, {v: origin[v] for v in piece.vertices})
    if bit1 is None or bit2 is None:
        raise TopologyError("relative orientation: cap walks not found in the piece")
    return bit1 == bit2


def same_relative_orientation(c1: Sequence[int], c2: Sequence[int],
                              emb_a: Embedding, emb_b: Embedding) -> bool:
    """Whether fixing the walk direction of the first cycle induces the
    same walk of the second cycle in both embeddings.

    The cycles must be almost disjoint and bound a common disk/cylinder
    region in each embedding (contractible pair in one, noncontractible
    homotopic in the other is the intended use; any pair for which both
    regions exist is accepted).
    """
    cyc1 = check_cycle(emb_a.graph, c1)
    cyc2 = check_cycle(emb_a.graph, c2)
    if len(set(cyc1) & set(cyc2)) > 1:
        raise TopologyError("same_relative_orientation: cycles are not almost disjoint")
    bit_a = _relative_orientation_bit(emb_a.graph, emb_a, cyc1, cyc2)
    bit_b = _relative_orientation_bit(emb_b.graph, emb_b, cyc1, cyc2)
    return bit_a == bit_b


# ---------------------------------------------------------------------------
# Planar flipping
# ---------------------------------------------------------------------------


def flip(graph: Graph, emb: Embedding, cycle: Sequence[int],
         outer_face: FaceWalk | None = None) -> Embedding:
    """Reembed the closed interior of a cycle of a 2-connected planar
    embedding mirror-wise, leaving the exterior unchanged.

    At most two cycle vertices may carry exterior edges.  Interior
    vertices get reversed rotations; at the two attach vertices only the
    interior arc of the rotation is reversed in place; signatures flip on
    the edges between moved and unmoved vertices.
    """
    if emb.euler_genus() != 0:
        raise TopologyError("flip: embedding is not planar")
    cyc = check_cycle(graph, cycle)
    analysis = classify_cycle(graph, emb, cyc, outer_face=outer_face)
    if not analysis.is_contractible:
        raise TopologyError("flip: cycle is not contractible")  # pragma: no cover
    ext = analysis.ext_subgraph()
    cyc_edges = set(_cycle_edges(cyc))
    ext_only = [e for e in ext.edges if e not in cyc_edges]
    attach = sorted({v for e in ext_only for v in e if v in set(cyc)})
    if len(attach) > 2:
        raise TopologyError(f"flip: {len(attach)} cycle vertices attach to the "
                            "exterior; at most two are allowed")
    interior = analysis.int_subgraph()
    moved = set(interior.vertices) - set(attach)
    norm = analysis.normalized

    rotation: dict[int, tuple[int, ...] | list[int]] = {}
    for v in graph.vertices:
        order = norm.rot[v]
        if v in moved:
            rotation[v] = tuple(reversed(order))
        elif v in attach:
            rotation[v] = _reverse_arc(order, v, interior, set(attach))
        else:
            rotation[v] = order
    signature = {e: (-s if (e[0] in moved) != (e[1] in moved) else s)
                 for e, s in norm.signature}
    out = Embedding.build(graph, rotation, signature)
    assert out.euler_genus() == 0, "flip failed to stay planar"
    return out


def _reverse_arc(order: tuple[int, ...], v: int, interior: Graph,
                 attach: set[int]) -> list[int]:
    """Reverse in place the contiguous run of interior-side ends at an
    attach vertex."""
    flags = [interior.has_edge(v, w) if w in interior._adj and v in interior._adj else False
             for w in order]
    k = len(order)
    if all(flags) or not any(flags):
        return list(order)
    # rotate so the run of interior ends is contiguous from index 0
    start = next(i for i in range(k) if flags[i] and not flags[(i - 1) % k])
    seq = [order[(start + j) % k] for j in range(k)]
    fl = [flags[(start + j) % k] for j in range(k)]
    run = fl.index(False)
    assert all(not f for f in fl[run:]), "interior ends not contiguous at attach vertex"
    return seq[:run][::-1] + seq[run:]


# ---------------------------------------------------------------------------
# The cycle around an interior edge
# ---------------------------------------------------------------------------


def build_Ce(graph: Graph, emb: Embedding, cycle: Sequence[int],
             e: tuple[int, int],
             outer_face: FaceWalk | None = None) -> tuple[int, ...]:
    """For an edge inside a contractible cycle, the union of its two
    incident faces minus the edge is again a contractible cycle whose
    interior is exactly that edge."""
    cyc = check_cycle(graph, cycle)
    ek = edge_key(*e)
    if ek not in graph.edge_set:
        raise TopologyError(f"build_Ce: {ek} is not an edge")
    analysis = classify_cycle(graph, emb, cyc, outer_face=outer_face)
    if not analysis.is_contractible:
        raise TopologyError("build_Ce: cycle is not contractible")
    if ek in set(_cycle_edges(cyc)):
        raise TopologyError(f"build_Ce: edge {ek} lies on the cycle itself")
    if ek not in analysis.side_edges(analysis.int_side()):
        raise TopologyError(f"build_Ce: edge {ek} is not inside the cycle")
    incident = [f for f in emb.faces() if ek in f.edge_set]
    if len(incident) != 2:
        raise TopologyError("build_Ce: edge lies on one face only; "
                            "2-connectivity assumption violated")
    f1, f2 = incident
    edges = (f1.edge_set | f2.edge_set) - {ek}
    sub = graph.edge_subgraph(edges)
    ce = _edges_as_cycle(sub)
    if ce is None:
        raise TopologyError("build_Ce: face union minus the edge is not a cycle")
    return ce


def _edges_as_cycle(sub: Graph) -> tuple[int, ...] | None:
    if sub.m != sub.n or any(sub.degree(v) != 2 for v in sub.vertices):
        return None
    if not sub.is_connected():
        return None
    start = min(sub.vertices)
    walk = [start]
    prev = None
    while True:
        cur = walk[-1]
        nxts = [w for w in sub.neighbors(cur) if w != prev]
        nxt = nxts[0] if nxts else prev
        if nxt == start:
            break
        walk.append(nxt)
        prev = cur
    return tuple(walk) if len(walk) == sub.n else None
