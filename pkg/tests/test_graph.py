import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from surface_minors.graph import (Graph, GraphError, apply_minor_op, blocks,
                                  bridges_on, contract_edge, delete_edge,
                                  delete_vertex, dedupe_isomorphic,
                                  find_separator, graph6_decode, graph6_encode,
                                  graph_from_json, graph_to_json,
                                  is_isomorphic, one_step_minors, parse_graph,
                                  separations_of_order)
from conftest import complete, complete_bipartite, cycle_graph, path_graph
from oracles import adjacency_contract, brute_force_separator


def test_build_rejects_loops_and_undeclared_endpoints():
    with pytest.raises(GraphError):
        Graph.build([0, 1], [(0, 0)])
    with pytest.raises(GraphError):
        Graph.build([0, 1], [(0, 2)])


def test_build_merges_parallel_edges():
    g = Graph.build([0, 1], [(0, 1), (1, 0)])
    assert g.m == 1


def test_contract_triangle_gives_k2():
    c3 = cycle_graph(3)
    for e in c3.edges:
        got = contract_edge(c3, *e)
        assert (got.n, got.m) == (2, 1)


def test_delete_vertex_k5_gives_k4():
    k5 = complete(5)
    for v in k5.vertices:
        assert is_isomorphic(delete_vertex(k5, v), complete(4))


def test_contract_k33_edge_matches_matrix_oracle():
    k33 = complete_bipartite(3, 3)
    e = k33.edges[0]
    got = contract_edge(k33, *e)
    assert (got.n, got.m) == (5, 8)
    assert (got.n, got.m) == adjacency_contract(k33, *e)


def test_contraction_keeps_lower_endpoint():
    g = Graph.build([3, 7, 9], [(3, 7), (7, 9)])
    got = contract_edge(g, 7, 9)
    assert set(got.vertices) == {3, 7}


def test_minor_op_missing_element_rejected():
    g = path_graph(3)
    with pytest.raises(GraphError, match="9"):
        delete_vertex(g, 9)
    with pytest.raises(GraphError, match="0, 2"):
        delete_edge(g, 0, 2)
    with pytest.raises(GraphError):
        apply_minor_op(g, ("contract-edge", (0, 2)))


def test_one_step_minors_k3_counts():
    out = one_step_minors(cycle_graph(3))
    assert len(out) == 9  # 3 vertex deletions + 3 edge deletions + 3 contractions


def test_one_step_minors_k5_dedup_three_classes():
    out = one_step_minors(complete(5), dedup=True)
    assert len(out) == 3
    kinds = sorted(op[0] for op, _ in out)
    assert kinds == ["contract-edge", "delete-edge", "delete-vertex"]


def test_one_step_minor_of_single_vertex():
    g = Graph.build([0], [])
    out = one_step_minors(g)
    assert len(out) == 1 and out[0][1].n == 0


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_minor_ops_never_grow(seed):
    rng = random.Random(seed)
    n = rng.randrange(2, 9)
    edges = {(i, rng.randrange(i)) for i in range(1, n)}
    for _ in range(rng.randrange(0, 8)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    g = Graph.build(range(n), edges)
    for op, m in one_step_minors(g):
        assert m.n <= g.n and m.m <= g.m
        assert apply_minor_op(g, op) == m


def test_blocks_two_triangles():
    g = Graph.build(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    blks, cuts = blocks(g)
    assert len(blks) == 2 and cuts == frozenset({2})


def test_blocks_k5_single():
    blks, cuts = blocks(complete(5))
    assert len(blks) == 1 and not cuts


def test_blocks_path():
    blks, cuts = blocks(path_graph(4))
    assert len(blks) == 3 and cuts == frozenset({1, 2})


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40, deadline=None)
def test_blocks_partition_edges(seed):
    rng = random.Random(seed)
    n = rng.randrange(2, 10)
    edges = {(i, rng.randrange(i)) for i in range(1, n)}
    for _ in range(rng.randrange(0, 6)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    g = Graph.build(range(n), edges)
    blks, cuts = blocks(g)
    assert sum(b.m for b in blks) == g.m
    seen = [e for b in blks for e in b.edges]
    assert sorted(seen) == sorted(g.edges)
    # cutvertices are exactly the vertices in >= 2 blocks
    counts = {}
    for b in blks:
        for v in b.vertices:
            counts[v] = counts.get(v, 0) + 1
    assert cuts == frozenset(v for v, c in counts.items() if c > 1)


def test_bridges_k4_on_triangle():
    k4 = complete(4)
    tri = k4.subgraph([0, 1, 2])
    out = bridges_on(k4, tri)
    assert len(out) == 1
    b = out[0]
    assert b.kind == "attached-component" and b.attaches == frozenset({0, 1, 2})
    assert b.body.m == 3


def test_bridges_cycle_on_itself_empty():
    c5 = cycle_graph(5)
    assert bridges_on(c5, c5) == []


def test_bridges_chord():
    g = Graph.build(range(4), [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    c4 = g.edge_subgraph([(0, 1), (1, 2), (2, 3), (0, 3)])
    out = bridges_on(g, c4)
    assert len(out) == 1 and out[0].kind == "chord-edge"
    assert out[0].attaches == frozenset({0, 2})


def test_bridges_partition_property():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randrange(3, 9)
        edges = {(i, rng.randrange(i)) for i in range(1, n)}
        for _ in range(rng.randrange(0, 8)):
            a, b = rng.randrange(n), rng.randrange(n)
            if a != b:
                edges.add((min(a, b), max(a, b)))
        g = Graph.build(range(n), edges)
        h0 = g.subgraph(rng.sample(list(g.vertices), rng.randrange(1, n)))
        out = bridges_on(g, h0)
        bridge_edges = [e for br in out for e in br.body.edges]
        assert sorted(bridge_edges) == sorted(set(g.edges) - set(h0.edges))
        for br in out:
            assert br.attaches <= set(h0.vertices)


def test_find_separator_examples():
    assert find_separator(complete(4), 2) is None  # K4 is 3-connected
    two_tri = Graph.build(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert find_separator(two_tri, 1) == frozenset({2})
    k33 = complete_bipartite(3, 3)
    assert find_separator(k33, 2) is None
    cut = find_separator(k33, 3)
    assert cut is not None and len(cut) == 3
    rest = k33.subgraph([v for v in k33.vertices if v not in cut])
    assert not rest.is_connected()


def test_find_separator_agrees_with_brute_force():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randrange(3, 9)
        edges = {(i, rng.randrange(i)) for i in range(1, n)}
        for _ in range(rng.randrange(0, 10)):
            a, b = rng.randrange(n), rng.randrange(n)
            if a != b:
                edges.add((min(a, b), max(a, b)))
        g = Graph.build(range(n), edges)
        for k in range(0, n - 1):
            mine = find_separator(g, k)
            brute = brute_force_separator(g, k)
            assert (mine is None) == (brute is None)
            if mine is not None:
                assert len(mine) <= k
                rest = g.subgraph([v for v in g.vertices if v not in mine])
                assert rest.n == 0 or not rest.is_connected()


def test_separations_of_order_two():
    # two triangles joined by two vertices: a proper 2-separation exists
    g = Graph.build(range(4), [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
    seps = separations_of_order(g, 2)
    assert seps
    for s in seps:
        assert s.order == 2
        assert set(s.side_a.vertices) | set(s.side_b.vertices) == set(g.vertices)
        assert not (s.side_a.edge_set & s.side_b.edge_set)


def test_graph6_roundtrip_known_strings():
    k5 = complete(5)
    assert graph6_encode(k5) == "D~{"
    assert graph6_decode("D~{") == k5
    k33 = complete_bipartite(3, 3)
    assert graph6_decode(graph6_encode(k33)) == k33
    assert graph6_decode(">>graph6<<D~{") == k5


def test_graph6_rejects_bad_bytes_with_offset():
    with pytest.raises(GraphError, match="offset"):
        graph6_decode("D~\x19")
    with pytest.raises(GraphError, match="truncated"):
        graph6_decode("D~")


def test_json_roundtrip():
    g = complete_bipartite(2, 3)
    assert graph_from_json(graph_to_json(g)) == g
    text = graph_to_json(g)
    assert graph_to_json(graph_from_json(text)) == text  # canonical fixed point
    assert parse_graph(text) == g
    assert parse_graph(graph6_encode(g)) == g


def test_json_preserves_nonstandard_ids():
    g = Graph.build([4, 7, 9], [(4, 7), (7, 9)])
    back = graph_from_json(graph_to_json(g))
    assert back == g


def test_dedupe_isomorphic():
    gs = [complete(4), cycle_graph(4), complete(4), path_graph(4)]
    out = dedupe_isomorphic(gs)
    assert len(out) == 3
