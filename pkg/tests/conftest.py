import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from surface_minors.graph import Graph
from surface_minors.embedding import Embedding


def complete(n: int) -> Graph:
    return Graph.build(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.build(range(a + b), [(i, a + j) for i in range(a) for j in range(b)])


def cycle_graph(n: int) -> Graph:
    return Graph.build(range(n), [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.build(range(n), [(i, i + 1) for i in range(n - 1)])


def wheel(rim: int) -> Graph:
    return Graph.build(range(rim + 1), [(0, i) for i in range(1, rim + 1)]
                       + [(i, i % rim + 1) for i in range(1, rim + 1)])


def rotations_from_positions(g: Graph, pos: dict) -> dict:
    """Planar rotation system read off from straight-line coordinates."""
    return {v: tuple(sorted(g.neighbors(v),
                            key=lambda w: math.atan2(pos[w][1] - pos[v][1],
                                                     pos[w][0] - pos[v][0])))
            for v in g.vertices}


def planar_embedding(g: Graph) -> Embedding:
    """Some planar rotation system (the graph must be planar)."""
    import networkx as nx
    ok, pe = nx.check_planarity(g.to_nx())
    assert ok, "graph is not planar"
    return Embedding.build(g, rotation={v: list(pe.neighbors_cw_order(v))
                                        for v in g.vertices})


def torus_grid(rows: int, cols: int):
    def vid(i, j):
        return cols * (i % rows) + (j % cols)
    edges = set()
    for i in range(rows):
        for j in range(cols):
            edges.add(tuple(sorted((vid(i, j), vid(i + 1, j)))))
            edges.add(tuple(sorted((vid(i, j), vid(i, j + 1)))))
    g = Graph.build(range(rows * cols), edges)
    rot = {vid(i, j): [vid(i - 1, j), vid(i, j + 1), vid(i + 1, j), vid(i, j - 1)]
           for i in range(rows) for j in range(cols)}
    return g, Embedding.build(g, rotation=rot)


@pytest.fixture(scope="session")
def small_graph_zoo():
    return {
        "K4": complete(4),
        "K5": complete(5),
        "K33": complete_bipartite(3, 3),
        "C5": cycle_graph(5),
        "P4": path_graph(4),
        "W5": wheel(5),
    }
