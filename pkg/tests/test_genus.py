import random

import pytest

from surface_minors.graph import Graph, GraphError, one_step_minors
from surface_minors.genus_search import (BudgetExceeded, GenusProfile, Surface,
                                         cached_profile, combined_minima,
                                         embeddable_in, genus_via_blocks,
                                         min_euler_genus)
from conftest import complete, complete_bipartite, cycle_graph, path_graph, wheel
from oracles import connected_graphs_up_to, unpruned_min_genus


def test_k5_profile():
    prof = min_euler_genus(complete(5))
    assert (prof.orientable_min, prof.nonorientable_min) == (2, 1)
    assert prof.orientable_witness.euler_genus() == 2
    assert prof.nonorientable_witness.euler_genus() == 1
    assert not prof.nonorientable_witness.is_orientable()
    assert prof.exact


def test_k33_profile():
    prof = min_euler_genus(complete_bipartite(3, 3))
    assert (prof.orientable_min, prof.nonorientable_min) == (2, 1)


def test_tree_profile():
    prof = min_euler_genus(path_graph(5))
    assert (prof.orientable_min, prof.nonorientable_min) == (0, None)


def test_requires_connected():
    g = Graph.build(range(4), [(0, 1), (2, 3)])
    with pytest.raises(GraphError):
        min_euler_genus(g)


def test_budget_gives_inexact_result():
    prof = min_euler_genus(complete(5), budget=50)
    assert not prof.exact
    assert prof.orientable_witness.euler_genus() == prof.orientable_min


def test_sanity_nonorientable_at_most_orientable_plus_one():
    for g in connected_graphs_up_to(6):
        prof = cached_profile(g)
        if prof.nonorientable_min is not None:
            assert prof.nonorientable_min <= prof.orientable_min + 1


def test_minor_monotonicity_random_small():
    rng = random.Random(23)
    graphs = [g for g in connected_graphs_up_to(7) if g.m >= 2]
    for g in rng.sample(graphs, 12):
        base = cached_profile(g).overall_min
        for op, m in one_step_minors(g, dedup=True):
            for comp in m.components():
                sub = m.subgraph(comp)
                assert cached_profile(sub).overall_min <= base


def test_embeddable_examples():
    k5 = complete(5)
    assert embeddable_in(k5, Surface(0, True)).embeddable is False
    dec = embeddable_in(k5, Surface(1, False))
    assert dec.embeddable is True
    assert dec.witness[0].euler_genus() == 1
    # planar graphs embed everywhere
    for surface in (Surface(0, True), Surface(2, True), Surface(1, False),
                    Surface(3, False)):
        assert embeddable_in(path_graph(4), surface).embeddable is True
        assert embeddable_in(wheel(5), surface).embeddable is True


def test_embeddable_orientable_exact_genus_only():
    # K5 needs orientable Euler genus 2: the torus works, the sphere does not
    k5 = complete(5)
    assert embeddable_in(k5, Surface(2, True)).embeddable is True
    # nonorientable target genus 2 also accommodates it (crosscap number 1)
    assert embeddable_in(k5, Surface(2, False)).embeddable is True


def test_forest_nonorientable_combination():
    # forests have no nonorientable embedding yet embed in every surface
    star = Graph.build(range(5), [(0, i) for i in range(1, 5)])
    prof = min_euler_genus(star)
    assert prof.nonorientable_min is None
    assert embeddable_in(star, Surface(1, False)).embeddable is True


def test_disconnected_combination_rule():
    k33 = complete_bipartite(3, 3)
    two = Graph.build(range(12),
                      list(k33.edges) + [(u + 6, v + 6) for u, v in k33.edges])
    assert combined_minima(two) == (4, 3)
    assert embeddable_in(two, Surface(1, False)).embeddable is False
    assert embeddable_in(two, Surface(3, False)).embeddable is True
    assert embeddable_in(two, Surface(4, True)).embeddable is True
    assert embeddable_in(two, Surface(2, True)).embeddable is False


def test_genus_via_blocks_examples():
    k5 = complete(5)
    # two K5 blocks sharing a cutvertex
    kk = Graph.build(range(9), list(k5.edges)
                     + [(a, b) for a in (0, 5, 6, 7, 8) for b in (0, 5, 6, 7, 8) if a < b])
    assert genus_via_blocks(kk) == 2
    # a 2-connected graph equals the direct search
    assert genus_via_blocks(k5) == cached_profile(k5).overall_min == 1
    # pendant path contributes nothing
    k5_tail = Graph.build(range(7), list(k5.edges) + [(4, 5), (5, 6)])
    assert genus_via_blocks(k5_tail) == 1
    assert cached_profile(k5_tail).overall_min == 1


def test_block_additivity_exhaustive_small():
    for g in connected_graphs_up_to(6):
        if not g.is_connected():
            continue
        assert genus_via_blocks(g) == cached_profile(g).overall_min


def test_against_unpruned_oracle_spot():
    rng = random.Random(31)
    graphs = connected_graphs_up_to(7)
    for g in rng.sample(list(graphs), 25):
        om, nm = unpruned_min_genus(g)
        prof = cached_profile(g)
        assert (prof.orientable_min, prof.nonorientable_min) == (om, nm)


def test_surface_validation():
    with pytest.raises(ValueError):
        Surface(1, True)
    with pytest.raises(ValueError):
        Surface(0, False)
    assert str(Surface.parse("2:orientable")) == "2:orientable"
    with pytest.raises(ValueError):
        Surface.parse("2")
