"""Node profiling: echo chambers, degrees, PageRank, rank positions."""

import numpy as np

from divmax import build_graph, node_profile, pagerank, unit_instance
from divmax.karate import karate_graph

from conftest import random_instance


def test_triangle_profile(triangle):
    profiles = node_profile(triangle, [0])
    assert len(profiles) == 1
    p = profiles[0]
    assert p.node == 0
    assert p.echo_chamber == 1  # one same-exposure neighbor
    assert p.degree == 2


def test_star_uniform_exposure_echo_equals_degree():
    g = build_graph([(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)])
    inst = unit_instance(g, np.ones(4), budget=1.0)
    p = node_profile(inst, [0])[0]
    assert p.echo_chamber == p.degree == 3


def test_pagerank_normalization():
    for seed in range(5):
        inst = random_instance(seed, n_max=30)
        pr = pagerank(inst.graph)
        assert abs(pr.sum() - 1.0) <= 1e-8
        assert np.all(pr >= 0)
    pr = pagerank(karate_graph())
    assert abs(pr.sum() - 1.0) <= 1e-8
    # the two club hubs dominate
    assert set(np.argsort(-pr)[:2]) == {0, 33}


def test_pagerank_handles_isolated_nodes():
    g = build_graph([(0, 1, 1.0)], n=3)  # node 2 dangling
    pr = pagerank(g)
    assert abs(pr.sum() - 1.0) <= 1e-8
    assert pr[2] > 0


def test_ranks_are_competition_style(triangle):
    profiles = node_profile(triangle, [0, 1, 2])
    by_node = {p.node: p for p in profiles}
    # nodes 0 and 1 have one same-exposure neighbor; node 2 has none
    assert by_node[0].echo_rank == by_node[1].echo_rank == 1
    assert by_node[2].echo_rank == 3
    assert by_node[0].degree_rank == 1  # all degrees equal -> shared rank 1
    assert by_node[2].degree_rank == 1


def test_profiles_in_ascending_node_order(triangle):
    profiles = node_profile(triangle, [2, 0])
    assert [p.node for p in profiles] == [0, 2]
