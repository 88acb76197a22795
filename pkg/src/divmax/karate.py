"""Zachary karate-club fixture: 34 nodes, 78 edges, two 17-member factions.

The faction labels below split the club 17/17 with exactly 10 cross-faction
edges (the low-degree member 9, whose allegiance was famously ambiguous,
sits with the instructor's faction; member 8 with the officers).
"""

import numpy as np

from .graph import Graph, Instance, build_graph

KARATE_EDGES = (
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10),
    (0, 11), (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31),
    (1, 2), (1, 3), (1, 7), (1, 13), (1, 17), (1, 19), (1, 21), (1, 30),
    (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27), (2, 28), (2, 32),
    (3, 7), (3, 12), (3, 13),
    (4, 6), (4, 10),
    (5, 6), (5, 10), (5, 16),
    (6, 16),
    (8, 30), (8, 32), (8, 33),
    (9, 33),
    (13, 33),
    (14, 32), (14, 33),
    (15, 32), (15, 33),
    (18, 32), (18, 33),
    (19, 33),
    (20, 32), (20, 33),
    (22, 32), (22, 33),
    (23, 25), (23, 27), (23, 29), (23, 32), (23, 33),
    (24, 25), (24, 27), (24, 31),
    (25, 31),
    (26, 29), (26, 33),
    (27, 33),
    (28, 31), (28, 33),
    (29, 32), (29, 33),
    (30, 32), (30, 33),
    (31, 32), (31, 33),
    (32, 33),
)

_INSTRUCTOR_SIDE = frozenset(
    {0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 16, 17, 19, 21}
)

KARATE_N = 34


def karate_graph() -> Graph:
    return build_graph([(i, j, 1.0) for i, j in KARATE_EDGES], n=KARATE_N)


def karate_exposure() -> np.ndarray:
    """Faction exposure: +1 instructor side, -1 officer side."""
    s = np.full(KARATE_N, -1.0)
    s[sorted(_INSTRUCTOR_SIDE)] = 1.0
    return s


def karate_instance(budget) -> Instance:
    """Unit-cost karate instance at the given budget."""
    g = karate_graph()
    return Instance(g, karate_exposure(), np.ones(KARATE_N), budget)
