"""Node-level profiling of selected nodes: echo chamber, degree, PageRank.

A node's echo chamber is the number of neighbors sharing its exposure.
Ranks are competition-style over all n nodes (rank 1 = largest value; ties
share a rank).
"""

from dataclasses import dataclass

import numpy as np

from .graph import FlipSet, Graph, Instance


@dataclass
class NodeProfile:
    node: int
    echo_chamber: int
    degree: int
    pagerank: float
    echo_rank: int
    degree_rank: int
    pagerank_rank: int


def pagerank(graph: Graph, damping: float = 0.85, tol: float = 1e-10,
             max_iters: int = 10000) -> np.ndarray:
    """Power-iteration PageRank on edge weights; sums to 1 within 1e-8.

    Dangling nodes spread their mass uniformly.
    """
    n = graph.n
    if n == 0:
        return np.zeros(0)
    A = graph.adjacency
    out = np.asarray(A.sum(axis=1)).ravel()
    dangling = out == 0.0
    inv_out = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, out))
    p = np.full(n, 1.0 / n)
    for _ in range(max_iters):
        spread = A.T @ (p * inv_out)
        spread += p[dangling].sum() / n
        new = (1.0 - damping) / n + damping * spread
        if np.abs(new - p).sum() < tol:
            p = new
            break
        p = new
    return p / p.sum()


def _competition_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(-values, kind="stable")
    ranks = np.empty(values.size, dtype=np.int64)
    rank = 0
    prev = None
    for position, idx in enumerate(order, start=1):
        if prev is None or values[idx] != prev:
            rank = position
            prev = values[idx]
        ranks[idx] = rank
    return ranks


def node_profile(inst: Instance, selection) -> list:
    """Profiles for the selected nodes, in ascending node order."""
    if isinstance(selection, FlipSet):
        indices = selection.indices
    else:
        indices = tuple(sorted(int(i) for i in selection))
    adj = inst.graph.adjacency
    s = inst.exposure
    n = inst.n
    degree = np.diff(adj.indptr)
    echo = np.zeros(n, dtype=np.int64)
    for i in range(n):
        nbrs = adj.indices[adj.indptr[i]:adj.indptr[i + 1]]
        echo[i] = int(np.sum(s[nbrs] == s[i]))
    pr = pagerank(inst.graph)
    echo_rank = _competition_ranks(echo.astype(float))
    degree_rank = _competition_ranks(degree.astype(float))
    pr_rank = _competition_ranks(pr)
    return [
        NodeProfile(
            node=int(i),
            echo_chamber=int(echo[i]),
            degree=int(degree[i]),
            pagerank=float(pr[i]),
            echo_rank=int(echo_rank[i]),
            degree_rank=int(degree_rank[i]),
            pagerank_rank=int(pr_rank[i]),
        )
        for i in indices
    ]
