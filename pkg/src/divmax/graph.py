"""Graph representation, the diversity index, exposure flips, and the flip objective.

The diversity index of a graph under a +/-1 exposure vector s is

    eta(G, s) = sum over edges (i,j) of w_ij (s_i - s_j)^2 = s' L s,

with L the graph Laplacian.  Flipping the exposure of a node set x changes
eta by exactly 4 * x' P x, where P is the sparse symmetric objective matrix
built by :func:`build_objective`.  All solvers in this package maximize
x' P x subject to a knapsack constraint on x.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import (
    DuplicateEdgeError,
    IndexOutOfRangeError,
    LengthMismatchError,
    NonBinaryExposureError,
    SelfLoopError,
)


class Graph:
    """Undirected weighted graph over dense node indices [0, n).

    Edges are stored once with i < j; the adjacency matrix is symmetric by
    construction.  Instances are immutable after construction and safe to
    share across threads.  Use :func:`build_graph` rather than calling the
    constructor with unvalidated data.
    """

    def __init__(self, n, edge_i, edge_j, edge_w):
        self.n = int(n)
        self.edge_i = np.asarray(edge_i, dtype=np.int64)
        self.edge_j = np.asarray(edge_j, dtype=np.int64)
        self.edge_w = np.asarray(edge_w, dtype=np.float64)
        rows = np.concatenate([self.edge_i, self.edge_j])
        cols = np.concatenate([self.edge_j, self.edge_i])
        data = np.concatenate([self.edge_w, self.edge_w])
        self.adjacency = sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))
        self.degrees = np.asarray(self.adjacency.sum(axis=1)).ravel()

    @property
    def edge_count(self) -> int:
        return self.edge_i.size

    @property
    def total_abs_weight(self) -> float:
        return float(np.abs(self.edge_w).sum())

    def laplacian(self) -> sp.csr_matrix:
        return (sp.diags(self.degrees) - self.adjacency).tocsr()

    def edges(self):
        """Iterate (i, j, w) triples with i < j."""
        return zip(self.edge_i.tolist(), self.edge_j.tolist(), self.edge_w.tolist())

    def tolerance(self) -> float:
        """Absolute comparison tolerance scaled by the total edge weight."""
        return 1e-9 * (1.0 + self.total_abs_weight)


def build_graph(triples, n=None) -> Graph:
    """Build a validated Graph from (i, j, w) triples.

    Rejects self loops, duplicate pairs (in either orientation), and indices
    outside [0, n).  When n is omitted it is inferred as max index + 1.
    """
    ei, ej, ew = [], [], []
    seen = set()
    for t in triples:
        if len(t) == 2:
            i, j = t
            w = 1.0
        else:
            i, j, w = t
        i, j = int(i), int(j)
        if i == j:
            raise SelfLoopError(f"self loop at node {i}")
        if i > j:
            i, j = j, i
        if (i, j) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({i}, {j})")
        seen.add((i, j))
        if i < 0:
            raise IndexOutOfRangeError(f"negative node index {i}")
        ei.append(i)
        ej.append(j)
        ew.append(float(w))
    max_idx = max(ej) if ej else -1
    if n is None:
        n = max_idx + 1
    elif max_idx >= n:
        raise IndexOutOfRangeError(f"node index {max_idx} >= n = {n}")
    return Graph(n, ei, ej, ew)


def check_exposure(exposure, n) -> np.ndarray:
    """Validate and return a +/-1 exposure vector of length n."""
    s = np.asarray(exposure, dtype=np.float64)
    if s.shape != (n,):
        raise LengthMismatchError(f"exposure has shape {s.shape}, expected ({n},)")
    bad = np.flatnonzero(np.abs(s) != 1.0)
    if bad.size:
        raise NonBinaryExposureError(f"exposure[{bad[0]}] = {s[bad[0]]} is not +/-1")
    return s


def diversity_index(graph: Graph, exposure, normalized: bool = False) -> float:
    """eta(G, s): total weighted disagreement across edges.

    With +/-1 exposures each cross-exposure edge contributes 4 w_ij; pass
    normalized=True to divide by 4 (the convention used in reports, where
    the index counts cross edges on unit-weight graphs).
    """
    s = np.asarray(exposure, dtype=np.float64)
    if s.shape != (graph.n,):
        raise LengthMismatchError(f"exposure has shape {s.shape}, expected ({graph.n},)")
    diff = s[graph.edge_i] - s[graph.edge_j]
    eta = float(np.dot(graph.edge_w, diff * diff))
    return eta / 4.0 if normalized else eta


def apply_flips(exposure, flips) -> np.ndarray:
    """Return y with y_i = -s_i for flipped nodes, s_i elsewhere."""
    s = np.asarray(exposure, dtype=np.float64)
    idx = _as_indices(flips)
    if idx.size:
        if idx.min() < 0 or idx.max() >= s.size:
            raise IndexOutOfRangeError("flip index outside [0, n)")
    y = s.copy()
    y[idx] = -y[idx]
    return y


def _as_indices(flips) -> np.ndarray:
    if isinstance(flips, FlipSet):
        return np.asarray(flips.indices, dtype=np.int64)
    return np.asarray(sorted(int(i) for i in flips), dtype=np.int64)


class ObjectiveMatrix:
    """The sparse symmetric quadratic form P driving all solvers.

    Off-diagonal pattern equals the edge pattern with P_ij = -s_i w_ij s_j;
    the diagonal P_ii = sum_j w_ij s_i s_j is stored densely, as is the
    companion vector q (the degree minus the diagonal).  x' P x equals one
    quarter of the diversity-index change obtained by flipping x.
    """

    def __init__(self, diag, q, offdiag: sp.csr_matrix, scale: float):
        self.diag = np.asarray(diag, dtype=np.float64)
        self.q = np.asarray(q, dtype=np.float64)
        self.offdiag = offdiag.tocsr()
        self.scale = float(scale)
        self._csr = None

    @property
    def n(self) -> int:
        return self.diag.size

    def row(self, i):
        """Off-diagonal entries of row i as (column indices, values)."""
        lo, hi = self.offdiag.indptr[i], self.offdiag.indptr[i + 1]
        return self.offdiag.indices[lo:hi], self.offdiag.data[lo:hi]

    def as_csr(self) -> sp.csr_matrix:
        """Full matrix (diagonal included) for sparse matvecs; cached."""
        if self._csr is None:
            self._csr = (self.offdiag + sp.diags(self.diag)).tocsr()
        return self._csr

    def dense(self) -> np.ndarray:
        return self.offdiag.toarray() + np.diag(self.diag)

    def value(self, indices) -> float:
        """x' P x for the selection given by indices, computed from scratch."""
        idx = np.asarray(sorted(set(int(i) for i in indices)), dtype=np.int64)
        if idx.size == 0:
            return 0.0
        if idx[0] < 0 or idx[-1] >= self.n:
            raise IndexOutOfRangeError("selection index outside [0, n)")
        total = float(self.diag[idx].sum())
        member = np.zeros(self.n, dtype=bool)
        member[idx] = True
        for i in idx.tolist():
            cols, vals = self.row(i)
            total += float(vals[member[cols]].sum())
        return total

    def adjacency_lists(self):
        """Plain-Python adjacency [(j, P_ij), ...] per node, for tight loops."""
        out = []
        for i in range(self.n):
            cols, vals = self.row(i)
            out.append(list(zip(cols.tolist(), vals.tolist())))
        return out

    def tolerance(self) -> float:
        return 1e-9 * (1.0 + self.scale)


def build_objective(graph: Graph, exposure) -> ObjectiveMatrix:
    """Construct P (and q) for the given graph and exposure vector."""
    s = check_exposure(exposure, graph.n)
    a = graph.adjacency.tocoo()
    offdata = -s[a.row] * a.data * s[a.col]
    offdiag = sp.csr_matrix((offdata, (a.row, a.col)), shape=(graph.n, graph.n))
    diag = s * (graph.adjacency @ s)
    q = graph.degrees - diag
    return ObjectiveMatrix(diag, q, offdiag, graph.total_abs_weight)


@dataclass(frozen=True)
class FlipSet:
    """A feasible node selection with its objective value and cost.

    The value is always recomputed from scratch at construction, so the
    cached numbers are exact for the stored indices.
    """

    indices: tuple = field(default_factory=tuple)
    value: float = 0.0
    cost: float = 0.0

    @classmethod
    def compute(cls, objective: ObjectiveMatrix, costs, indices) -> "FlipSet":
        idx = tuple(sorted(set(int(i) for i in indices)))
        value = objective.value(idx)
        b = np.asarray(costs, dtype=np.float64)
        cost = float(b[list(idx)].sum()) if idx else 0.0
        return cls(indices=idx, value=value, cost=cost)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, i) -> bool:
        return int(i) in set(self.indices)


def objective_gain(objective: ObjectiveMatrix, flips) -> float:
    """x' P x for a FlipSet or index iterable.

    The raw diversity-index change of applying the flips is 4 times this.
    """
    if isinstance(flips, FlipSet):
        return objective.value(flips.indices)
    return objective.value(flips)


@dataclass
class Instance:
    """One solvable problem: graph, exposure, per-node costs, and a budget."""

    graph: Graph
    exposure: np.ndarray
    costs: np.ndarray
    budget: float
    node_ids: tuple = None  # original labels when loaded from files

    def __post_init__(self):
        self.exposure = check_exposure(self.exposure, self.graph.n)
        self.costs = np.asarray(self.costs, dtype=np.float64)
        if self.costs.shape != (self.graph.n,):
            raise LengthMismatchError(
                f"costs have shape {self.costs.shape}, expected ({self.graph.n},)"
            )
        if np.any(self.costs < 0):
            raise LengthMismatchError("costs must be nonnegative")
        self.budget = float(self.budget)
        if self.budget < 0:
            raise LengthMismatchError("budget must be nonnegative")

    @property
    def n(self) -> int:
        return self.graph.n

    def eta(self, normalized: bool = False) -> float:
        return diversity_index(self.graph, self.exposure, normalized=normalized)

    def unit_costs(self) -> bool:
        return bool(np.all(self.costs == 1.0))


def unit_instance(graph: Graph, exposure, budget) -> Instance:
    """Instance with unit costs (the common benchmark regime)."""
    return Instance(graph, np.asarray(exposure, dtype=np.float64), np.ones(graph.n), budget)
