"""Reading and writing instance files.

Edge lists are whitespace-separated "src dst [weight]" lines (weight
defaults to 1); '#' starts a comment and blank lines are skipped.  Node ids
may be arbitrary tokens and are remapped to dense indices in order of first
appearance; the original labels are kept on the instance for reporting.
Exposure files hold "node value" pairs with value exactly -1 or +1; cost
files hold "node cost" pairs, nodes absent from the file defaulting to
cost 1.
"""

import numpy as np

from .errors import (
    NonBinaryExposureError,
    ParseError,
    UnknownNodeError,
)
from .graph import Instance, build_graph


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def load_edges(path):
    """Parse an edge file into (Graph, id_tuple)."""
    ids = {}
    triples = []

    def dense(token):
        if token not in ids:
            ids[token] = len(ids)
        return ids[token]

    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'src dst [weight]', got {line!r}", line=lineno)
        try:
            weight = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError as exc:
            raise ParseError(f"bad weight {parts[2]!r}", line=lineno) from exc
        i, j = dense(parts[0]), dense(parts[1])
        if i == j:
            raise ParseError(f"self loop at node {parts[0]!r}", line=lineno)
        triples.append((i, j, weight))
    graph = build_graph(triples, n=len(ids))
    return graph, tuple(ids)


def _load_node_values(path, ids):
    index = {label: i for i, label in enumerate(ids)}
    values = {}
    for lineno, line in _data_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'node value', got {line!r}", line=lineno)
        if parts[0] not in index:
            raise UnknownNodeError(f"node {parts[0]!r} not present in the edge list")
        try:
            values[index[parts[0]]] = float(parts[1])
        except ValueError as exc:
            raise ParseError(f"bad value {parts[1]!r}", line=lineno) from exc
    return values


def load_instance(edge_path, exposure_path, cost_path=None, budget: float = 0.0) -> Instance:
    """Load an instance from edge/exposure (and optional cost) files."""
    graph, ids = load_edges(edge_path)
    exposure_map = _load_node_values(exposure_path, ids)
    missing = [ids[i] for i in range(graph.n) if i not in exposure_map]
    if missing:
        raise ParseError(f"no exposure value for node(s) {missing[:5]!r}")
    exposure = np.empty(graph.n)
    for i, value in exposure_map.items():
        if value not in (-1.0, 1.0):
            raise NonBinaryExposureError(
                f"exposure for node {ids[i]!r} is {value}, expected -1 or +1"
            )
        exposure[i] = value
    costs = np.ones(graph.n)
    if cost_path is not None:
        for i, value in _load_node_values(cost_path, ids).items():
            if value < 0:
                raise ParseError(f"negative cost for node {ids[i]!r}")
            costs[i] = value
    return Instance(graph, exposure, costs, budget, node_ids=ids)


def write_instance(inst: Instance, edge_path, exposure_path, cost_path=None):
    """Write an instance back out in the loader's format (byte-stable)."""
    labels = inst.node_ids or tuple(str(i) for i in range(inst.n))
    with open(edge_path, "w", encoding="utf-8") as fh:
        for i, j, w in inst.graph.edges():
            if w == 1.0:
                fh.write(f"{labels[i]} {labels[j]}\n")
            else:
                fh.write(f"{labels[i]} {labels[j]} {w:.17g}\n")
    with open(exposure_path, "w", encoding="utf-8") as fh:
        for i in range(inst.n):
            fh.write(f"{labels[i]} {int(inst.exposure[i]):+d}\n")
    if cost_path is not None:
        with open(cost_path, "w", encoding="utf-8") as fh:
            for i in range(inst.n):
                fh.write(f"{labels[i]} {inst.costs[i]:.17g}\n")
