"""Exact optimum for small instances: exhaustive enumeration and pruned search.

enumerate_exact is the ground-truth oracle: it walks every budget-feasible
subset.  branch_and_bound explores include/exclude decisions in descending
diagonal order and prunes a subtree whenever the current value plus an upper
bound on the remaining subproblem cannot beat the incumbent.  The remainder
bound reuses the bounds-module formulas on the undecided nodes, with each
undecided diagonal replaced by its current marginal gain.
"""

import heapq
import math
import sys
import time

import numpy as np

from .bounds import gersh_rows
from .errors import SearchSpaceTooLargeError, UnsupportedCostsError
from .graph import FlipSet, Instance, ObjectiveMatrix
from .greedy import GreedyConfig, i_greedy
from .report import SolverReport

DEFAULT_SUBSET_LIMIT = int(5e7)


def _feasible_subset_count_unit(n: int, k: int) -> int:
    return sum(math.comb(n, j) for j in range(min(n, k) + 1))


def enumerate_exact(inst: Instance, objective: ObjectiveMatrix,
                    limit: int = DEFAULT_SUBSET_LIMIT) -> SolverReport:
    """Global optimum by visiting every feasible subset.

    Returns the lexicographically smallest optimal selection.  Raises
    SearchSpaceTooLargeError when more than `limit` subsets would be
    visited.
    """
    t0 = time.perf_counter()
    n = inst.n
    b = inst.costs
    k = inst.budget
    if inst.unit_costs():
        count = _feasible_subset_count_unit(n, int(math.floor(k)))
        if count > limit:
            raise SearchSpaceTooLargeError(
                f"{count} feasible subsets exceed the limit {limit}"
            )
    adj = objective.adjacency_lists()
    diag = objective.diag.tolist()
    costs = b.tolist()
    gains = list(diag)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), n + 100))

    best_val = 0.0  # empty selection, visited first and lexicographically smallest
    best_sel = ()
    cur = []
    state = {"val": 0.0, "cost": 0.0, "visited": 1}

    def dfs(i: int):
        if i == n:
            return
        if state["cost"] + costs[i] <= k:
            state["visited"] += 1
            if state["visited"] > limit:
                raise SearchSpaceTooLargeError(
                    f"feasible subsets exceed the limit {limit}"
                )
            # include i; subsets complete at their final addition, and
            # include-first order visits them lexicographically
            state["val"] += gains[i]
            state["cost"] += costs[i]
            cur.append(i)
            for j, v in adj[i]:
                gains[j] += 2.0 * v
            nonlocal best_val, best_sel
            if state["val"] > best_val:
                best_val = state["val"]
                best_sel = tuple(cur)
            dfs(i + 1)
            for j, v in adj[i]:
                gains[j] -= 2.0 * v
            cur.pop()
            state["cost"] -= costs[i]
            state["val"] -= gains[i]
        dfs(i + 1)

    dfs(0)
    flips = FlipSet.compute(objective, b, best_sel)
    return SolverReport(
        algorithm="enumerate",
        selection=flips,
        gain=flips.value,
        eta_initial=inst.eta(),
        proven=True,
        iterations=state["visited"],
        runtime_s=time.perf_counter() - t0,
    )


def branch_and_bound(inst: Instance, objective: ObjectiveMatrix,
                     bound_kind: str = "gersh", time_limit: float = None,
                     warm_start: bool = True) -> SolverReport:
    """Depth-first include/exclude search with bound-based pruning.

    bound_kind is one of "eigen", "gersh", "rowsum", or None (no pruning).
    When the cost vector is outside the unit-class regime the bounds are
    unsound, so pruning is disabled automatically and the search degrades to
    feasibility-pruned enumeration.  On timeout the incumbent is returned
    with proven=False.
    """
    t0 = time.perf_counter()
    n = inst.n
    b = inst.costs
    k = inst.budget
    if bound_kind not in (None, "eigen", "gersh", "rowsum"):
        raise ValueError(f"unknown bound kind {bound_kind!r}")

    prune_kind = bound_kind
    notes = {}
    if prune_kind is not None:
        try:
            from .bounds import check_unit_class_costs
            check_unit_class_costs(b)
        except UnsupportedCostsError:
            prune_kind = None
            notes["pruning"] = "disabled: costs outside the unit-class regime"

    # candidate order: descending diagonal, ties by index
    order = np.lexsort((np.arange(n), -objective.diag)).tolist()
    adj = objective.adjacency_lists()
    diag = objective.diag.tolist()
    costs = b.tolist()
    gains = list(diag)
    gersh_radius = (gersh_rows(objective) - objective.diag).tolist()  # row abs sums
    pos_row = np.asarray(
        objective.offdiag.maximum(0).sum(axis=1)
    ).ravel().tolist()
    dense_off = objective.offdiag.toarray() if prune_kind == "eigen" else None

    best_val = 0.0
    best_sel = ()
    if warm_start:
        warm = i_greedy(inst, objective, GreedyConfig(iterations=min(50, 10 + n), seed=0))
        if warm.gain > best_val:
            best_val = warm.gain
            best_sel = warm.selection.indices

    sys.setrecursionlimit(max(sys.getrecursionlimit(), n + 100))
    cur = []
    state = {"val": 0.0, "cost": 0.0, "nodes": 0, "timed_out": False}
    deadline = None if time_limit is None else t0 + float(time_limit)

    def remainder_bound(depth: int) -> float:
        budget_left = k - state["cost"]
        kk = int(math.floor(budget_left + 1e-12))
        if kk <= 0:
            return 0.0
        undecided = order[depth:]
        if not undecided:
            return 0.0
        if prune_kind == "gersh":
            g_hat = max(gains[j] + gersh_radius[j] for j in undecided)
            return max(0.0, kk * g_hat)
        if prune_kind == "rowsum":
            caps = (gains[j] + pos_row[j] for j in undecided)
            top = heapq.nlargest(kk, (c for c in caps if c > 0.0))
            return float(sum(top))
        if prune_kind == "eigen":
            und = np.asarray(undecided)
            sub = dense_off[np.ix_(und, und)] + np.diag([gains[j] for j in und])
            lam = float(np.linalg.eigvalsh(sub)[-1])
            return max(0.0, kk * lam)
        return math.inf

    def dfs(depth: int):
        nonlocal best_val, best_sel
        if state["timed_out"] or depth == n:
            return
        state["nodes"] += 1
        if deadline is not None and state["nodes"] % 4096 == 0:
            if time.perf_counter() > deadline:
                state["timed_out"] = True
                return
        if prune_kind is not None:
            if state["val"] + remainder_bound(depth) <= best_val:
                return
        node = order[depth]
        if state["cost"] + costs[node] <= k:
            state["val"] += gains[node]
            state["cost"] += costs[node]
            cur.append(node)
            for j, v in adj[node]:
                gains[j] += 2.0 * v
            if state["val"] > best_val:
                best_val = state["val"]
                best_sel = tuple(sorted(cur))
            dfs(depth + 1)
            for j, v in adj[node]:
                gains[j] -= 2.0 * v
            cur.pop()
            state["cost"] -= costs[node]
            state["val"] -= gains[node]
        dfs(depth + 1)

    dfs(0)
    flips = FlipSet.compute(objective, b, best_sel)
    report = SolverReport(
        algorithm=f"branch-and-bound[{bound_kind}]",
        selection=flips,
        gain=flips.value,
        eta_initial=inst.eta(),
        proven=not state["timed_out"],
        iterations=state["nodes"],
        runtime_s=time.perf_counter() - t0,
    )
    report.extra.update(notes)
    return report
