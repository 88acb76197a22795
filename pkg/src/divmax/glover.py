"""Linearization of the quadratic knapsack objective with auxiliary row variables.

Each node i gets a variable z_i standing for x_i * (P x)_i, pinned by four
inequality rows built from row-wise coefficient bounds

    U_i = sum_j max(P_ij, 0),      L_i = sum_j min(P_ij, 0)

(diagonal included).  On binary x the rows force z_i = x_i (P x)_i exactly,
so maximizing sum_i z_i reproduces x' P x; relaxing x to [0, 1]^n yields a
linear program whose optimum upper-bounds the quadratic optimum.  The LP is
solved by the bundled simplex, and fractional solutions are converted to
feasible selections by randomized rounding with greedy repair.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionTooLargeError
from .graph import FlipSet, Instance, ObjectiveMatrix
from .greedy import GreedyConfig, _ratio_cmp, local_search
from .report import SolverReport
from .rng import stream
from .simplex import solve_lp

MAX_STRUCTURAL_VARS = 600


def compute_LU(objective: ObjectiveMatrix):
    """Row-wise positive/negative coefficient sums (U, L), diagonal included."""
    pos = np.asarray(objective.offdiag.maximum(0).sum(axis=1)).ravel()
    neg = np.asarray(objective.offdiag.minimum(0).sum(axis=1)).ravel()
    upper = pos + np.maximum(objective.diag, 0.0)
    lower = neg + np.minimum(objective.diag, 0.0)
    return lower, upper


@dataclass
class LinearProgram:
    """The relaxed linearization: variables x_i in [0,1] and free z_i,
    objective max sum z_i, one budget row plus four rows per node."""

    n: int
    budget: float
    costs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    rows: list = field(default_factory=list)  # (name, {var: coef}, "<=", rhs)

    @property
    def row_count(self) -> int:
        return len(self.rows)


def build_lp(inst: Instance, objective: ObjectiveMatrix) -> LinearProgram:
    """Assemble the budget row and the four linearization rows per node.

    Variables are named x1..xn and z1..zn (1-based).  Row senses are all
    <=; z bounds live in the rows themselves, x bounds in [0, 1].
    """
    n = inst.n
    lower, upper = compute_LU(objective)
    lp = LinearProgram(n=n, budget=inst.budget, costs=inst.costs, lower=lower, upper=upper)

    budget_row = {f"x{i + 1}": float(inst.costs[i]) for i in range(n)}
    lp.rows.append(("budget", budget_row, "<=", float(inst.budget)))
    dense_rows = objective.dense()
    for i in range(n):
        xi, zi = f"x{i + 1}", f"z{i + 1}"
        lp.rows.append((f"zlo{i + 1}", {xi: float(lower[i]), zi: -1.0}, "<=", 0.0))
        lp.rows.append((f"zhi{i + 1}", {zi: 1.0, xi: -float(upper[i])}, "<=", 0.0))
        row5 = {f"x{j + 1}": float(dense_rows[i, j]) for j in range(n) if dense_rows[i, j] != 0.0}
        row5[xi] = row5.get(xi, 0.0) + float(upper[i])
        row5[zi] = -1.0
        lp.rows.append((f"zrow{i + 1}", row5, "<=", float(upper[i])))
        row6 = {f"x{j + 1}": -float(dense_rows[i, j]) for j in range(n) if dense_rows[i, j] != 0.0}
        row6[xi] = row6.get(xi, 0.0) - float(lower[i])
        row6[zi] = 1.0
        lp.rows.append((f"zneg{i + 1}", row6, "<=", -float(lower[i])))
    return lp


def solve_glover_relaxation(inst: Instance, objective: ObjectiveMatrix):
    """Optimal value and fractional x of the continuous linearization.

    Returns (x_frac, value).  The value is a valid upper bound on the
    quadratic knapsack optimum.
    """
    n = inst.n
    if 3 * n > MAX_STRUCTURAL_VARS:
        raise DimensionTooLargeError(
            f"{3 * n} structural variables exceed the simplex ceiling {MAX_STRUCTURAL_VARS}"
        )
    lower, upper = compute_LU(objective)
    dense = objective.dense()
    b = inst.costs

    # standard form: columns [x (n) | z+ (n) | z- (n)], all >= 0
    nv = 3 * n
    rows = []
    rhs = []

    def add(row, r):
        rows.append(row)
        rhs.append(r)

    row = np.zeros(nv)
    row[:n] = b
    add(row, inst.budget)
    for i in range(n):
        row = np.zeros(nv)
        row[i] = 1.0
        add(row, 1.0)  # x_i <= 1
        row = np.zeros(nv)
        row[i] = lower[i]
        row[n + i] = -1.0
        row[2 * n + i] = 1.0
        add(row, 0.0)  # x_i L_i <= z_i
        row = np.zeros(nv)
        row[i] = -upper[i]
        row[n + i] = 1.0
        row[2 * n + i] = -1.0
        add(row, 0.0)  # z_i <= x_i U_i
        row = np.zeros(nv)
        row[:n] = dense[i]
        row[i] += upper[i]
        row[n + i] = -1.0
        row[2 * n + i] = 1.0
        add(row, upper[i])  # (P x)_i - U_i (1 - x_i) <= z_i
        row = np.zeros(nv)
        row[:n] = -dense[i]
        row[i] -= lower[i]
        row[n + i] = 1.0
        row[2 * n + i] = -1.0
        add(row, -lower[i])  # z_i <= (P x)_i - L_i (1 - x_i)
    c = np.zeros(nv)
    c[n:2 * n] = 1.0
    c[2 * n:] = -1.0

    v, value = solve_lp(np.asarray(rows), np.asarray(rhs), c)
    x_frac = np.clip(v[:n], 0.0, 1.0)
    return x_frac, float(value)


def randomized_round(probs, inst: Instance, objective: ObjectiveMatrix, rng,
                     attempts_cap: int = 1000):
    """One feasible binary selection from inclusion probabilities.

    Coordinates are drawn independently and the whole vector redrawn until
    b'x <= k, up to attempts_cap attempts; after that the draw is repaired
    by dropping selected nodes of lowest diagonal-to-cost ratio until
    feasible (the empty selection is always feasible).
    """
    p = np.clip(np.asarray(probs, dtype=np.float64), 0.0, 1.0)
    b = inst.costs
    chosen = None
    for _ in range(max(1, attempts_cap)):
        draw = rng.random(p.size) < p
        if float(b[draw].sum()) <= inst.budget:
            chosen = draw
            break
    if chosen is None:
        chosen = rng.random(p.size) < p
        picked = [int(i) for i in np.flatnonzero(chosen)]
        diag = objective.diag
        while float(b[chosen].sum()) > inst.budget:
            droppable = [i for i in picked if b[i] > 0]
            worst = droppable[0]
            for i in droppable[1:]:
                if _ratio_cmp(diag[i], b[i], diag[worst], b[worst]) > 0:
                    worst = i
            chosen[worst] = False
            picked.remove(worst)
    return [int(i) for i in np.flatnonzero(chosen)]


def round_lp(x_frac, inst: Instance, objective: ObjectiveMatrix, seed: int = 0,
             attempts_cap: int = 1000, polish: bool = True,
             polish_iterations: int = 20) -> SolverReport:
    """Round a fractional LP point to a feasible selection; optionally polish
    with greedy local search started from the rounded point."""
    t0 = time.perf_counter()
    rng = stream(seed, "lp-round")
    indices = randomized_round(x_frac, inst, objective, rng, attempts_cap)
    if polish:
        cfg = GreedyConfig(iterations=polish_iterations, seed=seed)
        report = local_search(inst, objective, cfg, start_indices=indices, algorithm="glover")
    else:
        flips = FlipSet.compute(objective, inst.costs, indices)
        report = SolverReport(
            algorithm="glover",
            selection=flips,
            gain=flips.value,
            eta_initial=inst.eta(),
        )
    report.seed = seed
    report.runtime_s = time.perf_counter() - t0
    return report


def solve_glover(inst: Instance, objective: ObjectiveMatrix, seed: int = 0,
                 polish: bool = True) -> SolverReport:
    """Full pipeline: LP relaxation, randomized rounding, optional polish."""
    t0 = time.perf_counter()
    x_frac, bound = solve_glover_relaxation(inst, objective)
    report = round_lp(x_frac, inst, objective, seed=seed, polish=polish)
    report.bound = bound
    report.runtime_s = time.perf_counter() - t0
    return report


def _format_coef(value: float, first: bool) -> str:
    sign = "-" if value < 0 else ("" if first else "+")
    mag = abs(value)
    coef = "" if mag == 1.0 else f"{mag:.17g} "
    return f"{sign} {coef}".lstrip() if not first else f"{sign}{coef}"


def export_lp(lp: LinearProgram, destination=None) -> str:
    """Serialize the linearization in the plain-text LP interchange format.

    Output is byte-stable for a fixed program: variables in index order,
    rows in construction order, numbers with 17 significant digits.
    """
    lines = ["Maximize"]
    obj = " + ".join(f"z{i + 1}" for i in range(lp.n))
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    for name, coefs, sense, rhs in lp.rows:
        terms = []
        for var in sorted(coefs, key=_var_key):
            val = coefs[var]
            if val == 0.0:
                continue
            terms.append(_format_coef(val, first=not terms) + var)
        body = " ".join(terms) if terms else "0 x1"
        op = {"<=": "<=", ">=": ">=", "=": "="}[sense]
        lines.append(f" {name}: {body} {op} {rhs:.17g}")
    lines.append("Bounds")
    for i in range(lp.n):
        lines.append(f" 0 <= x{i + 1} <= 1")
    for i in range(lp.n):
        lines.append(f" z{i + 1} free")
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if destination is not None:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _var_key(name: str):
    return (name[0], int(name[1:]))
