"""Linearization: coefficient bounds, LP equivalence on binary points, export."""

import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from divmax import build_graph, build_objective, compute_LU, karate_instance, unit_instance
from divmax.errors import DimensionTooLargeError
from divmax.exact import enumerate_exact
from divmax.glover import build_lp, export_lp, round_lp, solve_glover_relaxation

from conftest import objective_of, random_instance, with_budget


def test_compute_LU_path3(path3):
    lower, upper = compute_LU(objective_of(path3))
    assert np.allclose(upper, [1.0, 2.0, 1.0])
    assert np.allclose(lower, [-1.0, -2.0, -1.0])


def test_compute_LU_triangle(triangle):
    lower, upper = compute_LU(objective_of(triangle))
    assert np.allclose(upper, [1.0, 1.0, 2.0])
    assert np.allclose(lower, [-1.0, -1.0, -2.0])


def test_compute_LU_empty_graph():
    g = build_graph([], n=4)
    P = build_objective(g, np.ones(4))
    lower, upper = compute_LU(P)
    assert np.all(lower == 0.0) and np.all(upper == 0.0)


def _row_feasible(coefs, sense, rhs, assignment, tol=1e-9):
    value = sum(c * assignment[var] for var, c in coefs.items())
    return value <= rhs + tol


def test_binary_points_satisfy_rows_with_exact_z():
    # z_i = x_i (P x)_i satisfies every linearization row, and those rows force
    # exactly that z on integral x
    for seed in range(12):
        inst = random_instance(seed, n_max=8, k_max=8)
        inst = with_budget(inst, float(inst.n))
        P = objective_of(inst)
        dense = P.dense()
        lp = build_lp(inst, P)
        lower, upper = compute_LU(P)
        for bits in itertools.product([0, 1], repeat=inst.n):
            x = np.array(bits, dtype=float)
            z = x * (dense @ x)
            assignment = {f"x{i + 1}": x[i] for i in range(inst.n)}
            assignment.update({f"z{i + 1}": z[i] for i in range(inst.n)})
            for name, coefs, sense, rhs in lp.rows[1:]:  # skip the budget row
                assert _row_feasible(coefs, sense, rhs, assignment), name
            assert z.sum() == pytest.approx(float(x @ dense @ x), abs=1e-9)
            # the four rows pin z_i exactly on integral x
            for i in range(inst.n):
                row_val = float(dense[i] @ x)
                lo = max(x[i] * lower[i], row_val - upper[i] * (1.0 - x[i]))
                hi = min(x[i] * upper[i], row_val - lower[i] * (1.0 - x[i]))
                assert lo == pytest.approx(hi, abs=1e-9)
                assert lo == pytest.approx(x[i] * row_val, abs=1e-9)


def test_relaxation_dominates_optimum():
    for seed in range(25):
        inst = random_instance(seed, n_max=10, k_max=4)
        P = objective_of(inst)
        opt = enumerate_exact(inst, P).gain
        _, value = solve_glover_relaxation(inst, P)
        assert value >= opt - 1e-7 * (1.0 + inst.graph.total_abs_weight)


def test_relaxation_path3(path3):
    _, value = solve_glover_relaxation(path3, objective_of(path3))
    assert value >= 2.0 - 1e-9


def test_relaxation_empty_graph():
    g = build_graph([], n=4)
    inst = unit_instance(g, np.ones(4), budget=2.0)
    _, value = solve_glover_relaxation(inst, build_objective(g, inst.exposure))
    assert value == pytest.approx(0.0, abs=1e-9)


def test_relaxation_matches_independent_lp_on_karate():
    inst = karate_instance(4)
    P = objective_of(inst)
    x_frac, value = solve_glover_relaxation(inst, P)
    n = inst.n
    dense = P.dense()
    lower, upper = compute_LU(P)
    nv = 2 * n
    c = np.zeros(nv)
    c[n:] = -1.0
    rows, rhs = [], []
    row = np.zeros(nv)
    row[:n] = inst.costs
    rows.append(row)
    rhs.append(inst.budget)
    for i in range(n):
        r = np.zeros(nv); r[i] = lower[i]; r[n + i] = -1.0
        rows.append(r); rhs.append(0.0)
        r = np.zeros(nv); r[i] = -upper[i]; r[n + i] = 1.0
        rows.append(r); rhs.append(0.0)
        r = np.zeros(nv); r[:n] = dense[i]; r[i] += upper[i]; r[n + i] = -1.0
        rows.append(r); rhs.append(upper[i])
        r = np.zeros(nv); r[:n] = -dense[i]; r[i] -= lower[i]; r[n + i] = 1.0
        rows.append(r); rhs.append(-lower[i])
    bounds = [(0.0, 1.0)] * n + [(None, None)] * n
    ref = linprog(c, A_ub=np.asarray(rows), b_ub=np.asarray(rhs), bounds=bounds,
                  method="highs")
    assert ref.status == 0
    assert value == pytest.approx(-ref.fun, rel=1e-6)
    assert np.all(x_frac >= -1e-9) and np.all(x_frac <= 1.0 + 1e-9)


def test_dimension_ceiling():
    inst = random_instance(1, n_max=4)
    P = objective_of(inst)
    import divmax.glover as glover_mod

    old = glover_mod.MAX_STRUCTURAL_VARS
    glover_mod.MAX_STRUCTURAL_VARS = 3
    try:
        with pytest.raises(DimensionTooLargeError):
            solve_glover_relaxation(inst, P)
    finally:
        glover_mod.MAX_STRUCTURAL_VARS = old


def test_round_lp_integral_passthrough(triangle):
    inst = with_budget(triangle, 2.0)
    P = objective_of(inst)
    x = np.array([1.0, 0.0, 1.0])
    report = round_lp(x, inst, P, seed=3, polish=False)
    assert report.selection.indices == (0, 2)


def test_round_lp_repairs_to_empty_when_nothing_fits():
    g = build_graph([(0, 1, 1.0)])
    inst = unit_instance(g, np.array([1.0, -1.0]), budget=0.0)
    inst.costs[:] = 2.0
    P = objective_of(inst)
    report = round_lp(np.ones(2), inst, P, seed=1, polish=False)
    assert report.selection.indices == ()


def test_round_lp_deterministic(triangle):
    inst = with_budget(triangle, 2.0)
    P = objective_of(inst)
    x = np.array([0.5, 0.5, 0.5])
    a = round_lp(x, inst, P, seed=42, polish=False)
    b = round_lp(x, inst, P, seed=42, polish=False)
    assert a.selection.indices == b.selection.indices


def test_export_lp_path3(path3, tmp_path):
    lp = build_lp(path3, objective_of(path3))
    assert lp.row_count == 13  # 1 budget + 4 * 3
    text = export_lp(lp)
    assert "z1 + z2 + z3" in text
    section = text.split("Subject To\n")[1].split("Bounds\n")[0]
    assert len(section.strip().splitlines()) == 13
    assert "z1 free" in text
    out = tmp_path / "model.lp"
    again = export_lp(lp, out)
    assert again == text
    assert out.read_text() == text
