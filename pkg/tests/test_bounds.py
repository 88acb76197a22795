"""Upper bounds: examples, soundness against enumeration, and eigen accuracy."""

import numpy as np
import pytest
import scipy.sparse as sp

from divmax import build_graph, build_objective, compute_bounds
from divmax.bounds import bound_eigen, bound_gersh, bound_rowsum, estimate_lambda_max
from divmax.errors import UnsupportedCostsError
from divmax.exact import enumerate_exact
from divmax.graph import ObjectiveMatrix
from divmax.rng import stream

from conftest import objective_of, random_instance


def test_eigen_bound_path3(path3):
    P = objective_of(path3)
    assert bound_eigen(P, 1) == pytest.approx(3.0, rel=1e-6)
    assert bound_eigen(P, 2) == pytest.approx(6.0, rel=1e-6)


def test_eigen_bound_clamps_at_zero():
    g = build_graph([(0, 1, 1.0)])
    P = build_objective(g, np.array([1.0, -1.0]))
    # P = [[-1,-1],[-1,-1]] has eigenvalues {0, -2}
    assert bound_eigen(P, 1) == pytest.approx(0.0, abs=1e-9)


def test_gersh_bound_examples(triangle, path3):
    P3 = objective_of(path3)
    assert bound_gersh(P3, 1) == 4.0
    assert bound_gersh(P3, 2) == 8.0
    P = objective_of(triangle)
    assert bound_gersh(P, 1) == 2.0


def test_rowsum_bound_examples(triangle, path3):
    P3 = objective_of(path3)
    assert bound_rowsum(P3, 1) == 2.0
    assert bound_rowsum(P3, 2) == 3.0
    P = objective_of(triangle)
    assert bound_rowsum(P, 1) == 1.0


def test_rowsum_matches_optimum_on_path3(path3):
    # tightness demo: at k=1 the rowsum bound equals the true optimum
    P = objective_of(path3)
    opt = enumerate_exact(path3, P).gain
    assert bound_rowsum(P, 1) == opt == 2.0


def test_bounds_sound_and_ordered():
    for seed in range(300):
        inst = random_instance(seed, n_max=14, k_max=5)
        P = objective_of(inst)
        opt = enumerate_exact(inst, P).gain
        report = compute_bounds(P, inst.budget, costs=inst.costs)
        scale = 1.0 + inst.graph.total_abs_weight
        assert report.eigen_bound >= opt - 1e-9 * scale
        assert report.gersh_bound >= opt - 1e-9 * scale
        assert report.rowsum_bound >= opt - 1e-9 * scale
        assert report.eigen_bound <= report.gersh_bound * (1.0 + 1e-6) + 1e-12


def test_power_iteration_accuracy_random_sparse():
    worst = 0.0
    for trial in range(100):
        rng = stream(7, "eig-acc", trial)
        n = int(rng.integers(2, 31))
        density = rng.uniform(0.1, 0.6)
        M = np.triu((rng.random((n, n)) < density) * rng.uniform(-2, 2, (n, n)), 1)
        M = M + M.T + np.diag(rng.uniform(-2, 2, n))
        off = sp.csr_matrix(M - np.diag(np.diag(M)))
        P = ObjectiveMatrix(np.diag(M), np.zeros(n), off, np.abs(M).sum())
        lam, _, converged = estimate_lambda_max(P)
        true = float(np.linalg.eigvalsh(M)[-1])
        assert converged
        err = abs(lam - true)
        assert err <= 1e-6 * (1.0 + abs(true))
        worst = max(worst, err / (1.0 + abs(true)))
    assert worst <= 1e-6


def test_nonconvergence_falls_back_to_gersh(path3):
    P = objective_of(path3)
    report = compute_bounds(P, 2.0, max_iters=1)
    assert not report.eigen_converged
    assert report.eigen_bound == report.gersh_bound


def test_bounds_refuse_subunit_costs(path3):
    P = objective_of(path3)
    with pytest.raises(UnsupportedCostsError):
        compute_bounds(P, 1.0, costs=np.array([1.0, 0.5, 1.0]))
    with pytest.raises(UnsupportedCostsError):
        compute_bounds(P, 1.0, costs=np.array([0.0, 1.0, 1.0]))
    # costs >= 1 stay valid (possibly less tight)
    report = compute_bounds(P, 2.0, costs=np.array([1.0, 2.0, 1.5]))
    assert report.gersh_bound >= 0.0


def test_bounds_empty_graph():
    g = build_graph([], n=3)
    P = build_objective(g, np.ones(3))
    assert bound_gersh(P, 2) == 0.0
    assert bound_rowsum(P, 2) == 0.0
    assert bound_eigen(P, 2) == 0.0
