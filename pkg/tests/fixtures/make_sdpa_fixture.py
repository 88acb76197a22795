"""Regenerate the external-engine reference solution for the triangle instance.

Solves the lifted relaxation with an independent conic solver (cvxpy) and
writes the solution in the package's SDPA-solution exchange format.  Run
manually: python tests/fixtures/make_sdpa_fixture.py
"""
import os
import numpy as np


def main():
    import cvxpy as cp
    from divmax import build_graph, unit_instance, build_objective
    from divmax.sdp import SdpProblem, write_sdpa_solution, import_sdpa_solution

    g = build_graph([(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)])
    inst = unit_instance(g, [1.0, 1.0, -1.0], budget=1.0)
    P = build_objective(g, inst.exposure)
    n = 3
    b = np.ones(n)
    X = cp.Variable((n, n), symmetric=True)
    x = cp.Variable(n)
    Z = cp.bmat([[X, cp.reshape(x, (n, 1), order="C")],
                 [cp.reshape(x, (1, n), order="C"), np.ones((1, 1))]])
    cons = [Z >> 0, cp.diag(X) == x, cp.trace(np.outer(b, b) @ X) <= inst.budget ** 2]
    problem = cp.Problem(cp.Maximize(cp.trace(P.dense() @ X)), cons)
    try:
        value = problem.solve(solver=cp.CLARABEL)
        engine = "clarabel"
    except Exception:
        value = problem.solve(solver=cp.SCS, eps=1e-10, max_iters=1000000)
        engine = "scs"
    print(f"engine={engine} objective={value:.10f}")
    Zv = np.zeros((n + 1, n + 1))
    Zv[:n, :n] = X.value
    Zv[:n, n] = Zv[n, :n] = x.value
    Zv[n, n] = 1.0
    slack = inst.budget ** 2 - float(b @ X.value @ b)
    out = os.path.join(os.path.dirname(__file__), "triangle_k1_external.sol")
    write_sdpa_solution(Zv, slack, out)
    prob = SdpProblem.from_instance(inst, P)
    sol = import_sdpa_solution(out, prob)
    print("reimported objective:", sol.objective_value, "residuals:", sol.residuals)


if __name__ == "__main__":
    main()
