"""Dense revised simplex for  max c'v  s.t.  A v <= rhs, v >= 0,  rhs >= 0.

The nonnegative right-hand side makes the all-slack basis feasible, so no
phase-1 is needed.  Entering and leaving variables follow Bland's rule
(lowest eligible index), which guarantees termination under degeneracy at
the cost of speed; fine at the problem sizes this package targets.  The
basis inverse is maintained by pivoting and refactorized periodically to
contain numerical drift.
"""

import numpy as np

from .errors import SimplexStallError, UnboundedError

_ENTER_TOL = 1e-9
_PIVOT_TOL = 1e-11
_REFACTOR_EVERY = 512


def solve_lp(A, rhs, c, max_pivots: int = 200_000):
    """Return (v, objective) maximizing c'v subject to A v <= rhs, v >= 0."""
    A = np.asarray(A, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    m, ncols = A.shape
    if np.any(rhs < 0):
        raise ValueError("solve_lp requires a nonnegative right-hand side")

    A_full = np.hstack([A, np.eye(m)])
    c_full = np.concatenate([c, np.zeros(m)])
    total = ncols + m

    basis = list(range(ncols, total))
    b_inv = np.eye(m)
    x_basic = rhs.copy()

    for pivot_count in range(max_pivots):
        if pivot_count and pivot_count % _REFACTOR_EVERY == 0:
            b_inv = np.linalg.inv(A_full[:, basis])
            x_basic = np.maximum(b_inv @ rhs, 0.0)

        y = c_full[basis] @ b_inv
        reduced = c_full - y @ A_full
        in_basis = np.zeros(total, dtype=bool)
        in_basis[basis] = True
        candidates = np.flatnonzero((reduced > _ENTER_TOL) & ~in_basis)
        if candidates.size == 0:
            v = np.zeros(total)
            v[basis] = x_basic
            return v[:ncols], float(c_full[basis] @ x_basic)
        entering = int(candidates[0])  # Bland: lowest variable index

        direction = b_inv @ A_full[:, entering]
        positive = np.flatnonzero(direction > _PIVOT_TOL)
        if positive.size == 0:
            raise UnboundedError("LP is unbounded along variable %d" % entering)
        ratios = x_basic[positive] / direction[positive]
        theta = ratios.min()
        tied = positive[ratios <= theta + 1e-12 * (1.0 + abs(theta))]
        leaving_row = int(min(tied, key=lambda r: basis[r]))  # Bland on the way out

        piv = direction[leaving_row]
        x_basic = x_basic - theta * direction
        x_basic[leaving_row] = theta
        row = b_inv[leaving_row] / piv
        b_inv -= np.outer(direction, row)
        b_inv[leaving_row] = row
        basis[leaving_row] = entering
        np.maximum(x_basic, 0.0, out=x_basic)  # clip pivot round-off

    raise SimplexStallError(f"no optimum after {max_pivots} pivots")
