"""
Dense two-phase revised simplex for small-row, many-column standard-form LPs.

    minimise c.x  subject to  A x = b,  x >= 0

Every problem in this package has at most a few dozen rows and a few
thousand columns, so the basis is refactorised from scratch at every
iteration.  Pricing is Dantzig's rule; after ``10 * (rows + cols)``
consecutive degenerate pivots the solver switches to Bland's rule for the
rest of the phase.  Ties are always broken by the lowest index, so runs are
deterministic.  Phase 1 stops as soon as the artificial mass is below the
feasibility tolerance, and an artificial that leaves the basis never returns;
without both rules, degenerate problems can stall at zero infeasibility.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"


class SolverError(RuntimeError):
    pass


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    value: float = float("nan")
    duals: np.ndarray | None = None
    iterations: int = 0
    basis: list[int] = field(default_factory=list)
    # phase-1 dual ray when infeasible: y.A <= 0 and y.b > 0 (original rows)
    certificate: np.ndarray | None = None
    infeasibility: float = 0.0


def _solve(B, rhs):
    return np.linalg.solve(B, rhs)


def _iterate(A, b, c, basis, tol, max_iter, artificial_from=None, stop_below=None):
    """Run primal simplex from a feasible basis. Returns (status, basis, iterations).

    Columns from ``artificial_from`` on may leave the basis but never re-enter.
    The run stops early once the objective drops to ``stop_below``.
    """
    m, N = A.shape
    allowed = None
    if artificial_from is not None:
        allowed = np.ones(N, dtype=bool)
        allowed[artificial_from:] = False
    degenerate = 0
    bland = False
    threshold = 10 * (m + N)
    it = 0
    while True:
        B = A[:, basis]
        xb = _solve(B, b)
        y = _solve(B.T, c[basis])
        d = c - y @ A
        if stop_below is not None and c[basis] @ xb <= stop_below:
            return OPTIMAL, basis, it
        d[basis] = 0.0
        if allowed is not None:
            d[~allowed] = 0.0
        scale = max(1.0, float(np.abs(c).max(initial=0.0)))
        cand = np.nonzero(d < -tol * scale)[0]
        if cand.size == 0:
            return OPTIMAL, basis, it
        if it >= max_iter:
            return ITERATION_LIMIT, basis, it
        if bland:
            j = int(cand[0])
        else:
            j = int(cand[np.argmin(d[cand])])
        w = _solve(B, A[:, j])
        pos = np.nonzero(w > tol)[0]
        if pos.size == 0:
            return UNBOUNDED, basis, it
        ratios = np.maximum(xb[pos], 0.0) / w[pos]
        best = ratios.min()
        tie = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
        # lowest basic variable index among ties
        r = int(tie[np.argmin(np.asarray(basis)[tie])])
        if best <= 1e-14:
            degenerate += 1
            if degenerate > threshold:
                bland = True
        else:
            degenerate = 0
        basis = list(basis)
        basis[r] = j
        it += 1


def simplex(c, A, b, *, tol: float = 1e-9, feas_tol: float = 1e-9,
            max_iter: int | None = None) -> LPResult:
    """Solve ``min c.x, A x = b, x >= 0`` by two-phase revised simplex.

    Rows are scaled to unit max-norm internally; reported duals and
    certificates refer to the original rows.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float).ravel()
    c = np.array(c, dtype=float).ravel()
    m, N = A.shape
    if b.shape != (m,) or c.shape != (N,):
        raise ValueError("shape mismatch between c, A and b")
    if max_iter is None:
        max_iter = 50 * (m + N) + 1000

    row_scale = np.maximum(np.abs(A).max(axis=1), np.abs(b))
    row_scale[row_scale == 0] = 1.0
    As = A / row_scale[:, None]
    bs = b / row_scale
    flip = np.where(bs < 0, -1.0, 1.0)
    As *= flip[:, None]
    bs *= flip

    # phase 1 with one artificial per row
    A1 = np.hstack([As, np.eye(m)])
    c1 = np.concatenate([np.zeros(N), np.ones(m)])
    basis = list(range(N, N + m))
    status, basis, it1 = _iterate(A1, bs, c1, basis, tol, max_iter, artificial_from=N, stop_below=0.1 * feas_tol)
    if status != OPTIMAL:
        raise SolverError(f"phase 1 ended with status {status}")
    B = A1[:, basis]
    xb = _solve(B, bs)
    infeas = float(sum(xb[k] for k, j in enumerate(basis) if j >= N))
    if infeas > feas_tol:
        y = _solve(B.T, c1[basis])
        cert = y * flip / row_scale
        return LPResult(INFEASIBLE, iterations=it1, certificate=cert, infeasibility=infeas)

    # drive zero-level artificials out; drop rows that turn out redundant
    keep_rows = list(range(m))
    for k in range(m):
        j = basis[k]
        if j < N:
            continue
        B = A1[:, basis]
        row = _solve(B.T, np.eye(m)[k]) @ As
        row[[bj for bj in basis if bj < N]] = 0.0
        nz = np.nonzero(np.abs(row) > 1e-9)[0]
        if nz.size:
            basis[k] = int(nz[0])
        else:
            keep_rows.remove(k)
    if len(keep_rows) < m:
        sel = [basis[k] for k in keep_rows]
        As2, bs2 = As[keep_rows], bs[keep_rows]
        basis = sel
    else:
        As2, bs2 = As, bs

    status, basis, it2 = _iterate(As2, bs2, c, basis, tol, max_iter)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, iterations=it1 + it2)
    if status != OPTIMAL:
        raise SolverError(f"phase 2 ended with status {status}")
    B = As2[:, basis]
    xb = _solve(B, bs2)
    # one step of iterative refinement against the unscaled system
    for _ in range(2):
        resid = bs2 - B @ xb
        xb = xb + _solve(B, resid)
    x = np.zeros(N)
    x[basis] = np.where(np.abs(xb) < 1e-15, 0.0, xb)
    y_s = _solve(B.T, c[basis])
    y = np.zeros(m)
    y[keep_rows] = y_s
    y = y * flip / row_scale
    return LPResult(OPTIMAL, x=x, value=float(c @ x), duals=y,
                    iterations=it1 + it2, basis=list(basis))


def highs(c, A, b) -> LPResult:
    """Same contract via scipy's HiGHS backend, for cross-checks."""
    from scipy.optimize import linprog

    res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if res.status == 2:
        return LPResult(INFEASIBLE)
    if res.status == 3:
        return LPResult(UNBOUNDED)
    if res.status != 0:
        raise SolverError(res.message)
    return LPResult(OPTIMAL, x=np.asarray(res.x), value=float(res.fun),
                    duals=np.asarray(res.eqlin.marginals), iterations=int(res.nit))


SOLVERS = {"simplex": simplex, "highs": highs}


def get_solver(name: str):
    try:
        return SOLVERS[name]
    except KeyError:
        raise ValueError(f"unknown solver {name!r}; choose from {sorted(SOLVERS)}") from None
