"""Dense two-phase primal simplex for small linear programs.

The programs produced by the polynomial search have thousands of rows but
only a dozen variables, so :func:`solve` runs the simplex method on the LP
dual, whose tableau has one row per primal variable.  Pivots follow a
scaled Dantzig rule and switch to Bland's rule when progress stalls.  The primal solution is
read off the reduced costs of the dual slack columns and then re-checked by
:func:`audit`, independently of the solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["LinearProgram", "LpSolution", "solve", "audit", "dual_bound"]

_PIVOT_TOL = 1e-11
_COST_TOL = 1e-10


@dataclass
class LinearProgram:
    """``minimize objective @ x`` subject to row constraints and variable bounds.

    Rows are stored as a dense matrix with a relation per row (``"<="``,
    ``">="`` or ``"="``).  Lower bounds default to 0 (``-inf`` for a free
    variable), upper bounds to ``+inf``.
    """

    objective: np.ndarray
    A: np.ndarray = None
    relations: list = field(default_factory=list)
    rhs: np.ndarray = None
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        n = self.objective.size
        self.A = np.zeros((0, n)) if self.A is None else np.atleast_2d(np.asarray(self.A, dtype=float))
        if self.A.shape[1] != n:
            raise ValueError("constraint rows must have the arity of the objective")
        self.rhs = np.zeros(0) if self.rhs is None else np.asarray(self.rhs, dtype=float)
        self.relations = list(self.relations)
        if not (len(self.relations) == len(self.rhs) == self.A.shape[0]):
            raise ValueError("rows, relations and rhs disagree in length")
        if not np.all(np.isfinite(self.rhs)):
            raise ValueError("rhs must be finite")
        for r in self.relations:
            if r not in ("<=", ">=", "="):
                raise ValueError(f"bad relation {r!r}")
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float)
        self.upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float)

    @property
    def num_vars(self) -> int:
        return self.objective.size

    def add_row(self, coeffs, relation: str, rhs: float) -> None:
        self.A = np.vstack([self.A, np.asarray(coeffs, dtype=float)[None, :]])
        self.relations.append(relation)
        self.rhs = np.append(self.rhs, float(rhs))
        if relation not in ("<=", ">=", "=") or not math.isfinite(rhs):
            raise ValueError("bad row")


@dataclass
class LpSolution:
    status: str
    x: np.ndarray
    objective_value: float
    duals: np.ndarray = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


# ----------------------------------------------------------------------------
# tableau core: minimise c @ x, A x = b, x >= 0
# ----------------------------------------------------------------------------


class _Unbounded(Exception):
    pass


def _pivot(T, row, col):
    T[row] /= T[row, col]
    piv = T[row]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, piv)


def _run(T, basis, ncols, max_iter):
    """Iterate on tableau ``T`` whose last row is the reduced-cost row and last column the rhs.

    Entering columns are chosen by reduced cost scaled by column norm; after a
    run of degenerate pivots the rule falls back to Bland's, which cannot cycle.
    """
    it = 0
    m = len(basis)
    stall = 0
    last = T[-1, -1]
    while True:
        cost = T[-1, :ncols]
        cand = np.flatnonzero(cost < -_COST_TOL)
        if cand.size == 0:
            return it
        if stall < 50:
            norms = np.sqrt(1.0 + np.einsum("ij,ij->j", T[:m, cand], T[:m, cand]))
            col = int(cand[np.argmin(cost[cand] / norms)])
        else:
            col = int(cand[0])
        colv = T[:m, col]
        pos = colv > _PIVOT_TOL
        if not pos.any():
            raise _Unbounded(col)
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / colv[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12 * max(1.0, abs(best)))
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, row, col)
        basis[row] = col
        it += 1
        if T[-1, -1] < last - 1e-12 * max(1.0, abs(last)) or T[-1, -1] > last + 1e-12 * max(1.0, abs(last)):
            stall = 0
        else:
            stall += 1
        last = T[-1, -1]
        if it > max_iter:
            raise RuntimeError("simplex iteration limit reached")


def _standard_simplex(A, b, c, max_iter=100000):
    """Two-phase simplex.  Returns ``(status, x, final tableau, basis)``."""
    m, n = A.shape
    A = A.copy()
    b = b.copy()
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    # slack-like identity columns already present are reused as the starting basis
    basis = [-1] * m
    for j in range(n):
        colj = A[:, j]
        nz = np.flatnonzero(colj)
        if nz.size == 1 and colj[nz[0]] == 1.0 and basis[nz[0]] == -1:
            basis[nz[0]] = j
    art_rows = [i for i in range(m) if basis[i] == -1]
    na = len(art_rows)
    T = np.zeros((m + 1, n + na + 1))
    T[:m, :n] = A
    T[:m, -1] = b
    for k, i in enumerate(art_rows):
        T[i, n + k] = 1.0
        basis[i] = n + k
    iters = 0
    if na:
        T[-1, n : n + na] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        iters += _run(T, basis, n + na, max_iter)
        if T[-1, -1] < -1e-9 * max(1.0, np.abs(b).max()):
            return "infeasible", None, T, basis, iters
        # drive remaining artificials out of the basis
        for r, bj in enumerate(basis):
            if bj >= n:
                nzc = np.flatnonzero(np.abs(T[r, :n]) > _PIVOT_TOL)
                if nzc.size:
                    _pivot(T, r, int(nzc[0]))
                    basis[r] = int(nzc[0])
        T = np.delete(T, np.s_[n : n + na], axis=1)
    T[-1] = 0.0
    T[-1, :n] = c
    for r, bj in enumerate(basis):
        if bj < n and c[bj] != 0:
            T[-1] -= c[bj] * T[r]
    try:
        iters += _run(T, basis, n, max_iter)
    except _Unbounded:
        return "unbounded", None, T, basis, iters
    x = np.zeros(n)
    for r, bj in enumerate(basis):
        if bj < n:
            x[bj] = T[r, -1]
    return "optimal", x, T, basis, iters


# ----------------------------------------------------------------------------
# normalisation of a general program to  min c x, G x >= h, x >= 0
# ----------------------------------------------------------------------------


def _normalise(lp: LinearProgram):
    n = lp.num_vars
    cols = []  # (original index, sign, shift)
    for j in range(n):
        lo = lp.lower[j]
        if np.isfinite(lo):
            cols.append((j, 1.0, lo))
        else:
            cols.append((j, 1.0, 0.0))
            cols.append((j, -1.0, 0.0))
    M = np.zeros((n, len(cols)))
    shift = np.zeros(n)
    for k, (j, s, lo) in enumerate(cols):
        M[j, k] = s
        shift[j] = lo
    rows, rhs = [], []
    base = lp.A @ shift if lp.A.size else np.zeros(len(lp.rhs))
    for i, rel in enumerate(lp.relations):
        a = lp.A[i] @ M
        h = lp.rhs[i] - base[i]
        if rel in (">=", "="):
            rows.append(a)
            rhs.append(h)
        if rel in ("<=", "="):
            rows.append(-a)
            rhs.append(-h)
    for j in range(n):
        if np.isfinite(lp.upper[j]):
            rows.append(-M[j])
            rhs.append(-(lp.upper[j] - shift[j]))
    G = np.array(rows).reshape(len(rows), len(cols))
    h = np.array(rhs, dtype=float)
    c = lp.objective @ M
    offset = float(lp.objective @ shift)
    return G, h, c, M, shift, offset


def _solve_via_dual(G, h, c, max_iter):
    """Solve ``min c x, G x >= h, x >= 0`` through its dual ``max h y, G^T y <= c, y >= 0``."""
    m, n = G.shape
    A = np.hstack([G.T, np.eye(n)])
    cost = np.concatenate([-h, np.zeros(n)])
    status, sol, T, basis, iters = _standard_simplex(A, c.copy(), cost, max_iter)
    if status == "optimal":
        y = sol[:m]
        # reduced costs of the dual slack columns are the primal values
        x = np.maximum(T[-1, m : m + n], 0.0)
        return "optimal", x, y, iters
    if status == "unbounded":
        return "infeasible", None, None, iters
    # dual infeasible: primal is unbounded if it is feasible at all
    fstatus, _, _, it2 = _solve_via_dual(G, h, np.zeros(n), max_iter)
    return ("unbounded" if fstatus == "optimal" else "infeasible"), None, None, iters + it2


def _polish(G, h, x, y):
    """Re-solve the active primal rows exactly to remove drift from the tableau updates."""
    active = np.flatnonzero(y > 1e-12)
    basic_vars = np.flatnonzero(x > 1e-12)
    if active.size == 0 or basic_vars.size == 0:
        return x
    sub = G[np.ix_(active, basic_vars)]
    try:
        sol, *_ = np.linalg.lstsq(sub, h[active], rcond=None)
    except np.linalg.LinAlgError:
        return x
    cand = x.copy()
    cand[basic_vars] = sol
    if np.all(cand >= -1e-12) and _violation(G, h, cand) <= _violation(G, h, x):
        return np.maximum(cand, 0.0)
    return x


def _violation(G, h, x):
    if G.size == 0:
        return 0.0
    return float(np.max(np.maximum(h - G @ x, 0.0), initial=0.0))


def solve(lp: LinearProgram, max_iter: int = 200000) -> LpSolution:
    """Solve ``lp``; infeasibility and unboundedness are reported through ``status``."""
    G, h, c, M, shift, offset = _normalise(lp)
    status, xn, y, iters = _solve_via_dual(G, h, c, max_iter)
    if status != "optimal":
        return LpSolution(status, np.full(lp.num_vars, np.nan), math.nan, None, iters)
    xn = _polish(G, h, xn, y)
    x = M @ xn + shift
    return LpSolution("optimal", x, float(lp.objective @ x), y, iters)


def audit(lp: LinearProgram, x) -> float:
    """Largest violation of any row or bound by ``x`` (0 when feasible)."""
    x = np.asarray(x, dtype=float)
    worst = 0.0
    lhs = lp.A @ x if lp.A.size else np.zeros(0)
    for v, rel, b in zip(lhs, lp.relations, lp.rhs):
        if rel == "<=":
            worst = max(worst, v - b)
        elif rel == ">=":
            worst = max(worst, b - v)
        else:
            worst = max(worst, abs(v - b))
    worst = max(worst, float(np.max(lp.lower - x, initial=0.0)), float(np.max(x - lp.upper, initial=0.0)))
    return float(worst)


def dual_bound(lp: LinearProgram, y) -> float:
    """Lower bound on the optimum certified by multipliers ``y`` of the normalised program.

    ``y`` must be nonnegative with ``G^T y <= c``; any such ``y`` gives
    ``h @ y + offset <= optimum`` (weak duality).  Returns ``-inf`` otherwise.
    """
    G, h, c, _, _, offset = _normalise(lp)
    y = np.asarray(y, dtype=float)
    if np.any(y < -1e-12) or np.any(G.T @ y - c > 1e-9):
        return -math.inf
    return float(h @ y + offset)
