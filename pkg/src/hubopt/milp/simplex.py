"""Bounded-variable revised primal simplex (dense, two-phase).

Rows are turned into equalities by one activity column per row,
``A x - r = 0`` with ``row_lo <= r <= row_hi``, so variable and row bounds
are handled uniformly by the ratio test and never become explicit rows.
Phase I prices artificial columns only; they are fixed at zero afterwards.
Dantzig pricing switches to Bland's rule after a run of degenerate pivots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AT_LOWER, AT_UPPER, FREE_ZERO, BASIC = 0, 1, 2, 3


@dataclass
class LPResult:
    status: str              # optimal | infeasible | unbounded | iteration_limit
    x: np.ndarray
    objective: float
    iterations: int


class _Simplex:
    def __init__(self, c, A, row_lo, row_hi, lb, ub, feas_tol, opt_tol,
                 max_iter, stall_limit, refactor_every):
        A = np.asarray(A, dtype=float)
        m, n = A.shape
        self.m, self.n = m, n
        self.feas_tol, self.opt_tol = feas_tol, opt_tol
        self.max_iter, self.stall_limit = max_iter, stall_limit
        self.refactor_every = refactor_every
        self.c_orig = np.asarray(c, dtype=float)

        # initial nonbasic point for structural columns
        x0 = np.where(np.isfinite(lb), lb, np.where(np.isfinite(ub), ub, 0.0))
        act = A @ x0 if m else np.zeros(0)
        clipped = np.clip(act, row_lo, row_hi)
        need_art = np.abs(clipped - act) > feas_tol
        sigma = np.where(clipped > act, 1.0, -1.0)

        # columns: [x (n) | r (m) | artificials (m)]
        self.N = n + 2 * m
        self.M = np.hstack([A, -np.eye(m), np.diag(sigma)]) if m else np.zeros((0, n))
        self.lb = np.concatenate([lb, row_lo, np.zeros(m)])
        self.ub = np.concatenate([ub, row_hi, np.where(need_art, np.inf, 0.0)])
        self.x = np.concatenate([x0, np.zeros(m), np.zeros(m)])
        self.state = np.empty(self.N, dtype=int)
        for j in range(n):
            if np.isfinite(lb[j]):
                self.state[j] = AT_LOWER
            elif np.isfinite(ub[j]):
                self.state[j] = AT_UPPER
            else:
                self.state[j] = FREE_ZERO
        self.basis = np.empty(m, dtype=int)
        for i in range(m):
            r, a = n + i, n + m + i
            if need_art[i]:
                self.basis[i] = a
                self.x[a] = abs(clipped[i] - act[i])
                self.x[r] = clipped[i]
                self.state[r] = AT_LOWER if clipped[i] == row_lo[i] else AT_UPPER
                self.state[a] = BASIC
            else:
                self.basis[i] = r
                self.x[r] = act[i]
                self.state[r] = BASIC
                self.state[a] = AT_LOWER
        self.need_phase1 = bool(need_art.any())
        self.Binv = np.eye(m)
        self._refactor()
        self.iterations = 0

    # -- linear algebra ------------------------------------------------
    def _refactor(self):
        if self.m == 0:
            return
        B = self.M[:, self.basis]
        self.Binv = np.linalg.inv(B)
        nonbasic = self.state != BASIC
        rhs = -self.M[:, nonbasic] @ self.x[nonbasic]
        self.x[self.basis] = self.Binv @ rhs

    # -- main loop -----------------------------------------------------
    def run(self, cost):
        bland = False
        degenerate_run = 0
        since_refactor = 0
        while True:
            if self.iterations >= self.max_iter:
                return "iteration_limit"
            if self.m:
                y = cost[self.basis] @ self.Binv
                d = cost - y @ self.M
            else:
                d = cost.copy()
            d[self.basis] = 0.0
            fixed = self.ub - self.lb <= 0.0
            elig = np.zeros(self.N, dtype=bool)
            st = self.state
            elig |= (st == AT_LOWER) & (d < -self.opt_tol)
            elig |= (st == AT_UPPER) & (d > self.opt_tol)
            elig |= (st == FREE_ZERO) & (np.abs(d) > self.opt_tol)
            elig &= ~fixed
            cand = np.flatnonzero(elig)
            if cand.size == 0:
                return "optimal"
            if bland:
                q = int(cand[0])
            else:
                scores = np.abs(d[cand])
                q = int(cand[np.argmax(scores)])  # argmax keeps the lowest index on ties
            direction = 1.0 if d[q] < 0 else -1.0

            alpha = self.Binv @ self.M[:, q] if self.m else np.zeros(0)
            theta = self.ub[q] - self.lb[q]  # bound flip distance (may be inf)
            leave = -1
            leave_to_upper = False
            if self.m:
                step = direction * alpha
                xb = self.x[self.basis]
                lbb, ubb = self.lb[self.basis], self.ub[self.basis]
                ratios = np.full(self.m, np.inf)
                dec = step > self.feas_tol
                inc = step < -self.feas_tol
                with np.errstate(divide="ignore", invalid="ignore"):
                    ratios[dec] = (xb[dec] - lbb[dec]) / step[dec]
                    ratios[inc] = (ubb[inc] - xb[inc]) / (-step[inc])
                ratios = np.maximum(ratios, 0.0)
                best = ratios.min()
                if best < theta:
                    ties = np.flatnonzero(ratios <= best + 1e-12)
                    if bland:
                        i = int(ties[np.argmin(self.basis[ties])])
                    else:
                        i = int(ties[np.argmax(np.abs(alpha[ties]))])
                    theta = ratios[i]
                    leave = i
                    leave_to_upper = inc[i]
            if not np.isfinite(theta):
                return "unbounded"

            # move
            if self.m:
                self.x[self.basis] -= theta * direction * alpha
            self.x[q] += theta * direction
            self.iterations += 1

            if theta <= 1e-12:
                degenerate_run += 1
                if degenerate_run >= self.stall_limit:
                    bland = True
            else:
                degenerate_run = 0

            if leave < 0:
                # bound flip
                self.state[q] = AT_UPPER if direction > 0 else AT_LOWER
                self.x[q] = self.ub[q] if direction > 0 else self.lb[q]
                continue

            out = self.basis[leave]
            self.x[out] = self.ub[out] if leave_to_upper else self.lb[out]
            self.state[out] = AT_UPPER if leave_to_upper else AT_LOWER
            self.basis[leave] = q
            self.state[q] = BASIC
            piv = alpha[leave]
            row = self.Binv[leave] / piv
            self.Binv -= np.outer(alpha, row)
            self.Binv[leave] = row
            since_refactor += 1
            if since_refactor >= self.refactor_every:
                self._refactor()
                since_refactor = 0

    def solve(self) -> LPResult:
        n, m = self.n, self.m
        if self.need_phase1:
            cost1 = np.zeros(self.N)
            cost1[n + m:] = 1.0
            status = self.run(cost1)
            self._refactor()
            if status == "iteration_limit":
                return LPResult(status, self.x[:n].copy(), np.nan, self.iterations)
            infeas = self.x[n + m:].sum()
            if infeas > 1e-7:
                return LPResult("infeasible", self.x[:n].copy(), np.nan, self.iterations)
        # fix artificials at zero
        self.ub[n + m:] = 0.0
        art_nb = (self.state[n + m:] != BASIC)
        self.x[n + m:][art_nb] = 0.0
        self.state[n + m:][art_nb] = AT_LOWER
        cost2 = np.zeros(self.N)
        cost2[:n] = self.c_orig
        status = self.run(cost2)
        self._refactor()
        x = self.x[:n].copy()
        obj = float(self.c_orig @ x)
        return LPResult(status, x, obj, self.iterations)


def solve_lp(c, A, row_lo, row_hi, lb, ub, *, feas_tol=1e-9, opt_tol=1e-9,
             max_iter=None, stall_limit=50, refactor_every=50) -> LPResult:
    """Minimise ``c @ x`` subject to ``row_lo <= A x <= row_hi``, ``lb <= x <= ub``.

    ``A`` may be dense or scipy-sparse; infinities mark absent bounds.
    """
    if hasattr(A, "toarray"):
        A = A.toarray()
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        A = A.reshape(0, len(c))
    lb = np.asarray(lb, dtype=float)
    ub = np.asarray(ub, dtype=float)
    if np.any(lb > ub):
        return LPResult("infeasible", np.zeros(len(c)), np.nan, 0)
    row_lo = np.asarray(row_lo, dtype=float)
    row_hi = np.asarray(row_hi, dtype=float)
    if np.any(row_lo > row_hi):
        return LPResult("infeasible", np.zeros(len(c)), np.nan, 0)
    m, n = A.shape
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000
    solver = _Simplex(c, A, row_lo, row_hi, lb, ub, feas_tol, opt_tol,
                      max_iter, stall_limit, refactor_every)
    return solver.solve()
