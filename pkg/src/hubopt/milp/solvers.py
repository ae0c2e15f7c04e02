"""Solver entry point and backends.

Every backend takes a :class:`MilpModel` and returns a :class:`Solution`;
model-building code never talks to a backend directly.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .bnb import branch_and_bound
from .model import (INFEASIBLE, ITERATION_LIMIT, OPTIMAL, UNBOUNDED, MilpModel,
                    Solution)
from .simplex import solve_lp

BACKENDS = ("reference", "highs", "auto")

# "auto" keeps the reference solver for desk-scale models only
AUTO_MAX_VARS = 400
AUTO_MAX_BINARIES = 40


@dataclass(frozen=True)
class SolveOptions:
    eps_feas: float = 1e-6
    eps_int: float = 1e-6
    mip_gap: float = 1e-6
    node_limit: int = 100_000
    time_limit: float | None = None
    backend: str | None = None


def resolve_backend(model: MilpModel, backend: str | None = None) -> str:
    name = (backend or os.environ.get("HUBOPT_SOLVER") or "auto").lower()
    if name not in BACKENDS:
        raise ValueError(f"unknown solver backend {name!r}; choose from {BACKENDS}")
    if name == "auto":
        small = model.n_vars <= AUTO_MAX_VARS and len(model.binaries()) <= AUTO_MAX_BINARIES
        return "reference" if small else "highs"
    return name


def solve(model: MilpModel, opts: SolveOptions | None = None, **kwargs) -> Solution:
    """Solve ``model`` (minimisation).

    Keyword arguments override fields of ``opts``.  The backend comes from
    ``opts.backend``, else the ``HUBOPT_SOLVER`` environment variable, else
    ``"auto"``.
    """
    opts = opts or SolveOptions()
    if kwargs:
        opts = SolveOptions(**{**opts.__dict__, **kwargs})
    model.validate_structure()
    backend = resolve_backend(model, opts.backend)
    if backend == "reference":
        sol = _solve_reference(model, opts)
    else:
        sol = _solve_highs(model, opts)
    sol.backend = backend
    if sol.has_values:
        sol.activities = np.array([c.activity(sol.values) for c in model.constraints])
    return sol


def _solve_reference(model: MilpModel, opts: SolveOptions) -> Solution:
    if model.binaries():
        return branch_and_bound(model, eps_feas=opts.eps_feas, eps_int=opts.eps_int,
                                mip_gap=opts.mip_gap, node_limit=opts.node_limit)
    c, A, lo, hi, lb, ub, _ = model.to_arrays()
    tol = min(1e-9, opts.eps_feas * 1e-3)
    res = solve_lp(c, A, lo, hi, lb, ub, feas_tol=tol, opt_tol=tol)
    if res.status == "optimal":
        return Solution(OPTIMAL, res.objective + model.objective_constant, res.x, nodes=1)
    if res.status == "unbounded":
        return Solution(UNBOUNDED, -math.inf, res.x, nodes=1)
    if res.status == "infeasible":
        return Solution(INFEASIBLE, math.nan, np.full(model.n_vars, np.nan), nodes=1)
    return Solution(ITERATION_LIMIT, math.nan, res.x, gap=math.inf, nodes=1)


def _solve_highs(model: MilpModel, opts: SolveOptions) -> Solution:
    from scipy.optimize import Bounds, LinearConstraint, milp

    c, A, lo, hi, lb, ub, is_int = model.to_arrays()
    options = {"disp": False, "mip_rel_gap": opts.mip_gap, "node_limit": opts.node_limit}
    if opts.time_limit is not None:
        options["time_limit"] = opts.time_limit
    constraints = [LinearConstraint(A, lo, hi)] if model.n_cons else []
    res = milp(c, constraints=constraints, integrality=is_int.astype(int),
               bounds=Bounds(lb, ub), options=options)
    n = model.n_vars
    if res.status == 0 and res.x is not None:
        x = np.asarray(res.x, dtype=float)
        x[is_int] = np.round(x[is_int])
        gap = float(getattr(res, "mip_gap", 0.0) or 0.0)
        return Solution(OPTIMAL, float(c @ x) + model.objective_constant, x, gap=gap,
                        nodes=int(getattr(res, "mip_node_count", 0) or 0))
    if res.status == 2:
        return Solution(INFEASIBLE, math.nan, np.full(n, np.nan))
    if res.status == 3:
        return Solution(UNBOUNDED, -math.inf, np.full(n, np.nan))
    x = np.asarray(res.x, dtype=float) if res.x is not None else np.full(n, np.nan)
    obj = float(c @ x) + model.objective_constant if res.x is not None else math.nan
    return Solution(ITERATION_LIMIT, obj, x, gap=math.inf)
