"""Best-bound branch and bound over the simplex LP relaxation."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import (INFEASIBLE, ITERATION_LIMIT, OPTIMAL, UNBOUNDED, MilpModel,
                    Solution)
from .simplex import solve_lp


@dataclass(order=True)
class _Node:
    bound: float
    neg_depth: int
    seq: int
    lb: np.ndarray
    ub: np.ndarray


def _most_fractional(x, int_idx, eps_int):
    """Binary with fractional part closest to 0.5; lowest id wins ties."""
    best_j, best_score = -1, -1.0
    for j in int_idx:
        frac = x[j] - math.floor(x[j])
        if frac <= eps_int or frac >= 1.0 - eps_int:
            continue
        score = min(frac, 1.0 - frac)
        if score > best_score + 1e-12:
            best_j, best_score = j, score
    return best_j


def branch_and_bound(model: MilpModel, *, eps_feas=1e-6, eps_int=1e-6, mip_gap=1e-6,
                     node_limit=100_000) -> Solution:
    c, A, lo, hi, lb0, ub0, is_int = model.to_arrays()
    A = A.toarray()
    int_idx = np.flatnonzero(is_int)
    lp_tol = min(1e-9, eps_feas * 1e-3)

    def relax(lb, ub):
        return solve_lp(c, A, lo, hi, lb, ub, feas_tol=lp_tol, opt_tol=lp_tol)

    counter = itertools.count()
    root = relax(lb0, ub0)
    if root.status == "infeasible":
        return Solution(INFEASIBLE, math.nan, np.full(model.n_vars, np.nan), nodes=1)
    if root.status == "unbounded":
        return Solution(UNBOUNDED, -math.inf, root.x, nodes=1)
    if root.status == "iteration_limit":
        return Solution(ITERATION_LIMIT, math.nan, root.x, gap=math.inf, nodes=1)

    heap = [_Node(root.objective, 0, next(counter), lb0.copy(), ub0.copy())]
    cached = {id(heap[0]): root}
    incumbent_x, incumbent = None, math.inf
    nodes = 0
    best_bound = root.objective
    exhausted = True

    while heap:
        node = heapq.heappop(heap)
        res = cached.pop(id(node))
        best_bound = node.bound
        if incumbent < math.inf:
            if incumbent - node.bound <= mip_gap * max(1.0, abs(incumbent)):
                exhausted = False
                break
        nodes += 1
        if nodes > node_limit:
            status = ITERATION_LIMIT
            gap = math.inf if incumbent_x is None else (
                (incumbent - best_bound) / max(1.0, abs(incumbent)))
            if incumbent_x is None:
                return Solution(status, math.nan, res.x, gap=gap, nodes=nodes)
            return Solution(status, incumbent + model.objective_constant, incumbent_x,
                            gap=gap, nodes=nodes)

        x = res.x
        j = _most_fractional(x, int_idx, eps_int)
        if j < 0:
            if res.objective < incumbent:
                incumbent = res.objective
                incumbent_x = x.copy()
                incumbent_x[int_idx] = np.round(incumbent_x[int_idx])
            continue
        for child_lb, child_ub in _children(node, j, x[j]):
            child = relax(child_lb, child_ub)
            if child.status != "optimal":
                continue
            if child.objective >= incumbent - mip_gap * max(1.0, abs(incumbent)):
                continue
            cn = _Node(child.objective, node.neg_depth - 1, next(counter), child_lb, child_ub)
            cached[id(cn)] = child
            heapq.heappush(heap, cn)

    if incumbent_x is None:
        return Solution(INFEASIBLE, math.nan, np.full(model.n_vars, np.nan), nodes=nodes)
    lower = incumbent if exhausted else best_bound
    gap = max(0.0, (incumbent - lower) / max(1.0, abs(incumbent)))
    return Solution(OPTIMAL, incumbent + model.objective_constant, incumbent_x,
                    gap=gap, nodes=nodes)


def _children(node, j, value):
    down_ub = node.ub.copy()
    down_ub[j] = math.floor(value)
    up_lb = node.lb.copy()
    up_lb[j] = math.ceil(value)
    # nearer side first so equal-bound ties dive toward the rounded value
    if value - math.floor(value) >= 0.5:
        return [(up_lb, node.ub.copy()), (node.lb.copy(), down_ub)]
    return [(node.lb.copy(), down_ub), (up_lb, node.ub.copy())]
