"""MILP intermediate representation, reference solver and LP export."""

from .lpfile import read_lp, to_lp_string, write_lp
from .model import (BINARY, CONTINUOUS, EQ, GE, INFEASIBLE, ITERATION_LIMIT, LE,
                    OPTIMAL, UNBOUNDED, LinearConstraint, MilpModel,
                    ModelStructureError, Solution, Variable, bound_violations,
                    check_feasible, integrality_violations, lp_relax)
from .simplex import solve_lp
from .solvers import SolveOptions, resolve_backend, solve

__all__ = [
    "BINARY", "CONTINUOUS", "EQ", "GE", "LE",
    "OPTIMAL", "INFEASIBLE", "UNBOUNDED", "ITERATION_LIMIT",
    "Variable", "LinearConstraint", "MilpModel", "Solution", "ModelStructureError",
    "SolveOptions", "solve", "resolve_backend", "solve_lp", "lp_relax",
    "check_feasible", "bound_violations", "integrality_violations",
    "to_lp_string", "write_lp", "read_lp",
]
