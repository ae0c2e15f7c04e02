"""Neutral MILP representation shared by model builders and solver backends."""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

LE, EQ, GE = "<=", "=", ">="
SENSES = (LE, EQ, GE)

CONTINUOUS, BINARY = "continuous", "binary"


class ModelStructureError(ValueError):
    """Raised when a model references unknown variables or holds bad data."""


@dataclass
class Variable:
    id: int
    name: str
    lower: float = 0.0
    upper: float = math.inf
    integrality: str = CONTINUOUS

    @property
    def is_binary(self) -> bool:
        return self.integrality == BINARY


@dataclass
class LinearConstraint:
    """Row ``sum(terms) <sense> rhs``.

    ``tag`` is the constraint family (``"el_balance"``), ``index`` its
    locator inside the family (``(y, t)``).  ``protect_as`` is only used by
    the robust layer: for an equality whose surplus side is absorbed by a
    recourse variable, it names the single inequality that must be
    protected.
    """

    id: int
    name: str
    terms: dict[int, float]
    sense: str
    rhs: float
    tag: str | None = None
    index: tuple = ()
    protect_as: str | None = None

    def activity(self, values: np.ndarray) -> float:
        return float(sum(c * values[j] for j, c in self.terms.items()))

    def violation(self, values: np.ndarray) -> float:
        """Amount by which ``values`` violates the row (0 when satisfied)."""
        lhs = self.activity(values)
        if self.sense == LE:
            return max(0.0, lhs - self.rhs)
        if self.sense == GE:
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)


@dataclass
class MilpModel:
    """Minimisation MILP: variables, linear rows and a linear objective."""

    name: str = "model"
    variables: list[Variable] = field(default_factory=list)
    constraints: list[LinearConstraint] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    objective_constant: float = 0.0

    # -- building -------------------------------------------------------
    def add_var(self, name: str, lower: float = 0.0, upper: float = math.inf,
                binary: bool = False) -> int:
        if binary:
            lower, upper = max(0.0, lower), min(1.0, upper)
        if lower > upper:
            raise ModelStructureError(f"variable {name}: lower {lower} > upper {upper}")
        vid = len(self.variables)
        self.variables.append(Variable(vid, name, float(lower), float(upper),
                                       BINARY if binary else CONTINUOUS))
        return vid

    def add_constraint(self, terms: Mapping[int, float] | Iterable[tuple[int, float]],
                       sense: str, rhs: float, name: str | None = None,
                       tag: str | None = None, index: tuple = (),
                       protect_as: str | None = None) -> int:
        if sense not in SENSES:
            raise ModelStructureError(f"unknown sense {sense!r}")
        merged: dict[int, float] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for j, c in items:
            merged[j] = merged.get(j, 0.0) + float(c)
        merged = {j: c for j, c in merged.items() if c != 0.0}
        cid = len(self.constraints)
        if name is None:
            name = f"{tag}[{','.join(map(str, index))}]" if tag else f"c{cid}"
        self.constraints.append(LinearConstraint(cid, name, merged, sense, float(rhs),
                                                 tag, tuple(index), protect_as))
        return cid

    def add_objective(self, terms: Mapping[int, float] | Iterable[tuple[int, float]],
                      constant: float = 0.0) -> None:
        items = terms.items() if isinstance(terms, Mapping) else terms
        for j, c in items:
            self.objective[j] = self.objective.get(j, 0.0) + float(c)
        self.objective_constant += constant

    def copy(self) -> "MilpModel":
        return copy.deepcopy(self)

    # -- queries --------------------------------------------------------
    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_cons(self) -> int:
        return len(self.constraints)

    def binaries(self) -> list[int]:
        return [v.id for v in self.variables if v.is_binary]

    def var_index(self) -> dict[str, int]:
        return {v.name: v.id for v in self.variables}

    def rows_with_tag(self, tag: str) -> list[LinearConstraint]:
        return [c for c in self.constraints if c.tag == tag]

    def objective_value(self, values: np.ndarray) -> float:
        return float(sum(c * values[j] for j, c in self.objective.items())
                     + self.objective_constant)

    def validate_structure(self) -> None:
        n = self.n_vars
        for v in self.variables:
            if v.lower > v.upper:
                raise ModelStructureError(f"variable {v.name}: lower > upper")
            if v.is_binary and (v.lower < 0 or v.upper > 1):
                raise ModelStructureError(f"binary {v.name} has bounds outside [0,1]")
        for c in self.constraints:
            for j, a in c.terms.items():
                if not 0 <= j < n:
                    raise ModelStructureError(f"constraint {c.name} references unknown variable {j}")
                if not math.isfinite(a):
                    raise ModelStructureError(f"constraint {c.name} has non-finite coefficient")
            if not math.isfinite(c.rhs):
                raise ModelStructureError(f"constraint {c.name} has non-finite rhs")
        for j, a in self.objective.items():
            if not 0 <= j < n:
                raise ModelStructureError(f"objective references unknown variable {j}")
            if not math.isfinite(a):
                raise ModelStructureError("objective has non-finite coefficient")

    def to_arrays(self):
        """Return ``(c, A, row_lo, row_hi, lb, ub, is_int)`` with ``A`` in CSR form."""
        n = self.n_vars
        c = np.zeros(n)
        for j, a in self.objective.items():
            c[j] = a
        rows, cols, data = [], [], []
        lo = np.empty(self.n_cons)
        hi = np.empty(self.n_cons)
        for i, con in enumerate(self.constraints):
            for j, a in con.terms.items():
                rows.append(i)
                cols.append(j)
                data.append(a)
            lo[i] = con.rhs if con.sense in (EQ, GE) else -np.inf
            hi[i] = con.rhs if con.sense in (EQ, LE) else np.inf
        A = sp.csr_matrix((data, (rows, cols)), shape=(self.n_cons, n))
        lb = np.array([v.lower for v in self.variables])
        ub = np.array([v.upper for v in self.variables])
        is_int = np.array([v.is_binary for v in self.variables], dtype=bool)
        return c, A, lo, hi, lb, ub, is_int


@dataclass
class Solution:
    status: str
    objective: float
    values: np.ndarray
    gap: float = 0.0
    nodes: int = 0
    backend: str = ""
    activities: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"

    @property
    def has_values(self) -> bool:
        return self.values is not None and len(self.values) > 0 and np.all(np.isfinite(self.values))


OPTIMAL, INFEASIBLE, UNBOUNDED, ITERATION_LIMIT = "optimal", "infeasible", "unbounded", "iteration_limit"


def lp_relax(model: MilpModel) -> MilpModel:
    """Copy of ``model`` with every integrality mark dropped."""
    relaxed = model.copy()
    for v in relaxed.variables:
        v.integrality = CONTINUOUS
    return relaxed


def check_feasible(model: MilpModel, values, eps: float = 1e-6) -> list[int]:
    """Ids of the rows violated by more than ``eps`` at ``values``."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] < model.n_vars:
        raise ModelStructureError("values do not cover every variable")
    return [c.id for c in model.constraints if c.violation(values) > eps]


def bound_violations(model: MilpModel, values, eps: float = 1e-6) -> list[int]:
    values = np.asarray(values, dtype=float)
    return [v.id for v in model.variables
            if values[v.id] < v.lower - eps or values[v.id] > v.upper + eps]


def integrality_violations(model: MilpModel, values, eps: float = 1e-6) -> list[int]:
    values = np.asarray(values, dtype=float)
    return [j for j in model.binaries() if abs(values[j] - round(values[j])) > eps]
