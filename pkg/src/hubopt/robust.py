"""Budgeted (Bertsimas-Sim) robust counterpart of protected hub rows.

An uncertain entry either multiplies a model variable or is a constant term
of the row (renewable availability, a demand).  Constant entries are written
on a variable pinned to 1, so every entry has the same ``a_ij x_j`` form.
For a protected row ``sum_j a_ij x_j <= b_i`` the counterpart is

    sum_j a_ij x_j + gamma_i p_i + sum_k q_ik <= b_i
    p_i + q_ik >= ahat_ik y_k,   y_k >= |x_k|,   p_i, q_ik >= 0.
"""

from __future__ import annotations

import csv
import itertools
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .hub import HubModel
from .instance import HubInstance
from .milp import EQ, GE, LE, LinearConstraint, MilpModel, SolveOptions, Solution, solve
from .policy import build_policy_model
from .report import ScenarioReport, metrics

DEFAULT_PROTECTED = frozenset({"el_balance", "h2_dyn", "h2_meet"})
AUDIT_MAX_ENTRIES = 20


class RobustError(ValueError):
    pass


@dataclass(frozen=True)
class UncertainCoefficient:
    """One uncertain entry of row ``tag[index]``.

    ``var`` is the variable id, or ``None`` for a constant term; ``nominal``
    is the coefficient as it appears on the left-hand side (for a constant,
    the term itself, e.g. ``+pv`` or ``-demand``).
    """

    tag: str
    index: tuple
    var: int | None
    nominal: float
    deviation: float
    label: str = ""


@dataclass
class UncertaintySpec:
    entries: list[UncertainCoefficient]
    gamma: float = 0.0
    protected_tags: frozenset = DEFAULT_PROTECTED
    row_gammas: dict = field(default_factory=dict)

    def __post_init__(self):
        self.protected_tags = frozenset(self.protected_tags)
        if self.gamma < 0:
            raise RobustError("gamma must be >= 0")
        for e in self.entries:
            if e.tag not in self.protected_tags:
                raise RobustError(f"entry on unprotected tag {e.tag!r}")
            if e.deviation < 0:
                raise RobustError("deviations must be >= 0")
        big = self.max_group_size()
        if big and self.gamma > big:
            warnings.warn(f"gamma {self.gamma} exceeds the largest |J_i| = {big}", stacklevel=2)

    def groups(self) -> dict[tuple[str, tuple], list[UncertainCoefficient]]:
        out: dict[tuple[str, tuple], list[UncertainCoefficient]] = {}
        for e in self.entries:
            out.setdefault((e.tag, e.index), []).append(e)
        return out

    def max_group_size(self) -> int:
        return max((len(g) for g in self.groups().values()), default=0)

    def gamma_for(self, tag: str, index: tuple) -> float:
        return float(self.row_gammas.get((tag, index), self.gamma))

    def with_gamma(self, gamma: float) -> "UncertaintySpec":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return UncertaintySpec(list(self.entries), gamma, self.protected_tags,
                                   dict(self.row_gammas))


def derive_uncertainty(instance: HubInstance, hub: HubModel | None = None,
                       dev_fraction: float | None = None, gamma: float = 0.0,
                       protected_tags=DEFAULT_PROTECTED) -> UncertaintySpec:
    """Renewable availability and demand constants of the protected rows.

    Each ``el_balance[y,t]`` row gets four entries (PV, wind, electricity
    demand, EV demand) and each ``h2_meet[y,t]`` row one (hydrogen-vehicle
    demand), all with ``deviation = dev_fraction * |nominal|``; the fraction
    defaults to the instance's own.
    ``dev_fraction = 0`` is accepted for tests.
    """
    if dev_fraction is None:
        dev_fraction = instance.dev_fraction
    if not 0.0 <= dev_fraction < 1.0:
        raise RobustError("dev_fraction must be in [0, 1)")
    ny, nt = instance.time.shape
    dt = instance.time.period_duration_h
    d, r = instance.demands, instance.renewables
    protected_tags = frozenset(protected_tags)
    entries = []
    for y in range(ny):
        for t in range(nt):
            yt = (y, t)
            if "el_balance" in protected_tags:
                for label, nominal in (("pv", r.pv_MW[y, t]), ("wind", r.wind_MW[y, t]),
                                       ("electricity", -d.electricity_MWh[y, t] / dt),
                                       ("ev", -d.ev_MWh[y, t] / dt)):
                    entries.append(UncertainCoefficient("el_balance", yt, None, float(nominal),
                                                        dev_fraction * abs(float(nominal)), label))
            if "h2_meet" in protected_tags:
                nominal = -d.hv_MWh[y, t] / dt
                entries.append(UncertainCoefficient("h2_meet", yt, None, float(nominal),
                                                    dev_fraction * abs(float(nominal)), "hv"))
    return UncertaintySpec(entries, gamma, protected_tags)


def _row_lookup(model: MilpModel) -> dict[tuple[str, tuple], int]:
    return {(c.tag, c.index): c.id for c in model.constraints if c.tag is not None}


def _directions(con) -> list[str]:
    if con.protect_as is not None:
        return [con.protect_as]
    if con.sense == EQ:
        return [LE, GE]
    return [con.sense]


def robustify(model: MilpModel, spec: UncertaintySpec) -> MilpModel:
    """Robust counterpart of ``model`` for the rows named in ``spec``.

    An equality with ``protect_as`` set is replaced by that single protected
    inequality; other equalities are split into ``<=`` and ``>=`` rows and
    both are robustified.  Protected rows without uncertain entries are left
    untouched.  Returns a new model; ``model`` is not modified.
    """
    if spec.gamma < 0 or any(g < 0 for g in spec.row_gammas.values()):
        raise RobustError("gamma must be >= 0")
    lookup = _row_lookup(model)
    groups = spec.groups()
    for key in groups:
        if key not in lookup:
            raise RobustError(f"locator {key[0]}{list(key[1])} does not resolve to a row")
    rob = model.copy()
    rob.name = f"{model.name}_robust"
    one = None
    abs_var: dict[int, int] = {}

    def magnitude(j: int) -> int:
        # y_j >= |x_j|; y_j = x_j when x_j cannot be negative
        if rob.variables[j].lower >= 0:
            return j
        if j not in abs_var:
            yj = rob.add_var(f"abs[{rob.variables[j].name}]")
            rob.add_constraint({yj: 1.0, j: -1.0}, GE, 0.0, tag="rob_abs", index=(j, "+"))
            rob.add_constraint({yj: 1.0, j: 1.0}, GE, 0.0, tag="rob_abs", index=(j, "-"))
            abs_var[j] = yj
        return abs_var[j]

    for key in sorted(groups, key=lambda k: lookup[k]):
        entries = groups[key]
        cid = lookup[key]
        con = model.constraints[cid]
        gamma = spec.gamma_for(*key)
        if one is None and any(e.var is None for e in entries):
            one = rob.add_var("one", 1.0, 1.0)
        dirs = _directions(con)
        for n, direction in enumerate(dirs):
            sign = 1.0 if direction == LE else -1.0
            p = rob.add_var(f"rob_p[{con.name},{direction}]")
            extra = {p: gamma}
            for k, e in enumerate(entries):
                q = rob.add_var(f"rob_q[{con.name},{direction},{k}]")
                extra[q] = 1.0
                x = one if e.var is None else magnitude(e.var)
                rob.add_constraint({p: 1.0, q: 1.0, x: -e.deviation}, GE, 0.0,
                                   tag="rob_dev", index=(con.tag, con.index, direction, k))
            terms = {j: sign * a for j, a in con.terms.items()}
            for j, a in extra.items():
                terms[j] = terms.get(j, 0.0) + a
            if n == 0:
                terms = {j: a for j, a in terms.items() if a != 0.0}
                rob.constraints[cid] = LinearConstraint(cid, con.name, terms, LE,
                                                        sign * con.rhs, con.tag, con.index)
            else:
                rob.add_constraint(terms, LE, sign * con.rhs, name=f"{con.name}_{direction}",
                                   tag=con.tag, index=con.index + (direction,))
    return rob


def _lhs_terms(con, entries, values):
    """Nominal activity and per-entry ``ahat * x`` magnitudes (constants use x=1)."""
    act = con.activity(values)
    mags = np.array([e.deviation * (1.0 if e.var is None else abs(values[e.var]))
                     for e in entries])
    return act, mags


def _vertex_worst(mags: np.ndarray, gamma: float) -> float:
    """max over z in {-1,0,1}^J, sum|z| <= gamma (one extra fractional entry) of sum z*mag."""
    J = len(mags)
    whole = min(int(math.floor(gamma + 1e-12)), J)
    frac = gamma - whole if whole < J else 0.0
    best = 0.0
    idx = range(J)
    for k in range(whole + 1):
        for subset in itertools.combinations(idx, k):
            for signs in itertools.product((-1.0, 1.0), repeat=k):
                val = sum(s * mags[i] for s, i in zip(signs, subset))
                if frac > 1e-12:
                    rest = [mags[i] for i in idx if i not in subset]
                    val += frac * max(rest, default=0.0)
                best = max(best, val)
    return best


def worst_case_audit(model: MilpModel, spec: UncertaintySpec, solution,
                     grid: str = "vertex", detail: bool = False):
    """Largest violation of any protected row under admissible deviations.

    ``model`` is the nominal model (protected rows in their original form);
    ``solution`` is a ``Solution`` or a vector whose leading entries are the
    nominal variables, so robust solutions can be audited directly.
    """
    if grid != "vertex":
        raise RobustError("only vertex enumeration is supported")
    values = np.asarray(getattr(solution, "values", solution), dtype=float)
    lookup = _row_lookup(model)
    worst = 0.0
    per_row = {}
    for key, entries in spec.groups().items():
        if len(entries) > AUDIT_MAX_ENTRIES:
            raise RobustError(f"row {key} has {len(entries)} uncertain entries; "
                              f"vertex audit is limited to {AUDIT_MAX_ENTRIES}")
        if key not in lookup:
            raise RobustError(f"locator {key} does not resolve to a row")
        con = model.constraints[lookup[key]]
        act, mags = _lhs_terms(con, entries, values)
        dev = _vertex_worst(mags, spec.gamma_for(*key))
        v = 0.0
        for direction in _directions(con):
            if direction == LE:
                v = max(v, act + dev - con.rhs)
            else:
                v = max(v, con.rhs - (act - dev))
        per_row[key] = v
        worst = max(worst, v)
    return (worst, per_row) if detail else worst


@dataclass
class SweepPoint:
    gamma: float
    solution: Solution
    report: ScenarioReport


def robust_model(instance: HubInstance, mode: str | None, gamma: float,
                 dev_fraction: float | None = None, opts: SolveOptions | None = None,
                 protected_tags=DEFAULT_PROTECTED, row_gammas=None):
    """``(hub, spec, robust MilpModel)`` for one policy and budget."""
    hub = build_policy_model(instance, mode, opts)
    spec = derive_uncertainty(instance, hub, dev_fraction, 0.0, protected_tags)
    spec = spec.with_gamma(gamma)
    if row_gammas:
        spec.row_gammas = dict(row_gammas)
    return hub, spec, robustify(hub.model, spec)


def solve_robust(instance: HubInstance, mode: str | None, gamma: float,
                 dev_fraction: float | None = None, opts: SolveOptions | None = None):
    hub, spec, model = robust_model(instance, mode, gamma, dev_fraction, opts)
    sol = solve(model, opts)
    return hub, spec, model, sol


def gamma_sweep(instance: HubInstance, policy: str | None, gammas,
                dev_fraction: float | None = None, opts: SolveOptions | None = None
                ) -> list[SweepPoint]:
    """One robust solve per budget; failed points keep their status."""
    gammas = [float(g) for g in gammas]
    if any(b < a for a, b in zip(gammas, gammas[1:])):
        raise RobustError("gammas must be sorted ascending")
    mode = policy or instance.policy.mode
    hub = build_policy_model(instance, mode, opts)
    base = derive_uncertainty(instance, hub, dev_fraction)
    out = []
    for g in gammas:
        model = robustify(hub.model, base.with_gamma(g))
        sol = solve(model, opts)
        out.append(SweepPoint(g, sol, metrics(instance, sol, hub, mode)))
    return out


SWEEP_HEADER = ("gamma", "status", "objective_usd", "emissions_t", "h2_production_MWh",
                "fossil_use_MWh", "renewable_share_frac", "electrolyzer_utilization_frac")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return repr(float(x))


def sweep_rows(points: list[SweepPoint]) -> list[list[str]]:
    rows = []
    for p in points:
        r = p.report
        rows.append([_fmt(p.gamma), p.solution.status, _fmt(p.solution.objective),
                     _fmt(r.total_emissions_t), _fmt(r.h2_production_MWh),
                     _fmt(r.fossil_use_MWh), _fmt(r.renewable_share_frac),
                     _fmt(r.electrolyzer_utilization_frac)])
    return rows


def write_sweep_csv(points: list[SweepPoint], path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        w.writerows(sweep_rows(points))
    return path
