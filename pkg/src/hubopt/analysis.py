"""Sensitivity sweeps, tornado data, stress escalation and det/robust comparison.

Parameters are addressed by dot paths into the instance document, e.g.
``segments.gas.price_per_MWh`` or ``demands.electricity_MWh``.  A path step
that meets a list of records selects the record by its name, kind or carrier.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .instance import (HubInstance, InstanceError, InstanceValidationError, instance_from_dict,
                       instance_to_dict, validate)
from .milp import EQ, GE, LE, MilpModel, SolveOptions, Solution, check_feasible, solve
from .policy import build_policy_model
from .report import ScenarioReport, metrics, supply_table
from .robust import robust_model

__all__ = [
    "PerturbationSpec", "ScenarioReport", "metrics", "supply_table", "perturb",
    "OatRow", "oat_sweep", "tornado", "TornadoRow", "StressResult",
    "stress_to_infeasibility", "elastic_diagnosis", "Comparison", "compare_det_rob",
    "DEFAULT_TORNADO", "write_oat_csv", "write_tornado_csv", "OAT_HEADER",
    "TORNADO_HEADER",
]

MODES = ("scale", "shift")
ELASTIC_PENALTY = 1e5
ELASTIC_THRESHOLD = 1e-6
# rows that describe physics or capacity; bookkeeping rows (links, mutexes) stay hard
ELASTIC_TAGS = frozenset({
    "el_balance", "heat_balance", "cool_balance", "grid_caps", "grid_min_share",
    "conv_cap", "ely_cap", "h2_meet", "h2_bounds", "h2_power", "h_storage_bounds",
    "h_storage_power", "c_storage_bounds", "c_storage_power", "h_storage_netzero",
    "ramp", "nz_trajectory", "dr_neutral",
})


class AnalysisError(ValueError):
    pass


@dataclass(frozen=True)
class PerturbationSpec:
    path: str
    mode: str = "scale"
    levels: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if self.mode not in MODES:
            raise AnalysisError(f"mode must be one of {MODES}, got {self.mode!r}")
        levels = tuple(float(v) for v in self.levels)
        if not levels or not all(math.isfinite(v) for v in levels):
            raise AnalysisError("levels must be a non-empty list of finite numbers")
        object.__setattr__(self, "levels", levels)

    @property
    def identity(self) -> float:
        return 1.0 if self.mode == "scale" else 0.0


# parameters the tornado varies by default: carbon price, fuel and power prices,
# demand, renewable availability and hydrogen-side technology
DEFAULT_TORNADO = (
    PerturbationSpec("policy.tax_base_per_t", "scale", (0.7, 1.3)),
    PerturbationSpec("fuel_prices.gas", "scale", (0.7, 1.3)),
    PerturbationSpec("prices.buy_per_MWh", "scale", (0.7, 1.3)),
    PerturbationSpec("demands.electricity_MWh", "scale", (0.9, 1.1)),
    PerturbationSpec("demands.heat_MWh", "scale", (0.9, 1.1)),
    PerturbationSpec("demands.hv_MWh", "scale", (0.7, 1.3)),
    PerturbationSpec("renewables.pv_MW", "scale", (0.7, 1.3)),
    PerturbationSpec("renewables.wind_MW", "scale", (0.7, 1.3)),
    PerturbationSpec("techs.electrolyzer.efficiency", "scale", (0.9, 1.1)),
    PerturbationSpec("h2_import.price_per_MWh", "scale", (0.7, 1.3)),
)


def _step(node, key: str, path: str):
    if isinstance(node, dict):
        if key not in node:
            raise AnalysisError(f"path {path!r}: no field {key!r}")
        return node, key
    if isinstance(node, list):
        for i, rec in enumerate(node):
            if isinstance(rec, dict) and key in (rec.get("name"), rec.get("kind"),
                                                 rec.get("carrier")):
                return node, i
        raise AnalysisError(f"path {path!r}: no record named {key!r}")
    raise AnalysisError(f"path {path!r}: cannot descend into {type(node).__name__}")


def _apply(value, mode: str, level: float, path: str):
    if value is None or isinstance(value, (bool, str)):
        raise AnalysisError(f"path {path!r} does not hold a number")
    arr = np.asarray(value, dtype=float)
    arr = arr * level if mode == "scale" else arr + level
    return arr.tolist() if arr.ndim else float(arr)


def perturb(instance: HubInstance, path: str, mode: str, level: float) -> HubInstance:
    """Copy of ``instance`` with the number(s) at ``path`` scaled or shifted."""
    if mode not in MODES:
        raise AnalysisError(f"mode must be one of {MODES}")
    doc = instance_to_dict(instance)
    keys = path.split(".")
    node = doc
    for key in keys[:-1]:
        parent, k = _step(node, key, path)
        node = parent[k]
    parent, k = _step(node, keys[-1], path)
    parent[k] = _apply(parent[k], mode, level, path)
    out = instance_from_dict(doc)
    problems = validate(out)
    if problems:
        raise InstanceValidationError(problems[0])
    return out


def _solve_case(instance: HubInstance, policy: str, gamma: float | None,
                dev_fraction: float, opts: SolveOptions | None):
    if gamma is None:
        hub = build_policy_model(instance, policy, opts)
        model = hub.model
    else:
        hub, _, model = robust_model(instance, policy, gamma, dev_fraction, opts)
    sol = solve(model, opts)
    return hub, sol, metrics(instance, sol, hub, policy)


@dataclass
class OatRow:
    path: str
    level: float
    status: str
    objective: float
    report: ScenarioReport
    robust_status: str | None = None
    robust_objective: float | None = None


def oat_sweep(instance: HubInstance, spec: PerturbationSpec, policy: str | None = None,
              robust_gamma: float | None = None, dev_fraction: float | None = None,
              opts: SolveOptions | None = None) -> list[OatRow]:
    """One re-optimization per level; failures are recorded and the sweep goes on."""
    policy = policy or instance.policy.mode
    rows = []
    for level in spec.levels:
        try:
            inst = perturb(instance, spec.path, spec.mode, level)
        except InstanceError as exc:
            nan = math.nan
            rows.append(OatRow(spec.path, level, f"invalid: {exc}", nan,
                               ScenarioReport(nan, nan, nan, nan, nan, nan, status="invalid")))
            continue
        _, sol, rep = _solve_case(inst, policy, None, dev_fraction, opts)
        row = OatRow(spec.path, level, sol.status, sol.objective, rep)
        if robust_gamma is not None:
            _, rsol, _ = _solve_case(inst, policy, robust_gamma, dev_fraction, opts)
            row.robust_status, row.robust_objective = rsol.status, rsol.objective
        rows.append(row)
    return rows


@dataclass(frozen=True)
class TornadoRow:
    path: str
    low_level: float
    high_level: float
    low_delta: float
    high_delta: float

    @property
    def swing(self) -> float:
        return max(abs(self.low_delta), abs(self.high_delta))


def tornado(instance: HubInstance, specs=DEFAULT_TORNADO, policy: str | None = None,
            opts: SolveOptions | None = None) -> tuple[float, list[TornadoRow]]:
    """Baseline objective and rows ranked by the larger of the two deltas."""
    policy = policy or instance.policy.mode
    for s in specs:
        if len(s.levels) != 2:
            raise AnalysisError(f"{s.path}: tornado needs exactly a low and a high level")
    _, base, _ = _solve_case(instance, policy, None, 0.0, opts)
    if not base.ok:
        raise AnalysisError(f"baseline solve failed: {base.status}")
    rows = []
    for s in specs:
        lo, hi = oat_sweep(instance, s, policy, opts=opts)
        rows.append(TornadoRow(s.path, lo.level, hi.level, lo.objective - base.objective,
                               hi.objective - base.objective))
    order = sorted(range(len(rows)), key=lambda i: (-_rank(rows[i].swing), i))
    return base.objective, [rows[i] for i in order]


def _rank(x: float) -> float:
    return math.inf if math.isnan(x) else x


# -- stress escalation -------------------------------------------------------
@dataclass
class StressResult:
    first_infeasible_level: float | None
    violated_tags: list[str]
    levels_tried: list[float]
    slacks: dict[str, float] = field(default_factory=dict)


def elastic_diagnosis(model: MilpModel, opts: SolveOptions | None = None,
                      tags=ELASTIC_TAGS) -> tuple[Solution, dict[str, float], MilpModel]:
    """Relax rows with ``tags`` by penalized slacks; return total slack per tag."""
    m = model.copy()
    slack_of: list[tuple[str, int]] = []
    for con in list(m.constraints):
        if con.tag not in tags:
            continue
        dirs = {LE: (-1.0,), GE: (1.0,), EQ: (1.0, -1.0)}[con.sense]
        for sign in dirs:
            s = m.add_var(f"elastic[{con.name},{'+' if sign > 0 else '-'}]")
            con.terms[s] = sign
            m.objective[s] = m.objective.get(s, 0.0) + ELASTIC_PENALTY
            slack_of.append((con.tag, s))
    sol = solve(m, opts)
    totals: dict[str, float] = {}
    if sol.has_values:
        for tag, s in slack_of:
            if sol.values[s] > ELASTIC_THRESHOLD:
                totals[tag] = totals.get(tag, 0.0) + float(sol.values[s])
    return sol, totals, m


def stress_to_infeasibility(instance: HubInstance, spec: PerturbationSpec,
                            policy: str | None = None, step: float = 0.1,
                            max_level: float = 3.0, opts: SolveOptions | None = None,
                            gamma: float | None = None,
                            dev_fraction: float | None = None) -> StressResult:
    """Escalate ``spec.path`` from the identity level by ``step`` until infeasible.

    The first infeasible level is diagnosed by elastic relaxation: the tags
    whose slacks are needed to restore feasibility are returned, largest first.
    """
    if step <= 0:
        raise AnalysisError("step must be positive")
    policy = policy or instance.policy.mode
    level, tried = spec.identity, []
    n_steps = int(math.floor(abs(max_level - level) / step + 1e-9))
    sign = 1.0 if max_level >= level else -1.0
    for k in range(n_steps + 1):
        level = round(spec.identity + sign * k * step, 12)
        tried.append(level)
        try:
            inst = perturb(instance, spec.path, spec.mode, level)
        except InstanceError:
            return StressResult(level, ["instance_invalid"], tried)
        if gamma is None:
            model = build_policy_model(inst, policy, opts).model
        else:
            model = robust_model(inst, policy, gamma, dev_fraction, opts)[2]
        sol = solve(model, opts)
        if sol.status == "infeasible":
            _, totals, _ = elastic_diagnosis(model, opts)
            tags = sorted(totals, key=lambda t: (-totals[t], t))
            return StressResult(level, tags, tried, totals)
    return StressResult(None, [], tried)


# -- deterministic vs robust -------------------------------------------------
DIRECTIONS = ("cost", "emissions", "fossil_use", "h2_production", "renewable_share",
              "utilization")


@dataclass
class Comparison:
    policy: str
    gamma: float
    deterministic: ScenarioReport
    robust: ScenarioReport
    premium: float
    deltas: dict[str, float]
    indicators: dict[str, int]

    def to_dict(self) -> dict:
        return {"policy": self.policy, "gamma": self.gamma, "premium_frac": self.premium,
                "deterministic": self.deterministic.headline(),
                "robust": self.robust.headline(), "deltas": self.deltas,
                "indicators": self.indicators}


def _sign(x: float, tol: float = 1e-9) -> int:
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def compare_det_rob(instance: HubInstance, policy: str | None = None, gamma: float = 1.0,
                    dev_fraction: float | None = None, opts: SolveOptions | None = None
                    ) -> Comparison:
    """Deterministic and robust reports side by side with the robustness premium."""
    if gamma < 0:
        raise AnalysisError("gamma must be non-negative")
    policy = policy or instance.policy.mode
    _, dsol, det = _solve_case(instance, policy, None, dev_fraction, opts)
    _, rsol, rob = _solve_case(instance, policy, gamma, dev_fraction, opts)
    for tag, s in (("deterministic", dsol), ("robust", rsol)):
        if not s.has_values:
            raise AnalysisError(f"{tag} solve failed: {s.status}")
    pairs = {
        "cost": (det.total_cost, rob.total_cost),
        "emissions": (det.total_emissions_t, rob.total_emissions_t),
        "fossil_use": (det.fossil_use_MWh, rob.fossil_use_MWh),
        "h2_production": (det.h2_production_MWh, rob.h2_production_MWh),
        "renewable_share": (det.renewable_share_frac, rob.renewable_share_frac),
        "utilization": (det.electrolyzer_utilization_frac, rob.electrolyzer_utilization_frac),
    }
    deltas = {k: b - a for k, (a, b) in pairs.items()}
    scale = abs(det.total_cost) if det.total_cost else 1.0
    premium = deltas["cost"] / scale
    return Comparison(policy, float(gamma), det, rob, premium, deltas,
                      {k: _sign(v, 1e-9 * max(1.0, abs(pairs[k][0])))
                       for k, v in deltas.items()})


# -- CSV artifacts -------------------------------------------------------------
OAT_HEADER = ("path", "level", "status", "objective_usd", "emissions_t",
              "h2_production_MWh", "fossil_use_MWh", "renewable_share_frac",
              "robust_status", "robust_objective_usd")
TORNADO_HEADER = ("path", "low_level", "high_level", "low_delta_usd", "high_delta_usd")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return repr(float(x))


def write_oat_csv(rows: list[OatRow], path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(OAT_HEADER)
        for r in rows:
            w.writerow([r.path, _fmt(r.level), r.status, _fmt(r.objective),
                        _fmt(r.report.total_emissions_t), _fmt(r.report.h2_production_MWh),
                        _fmt(r.report.fossil_use_MWh), _fmt(r.report.renewable_share_frac),
                        r.robust_status or "", _fmt(r.robust_objective)])
    return path


def write_tornado_csv(rows: list[TornadoRow], path) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TORNADO_HEADER)
        for r in rows:
            w.writerow([r.path, _fmt(r.low_level), _fmt(r.high_level), _fmt(r.low_delta),
                        _fmt(r.high_delta)])
    return path


def recheck_elastic(model: MilpModel, relaxed: MilpModel, sol: Solution) -> bool:
    """True when the elastic solution is feasible for the relaxed model."""
    return sol.has_values and not check_feasible(relaxed, sol.values)
