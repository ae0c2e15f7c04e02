"""Scenario metrics recomputed from a raw solution vector."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .hub import HubModel, cost_constant, cost_expression, emissions_expression, evaluate
from .instance import HubInstance
from .policy import carbon_payment

SHARE_DEFINITIONS = ("pv_wind", "broad")
SUPPLY_SOURCES = ("nuclear", "hydro", "gas", "biofuel", "wind", "solar", "chp", "hydrogen")


@dataclass
class ScenarioReport:
    total_cost: float
    total_emissions_t: float
    h2_production_MWh: float
    fossil_use_MWh: float
    renewable_share_frac: float
    electrolyzer_utilization_frac: float
    carbon_payment: float = 0.0
    status: str = "optimal"
    objective: float = math.nan
    supply_MWh: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def headline(self) -> dict:
        return {
            "total_cost_usd": self.total_cost,
            "total_emissions_t": self.total_emissions_t,
            "h2_production_MWh": self.h2_production_MWh,
            "fossil_use_MWh": self.fossil_use_MWh,
            "renewable_share_frac": self.renewable_share_frac,
            "electrolyzer_utilization_frac": self.electrolyzer_utilization_frac,
        }


def _seasons(a: np.ndarray, dt: float) -> dict[str, float]:
    half = a.shape[1] // 2
    return {"cold": float(a[:, :half].sum() * dt), "warm": float(a[:, half:].sum() * dt),
            "total": float(a.sum() * dt)}


def supply_table(instance: HubInstance, hub: HubModel, values) -> dict[str, dict[str, float]]:
    """Energy by source (MWh) for the cold half, warm half and whole horizon."""
    v, dt = hub.vars, instance.time.period_duration_h
    x = np.asarray(values)
    r = instance.renewables
    eta = instance.tech("electrolyzer").efficiency
    cols = {
        "nuclear": v.values("seg_nuclear", x),
        "hydro": v.values("seg_hydro", x),
        "gas": v.values("seg_gas", x),
        "biofuel": v.values("seg_biofuel", x),
        "wind": np.asarray(r.wind_MW) - v.values("curt_wind", x),
        "solar": np.asarray(r.pv_MW) - v.values("curt_pv", x),
        "chp": v.values("p_echp", x),
        "hydrogen": eta * v.values("ely", x),
    }
    return {k: _seasons(cols[k], dt) for k in SUPPLY_SOURCES}


def metrics(instance: HubInstance, solution, hub: HubModel, mode: str | None = None,
            share: str = "pv_wind") -> ScenarioReport:
    """Table-4 style metrics of ``solution`` (``Solution`` or raw vector).

    ``share="broad"`` also counts hydro and biofuel purchases as renewable.
    """
    if share not in SHARE_DEFINITIONS:
        raise ValueError(f"share must be one of {SHARE_DEFINITIONS}")
    mode = mode or instance.policy.mode
    status = getattr(solution, "status", "optimal")
    objective = getattr(solution, "objective", math.nan)
    raw = getattr(solution, "values", solution)
    n = hub.model.n_vars
    x = np.asarray(raw, dtype=float)[:n]
    if not np.all(np.isfinite(x)):
        nan = math.nan
        return ScenarioReport(nan, nan, nan, nan, nan, nan, nan, status, objective, {})
    v, dt = hub.vars, instance.time.period_duration_h
    ny, nt = instance.time.shape

    op_cost = evaluate(cost_expression(instance, v), x, cost_constant(instance))
    pay = carbon_payment(instance, hub, x, mode)
    emissions = evaluate(emissions_expression(hub), x)

    ely = v.values("ely", x)
    eta = instance.tech("electrolyzer").efficiency
    h2 = float(eta * ely.sum() * dt)
    caps = np.asarray(instance.tech("electrolyzer").max_input_per_period, dtype=float)
    cap_energy = float((caps * nt * dt).sum())
    util = float(ely.sum() * dt / cap_energy) if cap_energy > 0 else 0.0

    fossil = float(v.values("seg_gas", x).sum() * dt)
    for tech, sym in ((instance.tech("chp"), "g_chp"), (instance.tech("boiler"), "g_b")):
        if tech is not None and tech.fuel == "gas":
            fossil += float(tech.fuel_lhv * v.values(sym, x).sum() * dt)
    if instance.h2_import is not None and instance.h2_import.fossil:
        fossil += float(v.values("ch_h2", x).sum() * dt)

    r = instance.renewables
    ren = float((np.asarray(r.pv_MW) + np.asarray(r.wind_MW)).sum() * dt
                - (v.values("curt_pv", x) + v.values("curt_wind", x)).sum() * dt)
    supply = float((v.values("buy", x) + v.values("p_echp", x)).sum() * dt) + ren
    num = ren
    if share == "broad":
        num += float((v.values("seg_hydro", x) + v.values("seg_biofuel", x)).sum() * dt)
    share_frac = num / supply if supply > 1e-12 else 0.0

    return ScenarioReport(
        total_cost=op_cost + pay,
        total_emissions_t=emissions,
        h2_production_MWh=h2,
        fossil_use_MWh=fossil,
        renewable_share_frac=min(1.0, max(0.0, share_frac)),
        electrolyzer_utilization_frac=util,
        carbon_payment=pay,
        status=status,
        objective=objective,
        supply_MWh=supply_table(instance, hub, x),
    )
