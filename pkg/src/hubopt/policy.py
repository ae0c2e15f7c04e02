"""Carbon-tax and net-zero policies applied to a built hub model."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .hub import HubModel, build_deterministic, emissions_expression, evaluate
from .instance import HubInstance, PolicySpec
from .milp import LE, SolveOptions, solve


class PolicyError(ValueError):
    pass


def carbon_rate(policy: PolicySpec, year: int) -> float:
    """Tax per tonne in ``year``: ``min(base + escalation * (year - base_year), cap)``."""
    if policy.mode != "carbon_tax":
        raise PolicyError(f"carbon_rate needs mode 'carbon_tax', got {policy.mode!r}")
    dy = max(0, year - policy.base_year)
    return min(policy.tax_base_per_t + policy.tax_escalation_per_t_per_year * dy,
               policy.tax_cap_per_t)


@dataclass(frozen=True)
class CarbonSchedule:
    years: tuple[int, ...]
    rate_per_t: tuple[float, ...]

    @classmethod
    def from_policy(cls, policy: PolicySpec, years) -> "CarbonSchedule":
        return cls(tuple(years), tuple(carbon_rate(policy, y) for y in years))

    @classmethod
    def zero(cls, years) -> "CarbonSchedule":
        return cls(tuple(years), (0.0,) * len(years))

    def scaled(self, factor: float) -> "CarbonSchedule":
        return CarbonSchedule(self.years, tuple(r * factor for r in self.rate_per_t))


@dataclass(frozen=True)
class EmissionCap:
    years: tuple[int, ...]
    cap_t: tuple[float, ...]

    @classmethod
    def linear(cls, base_emissions_t: float, years, base_year: int = 2025,
               target_year: int = 2050) -> "EmissionCap":
        """Straight line from ``base_emissions_t`` at ``base_year`` to 0 at ``target_year``."""
        caps = []
        for y in years:
            frac = (target_year - y) / (target_year - base_year)
            caps.append(base_emissions_t * min(1.0, max(0.0, frac)))
        return cls(tuple(years), tuple(caps))

    @classmethod
    def unlimited(cls, years) -> "EmissionCap":
        return cls(tuple(years), (math.inf,) * len(years))

    def scaled(self, factor: float) -> "EmissionCap":
        return EmissionCap(self.years, tuple(c * factor for c in self.cap_t))


def apply_carbon_tax(hub: HubModel, schedule: CarbonSchedule) -> HubModel:
    """Add ``rate(y) * emissions(y)`` to the objective of ``hub`` (in place)."""
    years = hub.cons.instance.time.years
    for k, year in enumerate(years):
        rate = schedule.rate_per_t[schedule.years.index(year)]
        if rate == 0.0:
            continue
        expr = emissions_expression(hub, years=[k])
        hub.model.add_objective({j: rate * a for j, a in expr.items()})
    return hub


def apply_net_zero(hub: HubModel, cap: EmissionCap) -> HubModel:
    """Add one ``emissions(y) <= cap(y)`` row per year, tagged ``nz_trajectory``."""
    years = hub.cons.instance.time.years
    for k, year in enumerate(years):
        limit = cap.cap_t[cap.years.index(year)]
        if math.isinf(limit):
            continue
        expr = emissions_expression(hub, years=[k])
        cid = hub.model.add_constraint(expr, LE, limit, tag="nz_trajectory", index=(k,))
        hub.cons.add("nz_trajectory", (k,), cid)
    return hub


def yearly_emissions(hub: HubModel, values) -> list[float]:
    ny = hub.cons.instance.time.n_years
    return [evaluate(emissions_expression(hub, years=[k]), values) for k in range(ny)]


def base_emissions(instance: HubInstance, opts: SolveOptions | None = None) -> float:
    """Net-zero reference E0: explicit value, else year-1 emissions with no policy."""
    if instance.policy.nz_base_emissions_t is not None:
        return instance.policy.nz_base_emissions_t
    hub = build_deterministic(instance)
    sol = solve(hub.model, opts)
    if not sol.has_values:
        raise PolicyError(f"no-policy reference solve failed: {sol.status}")
    return yearly_emissions(hub, sol.values)[0]


def emission_cap(instance: HubInstance, opts: SolveOptions | None = None) -> EmissionCap:
    p = instance.policy
    return EmissionCap.linear(base_emissions(instance, opts), instance.time.years,
                              p.base_year, p.nz_target_year)


def build_policy_model(instance: HubInstance, mode: str | None = None,
                       opts: SolveOptions | None = None) -> HubModel:
    """Deterministic hub model with the policy of ``mode`` (default: the instance's)."""
    mode = mode or instance.policy.mode
    hub = build_deterministic(instance)
    if mode == "carbon_tax":
        pol = replace(instance.policy, mode=mode)
        apply_carbon_tax(hub, CarbonSchedule.from_policy(pol, instance.time.years))
    elif mode == "net_zero":
        apply_net_zero(hub, emission_cap(instance, opts))
    elif mode != "none":
        raise PolicyError(f"unknown policy mode {mode!r}")
    return hub


def carbon_payment(instance: HubInstance, hub: HubModel, values, mode: str) -> float:
    """Carbon tax paid by a solution (0 outside carbon-tax mode)."""
    if mode != "carbon_tax":
        return 0.0
    pol = replace(instance.policy, mode=mode)
    return sum(carbon_rate(pol, y) * e
               for y, e in zip(instance.time.years, yearly_emissions(hub, values)))
