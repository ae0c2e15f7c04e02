"""Hub planning instance: data model, JSON schema ``hubopt/1``, validation.

All power quantities are MW (average over a period), energies MWh,
currencies $ and emissions tonnes.  Per-(year, period) series are stored as
read-only ``numpy`` arrays of shape ``(n_years, periods_per_year)``; capacity
schedules as tuples with one entry per year.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

SCHEMA = "hubopt/1"

SEGMENT_NAMES = ("nuclear", "hydro", "gas", "biofuel")
TECH_KINDS = ("boiler", "chp", "electric_chiller", "absorption_chiller", "electrolyzer")
FUEL_FED = ("boiler", "chp")
FUELS = ("gas", "biofuel")
STORAGE_CARRIERS = ("heat", "hydrogen", "cold")
POLICY_MODES = ("carbon_tax", "net_zero", "none")
DEMAND_SERIES = ("electricity_MWh", "heat_MWh", "cooling_MWh", "ev_MWh", "hv_MWh")


class InstanceError(ValueError):
    """Base class for instance loading problems."""


class InstanceParseError(InstanceError):
    """The document is not valid JSON or does not follow the schema layout."""


class InstanceValidationError(InstanceError):
    def __init__(self, violation: "Violation | str"):
        self.violation = violation
        super().__init__(str(violation))


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    location: str = ""

    def __str__(self) -> str:
        where = f" at {self.location}" if self.location else ""
        return f"{self.code}: {self.message}{where}"


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeStructure:
    years: tuple[int, ...]
    periods_per_year: int = 48
    period_duration_h: float = 1.0

    @property
    def n_years(self) -> int:
        return len(self.years)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.years), self.periods_per_year)

    def season_of(self, t: int) -> str:
        return "cold" if t < self.periods_per_year // 2 else "warm"


@dataclass(frozen=True)
class GridSegment:
    name: str
    max_purchase_MW: float
    min_share: float = 0.0  # of total purchase, enforced in every period
    price_per_MWh: float = 0.0
    emission_factor_t_per_MWh: float = 0.0
    ramp_limit_MW: float | None = None


@dataclass(frozen=True)
class ConversionTech:
    """One conversion unit.

    ``efficiency`` is the boiler/electrolyzer efficiency, the CHP electrical
    efficiency, or the COP of a chiller.  ``efficiency_heat`` is only used by
    the CHP.  Capacity is on the input side (fuel, electricity or heat).
    """

    kind: str
    efficiency: float
    max_input_per_period: tuple[float, ...]
    efficiency_heat: float = 0.0
    fuel: str | None = None
    fuel_lhv: float = 1.0
    om_cost_per_MWh: float = 0.0
    learning_multiplier_by_year: tuple[float, ...] = ()


@dataclass(frozen=True)
class StorageTech:
    carrier: str
    e_min: tuple[float, ...]
    e_max: tuple[float, ...]
    p_ch_max: tuple[float, ...]
    p_dch_max: tuple[float, ...]
    eta_ch: float
    eta_dch: float
    e_init: tuple[float, ...]
    cycle_cost_per_MWh: float = 0.0


@dataclass(frozen=True)
class DemandSet:
    electricity_MWh: np.ndarray
    heat_MWh: np.ndarray
    cooling_MWh: np.ndarray
    ev_MWh: np.ndarray
    hv_MWh: np.ndarray
    dr_up_ratio_el: float = 0.0
    dr_down_ratio_el: float = 0.0
    dr_up_ratio_h: float = 0.0
    dr_down_ratio_h: float = 0.0
    dr_penalty_per_MWh: float = 0.0


@dataclass(frozen=True)
class RenewableProfile:
    pv_MW: np.ndarray
    wind_MW: np.ndarray
    pv_om_per_MWh: float = 0.0
    wind_om_per_MWh: float = 0.0
    learning_multiplier_by_year: tuple[float, ...] = ()


@dataclass(frozen=True)
class PolicySpec:
    mode: str = "none"
    base_year: int = 2025
    tax_base_per_t: float = 80.0
    tax_escalation_per_t_per_year: float = 15.0
    tax_cap_per_t: float = 170.0
    nz_base_emissions_t: float | None = None
    nz_target_year: int = 2050


@dataclass(frozen=True)
class HydrogenImport:
    """Merchant hydrogen that can be charged into the tank (``P^{ch,H2}``)."""

    price_per_MWh: float
    emission_factor_t_per_MWh: float = 0.0
    fossil: bool = True


@dataclass(frozen=True)
class HubInstance:
    name: str
    time: TimeStructure
    segments: tuple[GridSegment, ...]
    techs: tuple[ConversionTech, ...]
    storages: tuple[StorageTech, ...]
    demands: DemandSet
    renewables: RenewableProfile
    policy: PolicySpec
    price_buy: np.ndarray
    price_sell: np.ndarray
    export_limit_MW: float
    fuel_emission_coeff: float
    fuel_prices: dict[str, float] = field(default_factory=dict)
    h2_import: HydrogenImport | None = None
    description: str = ""
    # relative half-width of the uncertain data used by the robust layer
    dev_fraction: float = 0.30

    def tech(self, kind: str) -> ConversionTech | None:
        for t in self.techs:
            if t.kind == kind:
                return t
        return None

    def storage(self, carrier: str) -> StorageTech | None:
        for s in self.storages:
            if s.carrier == carrier:
                return s
        return None

    def segment(self, name: str) -> GridSegment | None:
        for s in self.segments:
            if s.name == name:
                return s
        return None

    def with_policy(self, mode: str | None = None, **changes) -> "HubInstance":
        pol = self.policy if mode is None else replace(self.policy, mode=mode)
        if changes:
            pol = replace(pol, **changes)
        return replace(self, policy=pol)

    def to_dict(self) -> dict:
        return instance_to_dict(self)


# ---------------------------------------------------------------------------
# validation

def _check_series(out, name, arr, shape):
    a = np.asarray(arr)
    if a.shape != shape:
        out.append(Violation("SeriesShape", f"{name} has shape {a.shape}, expected {shape}", name))
        return
    bad = np.argwhere(~np.isfinite(a) | (a < 0))
    if bad.size:
        y, t = bad[0]
        out.append(Violation("NegativeSeries", f"{name} must be finite and nonnegative",
                             f"{name}[{y},{t}]"))


def _check_schedule(out, name, sched, n_years):
    if len(sched) != n_years:
        out.append(Violation("ScheduleLength",
                             f"{name} needs {n_years} yearly values, got {len(sched)}", name))


def validate(instance: HubInstance) -> list[Violation]:
    """Every invariant violation, in a fixed order (empty when valid)."""
    out: list[Violation] = []
    tm = instance.time
    if tm.periods_per_year < 1:
        out.append(Violation("PeriodsInvalid", "periods_per_year must be >= 1",
                             "time.periods_per_year"))
    if not tm.years:
        out.append(Violation("YearsEmpty", "at least one year is required", "time.years"))
    if any(b <= a for a, b in zip(tm.years, tm.years[1:])):
        out.append(Violation("YearsNotIncreasing", "years must be strictly increasing",
                             "time.years"))
    if not tm.period_duration_h > 0:
        out.append(Violation("PeriodDuration", "period_duration_h must be positive",
                             "time.period_duration_h"))
    shape = tm.shape
    ny = tm.n_years

    names = [s.name for s in instance.segments]
    for s in instance.segments:
        loc = f"segments.{s.name}"
        if s.name not in SEGMENT_NAMES:
            out.append(Violation("SegmentName", f"unknown grid segment {s.name!r}", loc))
        if not 0.0 <= s.min_share <= 1.0:
            out.append(Violation("GridShareRange", "min_share out of [0,1]", loc))
        if s.max_purchase_MW < 0:
            out.append(Violation("NegativeCapacity", "max_purchase_MW must be >= 0", loc))
        if s.emission_factor_t_per_MWh < 0:
            out.append(Violation("NegativeEmissionFactor", "emission_factor must be >= 0", loc))
        if s.ramp_limit_MW is not None and s.ramp_limit_MW < 0:
            out.append(Violation("NegativeRamp", "ramp_limit_MW must be >= 0", loc))
    if len(set(names)) != len(names):
        out.append(Violation("DuplicateSegment", "segment names must be unique", "segments"))
    if sum(s.min_share for s in instance.segments) > 1.0 + 1e-12:
        out.append(Violation("GridShareOverflow", "sum of min_share exceeds 1", "segments"))

    kinds = [t.kind for t in instance.techs]
    for t in instance.techs:
        loc = f"techs.{t.kind}"
        if t.kind not in TECH_KINDS:
            out.append(Violation("TechKind", f"unknown technology kind {t.kind!r}", loc))
            continue
        if t.kind in ("electric_chiller", "absorption_chiller"):
            if not t.efficiency > 0:
                out.append(Violation("CopNonPositive", "COP must be > 0", loc))
        elif not 0 < t.efficiency <= 1:
            out.append(Violation("EfficiencyOutOfRange", "efficiency out of (0,1]", loc))
        if t.kind == "chp":
            if not 0 <= t.efficiency_heat <= 1:
                out.append(Violation("EfficiencyOutOfRange", "efficiency_heat out of [0,1]", loc))
            if t.efficiency + t.efficiency_heat > 1 + 1e-12:
                out.append(Violation("ChpEfficiencySum", "eta_e + eta_h exceeds 1", loc))
        if t.kind in FUEL_FED:
            if t.fuel not in FUELS:
                out.append(Violation("FuelUnknown", f"fuel must be one of {FUELS}", loc))
            if not t.fuel_lhv > 0:
                out.append(Violation("LhvNonPositive", "fuel_lhv must be > 0", loc))
        _check_schedule(out, f"{loc}.max_input_per_period", t.max_input_per_period, ny)
        if any(c < 0 for c in t.max_input_per_period):
            out.append(Violation("NegativeCapacity", "max_input_per_period must be >= 0", loc))
        if t.learning_multiplier_by_year:
            _check_schedule(out, f"{loc}.learning_multiplier_by_year",
                            t.learning_multiplier_by_year, ny)
            if any(not m > 0 for m in t.learning_multiplier_by_year):
                out.append(Violation("LearningMultiplier", "learning multipliers must be > 0", loc))
    for k in TECH_KINDS:
        if kinds.count(k) > 1:
            out.append(Violation("DuplicateTech", f"at most one {k} is supported", "techs"))
    if kinds.count("electrolyzer") != 1:
        out.append(Violation("ElectrolyzerCount", "exactly one electrolyzer is required", "techs"))

    carriers = [s.carrier for s in instance.storages]
    for s in instance.storages:
        loc = f"storages.{s.carrier}"
        if s.carrier not in STORAGE_CARRIERS:
            out.append(Violation("StorageCarrier", f"unknown storage carrier {s.carrier!r}", loc))
        if not 0 < s.eta_ch <= 1:
            out.append(Violation("EfficiencyOutOfRange", "eta_ch out of (0,1]", loc))
        if not 0 < s.eta_dch <= 1:
            out.append(Violation("EfficiencyOutOfRange", "eta_dch out of (0,1]", loc))
        for nm in ("e_min", "e_max", "p_ch_max", "p_dch_max", "e_init"):
            _check_schedule(out, f"{loc}.{nm}", getattr(s, nm), ny)
        for y, (lo, hi, e0) in enumerate(zip(s.e_min, s.e_max, s.e_init)):
            if lo < 0:
                out.append(Violation("StorageNegative", "e_min must be >= 0", f"{loc}[{y}]"))
            if lo > hi:
                out.append(Violation("StorageBoundsInverted", "e_min exceeds e_max", f"{loc}[{y}]"))
            elif not lo <= e0 <= hi:
                out.append(Violation("StorageInitOutOfBounds", "e_init outside [e_min, e_max]",
                                     f"{loc}[{y}]"))
        if any(p < 0 for p in s.p_ch_max + s.p_dch_max):
            out.append(Violation("NegativeCapacity", "storage power bounds must be >= 0", loc))
    for c in ("heat", "hydrogen"):
        if carriers.count(c) != 1:
            out.append(Violation("StorageCount", f"exactly one {c} storage is required", "storages"))
    if carriers.count("cold") > 1:
        out.append(Violation("StorageCount", "at most one cold storage is supported", "storages"))

    d = instance.demands
    for nm in DEMAND_SERIES:
        _check_series(out, f"demands.{nm}", getattr(d, nm), shape)
    for nm in ("dr_up_ratio_el", "dr_down_ratio_el", "dr_up_ratio_h", "dr_down_ratio_h"):
        if not 0.0 <= getattr(d, nm) <= 1.0:
            out.append(Violation("DrRatioRange", f"{nm} out of [0,1]", f"demands.{nm}"))
    if d.dr_penalty_per_MWh < 0:
        out.append(Violation("NegativeCost", "dr_penalty_per_MWh must be >= 0",
                             "demands.dr_penalty_per_MWh"))

    r = instance.renewables
    _check_series(out, "renewables.pv_MW", r.pv_MW, shape)
    _check_series(out, "renewables.wind_MW", r.wind_MW, shape)
    if r.learning_multiplier_by_year:
        _check_schedule(out, "renewables.learning_multiplier_by_year",
                        r.learning_multiplier_by_year, ny)
        if any(not m > 0 for m in r.learning_multiplier_by_year):
            out.append(Violation("LearningMultiplier", "learning multipliers must be > 0",
                                 "renewables"))

    _check_series(out, "price_buy", instance.price_buy, shape)
    _check_series(out, "price_sell", instance.price_sell, shape)
    if instance.export_limit_MW < 0:
        out.append(Violation("NegativeCapacity", "export_limit_MW must be >= 0", "export_limit_MW"))
    if not 0.0 <= instance.dev_fraction < 1.0:
        out.append(Violation("DevFraction", "dev_fraction must be in [0, 1)",
                             "uncertainty.dev_fraction"))
    if instance.fuel_emission_coeff < 0:
        out.append(Violation("NegativeEmissionFactor", "fuel_emission_coeff must be >= 0",
                             "fuel_emission_coeff"))
    for fuel, price in sorted(instance.fuel_prices.items()):
        if fuel not in FUELS:
            out.append(Violation("FuelUnknown", f"unknown fuel {fuel!r}", f"fuel_prices.{fuel}"))

    p = instance.policy
    if p.mode not in POLICY_MODES:
        out.append(Violation("PolicyMode", f"mode must be one of {POLICY_MODES}", "policy.mode"))
    if p.tax_base_per_t > p.tax_cap_per_t:
        out.append(Violation("TaxBounds", "tax_base exceeds tax_cap", "policy"))
    if p.tax_escalation_per_t_per_year < 0:
        out.append(Violation("TaxBounds", "escalation must be >= 0", "policy"))
    if p.mode == "net_zero" and p.nz_base_emissions_t is not None and not p.nz_base_emissions_t > 0:
        out.append(Violation("NetZeroBase", "nz_base_emissions_t must be > 0", "policy"))
    if p.nz_target_year <= p.base_year:
        out.append(Violation("NetZeroBase", "nz_target_year must follow base_year", "policy"))
    if instance.h2_import is not None and instance.h2_import.emission_factor_t_per_MWh < 0:
        out.append(Violation("NegativeEmissionFactor", "h2_import emission factor must be >= 0",
                             "h2_import"))
    return out


# ---------------------------------------------------------------------------
# (de)serialisation

def _req(d: dict, key: str, where: str):
    if key not in d:
        raise InstanceValidationError(
            Violation("MissingField", f"missing field {where}{key}", f"{where}{key}"))
    return d[key]


def _per_year(value, n_years: int, where: str) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),) * n_years
    if isinstance(value, list):
        return tuple(float(v) for v in value)
    raise InstanceParseError(f"{where} must be a number or a list of yearly numbers")


def _series(d: dict, key: str, where: str) -> np.ndarray:
    raw = _req(d, key, where)
    try:
        arr = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InstanceParseError(f"{where}{key} is not a numeric year x period table") from exc
    return _frozen(arr)


def instance_from_dict(doc: dict) -> HubInstance:
    """Build a :class:`HubInstance` from a parsed ``hubopt/1`` document (no validation)."""
    if not isinstance(doc, dict):
        raise InstanceParseError("instance document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise InstanceParseError(f"schema must be {SCHEMA!r}, got {doc.get('schema')!r}")
    try:
        tdoc = _req(doc, "time", "")
        time = TimeStructure(tuple(int(y) for y in _req(tdoc, "years", "time.")),
                             int(_req(tdoc, "periods_per_year", "time.")),
                             float(tdoc.get("period_duration_h", 1.0)))
        ny = time.n_years
        segments = tuple(
            GridSegment(str(_req(s, "name", "segments[].")),
                        float(_req(s, "max_purchase_MW", "segments[].")),
                        float(s.get("min_share", 0.0)), float(s.get("price_per_MWh", 0.0)),
                        float(s.get("emission_factor_t_per_MWh", 0.0)),
                        None if s.get("ramp_limit_MW") is None else float(s["ramp_limit_MW"]))
            for s in _req(doc, "segments", ""))
        techs = []
        for t in _req(doc, "techs", ""):
            kind = str(_req(t, "kind", "techs[]."))
            w = f"techs.{kind}."
            techs.append(ConversionTech(
                kind=kind,
                efficiency=float(_req(t, "efficiency", w)),
                max_input_per_period=_per_year(_req(t, "max_input_per_period", w), ny,
                                               w + "max_input_per_period"),
                efficiency_heat=float(t.get("efficiency_heat", 0.0)),
                fuel=t.get("fuel"),
                fuel_lhv=float(t.get("fuel_lhv", 1.0)),
                om_cost_per_MWh=float(t.get("om_cost_per_MWh", 0.0)),
                learning_multiplier_by_year=_per_year(t.get("learning_multiplier_by_year", 1.0),
                                                      ny, w + "learning_multiplier_by_year")))
        storages = []
        for s in _req(doc, "storages", ""):
            carrier = str(_req(s, "carrier", "storages[]."))
            w = f"storages.{carrier}."
            storages.append(StorageTech(
                carrier=carrier,
                e_min=_per_year(_req(s, "e_min", w), ny, w + "e_min"),
                e_max=_per_year(_req(s, "e_max", w), ny, w + "e_max"),
                p_ch_max=_per_year(_req(s, "p_ch_max", w), ny, w + "p_ch_max"),
                p_dch_max=_per_year(_req(s, "p_dch_max", w), ny, w + "p_dch_max"),
                eta_ch=float(_req(s, "eta_ch", w)),
                eta_dch=float(_req(s, "eta_dch", w)),
                e_init=_per_year(_req(s, "e_init", w), ny, w + "e_init"),
                cycle_cost_per_MWh=float(s.get("cycle_cost_per_MWh", 0.0))))
        ddoc = _req(doc, "demands", "")
        demands = DemandSet(
            *(_series(ddoc, nm, "demands.") for nm in DEMAND_SERIES),
            dr_up_ratio_el=float(ddoc.get("dr_up_ratio_el", 0.0)),
            dr_down_ratio_el=float(ddoc.get("dr_down_ratio_el", 0.0)),
            dr_up_ratio_h=float(ddoc.get("dr_up_ratio_h", 0.0)),
            dr_down_ratio_h=float(ddoc.get("dr_down_ratio_h", 0.0)),
            dr_penalty_per_MWh=float(ddoc.get("dr_penalty_per_MWh", 0.0)))
        rdoc = _req(doc, "renewables", "")
        renewables = RenewableProfile(
            _series(rdoc, "pv_MW", "renewables."), _series(rdoc, "wind_MW", "renewables."),
            float(rdoc.get("pv_om_per_MWh", 0.0)), float(rdoc.get("wind_om_per_MWh", 0.0)),
            _per_year(rdoc.get("learning_multiplier_by_year", 1.0), ny,
                      "renewables.learning_multiplier_by_year"))
        pdoc = doc.get("policy", {})
        policy = PolicySpec(
            mode=str(pdoc.get("mode", "none")),
            base_year=int(pdoc.get("base_year", 2025)),
            tax_base_per_t=float(pdoc.get("tax_base_per_t", 80.0)),
            tax_escalation_per_t_per_year=float(pdoc.get("tax_escalation_per_t_per_year", 15.0)),
            tax_cap_per_t=float(pdoc.get("tax_cap_per_t", 170.0)),
            nz_base_emissions_t=(None if pdoc.get("nz_base_emissions_t") is None
                                 else float(pdoc["nz_base_emissions_t"])),
            nz_target_year=int(pdoc.get("nz_target_year", 2050)))
        pr = _req(doc, "prices", "")
        h2 = doc.get("h2_import")
        h2_import = None if h2 is None else HydrogenImport(
            float(_req(h2, "price_per_MWh", "h2_import.")),
            float(h2.get("emission_factor_t_per_MWh", 0.0)), bool(h2.get("fossil", True)))
        return HubInstance(
            name=str(doc.get("name", "hub")),
            time=time, segments=segments, techs=tuple(techs), storages=tuple(storages),
            demands=demands, renewables=renewables, policy=policy,
            price_buy=_series(pr, "buy_per_MWh", "prices."),
            price_sell=_series(pr, "sell_per_MWh", "prices."),
            export_limit_MW=float(_req(doc, "export_limit_MW", "")),
            fuel_emission_coeff=float(_req(doc, "fuel_emission_coeff", "")),
            fuel_prices={str(k): float(v) for k, v in doc.get("fuel_prices", {}).items()},
            h2_import=h2_import,
            description=str(doc.get("description", "")),
            dev_fraction=float(doc.get("uncertainty", {}).get("dev_fraction", 0.30)))
    except (TypeError, AttributeError, KeyError) as exc:
        raise InstanceParseError(f"malformed instance document: {exc}") from exc


def _plain(x: Any) -> Any:
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, tuple):
        return [_plain(v) for v in x]
    return x


def instance_to_dict(inst: HubInstance) -> dict:
    def obj(dc, skip=()):
        return {f.name: _plain(getattr(dc, f.name)) for f in fields(dc) if f.name not in skip}

    doc = {
        "schema": SCHEMA,
        "name": inst.name,
        "description": inst.description,
        "time": {"years": list(inst.time.years), "periods_per_year": inst.time.periods_per_year,
                 "period_duration_h": inst.time.period_duration_h},
        "segments": [obj(s) for s in inst.segments],
        "techs": [obj(t) for t in inst.techs],
        "storages": [obj(s) for s in inst.storages],
        "demands": obj(inst.demands),
        "renewables": obj(inst.renewables),
        "policy": obj(inst.policy),
        "prices": {"buy_per_MWh": inst.price_buy.tolist(),
                   "sell_per_MWh": inst.price_sell.tolist()},
        "export_limit_MW": inst.export_limit_MW,
        "fuel_emission_coeff": inst.fuel_emission_coeff,
        "fuel_prices": dict(sorted(inst.fuel_prices.items())),
    }
    if inst.h2_import is not None:
        doc["h2_import"] = obj(inst.h2_import)
    doc["uncertainty"] = {"dev_fraction": inst.dev_fraction}
    return doc


def parse_instance(text: str) -> HubInstance:
    """Parse and validate a JSON document; raise on the first violation."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"invalid JSON: {exc}") from exc
    inst = instance_from_dict(doc)
    problems = validate(inst)
    if problems:
        raise InstanceValidationError(problems[0])
    return inst


def load_instance(path) -> HubInstance:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise InstanceParseError(f"instance file not found: {path}") from exc
    return parse_instance(text)


def save_instance(instance: HubInstance, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(instance_to_dict(instance), indent=1) + "\n", encoding="utf-8")
    return path


BUNDLED = ("synthetic_on.json", "synthetic_on_long.json")


def bundled_path(name: str = "synthetic_on.json") -> Path:
    if name not in BUNDLED:
        raise InstanceError(f"no bundled instance named {name!r}; choose from {BUNDLED}")
    return Path(str(resources.files("hubopt") / "data" / name))


def load_bundled(name: str = "synthetic_on.json") -> HubInstance:
    return load_instance(bundled_path(name))


def annual_energy(series: np.ndarray, time: TimeStructure) -> np.ndarray:
    """Per-year totals of a ``(year, period)`` series in energy units."""
    return np.asarray(series).sum(axis=1) * time.period_duration_h


def _finite(x: float) -> bool:
    return math.isfinite(x)
