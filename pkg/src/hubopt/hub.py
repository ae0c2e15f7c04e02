"""Deterministic hub MILP.

Power variables are MW averaged over a period; every energy and cost term
is multiplied by the period duration.  Renewable availability and the
demand series are data: they appear as constants in the balance rows, and
renewable injections can only be curtailed (``curt_pv``, ``curt_wind``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .instance import HubInstance, InstanceValidationError, validate
from .milp import EQ, GE, LE, MilpModel

# symbols that exist for every (y, t); optional technologies add more
CORE_SYMBOLS = (
    "buy", "sell", "u_buy", "curt_pv", "curt_wind",
    "seg_nuclear", "seg_hydro", "seg_gas", "seg_biofuel",
    "g_gas", "g_bio",
    "ch_h", "dch_h", "h_state", "k_ch_h", "k_dch_h",
    "ely", "ch_h2", "dch_h2", "h2_state", "h2_use", "k_ch_h2", "k_dch_h2",
    "dr_up_el", "dr_down_el", "i_up_el", "i_down_el",
    "dr_up_h", "dr_down_h", "i_up_h", "i_down_h",
    "spill_h",
)
OPTIONAL_SYMBOLS = (
    "g_chp", "p_echp", "p_hchp", "g_b", "p_hb",
    "p_ec", "p_hac", "p_ice", "ch_c", "dch_c", "c_state", "k_ch_c", "k_dch_c",
)


@dataclass
class VarCatalog:
    """Variable ids per symbol as ``(n_years, periods)`` int arrays."""

    shape: tuple[int, int]
    ids: dict[str, np.ndarray] = field(default_factory=dict)

    def new(self, model: MilpModel, symbol: str, lower=0.0, upper=np.inf,
            binary=False) -> np.ndarray:
        ny, nt = self.shape
        lo = np.broadcast_to(np.asarray(lower, dtype=float), self.shape)
        hi = np.broadcast_to(np.asarray(upper, dtype=float), self.shape)
        arr = np.empty(self.shape, dtype=int)
        for y in range(ny):
            for t in range(nt):
                arr[y, t] = model.add_var(f"{symbol}[{y},{t}]", lo[y, t], hi[y, t], binary)
        self.ids[symbol] = arr
        return arr

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.ids

    def __getitem__(self, symbol: str) -> np.ndarray:
        return self.ids[symbol]

    def get(self, symbol: str):
        return self.ids.get(symbol)

    def values(self, symbol: str, x: np.ndarray) -> np.ndarray:
        """Solution values of ``symbol``; zeros when the symbol is absent."""
        if symbol not in self.ids:
            return np.zeros(self.shape)
        return np.asarray(x)[self.ids[symbol]]

    @property
    def symbols(self) -> list[str]:
        return list(self.ids)


@dataclass
class ConstraintCatalog:
    """Row ids keyed by tag and locator, plus the data needed to read them."""

    instance: HubInstance
    rows: dict[str, dict[tuple, int]] = field(default_factory=dict)

    def add(self, tag: str, index: tuple, cid: int) -> None:
        fam = self.rows.setdefault(tag, {})
        if index in fam:
            raise AssertionError(f"duplicate locator {tag}{index}")
        fam[index] = cid

    def __getitem__(self, tag: str) -> dict[tuple, int]:
        return self.rows[tag]

    def get(self, tag: str) -> dict[tuple, int]:
        return self.rows.get(tag, {})

    @property
    def tags(self) -> list[str]:
        return list(self.rows)

    def count(self, tag: str) -> int:
        return len(self.rows.get(tag, {}))


@dataclass
class HubModel:
    model: MilpModel
    vars: VarCatalog
    cons: ConstraintCatalog

    def __iter__(self):
        return iter((self.model, self.vars, self.cons))


class _Builder:
    def __init__(self, inst: HubInstance):
        self.inst = inst
        self.m = MilpModel(name=inst.name)
        self.v = VarCatalog(inst.time.shape)
        self.c = ConstraintCatalog(inst)
        self.dt = inst.time.period_duration_h
        self.ny, self.nt = inst.time.shape

    def row(self, tag, index, terms, sense, rhs, protect_as=None):
        cid = self.m.add_constraint(terms, sense, rhs, tag=tag, index=index,
                                    protect_as=protect_as)
        self.c.add(tag, index, cid)
        return cid

    # -- variables ---------------------------------------------------------
    def variables(self):
        inst, v, m = self.inst, self.v, self.m
        big_m = self.big_m()
        v.new(m, "buy")
        v.new(m, "sell", upper=inst.export_limit_MW)
        v.new(m, "u_buy", binary=True)
        v.new(m, "curt_pv")
        v.new(m, "curt_wind")
        for name in ("nuclear", "hydro", "gas", "biofuel"):
            v.new(m, f"seg_{name}", upper=0.0 if inst.segment(name) is None else np.inf)
        v.new(m, "g_gas")
        v.new(m, "g_bio")
        chp, boiler = inst.tech("chp"), inst.tech("boiler")
        if chp is not None:
            v.new(m, "g_chp")
            v.new(m, "p_echp")
            v.new(m, "p_hchp")
        if boiler is not None:
            v.new(m, "g_b")
            v.new(m, "p_hb")
        if inst.tech("electric_chiller") is not None:
            v.new(m, "p_ec")
        if inst.tech("absorption_chiller") is not None:
            v.new(m, "p_hac")
        for prefix in ("h", "h2"):
            v.new(m, f"ch_{prefix}")
            v.new(m, f"dch_{prefix}")
            v.new(m, f"{prefix}_state", lower=-np.inf)
            v.new(m, f"k_ch_{prefix}", binary=True)
            v.new(m, f"k_dch_{prefix}", binary=True)
        v.new(m, "ely")
        v.new(m, "h2_use")
        if inst.storage("cold") is not None:
            v.new(m, "p_ice")
            v.new(m, "ch_c")
            v.new(m, "dch_c")
            v.new(m, "c_state", lower=-np.inf)
            v.new(m, "k_ch_c", binary=True)
            v.new(m, "k_dch_c", binary=True)
        for carrier in ("el", "h"):
            v.new(m, f"dr_up_{carrier}")
            v.new(m, f"dr_down_{carrier}")
            v.new(m, f"i_up_{carrier}", binary=True)
            v.new(m, f"i_down_{carrier}", binary=True)
        v.new(m, "spill_h")
        if inst.h2_import is None:
            # merchant hydrogen unavailable: the charge path stays closed
            for y in range(self.ny):
                for t in range(self.nt):
                    m.variables[v["ch_h2"][y, t]].upper = 0.0
        self._big_m = big_m

    def big_m(self) -> float:
        cap = sum(s.max_purchase_MW for s in self.inst.segments)
        return max(cap, self.inst.export_limit_MW, 1.0)

    # -- constraints -------------------------------------------------------
    def constraints(self):
        inst, v = self.inst, self.v
        d = inst.demands
        dt = self.dt
        r = inst.renewables
        for y in range(self.ny):
            for t in range(self.nt):
                yt = (y, t)
                L = d.electricity_MWh[y, t] / dt
                ev = d.ev_MWh[y, t] / dt
                pv, wt = r.pv_MW[y, t], r.wind_MW[y, t]

                # electricity balance: supply - uses = demand - renewables
                terms = [(v["buy"][yt], 1.0), (v["sell"][yt], -1.0),
                         (v["curt_pv"][yt], -1.0), (v["curt_wind"][yt], -1.0),
                         (v["ely"][yt], -1.0),
                         (v["dr_up_el"][yt], -1.0), (v["dr_down_el"][yt], 1.0)]
                for sym, sign in (("p_echp", 1.0), ("p_ec", -1.0), ("p_ice", -1.0)):
                    if sym in v:
                        terms.append((v[sym][yt], sign))
                self.row("el_balance", yt, terms, EQ, L + ev - pv - wt, protect_as=GE)
                self.row("curtail_pv", yt, [(v["curt_pv"][yt], 1.0)], LE, pv)
                self.row("curtail_wind", yt, [(v["curt_wind"][yt], 1.0)], LE, wt)

                # heat balance
                terms = [(v["dch_h"][yt], 1.0), (v["ch_h"][yt], -1.0),
                         (v["spill_h"][yt], -1.0),
                         (v["dr_up_h"][yt], -1.0), (v["dr_down_h"][yt], 1.0)]
                for sym, sign in (("p_hchp", 1.0), ("p_hb", 1.0), ("p_hac", -1.0)):
                    if sym in v:
                        terms.append((v[sym][yt], sign))
                self.row("heat_balance", yt, terms, EQ, d.heat_MWh[y, t] / dt)

                self._cooling(y, t)
                self._grid(y, t)
                self._conversion(y, t)
                self._dr(y, t)
            self._storage_year(y)
            self._hydrogen_year(y)
            for carrier in ("el", "h"):
                terms = [(v[f"dr_up_{carrier}"][y, t], 1.0) for t in range(self.nt)]
                terms += [(v[f"dr_down_{carrier}"][y, t], -1.0) for t in range(self.nt)]
                self.row("dr_neutral", (y, carrier), terms, EQ, 0.0)
            self._ramps(y)

    def _cooling(self, y, t):
        inst, v = self.inst, self.v
        yt = (y, t)
        terms = []
        ec, ac = inst.tech("electric_chiller"), inst.tech("absorption_chiller")
        if ec is not None:
            terms.append((v["p_ec"][yt], ec.efficiency))
        if ac is not None:
            terms.append((v["p_hac"][yt], ac.efficiency))
        cold = inst.storage("cold")
        if cold is not None:
            terms.append((v["dch_c"][yt], 1.0))
            # the ice maker runs on the electric chiller's COP
            cop = ec.efficiency if ec is not None else 1.0
            self.row("ice_link", yt, [(v["ch_c"][yt], 1.0), (v["p_ice"][yt], -cop)], EQ, 0.0)
        load = inst.demands.cooling_MWh[y, t] / self.dt
        self.row("cool_balance", yt, terms, EQ, load)

    def _grid(self, y, t):
        inst, v = self.inst, self.v
        yt = (y, t)
        segs = [(s, v[f"seg_{s.name}"][yt]) for s in inst.segments]
        self.row("grid_split", yt, [(v["buy"][yt], 1.0)] + [(j, -1.0) for _, j in segs], EQ, 0.0)
        for s, j in segs:
            self.row("grid_caps", (y, t, s.name), [(j, 1.0)], LE, s.max_purchase_MW)
            if s.min_share > 0:
                self.row("grid_min_share", (y, t, s.name),
                         [(j, 1.0), (v["buy"][yt], -s.min_share)], GE, 0.0)
        M = self._big_m
        self.row("buy_sell_mutex", (y, t, "buy"),
                 [(v["buy"][yt], 1.0), (v["u_buy"][yt], -M)], LE, 0.0)
        self.row("buy_sell_mutex", (y, t, "sell"),
                 [(v["sell"][yt], 1.0), (v["u_buy"][yt], M)], LE, M)

    def _conversion(self, y, t):
        inst, v = self.inst, self.v
        yt = (y, t)
        fuel_terms = {"gas": [(v["g_gas"][yt], -1.0)], "biofuel": [(v["g_bio"][yt], -1.0)]}
        chp = inst.tech("chp")
        if chp is not None:
            g = v["g_chp"][yt]
            self.row("chp_e_io", yt, [(v["p_echp"][yt], 1.0),
                                      (g, -chp.efficiency * chp.fuel_lhv)], EQ, 0.0)
            self.row("chp_h_io", yt, [(v["p_hchp"][yt], 1.0),
                                      (g, -chp.efficiency_heat * chp.fuel_lhv)], EQ, 0.0)
            self.row("conv_cap", (y, t, "chp"), [(g, 1.0)], LE, chp.max_input_per_period[y])
            fuel_terms[chp.fuel].append((g, 1.0))
        boiler = inst.tech("boiler")
        if boiler is not None:
            g = v["g_b"][yt]
            self.row("boiler_io", yt, [(v["p_hb"][yt], 1.0),
                                       (g, -boiler.efficiency * boiler.fuel_lhv)], EQ, 0.0)
            self.row("conv_cap", (y, t, "boiler"), [(g, 1.0)], LE,
                     boiler.max_input_per_period[y])
            fuel_terms[boiler.fuel].append((g, 1.0))
        for fuel, terms in fuel_terms.items():
            self.row("fuel_split", (y, t, fuel), terms, EQ, 0.0)
        for kind, sym in (("electric_chiller", "p_ec"), ("absorption_chiller", "p_hac")):
            tech = inst.tech(kind)
            if tech is not None:
                self.row("conv_cap", (y, t, kind), [(v[sym][yt], 1.0)], LE,
                         tech.max_input_per_period[y])
        ely = inst.tech("electrolyzer")
        self.row("ely_cap", yt, [(v["ely"][yt], 1.0)], LE, ely.max_input_per_period[y])

    def _dr(self, y, t):
        d, v = self.inst.demands, self.v
        yt = (y, t)
        base = {"el": d.electricity_MWh[y, t] / self.dt, "h": d.heat_MWh[y, t] / self.dt}
        ratio = {"el": (d.dr_up_ratio_el, d.dr_down_ratio_el),
                 "h": (d.dr_up_ratio_h, d.dr_down_ratio_h)}
        for c in ("el", "h"):
            up, down = ratio[c]
            self.row("dr_bounds", (y, t, c, "up"),
                     [(v[f"dr_up_{c}"][yt], 1.0), (v[f"i_up_{c}"][yt], -up * base[c])], LE, 0.0)
            self.row("dr_bounds", (y, t, c, "down"),
                     [(v[f"dr_down_{c}"][yt], 1.0),
                      (v[f"i_down_{c}"][yt], -down * base[c])], LE, 0.0)
            self.row("dr_logic", (y, t, c),
                     [(v[f"i_up_{c}"][yt], 1.0), (v[f"i_down_{c}"][yt], 1.0)], LE, 1.0)

    def _storage_rows(self, y, prefix, family, st, inflow_extra=()):
        """State, bound, power and mutex rows of one storage for year ``y``."""
        v, dt = self.v, self.dt
        s = v[f"{prefix}_state"]
        ch, dch = v[f"ch_{prefix}"], v[f"dch_{prefix}"]
        kch, kdch = v[f"k_ch_{prefix}"], v[f"k_dch_{prefix}"]
        for t in range(self.nt):
            yt = (y, t)
            terms = [(s[yt], 1.0), (ch[yt], -st.eta_ch * dt), (dch[yt], dt / st.eta_dch)]
            terms += [(j[yt], -coef * dt) for j, coef in inflow_extra]
            if t == 0:
                rhs = st.e_init[y]
            else:
                terms.append((s[y, t - 1], -1.0))
                rhs = 0.0
            self.row(family["dyn"], yt, terms, EQ, rhs)
            self.row(family["bounds"], (y, t, "max"), [(s[yt], 1.0)], LE, st.e_max[y])
            self.row(family["bounds"], (y, t, "min"), [(s[yt], 1.0)], GE, st.e_min[y])
            self.row(family["power"], (y, t, "ch"),
                     [(ch[yt], 1.0), (kch[yt], -st.p_ch_max[y])], LE, 0.0)
            self.row(family["power"], (y, t, "dch"),
                     [(dch[yt], 1.0), (kdch[yt], -st.p_dch_max[y])], LE, 0.0)
            self.row(family["mutex"], yt, [(kch[yt], 1.0), (kdch[yt], 1.0)], LE, 1.0)

    def _storage_year(self, y):
        inst, v = self.inst, self.v
        heat = inst.storage("heat")
        self._storage_rows(y, "h", {"dyn": "h_storage_dyn", "bounds": "h_storage_bounds",
                                    "power": "h_storage_power", "mutex": "h_storage_mutex"},
                           heat)
        terms = [(v["ch_h"][y, t], 1.0) for t in range(self.nt)]
        terms += [(v["dch_h"][y, t], -1.0) for t in range(self.nt)]
        self.row("h_storage_netzero", (y,), terms, EQ, 0.0)
        cold = inst.storage("cold")
        if cold is not None:
            self._storage_rows(y, "c", {"dyn": "c_storage_dyn", "bounds": "c_storage_bounds",
                                        "power": "c_storage_power", "mutex": "c_storage_mutex"},
                               cold)

    def _hydrogen_year(self, y):
        inst, v = self.inst, self.v
        h2 = inst.storage("hydrogen")
        eta_ely = inst.tech("electrolyzer").efficiency
        self._storage_rows(y, "h2", {"dyn": "h2_dyn", "bounds": "h2_bounds",
                                     "power": "h2_power", "mutex": "h2_mutex"},
                           h2, inflow_extra=[(v["ely"], eta_ely)])
        dt = self.dt
        for t in range(self.nt):
            yt = (y, t)
            hv = inst.demands.hv_MWh[y, t] / dt
            self.row("h2_meet", yt, [(v["h2_use"][yt], 1.0)], EQ, hv, protect_as=GE)
            self.row("h2_use_link", yt, [(v["h2_use"][yt], 1.0), (v["dch_h2"][yt], -1.0)],
                     EQ, 0.0)

    def _ramps(self, y):
        for s in self.inst.segments:
            if s.ramp_limit_MW is None:
                continue
            ids = self.v[f"seg_{s.name}"]
            for t in range(1, self.nt):
                terms = [(ids[y, t], 1.0), (ids[y, t - 1], -1.0)]
                self.row("ramp", (y, t, s.name, "up"), terms, LE, s.ramp_limit_MW)
                self.row("ramp", (y, t, s.name, "down"), terms, GE, -s.ramp_limit_MW)

    # -- objective ---------------------------------------------------------
    def cost_terms(self) -> dict[int, float]:
        return cost_expression(self.inst, self.v)


def _add(expr: dict[int, float], ids, coef) -> None:
    ids = np.asarray(ids)
    coef = np.broadcast_to(np.asarray(coef, dtype=float), ids.shape)
    for j, a in zip(ids.ravel(), coef.ravel()):
        if a != 0.0:
            expr[int(j)] = expr.get(int(j), 0.0) + float(a)


def _yearly(sched, ny, nt):
    m = np.asarray(sched if len(sched) else (1.0,) * ny, dtype=float)
    return np.repeat(m[:, None], nt, axis=1)


def cost_expression(inst: HubInstance, v: VarCatalog, years=None) -> dict[int, float]:
    """Operating cost (no carbon term) as a sparse linear expression.

    Trading, segment adders, fuel purchases, O&M with learning multipliers,
    storage cycling, demand-response penalties and merchant hydrogen.
    """
    ny, nt = inst.time.shape
    dt = inst.time.period_duration_h
    sel = np.zeros((ny, nt), dtype=bool)
    sel[list(range(ny)) if years is None else list(years)] = True

    def add(sym, coef):
        if sym in v:
            _add(expr, v[sym][sel], np.broadcast_to(np.asarray(coef, float), (ny, nt))[sel] * dt)

    expr: dict[int, float] = {}
    add("buy", inst.price_buy)
    add("sell", -inst.price_sell)
    for s in inst.segments:
        add(f"seg_{s.name}", s.price_per_MWh)
    add("g_gas", inst.fuel_prices.get("gas", 0.0))
    add("g_bio", inst.fuel_prices.get("biofuel", 0.0))
    inputs = {"boiler": "g_b", "chp": "g_chp", "electric_chiller": "p_ec",
              "absorption_chiller": "p_hac", "electrolyzer": "ely"}
    for tech in inst.techs:
        if tech.om_cost_per_MWh:
            add(inputs[tech.kind], tech.om_cost_per_MWh * _yearly(tech.learning_multiplier_by_year,
                                                                  ny, nt))
    r = inst.renewables
    mult = _yearly(r.learning_multiplier_by_year, ny, nt)
    # renewable O&M on dispatched energy: constant part is the availability
    add("curt_pv", -r.pv_om_per_MWh * mult)
    add("curt_wind", -r.wind_om_per_MWh * mult)
    for st, sym in ((inst.storage("heat"), "dch_h"), (inst.storage("hydrogen"), "dch_h2"),
                    (inst.storage("cold"), "dch_c")):
        if st is not None and st.cycle_cost_per_MWh:
            add(sym, st.cycle_cost_per_MWh)
    pen = inst.demands.dr_penalty_per_MWh
    for sym in ("dr_up_el", "dr_down_el", "dr_up_h", "dr_down_h"):
        add(sym, pen)
    if inst.h2_import is not None:
        add("ch_h2", inst.h2_import.price_per_MWh)
    return expr


def cost_constant(inst: HubInstance, years=None) -> float:
    """Constant part of the operating cost (O&M on available renewables)."""
    ny, nt = inst.time.shape
    r = inst.renewables
    mult = _yearly(r.learning_multiplier_by_year, ny, nt)
    yrs = list(range(ny)) if years is None else list(years)
    e = (r.pv_om_per_MWh * r.pv_MW + r.wind_om_per_MWh * r.wind_MW) * mult
    return float(e[yrs].sum() * inst.time.period_duration_h)


def emissions_expression(catalog, years=None, instance: HubInstance | None = None
                         ) -> dict[int, float]:
    """Emissions (t) as a sparse linear expression in fuel, segment and H2 purchases.

    ``catalog`` is a :class:`HubModel` or a ``(VarCatalog, HubInstance)`` pair.
    ``years`` restricts the sum to those year indices.
    """
    if isinstance(catalog, HubModel):
        v, inst = catalog.vars, catalog.cons.instance
    elif isinstance(catalog, VarCatalog):
        if instance is None:
            raise TypeError("a bare VarCatalog needs the instance")
        v, inst = catalog, instance
    else:
        v, inst = catalog
    ny, nt = inst.time.shape
    dt = inst.time.period_duration_h
    yrs = list(range(ny)) if years is None else list(years)
    expr: dict[int, float] = {}
    pf = inst.fuel_emission_coeff
    for sym in ("g_gas", "g_bio"):
        _add(expr, v[sym][yrs], pf * dt)
    for s in inst.segments:
        _add(expr, v[f"seg_{s.name}"][yrs], s.emission_factor_t_per_MWh * dt)
    if inst.h2_import is not None:
        _add(expr, v["ch_h2"][yrs], inst.h2_import.emission_factor_t_per_MWh * dt)
    return {j: a for j, a in expr.items() if a != 0.0}


def evaluate(expr: dict[int, float], values, constant: float = 0.0) -> float:
    x = np.asarray(values)
    return float(sum(a * x[j] for j, a in expr.items()) + constant)


def build_deterministic(instance: HubInstance) -> HubModel:
    """Hub MILP with the operating-cost objective (no policy term)."""
    problems = validate(instance)
    if problems:
        raise InstanceValidationError(problems[0])
    b = _Builder(instance)
    b.variables()
    b.constraints()
    b.m.add_objective(b.cost_terms(), cost_constant(instance))
    _check_symbols(b.v, instance)
    return HubModel(b.m, b.v, b.c)


def _check_symbols(v: VarCatalog, inst: HubInstance) -> None:
    missing = [s for s in CORE_SYMBOLS if s not in v]
    if inst.tech("chp") is not None:
        missing += [s for s in ("g_chp", "p_echp", "p_hchp") if s not in v]
    if inst.tech("boiler") is not None:
        missing += [s for s in ("g_b", "p_hb") if s not in v]
    if missing:
        raise AssertionError(f"symbols without variables: {missing}")


def build_weighted(instance: HubInstance, w_cost: float, w_emis: float) -> HubModel:
    """Objective ``w_cost * cost + w_emis * emissions``."""
    if w_cost < 0 or w_emis < 0 or (w_cost == 0 and w_emis == 0):
        raise ValueError("weights must be nonnegative and not both zero")
    hub = build_deterministic(instance)
    m = hub.model
    cost, const = dict(m.objective), m.objective_constant
    m.objective = {}
    m.objective_constant = 0.0
    m.add_objective({j: w_cost * a for j, a in cost.items()}, w_cost * const)
    m.add_objective({j: w_emis * a for j, a in emissions_expression(hub).items()})
    m.objective = {j: a for j, a in m.objective.items() if a != 0.0}
    return hub
