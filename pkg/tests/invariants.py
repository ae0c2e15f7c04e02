"""Structural checks recomputed from raw solution values and instance data.

Nothing here reads the model rows, so a wrong row in the builder shows up
as a failed invariant rather than being checked against itself.
"""

import numpy as np

TOL = 1e-6


def _get(hub, x, sym):
    return hub.vars.values(sym, x)


def invariant_failures(inst, hub, values, robust=False, tol=TOL):
    """List of human-readable failures (empty when every invariant holds).

    For robust solutions the electricity balance and hydrogen service rows
    are protected as ``>=`` rows, so they are checked one-sided.
    """
    x = np.asarray(values, dtype=float)[: hub.model.n_vars]
    g = lambda s: _get(hub, x, s)
    d, r, dt = inst.demands, inst.renewables, inst.time.period_duration_h
    bad = []

    def check(name, ok):
        if not np.all(ok):
            bad.append(name)

    el = (g("buy") - g("sell") + g("p_echp") - g("p_ec") - g("p_ice") - g("ely")
          + r.pv_MW - g("curt_pv") + r.wind_MW - g("curt_wind")
          - g("dr_up_el") + g("dr_down_el") - (d.electricity_MWh + d.ev_MWh) / dt)
    if robust:
        check("el_balance", el >= -tol)
    else:
        check("el_balance", np.abs(el) <= tol)
    heat = (g("p_hchp") + g("p_hb") - g("p_hac") + g("dch_h") - g("ch_h") - g("spill_h")
            - g("dr_up_h") + g("dr_down_h") - d.heat_MWh / dt)
    check("heat_balance", np.abs(heat) <= tol)
    ec, ac = inst.tech("electric_chiller"), inst.tech("absorption_chiller")
    cool = (g("p_ec") * (ec.efficiency if ec else 0.0)
            + g("p_hac") * (ac.efficiency if ac else 0.0) + g("dch_c") - d.cooling_MWh / dt)
    check("cool_balance", np.abs(cool) <= tol)
    check("grid_split", np.abs(g("buy") - sum(g(f"seg_{s.name}") for s in inst.segments))
          <= tol)

    for a, b in (("buy", "sell"), ("ch_h", "dch_h"), ("ch_h2", "dch_h2"), ("ch_c", "dch_c"),
                 ("dr_up_el", "dr_down_el"), ("dr_up_h", "dr_down_h")):
        check(f"mutex {a}/{b}", np.minimum(g(a), g(b)) <= tol)

    check("heat storage net zero", np.abs(g("ch_h").sum(axis=1) - g("dch_h").sum(axis=1))
          <= tol)

    check("h2 use = discharge", np.abs(g("h2_use") - g("dch_h2")) <= tol)
    hv = d.hv_MWh / dt
    if robust:
        check("h2 use >= hv", g("h2_use") >= hv - tol)
    else:
        check("h2 use = hv", np.abs(g("h2_use") - hv) <= tol)

    for prefix, carrier, inflow in (("h", "heat", 0.0), ("h2", "hydrogen", None),
                                    ("c", "cold", 0.0)):
        st = inst.storage(carrier)
        if st is None:
            continue
        s = g(f"{prefix}_state")
        lo = np.asarray(st.e_min)[:, None]
        hi = np.asarray(st.e_max)[:, None]
        check(f"{carrier} inventory bounds", (s >= lo - tol) & (s <= hi + tol))
        check(f"{carrier} charge power", g(f"ch_{prefix}") <= np.asarray(st.p_ch_max)[:, None]
              + tol)
        check(f"{carrier} discharge power",
              g(f"dch_{prefix}") <= np.asarray(st.p_dch_max)[:, None] + tol)
        extra = (inst.tech("electrolyzer").efficiency * g("ely")) if inflow is None else 0.0
        delta = (st.eta_ch * g(f"ch_{prefix}") + extra - g(f"dch_{prefix}") / st.eta_dch) * dt
        prev = np.concatenate([np.asarray(st.e_init)[:, None], s[:, :-1]], axis=1)
        check(f"{carrier} state dynamics", np.abs(s - prev - delta) <= tol)

    base = {"el": d.electricity_MWh / dt, "h": d.heat_MWh / dt}
    ratios = {"el": (d.dr_up_ratio_el, d.dr_down_ratio_el),
              "h": (d.dr_up_ratio_h, d.dr_down_ratio_h)}
    for c in ("el", "h"):
        up, down = ratios[c]
        check(f"dr {c} bounds", (g(f"dr_up_{c}") <= up * base[c] + tol)
              & (g(f"dr_down_{c}") <= down * base[c] + tol))
        check(f"dr {c} neutral", np.abs(g(f"dr_up_{c}").sum(axis=1)
                                        - g(f"dr_down_{c}").sum(axis=1)) <= tol)

    for s in inst.segments:
        seg = g(f"seg_{s.name}")
        check(f"{s.name} cap", seg <= s.max_purchase_MW + tol)
        if s.ramp_limit_MW is not None:
            check(f"{s.name} ramp", np.abs(np.diff(seg, axis=1)) <= s.ramp_limit_MW + tol)
        if s.min_share > 0:
            check(f"{s.name} min share", seg >= s.min_share * g("buy") - tol)
    check("export limit", g("sell") <= inst.export_limit_MW + tol)
    check("ely cap", g("ely") <= np.asarray(inst.tech("electrolyzer").max_input_per_period)[:, None]
          + tol)
    check("nonnegative flows", all(np.all(g(sym) >= -tol) for sym in
                                   ("buy", "sell", "ely", "ch_h2", "dch_h2", "g_gas", "g_bio")))
    return bad
