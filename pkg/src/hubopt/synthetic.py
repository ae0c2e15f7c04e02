"""Generator for the bundled synthetic Ontario-like instances.

Two 24 h representative days per year: periods 0-23 are a cold day and
24-47 a warm day.  Profiles are smooth analytic shapes plus a small seeded
jitter, so regenerating always yields the same file.  Hydrogen, carbon and
robustness parameters are the published values; everything else is a
placeholder with the right seasonal ordering (the cold day needs more gas
and hydro than the warm day).
"""

from __future__ import annotations

import numpy as np

from .instance import (BUNDLED, ConversionTech, DemandSet, GridSegment, HubInstance,
                       HydrogenImport, PolicySpec, RenewableProfile, StorageTech,
                       TimeStructure, _frozen, bundled_path, save_instance)

# published hydrogen sub-hub and policy parameters
ELY_CAP_MW = 300.0
ELY_EFF = 0.75
H2_MAX_MWH = 2000.0
H2_MIN_MWH = 200.0
H2_ETA_CH = 0.95
H2_ETA_DCH = 0.95
H2_P_CH_MW = 200.0
H2_P_DCH_MW = 200.0
TAX_BASE = 80.0
TAX_ESCALATION = 15.0
TAX_CAP = 170.0
DEV_FRACTION = 0.30

# long-horizon capacity trajectory end points (2050)
ELY_CAP_2050_MW = 3800.0
H2_MAX_2050_MWH = 37000.0
LONG_YEARS = (2025, 2030, 2035, 2040, 2045, 2050)
DEMAND_GROWTH = 0.01  # per year, linear

SEED = 2025
HOURS = np.arange(24)

# Placeholders without published values.  Shapes are (base, bump, bump...)
# amplitudes; segments are (cap MW, min share, price adder, t/MWh, ramp MW).
# The values were tuned so that the two policies and the robust counterpart
# move in the published directions: clean supply is scarce, the gas segment
# is the cheap marginal source, and an emission-free biofuel segment is the
# expensive backstop that the net-zero cap pushes the hub onto.
PARAMS = {
    "el_cold": (520.0, 120.0, 160.0), "el_warm": (430.0, 140.0, 90.0),
    "heat_cold": (420.0, 120.0, 60.0), "heat_warm": (90.0, 30.0),
    "cool_cold": 8.0, "cool_warm": (40.0, 140.0),
    "ev_cold": (30.0, 70.0), "ev_warm": (35.0, 75.0),
    "hv_window": (8, 19), "hv_cold": (50.0, 15.0, 10.0), "hv_warm": (60.0, 20.0, 10.0),
    "pv_peak": (150.0, 900.0), "wind_cold": (230.0, 60.0), "wind_warm": (190.0, 90.0),
    "price_cold": (78.0, 25.0, 45.0), "price_warm": (68.0, 40.0, 38.0), "sell_ratio": 0.85,
    "export_limit": 250.0, "fuel_emission": 0.2, "gas_price": 28.0, "bio_price": 55.0,
    "h2_price": 95.0, "h2_ef": 0.28,
    "nuclear": (100.0, 0.0, 0.0, 0.0, 40.0), "hydro": (100.0, 0.0, 6.0, 0.0, 150.0),
    "gas": (420.0, 0.0, -12.0, 0.42, None), "biofuel": (600.0, 0.0, 60.0, 0.0, None),
    "boiler": (0.90, 600.0), "chp": (0.35, 0.45, 360.0), "ec": (3.0, 80.0), "ac": (0.7, 120.0),
    "heat_storage": (40.0, 400.0, 100.0, 200.0), "cold_storage": (150.0, 40.0),
    # net-zero reference emissions: 90% of the carbon-tax optimum, rounded
    "nz_base": 4960.0,
}


def _bump(center: float, width: float) -> np.ndarray:
    d = np.minimum(np.abs(HOURS - center), 24 - np.abs(HOURS - center))
    return np.exp(-0.5 * (d / width) ** 2)


def _profiles(p: dict, rng: np.random.Generator, growth: float) -> dict[str, np.ndarray]:
    evening, morning, midday = _bump(19, 3.0), _bump(8, 2.5), _bump(13, 3.0)
    solar = np.clip(np.cos((HOURS - 13) / 12 * np.pi) * 1.15 - 0.15, 0.0, None)
    lo, hi = p["hv_window"]
    refuel = ((HOURS >= lo) & (HOURS <= hi)).astype(float)
    wave = lambda phase: np.sin(HOURS / 24 * 2 * np.pi + phase)
    pair = lambda a, b: np.concatenate([a, b])

    el_c, el_w = p["el_cold"], p["el_warm"]
    ht_c, ht_w = p["heat_cold"], p["heat_warm"]
    raw = {
        "electricity": pair(el_c[0] + el_c[1] * morning + el_c[2] * evening,
                            el_w[0] + el_w[1] * midday + el_w[2] * evening) * growth,
        "heat": pair(ht_c[0] + ht_c[1] * morning + ht_c[2] * evening,
                     ht_w[0] + ht_w[1] * morning) * growth,
        "cooling": pair(p["cool_cold"] + 0 * HOURS,
                        p["cool_warm"][0] + p["cool_warm"][1] * midday) * growth,
        "ev": pair(p["ev_cold"][0] + p["ev_cold"][1] * evening,
                   p["ev_warm"][0] + p["ev_warm"][1] * evening) * growth,
        "hv": pair(refuel * (p["hv_cold"][0] + p["hv_cold"][1] * morning
                             + p["hv_cold"][2] * evening),
                   refuel * (p["hv_warm"][0] + p["hv_warm"][1] * midday
                             + p["hv_warm"][2] * evening)) * growth,
        "pv": pair(p["pv_peak"][0] * solar, p["pv_peak"][1] * solar),
        "wind": pair(p["wind_cold"][0] + p["wind_cold"][1] * wave(1.0),
                     p["wind_warm"][0] + p["wind_warm"][1] * wave(2.5)),
        "price": pair(p["price_cold"][0] + p["price_cold"][1] * morning
                      + p["price_cold"][2] * evening,
                      p["price_warm"][0] + p["price_warm"][1] * midday
                      + p["price_warm"][2] * evening),
    }
    out = {}
    for key in ("electricity", "heat", "cooling", "ev", "hv", "pv", "wind", "price"):
        jitter = 1.0 + 0.03 * rng.standard_normal(48)
        out[key] = np.round(np.clip(raw[key] * jitter, 0.0, None), 3)
    return out


def _segments(p: dict) -> tuple[GridSegment, ...]:
    return tuple(GridSegment(name, *map(lambda v: v if v is None else float(v), p[name]))
                 for name in ("nuclear", "hydro", "gas", "biofuel"))


def _techs(p: dict, ny: int, ely_caps) -> tuple[ConversionTech, ...]:
    learn = tuple(float(0.97 ** k) for k in range(ny))
    flat = lambda v: (float(v),) * ny
    (eta_b, cap_b), (eta_e, eta_h, cap_chp) = p["boiler"], p["chp"]
    (cop_ec, cap_ec), (cop_ac, cap_ac) = p["ec"], p["ac"]
    return (
        ConversionTech("boiler", eta_b, flat(cap_b), fuel="gas", fuel_lhv=1.0,
                       om_cost_per_MWh=2.0, learning_multiplier_by_year=flat(1.0)),
        ConversionTech("chp", eta_e, flat(cap_chp), efficiency_heat=eta_h, fuel="gas",
                       fuel_lhv=1.0, om_cost_per_MWh=4.0, learning_multiplier_by_year=flat(1.0)),
        ConversionTech("electric_chiller", cop_ec, flat(cap_ec), om_cost_per_MWh=1.0,
                       learning_multiplier_by_year=flat(1.0)),
        # no published absorption-chiller COP; placeholder
        ConversionTech("absorption_chiller", cop_ac, flat(cap_ac), om_cost_per_MWh=1.0,
                       learning_multiplier_by_year=flat(1.0)),
        ConversionTech("electrolyzer", ELY_EFF, tuple(float(c) for c in ely_caps),
                       om_cost_per_MWh=4.0, learning_multiplier_by_year=learn),
    )


def _storages(p: dict, ny: int, h2_max) -> tuple[StorageTech, ...]:
    flat = lambda v: (float(v),) * ny
    h2_max = tuple(float(v) for v in h2_max)
    h2_min = tuple(H2_MIN_MWH / H2_MAX_MWH * v for v in h2_max)
    h_min, h_max, h_pow, h_init = p["heat_storage"]
    c_max, c_pow = p["cold_storage"]
    return (
        StorageTech("heat", flat(h_min), flat(h_max), flat(h_pow), flat(h_pow), 0.95, 0.95,
                    flat(h_init), cycle_cost_per_MWh=1.0),
        StorageTech("hydrogen", h2_min, h2_max, flat(H2_P_CH_MW), flat(H2_P_DCH_MW),
                    H2_ETA_CH, H2_ETA_DCH, h2_min, cycle_cost_per_MWh=0.5),
        StorageTech("cold", flat(0.0), flat(c_max), flat(c_pow), flat(c_pow), 0.95, 0.95,
                    flat(0.0), cycle_cost_per_MWh=0.5),
    )


def synthetic_instance(long_horizon: bool = False, **overrides) -> HubInstance:
    """The bundled instance (1 year) or its multi-year build-out variant.

    Keyword arguments replace entries of :data:`PARAMS`.
    """
    unknown = set(overrides) - set(PARAMS)
    if unknown:
        raise KeyError(f"unknown synthetic parameters: {sorted(unknown)}")
    p = {**PARAMS, **overrides}
    rng = np.random.default_rng(SEED)
    if long_horizon:
        years = LONG_YEARS
        frac = (np.array(years) - 2025) / 25.0
        ely_caps = np.round(ELY_CAP_MW + (ELY_CAP_2050_MW - ELY_CAP_MW) * frac, 3)
        h2_max = np.round(H2_MAX_MWH + (H2_MAX_2050_MWH - H2_MAX_MWH) * frac, 3)
        growth = 1.0 + DEMAND_GROWTH * (np.array(years) - 2025)
    else:
        years = (2025,)
        ely_caps, h2_max, growth = [ELY_CAP_MW], [H2_MAX_MWH], [1.0]
    ny = len(years)
    rows = [_profiles(p, rng, g) for g in growth]
    stack = lambda key: _frozen(np.vstack([r[key] for r in rows]))
    price = stack("price")
    demands = DemandSet(stack("electricity"), stack("heat"), stack("cooling"), stack("ev"),
                        stack("hv"), dr_up_ratio_el=0.10, dr_down_ratio_el=0.10,
                        dr_up_ratio_h=0.05, dr_down_ratio_h=0.05, dr_penalty_per_MWh=3.0)
    renewables = RenewableProfile(stack("pv"), stack("wind"), pv_om_per_MWh=1.5,
                                  wind_om_per_MWh=2.5,
                                  learning_multiplier_by_year=tuple(float(0.97 ** k)
                                                                    for k in range(ny)))
    policy = PolicySpec(mode="carbon_tax", base_year=2025, tax_base_per_t=TAX_BASE,
                        tax_escalation_per_t_per_year=TAX_ESCALATION, tax_cap_per_t=TAX_CAP,
                        nz_base_emissions_t=p["nz_base"], nz_target_year=2050)
    return HubInstance(
        name="synthetic_on_long" if long_horizon else "synthetic_on",
        time=TimeStructure(tuple(years), 48, 1.0),
        segments=_segments(p),
        techs=_techs(p, ny, ely_caps),
        storages=_storages(p, ny, h2_max),
        demands=demands,
        renewables=renewables,
        policy=policy,
        price_buy=price,
        price_sell=_frozen(np.round(p["sell_ratio"] * price, 3)),
        export_limit_MW=float(p["export_limit"]),
        fuel_emission_coeff=float(p["fuel_emission"]),
        fuel_prices={"biofuel": float(p["bio_price"]), "gas": float(p["gas_price"])},
        h2_import=HydrogenImport(price_per_MWh=float(p["h2_price"]),
                                 emission_factor_t_per_MWh=float(p["h2_ef"])),
        description=("Synthetic Ontario-like hub: cold day (periods 0-23) and warm day "
                     "(24-47). Hydrogen, carbon and robustness parameters at published "
                     "values; all other data synthetic."),
        dev_fraction=DEV_FRACTION,
    )


def write_bundled() -> list:
    """Regenerate the bundled JSON files from :data:`PARAMS`."""
    return [save_instance(synthetic_instance(long_horizon=name.endswith("_long.json")),
                          bundled_path(name))
            for name in BUNDLED]


if __name__ == "__main__":
    for path in write_bundled():
        print(path)
