"""
Carbon tax against a net-zero trajectory
========================================

Solve the bundled one-year instance under both policies and put the
headline indicators side by side.
"""

# %%
from hubopt.instance import load_bundled
from hubopt.milp import SolveOptions, solve
from hubopt.policy import base_emissions, build_policy_model
from hubopt.report import metrics, supply_table

inst = load_bundled("synthetic_on.json")
opts = SolveOptions(mip_gap=0.0)
print(inst.name, "periods:", inst.time.periods_per_year, "years:", list(inst.time.years))
print("net-zero base emissions (t):", base_emissions(inst))

# %%
# One solve per policy.  The tax is priced into the objective; the net-zero
# mode caps yearly emissions instead.
reports = {}
for mode in ("carbon_tax", "net_zero"):
    hub = build_policy_model(inst, mode)
    sol = solve(hub.model, opts)
    reports[mode] = (hub, sol, metrics(inst, sol, hub, mode))
    print(f"{mode:>10}: {sol.status}, objective {sol.objective:,.0f} USD")

# %%
fields = ("total_cost", "total_emissions_t", "fossil_use_MWh", "h2_production_MWh",
          "renewable_share_frac", "electrolyzer_utilization_frac")
ct, nz = reports["carbon_tax"][2], reports["net_zero"][2]
print(f"{'indicator':<32}{'carbon tax':>14}{'net zero':>14}{'delta':>14}")
for f in fields:
    a, b = getattr(ct, f), getattr(nz, f)
    print(f"{f:<32}{a:>14.4g}{b:>14.4g}{b - a:>+14.4g}")

# %%
# Where the energy comes from.  Under the cap the expensive emission-free
# biofuel replaces part of the gas.
for mode, (hub, sol, _) in reports.items():
    table = supply_table(inst, hub, sol.values)
    print(mode, {k: round(v["total"], 1) for k, v in table.items()})
