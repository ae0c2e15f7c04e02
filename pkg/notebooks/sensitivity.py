"""
Sensitivity and stress
======================

One-at-a-time sweeps, a tornado ranking and an escalation to the first
infeasible level.
"""

# %%
from hubopt.analysis import (DEFAULT_TORNADO, PerturbationSpec, oat_sweep,
                             stress_to_infeasibility, tornado)
from hubopt.instance import load_bundled
from hubopt.milp import SolveOptions

inst = load_bundled("synthetic_on.json")
opts = SolveOptions(mip_gap=0.0)

# %%
# Gas price, with the robust objective alongside at gamma = 1.
spec = PerturbationSpec("fuel_prices.gas", "scale", (0.8, 0.9, 1.0, 1.1, 1.2))
for r in oat_sweep(inst, spec, robust_gamma=1.0, opts=opts):
    print(f"gas x{r.level:.1f}: {r.status:>10} {r.objective:>14,.0f} {r.robust_objective:>14,.0f}")

# %%
base, rows = tornado(inst, DEFAULT_TORNADO, "carbon_tax", opts)
print(f"baseline {base:,.0f}")
for r in rows:
    print(f"{r.path:<40}{r.low_delta:>+14,.0f}{r.high_delta:>+14,.0f}")

# %%
# Hydrogen deliveries run into the discharge limit first.
res = stress_to_infeasibility(inst, PerturbationSpec("demands.hv_MWh", "scale"),
                              "carbon_tax", 0.25, 4.0, opts)
print("first infeasible level:", res.first_infeasible_level)
print("binding rows:", res.violated_tags[:5])
