"""
Price of robustness
===================

Sweep the uncertainty budget and watch cost, emissions and hydrogen
production move away from the deterministic plan.
"""

# %%
from hubopt.instance import load_bundled
from hubopt.milp import SolveOptions, solve
from hubopt.policy import build_policy_model
from hubopt.report import metrics
from hubopt.robust import derive_uncertainty, gamma_sweep, worst_case_audit

inst = load_bundled("synthetic_on.json")
opts = SolveOptions(mip_gap=0.0)
gammas = [0, 1, 2, 4, 8, 16]
print("deviation fraction:", inst.dev_fraction)

# %%
for mode in ("carbon_tax", "net_zero"):
    hub = build_policy_model(inst, mode)
    det = solve(hub.model, opts)
    base = metrics(inst, det, hub, mode)
    unc = derive_uncertainty(inst, hub)
    print(f"\n{mode}  deterministic cost {base.total_cost:,.0f}")
    print(f"{'gamma':>6}{'premium':>10}{'d_emis_t':>12}{'d_h2_MWh':>12}{'audit':>10}")
    for pt in gamma_sweep(inst, mode, gammas, opts=opts):
        m = pt.report
        audit = worst_case_audit(hub.model, unc.with_gamma(pt.gamma), pt.solution)
        print(f"{pt.gamma:>6g}{m.total_cost / base.total_cost - 1:>10.1%}"
              f"{m.total_emissions_t - base.total_emissions_t:>12.1f}"
              f"{m.h2_production_MWh - base.h2_production_MWh:>12.1f}{audit:>10.1e}")

# %%
# The deterministic plan is not safe against the same deviations.
hub = build_policy_model(inst, "carbon_tax")
det = solve(hub.model, opts)
unc = derive_uncertainty(inst, hub)
for g in (1, 4):
    print("gamma", g, "deterministic plan violates by",
          round(worst_case_audit(hub.model, unc.with_gamma(g), det), 2), "MWh")
