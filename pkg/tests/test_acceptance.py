"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from hubopt.cli import main as cli_main
from hubopt.instance import load_bundled
from hubopt.milp import SolveOptions, solve
from hubopt.policy import build_policy_model
from hubopt.report import metrics
from hubopt.robust import derive_uncertainty, robust_model, robustify, worst_case_audit

from invariants import invariant_failures
from test_milp import REF, enumerate_optimum, random_milp
from test_robust import robust_toy, scenario_optimum

GAMMAS = (0, 1, 2, 4, 8, 16)
POLICIES = ("carbon_tax", "net_zero")
EXACT = SolveOptions(mip_gap=0.0)


def report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {n:>2} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def inst():
    return load_bundled("synthetic_on.json")


@pytest.fixture(scope="module")
def sweeps(inst):
    """Deterministic and robust solves for every policy and swept budget."""
    out = {}
    for mode in POLICIES:
        hub = build_policy_model(inst, mode)
        t0 = time.perf_counter()
        det = solve(hub.model, EXACT)
        runs = {"det": (det, time.perf_counter() - t0), "hub": hub, "rob": {}}
        base = derive_uncertainty(inst, hub)
        for g in GAMMAS:
            spec = base.with_gamma(g)
            model = robustify(hub.model, spec)
            t0 = time.perf_counter()
            sol = solve(model, EXACT)
            runs["rob"][g] = (spec, sol, time.perf_counter() - t0)
        out[mode] = runs
    return out


def test_criterion_01_parameter_fidelity(capsys):
    t0 = time.perf_counter()
    b = load_bundled("synthetic_on.json")
    ely, h2, pol = b.tech("electrolyzer"), b.storage("hydrogen"), b.policy
    got = (ely.max_input_per_period[0], ely.efficiency, h2.e_max[0], h2.e_min[0], h2.eta_ch,
           h2.eta_dch, h2.p_ch_max[0], h2.p_dch_max[0], pol.tax_base_per_t,
           pol.tax_escalation_per_t_per_year, pol.tax_cap_per_t, b.dev_fraction)
    want = (300.0, 0.75, 2000.0, 200.0, 0.95, 0.95, 200.0, 200.0, 80.0, 15.0, 170.0, 0.30)
    dt = time.perf_counter() - t0
    report(capsys, 1, got == want and dt < 1.0, f"12 values exact={got == want}, {dt:.3f} s")


def test_criterion_02_solver_correctness(capsys):
    rng = np.random.default_rng(20250)
    worst, checked, solver_time = 0.0, 0, 0.0
    t0 = time.perf_counter()
    for k in range(54):
        n_bin = 12 if k >= 51 else 2 + k % 8
        m, data = random_milp(rng, n_bin, int(rng.integers(4, 21)), int(rng.integers(4, 12)),
                              raw=True)
        want = enumerate_optimum(data)
        s0 = time.perf_counter()
        got = solve(m, REF)
        solver_time += time.perf_counter() - s0
        if math.isinf(want):
            worst = max(worst, 0.0 if got.status == "infeasible" else math.inf)
            continue
        worst = max(worst, abs(got.objective - want) if got.ok else math.inf)
        checked += 1
    total = time.perf_counter() - t0
    ok = checked >= 50 and worst <= 1e-6 and total < 60
    report(capsys, 2, ok, f"{checked} feasible MILPs, max |ref - enum| = {worst:.2e}, "
                          f"{total:.1f} s total ({solver_time:.1f} s in the reference solver)")


def test_criterion_03_robust_collapse(capsys, sweeps):
    parts, ok = [], True
    for mode in POLICIES:
        det, tdet = sweeps[mode]["det"]
        _, rob, trob = sweeps[mode]["rob"][0]
        diff = abs(rob.objective - det.objective)
        ok &= diff <= 1e-6 and max(tdet, trob) < 300
        parts.append(f"{mode} |rob0 - det| = {diff:.2e} ({trob:.1f} s)")
    report(capsys, 3, ok, "; ".join(parts))


def test_criterion_04_gamma_monotone(capsys, sweeps):
    parts, ok = [], True
    for mode in POLICIES:
        objs = [sweeps[mode]["rob"][g][1].objective for g in GAMMAS]
        drop = max(0.0, *(a - b for a, b in zip(objs, objs[1:])))
        ok &= drop <= 1e-7 and all(math.isfinite(o) for o in objs)
        parts.append(f"{mode} max decrease {drop:.1e}, "
                     f"objective {objs[0]:.6g} -> {objs[-1]:.6g}")
    report(capsys, 4, ok, "; ".join(parts))


def test_criterion_05_worst_case_feasibility(capsys, sweeps):
    parts, ok = [], True
    t0 = time.perf_counter()
    for mode in POLICIES:
        hub = sweeps[mode]["hub"]
        det = sweeps[mode]["det"][0]
        rob_worst = max(worst_case_audit(hub.model, spec, sol)
                        for spec, sol, _ in sweeps[mode]["rob"].values())
        det_viol = min(worst_case_audit(hub.model, sweeps[mode]["rob"][g][0], det)
                       for g in GAMMAS if g >= 1)
        ok &= rob_worst <= 1e-6 and det_viol > 0
        parts.append(f"{mode} robust audit max {rob_worst:.1e}, det violation min "
                     f"{det_viol:.3g}")
    dt = time.perf_counter() - t0
    report(capsys, 5, ok and dt < 600, "; ".join(parts) + f" ({dt:.1f} s)")


def test_criterion_06_oracle_equivalence(capsys):
    inst = robust_toy()
    worst = 0.0
    for g in (0, 1, 2):
        _, spec, model = robust_model(inst, "none", g)
        assert spec.max_group_size() <= 4
        got = solve(model, EXACT).objective
        worst = max(worst, abs(got - scenario_optimum(inst, g)))
    report(capsys, 6, worst <= 1e-6, f"3-period toy, gamma 0/1/2, max |robust - brute force| "
                                     f"= {worst:.1e}")


def test_criterion_07_structural_invariants(capsys, inst, sweeps):
    t0 = time.perf_counter()
    failures, n = [], 0
    hub = build_policy_model(inst, "none")
    failures += invariant_failures(inst, hub, solve(hub.model, EXACT).values)
    n += 1
    for mode in POLICIES:
        hub = sweeps[mode]["hub"]
        failures += invariant_failures(inst, hub, sweeps[mode]["det"][0].values)
        n += 1
        for _, sol, _ in sweeps[mode]["rob"].values():
            failures += [f"{mode}: {f}" for f in invariant_failures(inst, hub, sol.values,
                                                                    robust=True)]
            n += 1
    long = load_bundled("synthetic_on_long.json")
    hub = build_policy_model(long, "carbon_tax")
    failures += invariant_failures(long, hub, solve(hub.model, EXACT).values)
    n += 1
    dt = time.perf_counter() - t0
    report(capsys, 7, not failures and dt < 300,
           f"{n} solved scenarios, failures: {failures or 'none'} ({dt:.1f} s)")


def test_criterion_08_policy_directionality(capsys, inst, sweeps):
    rep = {m: metrics(inst, sweeps[m]["det"][0], sweeps[m]["hub"], m) for m in POLICIES}
    ct, nz = rep["carbon_tax"], rep["net_zero"]
    d = {"emissions": nz.total_emissions_t - ct.total_emissions_t,
         "fossil": nz.fossil_use_MWh - ct.fossil_use_MWh,
         "h2": nz.h2_production_MWh - ct.h2_production_MWh,
         "renewable_share": nz.renewable_share_frac - ct.renewable_share_frac}
    ok = d["emissions"] < 0 and d["fossil"] < 0 and d["h2"] > 0 and d["renewable_share"] > 0
    report(capsys, 8, ok, ", ".join(f"d{k}={v:+.4g}" for k, v in d.items()))


def test_criterion_09_robust_directionality(capsys, inst, sweeps):
    parts, ok = [], True
    for mode in POLICIES:
        hub = sweeps[mode]["hub"]
        det = metrics(inst, sweeps[mode]["det"][0], hub, mode)
        premiums = []
        for g in GAMMAS[1:]:
            rob = metrics(inst, sweeps[mode]["rob"][g][1], hub, mode)
            ok &= (rob.total_cost > det.total_cost
                   and rob.total_emissions_t >= det.total_emissions_t - 1e-6
                   and rob.fossil_use_MWh >= det.fossil_use_MWh - 1e-6
                   and rob.h2_production_MWh <= det.h2_production_MWh + 1e-6
                   and rob.electrolyzer_utilization_frac
                   <= det.electrolyzer_utilization_frac + 1e-9)
            premiums.append(rob.total_cost / det.total_cost - 1)
        parts.append(f"{mode} premium {min(premiums):.1%}..{max(premiums):.1%}")
    report(capsys, 9, ok, "; ".join(parts) + " (published band 6.6-9.0% not asserted)")


def test_criterion_10_determinism(capsys, tmp_path):
    commands = (["solve"], ["robust", "--gamma", "2"], ["sweep-gamma", "--gammas", "0,1,4"],
                ["compare", "--gamma", "1"],
                ["sensitivity", "--param", "demands.hv_MWh", "--levels", "0.9,1.1"],
                ["solve", "--policy", "net-zero"])
    same, files = True, 0
    for k, cmd in enumerate(commands):
        blobs = []
        for rep in range(2):
            d = tmp_path / f"{k}_{rep}"
            assert cli_main(cmd + ["--out", str(d), "--seed", "7"]) == 0
            blobs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
        same &= blobs[0] == blobs[1]
        files += len(blobs[0])
    capsys.readouterr()
    report(capsys, 10, same, f"{len(commands)} commands run twice, {files} artifacts "
                             f"byte-identical={same}")
