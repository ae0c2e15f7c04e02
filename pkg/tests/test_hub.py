import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hubopt.hub import (CORE_SYMBOLS, build_deterministic, build_weighted, cost_constant,
                        cost_expression, emissions_expression, evaluate)
from hubopt.instance import InstanceValidationError
from hubopt.milp import solve
from hubopt.policy import build_policy_model

from conftest import HIGHS, edit, toy_doc, toy_instance
from invariants import invariant_failures


def test_bundled_row_counts(bundled):
    hub = build_deterministic(bundled)
    assert hub.cons.count("el_balance") == 48
    assert hub.cons.count("h2_meet") == 48
    assert hub.cons.count("h_storage_netzero") == 1
    for sym in CORE_SYMBOLS:
        assert hub.vars[sym].shape == (1, 48)


def test_every_variable_has_one_handle(bundled):
    hub = build_deterministic(bundled)
    ids = np.concatenate([hub.vars[s].ravel() for s in hub.vars.symbols])
    assert len(ids) == len(set(ids.tolist())) == hub.model.n_vars


def test_single_period_grid_only():
    # 10 MWh at 50 $/MWh from the only segment
    hub = build_deterministic(toy_instance(nt=1, load=(10.0,), price=(50.0,)))
    sol = solve(hub.model)
    assert sol.objective == pytest.approx(500.0, abs=1e-6)


def test_three_period_toy_by_hand():
    hub = build_deterministic(toy_instance())
    sol = solve(hub.model)
    assert sol.objective == pytest.approx(10 * 50 + 12 * 60 + 8 * 40, abs=1e-6)


def test_zero_demand_zero_cost():
    inst = toy_instance(load=(0.0, 0.0, 0.0), price=(0.0, 0.0, 0.0))
    hub = build_deterministic(inst)
    sol = solve(hub.model)
    assert sol.objective == pytest.approx(0.0, abs=1e-9)
    assert np.allclose(sol.values, 0.0, atol=1e-9)


def test_renewables_displace_purchases():
    hub = build_deterministic(toy_instance(pv=(4.0, 0.0, 20.0)))
    sol = solve(hub.model)
    # period 3 has more PV than load, so the surplus is curtailed (no export)
    assert sol.objective == pytest.approx(6 * 50 + 12 * 60, abs=1e-6)
    assert hub.vars.values("curt_pv", sol.values)[0, 2] == pytest.approx(12.0)


def test_build_rejects_invalid_instance():
    inst = edit(toy_doc(), lambda d: d["segments"][0].update(max_purchase_MW=-1.0))
    with pytest.raises(InstanceValidationError):
        build_deterministic(inst)


def test_emissions_expression_linear():
    inst = toy_instance()
    hub = build_deterministic(inst)
    x = np.zeros(hub.model.n_vars)
    x[hub.vars["g_gas"][0, 1]] = 10.0
    assert evaluate(emissions_expression(hub), x) == pytest.approx(2.0)
    clean = edit(toy_doc(), lambda d: d.update(fuel_emission_coeff=0.0))
    assert emissions_expression(build_deterministic(clean)) == {}


def test_emissions_match_recomputation(bundled):
    hub = build_policy_model(bundled, "carbon_tax")
    sol = solve(hub.model, HIGHS)
    g = lambda s: hub.vars.values(s, sol.values)
    want = bundled.fuel_emission_coeff * (g("g_gas") + g("g_bio")).sum()
    want += sum(s.emission_factor_t_per_MWh * g(f"seg_{s.name}").sum() for s in bundled.segments)
    want += bundled.h2_import.emission_factor_t_per_MWh * g("ch_h2").sum()
    assert evaluate(emissions_expression(hub), sol.values) == pytest.approx(want, rel=1e-12)


def test_cost_objective_matches_expression(bundled):
    hub = build_deterministic(bundled)
    sol = solve(hub.model, HIGHS)
    cost = evaluate(cost_expression(bundled, hub.vars), sol.values, cost_constant(bundled))
    assert cost == pytest.approx(sol.objective, rel=1e-9)


def test_weighted_objectives(bundled):
    det = solve(build_deterministic(bundled).model, HIGHS)
    same = solve(build_weighted(bundled, 1.0, 0.0).model, HIGHS)
    assert same.objective == pytest.approx(det.objective, rel=1e-9)

    hub_c = build_deterministic(bundled)
    hub_e = build_weighted(bundled, 0.0, 1.0)
    sol_e = solve(hub_e.model, HIGHS)
    em_c = evaluate(emissions_expression(hub_c), det.values)
    assert sol_e.objective <= em_c + 1e-6

    both = solve(build_weighted(bundled, 1.0, 1.0).model, HIGHS)
    cost_e = evaluate(cost_expression(bundled, hub_e.vars), sol_e.values, cost_constant(bundled))
    assert det.objective + sol_e.objective - 1e-6 <= both.objective <= cost_e + sol_e.objective + 1e-6

    with pytest.raises(ValueError):
        build_weighted(bundled, 0.0, 0.0)


@pytest.mark.parametrize("mode", ["none", "carbon_tax", "net_zero"])
def test_structural_invariants_bundled(bundled, mode):
    hub = build_policy_model(bundled, mode)
    sol = solve(hub.model, HIGHS)
    assert sol.ok
    assert invariant_failures(bundled, hub, sol.values) == []


def test_structural_invariants_long_horizon(bundled_long):
    hub = build_policy_model(bundled_long, "carbon_tax")
    sol = solve(hub.model, HIGHS)
    assert sol.ok
    assert invariant_failures(bundled_long, hub, sol.values) == []


def test_reference_backend_on_toy():
    hub = build_deterministic(toy_instance(pv=(3.0, 1.0, 2.0)))
    sol = solve(hub.model, backend="reference")
    assert sol.ok
    assert sol.objective == pytest.approx(solve(hub.model, HIGHS).objective, abs=1e-6)
    assert invariant_failures(hub.cons.instance, hub, sol.values) == []


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(0.0, 30.0), min_size=3, max_size=3),
       st.lists(st.floats(0.0, 5.0), min_size=3, max_size=3))
def test_raising_demand_never_lowers_cost(load, bump):
    lo = solve(build_deterministic(toy_instance(load=load)).model, HIGHS)
    hi = solve(build_deterministic(toy_instance(load=[a + b for a, b in zip(load, bump)])).model,
               HIGHS)
    assert hi.objective >= lo.objective - 1e-7
