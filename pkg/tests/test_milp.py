import itertools
import math
import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from hubopt.milp import (EQ, GE, LE, MilpModel, ModelStructureError, SolveOptions,
                         check_feasible, lp_relax, read_lp, resolve_backend, solve,
                         to_lp_string, write_lp)

REF = SolveOptions(backend="reference", mip_gap=1e-10)


def random_milp(rng, n_bin, n_cont, n_rows, raw=False):
    """Random MILP built around a feasible point; binaries come first."""
    m = MilpModel("rand")
    hi = np.concatenate([np.ones(n_bin), rng.integers(3, 12, n_cont).astype(float)])
    for j in range(n_bin):
        m.add_var(f"b{j}", binary=True)
    for j in range(n_cont):
        m.add_var(f"x{j}", 0.0, hi[n_bin + j])
    n = n_bin + n_cont
    x0 = np.concatenate([rng.integers(0, 2, n_bin), rng.uniform(0, 3, n_cont)])
    A, senses, rhs = [], [], []
    for i in range(n_rows):
        a = np.round(rng.normal(0, 3, n), 2) * (rng.random(n) < 0.6)
        if not a.any():
            a[rng.integers(n)] = 1.0
        lhs = float(a @ x0)
        if i % 5 == 4:
            sense, r = EQ, lhs
        elif rng.random() < 0.5:
            sense, r = LE, lhs + float(rng.uniform(0, 4))
        else:
            sense, r = GE, lhs - float(rng.uniform(0, 4))
        m.add_constraint({j: a[j] for j in range(n) if a[j]}, sense, r)
        A.append(a); senses.append(sense); rhs.append(r)
    c = np.round(rng.normal(0, 5, n), 2)
    m.add_objective({j: float(c[j]) for j in range(n)})
    if raw:
        return m, (np.array(A), senses, np.array(rhs), c, hi, n_bin)
    return m


def enumerate_optimum(data):
    """Exhaustive binary enumeration with an LP over the continuous part."""
    A, senses, rhs, c, hi, n_bin = data
    sign = np.array([{LE: 1.0, GE: -1.0, EQ: 0.0}[s] for s in senses])
    ineq, eq = sign != 0, sign == 0
    best = math.inf
    for combo in itertools.product((0.0, 1.0), repeat=n_bin):
        z = np.asarray(combo)
        r = rhs - A[:, :n_bin] @ z
        Ac = A[:, n_bin:]
        res = linprog(c[n_bin:],
                      A_ub=(sign[ineq, None] * Ac[ineq]) if ineq.any() else None,
                      b_ub=(sign[ineq] * r[ineq]) if ineq.any() else None,
                      A_eq=Ac[eq] if eq.any() else None, b_eq=r[eq] if eq.any() else None,
                      bounds=[(0.0, h) for h in hi[n_bin:]], method="highs")
        if res.status == 0:
            best = min(best, res.fun + float(c[:n_bin] @ z))
    return best


def test_reference_solver_matches_enumeration():
    rng = np.random.default_rng(20250)
    t0 = time.perf_counter()
    checked = 0
    for k in range(54):
        n_bin = 12 if k >= 51 else 2 + k % 8
        m, data = random_milp(rng, n_bin, int(rng.integers(4, 21)), int(rng.integers(4, 12)),
                              raw=True)
        want = enumerate_optimum(data)
        got = solve(m, REF)
        if math.isinf(want):
            assert got.status == "infeasible"
            continue
        assert got.status == "optimal"
        assert abs(got.objective - want) <= 1e-6
        assert not check_feasible(m, got.values)
        checked += 1
    assert checked >= 50
    assert time.perf_counter() - t0 < 60


def test_reference_and_highs_agree_on_random_models():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = random_milp(rng, 6, 10, 8)
        a = solve(m, REF)
        b = solve(m, backend="highs", mip_gap=1e-10)
        assert a.status == b.status
        if a.ok:
            assert a.objective == pytest.approx(b.objective, abs=1e-6)


def test_small_lp_by_hand():
    # max x + y st x + 2y <= 4, 3x + y <= 6  ->  x = 1.6, y = 1.2
    m = MilpModel()
    x, y = m.add_var("x"), m.add_var("y")
    m.add_constraint({x: 1, y: 2}, LE, 4)
    m.add_constraint({x: 3, y: 1}, LE, 6)
    m.add_objective({x: -1, y: -1})
    sol = solve(m, REF)
    assert sol.ok
    assert sol.values[x] == pytest.approx(1.6)
    assert sol.values[y] == pytest.approx(1.2)
    assert sol.objective == pytest.approx(-2.8)


def test_knapsack():
    # values 10, 13, 7, weights 4, 6, 3, capacity 9 -> items 2 and 3 (13+7=20)
    m = MilpModel()
    xs = [m.add_var(f"b{i}", binary=True) for i in range(3)]
    m.add_constraint(dict(zip(xs, (4, 6, 3))), LE, 9)
    m.add_objective(dict(zip(xs, (-10, -13, -7))))
    sol = solve(m, REF)
    assert sol.objective == pytest.approx(-20)
    assert list(np.round(sol.values)) == [0, 1, 1]


def test_infeasible_and_unbounded():
    m = MilpModel()
    x = m.add_var("x", 0, 1)
    m.add_constraint({x: 1}, GE, 2)
    assert solve(m, REF).status == "infeasible"
    assert solve(m, backend="highs").status == "infeasible"

    m = MilpModel()
    x = m.add_var("x", 0, math.inf)
    m.add_objective({x: -1})
    assert solve(m, REF).status == "unbounded"


def test_degenerate_lp_terminates():
    # Several redundant rows through the same vertex
    m = MilpModel()
    x, y = m.add_var("x"), m.add_var("y")
    for k in range(1, 8):
        m.add_constraint({x: k, y: k}, LE, 2 * k)
    m.add_constraint({x: 1}, LE, 1)
    m.add_objective({x: -1, y: -1})
    sol = solve(m, REF)
    assert sol.objective == pytest.approx(-2)


def test_deterministic_repeat():
    rng = np.random.default_rng(11)
    m = random_milp(rng, 8, 12, 9)
    a, b = solve(m, REF), solve(m, REF)
    assert a.status == b.status
    assert np.array_equal(a.values, b.values)
    assert a.nodes == b.nodes


def test_free_and_negative_bounds():
    m = MilpModel()
    x = m.add_var("x", -math.inf, math.inf)
    y = m.add_var("y", -5, -1)
    m.add_constraint({x: 1, y: 1}, GE, -3)
    m.add_objective({x: 1, y: 2})
    sol = solve(m, REF)
    assert sol.values[y] == pytest.approx(-5)
    assert sol.values[x] == pytest.approx(2)


def test_structure_errors():
    m = MilpModel()
    with pytest.raises(ModelStructureError):
        m.add_var("bad", 2, 1)
    with pytest.raises(ModelStructureError):
        m.add_constraint({}, "<>", 0)
    m.add_var("x")
    m.add_constraint({5: 1.0}, LE, 0)
    with pytest.raises(ModelStructureError):
        solve(m, REF)


def test_unknown_backend(monkeypatch):
    m = MilpModel()
    m.add_var("x", 0, 1)
    with pytest.raises(ValueError):
        resolve_backend(m, "cplex")
    monkeypatch.setenv("HUBOPT_SOLVER", "highs")
    assert resolve_backend(m) == "highs"
    monkeypatch.setenv("HUBOPT_SOLVER", "reference")
    assert resolve_backend(m) == "reference"


def test_lp_relaxation_bounds_milp():
    rng = np.random.default_rng(5)
    m = random_milp(rng, 6, 6, 6)
    milp, relax = solve(m, REF), solve(lp_relax(m), REF)
    if milp.ok:
        assert relax.objective <= milp.objective + 1e-9


def test_lp_roundtrip(tmp_path):
    rng = np.random.default_rng(9)
    m = random_milp(rng, 4, 6, 6)
    text = to_lp_string(m)
    assert "Minimize" in text and "Binaries" in text
    path = write_lp(m, tmp_path / "m.lp")
    back = read_lp(path.read_text())
    assert back.n_vars == m.n_vars and back.n_cons == m.n_cons
    assert solve(back, REF).objective == pytest.approx(solve(m, REF).objective, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=5),
       st.floats(0.5, 10))
def test_box_lp_optimum_is_a_corner(costs, cap):
    # min c.x over 0 <= x <= cap, sum x <= cap: optimum is cap * min(0, min c)
    m = MilpModel()
    xs = [m.add_var(f"x{i}", 0, cap) for i in range(len(costs))]
    m.add_constraint({x: 1.0 for x in xs}, LE, cap)
    m.add_objective(dict(zip(xs, costs)))
    sol = solve(m, REF)
    assert sol.objective == pytest.approx(cap * min(0.0, min(costs)), abs=1e-7)
