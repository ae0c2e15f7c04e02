"""hubopt command line.

Exit codes: 0 success, 1 model infeasible (or no solution), 2 usage,
configuration or instance errors.  Stress runs that find an infeasible
level exit 0, since that is their result.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import analysis
from .hub import build_weighted
from .instance import (BUNDLED, InstanceError, bundled_path, instance_from_dict, load_instance,
                       validate)
from .milp import SolveOptions, solve
from .policy import build_policy_model
from .report import metrics
from .robust import RobustError, gamma_sweep, robust_model, worst_case_audit, write_sweep_csv

POLICIES = {"carbon-tax": "carbon_tax", "net-zero": "net_zero", "none": "none"}


class ConfigError(Exception):
    pass


def _gammas(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad gamma list {text!r}")
    if not vals or any(v < 0 or not math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("gammas must be finite and non-negative")
    return vals


def _weights(text: str) -> tuple[float, float]:
    parts = text.split(",")
    try:
        w = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weights {text!r}")
    if len(w) != 2:
        raise argparse.ArgumentTypeError("weights need two values: w_cost,w_emis")
    return w


def _nonneg(text: str) -> float:
    v = float(text)
    if v < 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a finite non-negative number")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", default="synthetic_on.json",
                        help="instance JSON file or the name of a bundled instance")
    common.add_argument("--policy", choices=sorted(POLICIES), default=None,
                        help="policy mode (default: the instance's own)")
    common.add_argument("--gamma", type=_nonneg, default=1.0)
    common.add_argument("--gammas", type=_gammas, default=[0, 1, 2, 4, 8, 16])
    common.add_argument("--dev-fraction", type=_nonneg, default=None,
                        help="deviation fraction (default: the instance's)")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--mip-gap", type=_nonneg, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--weights", type=_weights, default=None,
                        help="w_cost,w_emis weighted objective (solve only)")

    p = argparse.ArgumentParser(prog="hubopt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="deterministic solve")
    sub.add_parser("robust", parents=[common], help="robust solve at --gamma")
    sub.add_parser("sweep-gamma", parents=[common], help="robust solves over --gammas")
    s = sub.add_parser("sensitivity", parents=[common], help="OAT sweep or tornado")
    s.add_argument("--param", default=None, help="dot path; omit for the default tornado")
    s.add_argument("--mode", choices=analysis.MODES, default="scale")
    s.add_argument("--levels", type=_gammas, default=[0.8, 0.9, 1.0, 1.1, 1.2])
    s = sub.add_parser("stress", parents=[common], help="escalate one parameter to infeasibility")
    s.add_argument("--param", default="demands.electricity_MWh")
    s.add_argument("--mode", choices=analysis.MODES, default="scale")
    s.add_argument("--step", type=_nonneg, default=0.1)
    s.add_argument("--max-level", type=float, default=3.0)
    sub.add_parser("compare", parents=[common], help="deterministic vs robust at --gamma")
    sub.add_parser("validate", parents=[common], help="check an instance")
    return p


def _resolve(args) -> Path:
    path = Path(args.instance)
    if not path.exists() and args.instance in BUNDLED:
        path = bundled_path(args.instance)
    if not path.exists():
        raise ConfigError(f"instance file not found: {args.instance}")
    return path


def _load(args):
    return load_instance(_resolve(args))


def _mode(args, inst) -> str:
    return POLICIES[args.policy] if args.policy else inst.policy.mode


def _opts(args) -> SolveOptions:
    return SolveOptions(mip_gap=args.mip_gap)


def spec_fraction(args, inst) -> float:
    return inst.dev_fraction if args.dev_fraction is None else args.dev_fraction


def _outdir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}")
    return out


def _dump(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n",
                    encoding="utf-8")


def _write_solution(path: Path, model, values) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("variable", "value"))
        for var in model.variables:
            w.writerow((var.name, repr(float(values[var.id]))))


def _report_doc(args, inst, mode, sol, rep, extra=None) -> dict:
    doc = {"instance": inst.name, "policy": mode, "status": sol.status,
           "objective_usd": sol.objective, "backend": sol.backend, "nodes": sol.nodes,
           "seed": args.seed, "report": rep.to_dict()}
    doc.update(extra or {})
    return doc


def _log(out: Path, lines: list[str]) -> None:
    (out / "run.log").write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_solve(args) -> int:
    inst = _load(args)
    mode = _mode(args, inst)
    out = _outdir(args)
    if args.weights:
        hub = build_weighted(inst, *args.weights)
        mode = "none"
    else:
        hub = build_policy_model(inst, mode, _opts(args))
    sol = solve(hub.model, _opts(args))
    if not sol.has_values:
        print(f"{sol.status}: no solution for {inst.name} under {mode}", file=sys.stderr)
        _log(out, [f"status {sol.status}"])
        return 1
    rep = metrics(inst, sol, hub, mode)
    _write_solution(out / "solution.csv", hub.model, sol.values)
    extra = {"weights": list(args.weights)} if args.weights else None
    _dump(out / "report.json", _report_doc(args, inst, mode, sol, rep, extra))
    _log(out, [f"status {sol.status}", f"objective {sol.objective!r}",
               f"backend {sol.backend}", f"nodes {sol.nodes}"])
    print(f"{sol.status} objective={sol.objective:.6g}")
    return 0


def cmd_robust(args) -> int:
    inst = _load(args)
    mode = _mode(args, inst)
    out = _outdir(args)
    hub, spec, model = robust_model(inst, mode, args.gamma, args.dev_fraction, _opts(args))
    sol = solve(model, _opts(args))
    if not sol.has_values:
        print(f"{sol.status}: no robust solution at gamma={args.gamma}", file=sys.stderr)
        _log(out, [f"status {sol.status}"])
        return 1
    rep = metrics(inst, sol, hub, mode)
    audit = worst_case_audit(hub.model, spec, sol)
    _write_solution(out / "solution.csv", model, sol.values)
    _dump(out / "report.json", _report_doc(args, inst, mode, sol, rep,
                                           {"gamma": args.gamma,
                                            "dev_fraction": spec_fraction(args, inst),
                                            "worst_case_violation": audit}))
    _log(out, [f"status {sol.status}", f"objective {sol.objective!r}",
               f"worst_case_violation {audit!r}"])
    print(f"{sol.status} objective={sol.objective:.6g} audit={audit:.3g}")
    return 0


def cmd_sweep_gamma(args) -> int:
    inst = _load(args)
    mode = _mode(args, inst)
    out = _outdir(args)
    points = gamma_sweep(inst, mode, args.gammas, args.dev_fraction, _opts(args))
    write_sweep_csv(points, out / "gamma_sweep.csv")
    for p in points:
        print(f"gamma={p.gamma:g} {p.solution.status} objective={p.solution.objective:.6g}")
    return 0 if all(p.solution.has_values for p in points) else 1


def cmd_sensitivity(args) -> int:
    inst = _load(args)
    mode = _mode(args, inst)
    out = _outdir(args)
    if args.param:
        spec = analysis.PerturbationSpec(args.param, args.mode, tuple(args.levels))
        rows = analysis.oat_sweep(inst, spec, mode, opts=_opts(args))
        analysis.write_oat_csv(rows, out / "oat.csv")
        for r in rows:
            print(f"{r.path}={r.level:g} {r.status} objective={r.objective:.6g}")
        return 0
    base, rows = analysis.tornado(inst, analysis.DEFAULT_TORNADO, mode, _opts(args))
    analysis.write_tornado_csv(rows, out / "tornado.csv")
    print(f"baseline objective={base:.6g}")
    for r in rows:
        print(f"{r.path}: {r.low_delta:+.6g} / {r.high_delta:+.6g}")
    return 0


def cmd_stress(args) -> int:
    inst = _load(args)
    mode = _mode(args, inst)
    out = _outdir(args)
    if args.step <= 0:
        raise ConfigError("--step must be positive")
    spec = analysis.PerturbationSpec(args.param, args.mode, (1.0,))
    res = analysis.stress_to_infeasibility(inst, spec, mode, args.step, args.max_level,
                                           _opts(args))
    _dump(out / "stress.json", {"param": args.param, "mode": args.mode,
                                "first_infeasible_level": res.first_infeasible_level,
                                "violated_tags": res.violated_tags,
                                "slack_MWh_by_tag": res.slacks,
                                "levels_tried": res.levels_tried})
    if res.first_infeasible_level is None:
        print(f"feasible up to level {res.levels_tried[-1]:g}")
    else:
        print(f"infeasible at level {res.first_infeasible_level:g}: "
              + ", ".join(res.violated_tags))
    return 0


def cmd_compare(args) -> int:
    inst = _load(args)
    mode = _mode(args, inst)
    out = _outdir(args)
    try:
        cmp = analysis.compare_det_rob(inst, mode, args.gamma, args.dev_fraction, _opts(args))
    except analysis.AnalysisError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    _dump(out / "compare.json", cmp.to_dict())
    print(f"premium={cmp.premium:.4%}")
    return 0


def cmd_validate(args) -> int:
    path = _resolve(args)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}")
    found = validate(instance_from_dict(doc))
    for v in found:
        print(f"{v.code}: {v.message}")
    print(f"{len(found)} violations")
    return 0 if not found else 2


COMMANDS = {"solve": cmd_solve, "robust": cmd_robust, "sweep-gamma": cmd_sweep_gamma,
            "sensitivity": cmd_sensitivity, "stress": cmd_stress, "compare": cmd_compare,
            "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, InstanceError, analysis.AnalysisError, RobustError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
