"""Command-line interface.

Subcommands: ``plan`` (single UAV-vehicle pair), ``match`` (solve a
scenario file), ``simulate`` (Monte Carlo experiment CSV), ``sweep``
(figure-style curve tables) and ``validate`` (check scenario files).

Exit codes: 0 success, 2 invalid input, 3 exhaustive-solver size guard.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

from .matching import (
    BruteForceSizeError,
    MatchResult,
    SavingMatrix,
    brute_force_match,
    build_saving_matrix,
    greedy_match,
    msa_match,
    verify_duals,
)
from .model import PairGeometry, PlannerConfig, UavTask, VehicleOffer
from .planner import plan_pair, eligibility
from .scenario_io import csv_text, load_scenario, save_scenario
from .simlab import (
    EXPERIMENT_CSV_HEADER,
    GeneratorParams,
    case_theta_range,
    derive_trial_seed,
    generate_scenario,
    run_experiment,
    sweep_curves,
)


def _float_or_inf(text: str) -> float:
    if text.strip().lower() == "inf":
        return math.inf
    return float(text)


def _fmt(value: float) -> str:
    if value is None:
        return "-"
    if value == math.inf:
        return "inf"
    return format(value, ".6g")


def _json_value(value):
    if value is None:
        return None
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _default_seed() -> int:
    return int(os.environ.get("UAVHITCH_SEED", "0"))


def _cmd_plan(args: argparse.Namespace) -> int:
    theta = math.radians(args.theta) if args.degrees else args.theta
    cfg = PlannerConfig(omega=args.omega, tol=args.tol)
    task = UavTask(
        x=args.x,
        u=args.u,
        deadline=args.deadline,
        battery_capacity=args.battery_capacity,
        battery_level=args.battery_level,
    )
    offer = VehicleOffer(v=args.v, gamma=args.gamma)
    geom = PairGeometry(theta)
    elig = eligibility(cfg, task, offer, geom)
    plan = plan_pair(cfg, task, offer, geom, limited=math.isfinite(task.battery_capacity))

    if args.format == "json":
        payload = {
            "eligible": elig.eligible,
            "reason": elig.reason.value,
            "threshold_angle": _json_value(elig.threshold_angle),
            "y_star": plan.y_star,
            "total_time": plan.total_time,
            "energy": plan.energy,
            "consumption": plan.consumption,
            "saving": plan.saving,
            "binding": plan.binding.value,
            "swap_and_depart": plan.swap_and_depart,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        lines = [
            f"eligible:        {'yes' if elig.eligible else 'no'} ({elig.reason.value})",
            f"threshold_angle: {_fmt(elig.threshold_angle)} rad",
            f"y_star:          {_fmt(plan.y_star)} km",
            f"binding:         {plan.binding.value}",
            f"total_time:      {_fmt(plan.total_time)} h",
            f"energy:          {_fmt(plan.energy)} flight-h",
            f"consumption:     {_fmt(plan.consumption)}",
            f"saving:          {_fmt(plan.saving)}",
        ]
        if plan.swap_and_depart:
            lines.append("swap_and_depart: yes")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _solve(matrix: SavingMatrix, solver: str) -> MatchResult:
    if solver == "msa":
        return msa_match(matrix)
    if solver == "greedy":
        return greedy_match(matrix)
    return brute_force_match(matrix)


def _cmd_match(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    matrix = build_saving_matrix(
        scenario.config, scenario.tasks, scenario.offers, scenario.geoms, limited=args.limited
    )
    result = _solve(matrix, args.solver)
    certificate = (
        verify_duals(matrix, result, result.duals) if result.duals is not None else None
    )

    if args.format == "json":
        payload = {
            "solver": args.solver,
            "n_uavs": matrix.n_uavs,
            "n_vehicles": len(scenario.offers),
            "pairs": [
                {
                    "uav": i,
                    "vehicle": j,
                    "y_star": plan.y_star,
                    "total_time": plan.total_time,
                    "energy": plan.energy,
                    "consumption": plan.consumption,
                    "saving": plan.saving,
                    "binding": plan.binding.value,
                }
                for i, j, plan in result.per_pair
            ],
            "total_saving": result.total_saving,
            "iterations": result.iterations,
            "dual_certificate": certificate,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        lines = [f"solver: {args.solver}"]
        for i, j, plan in result.per_pair:
            lines.append(
                f"  uav {i} -> vehicle {j}: y*={_fmt(plan.y_star)} km, "
                f"saving={_fmt(plan.saving)}, binding={plan.binding.value}"
            )
        unmatched = [i for i in range(matrix.n_uavs) if i not in result.assignment]
        if unmatched:
            lines.append(f"  direct flight: uavs {unmatched}")
        lines.append(f"total_saving: {_fmt(result.total_saving)}")
        if certificate is not None:
            lines.append(f"dual_certificate: {'ok' if certificate else 'FAILED'}")
            lines.append(f"iterations: {result.iterations}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    theta_range = case_theta_range(args.case) if args.case else (0.0, args.theta_max)
    counts = [int(c) for c in args.uavs.split(",") if c]
    params = GeneratorParams(
        n_uavs=0,
        n_vehicles=args.vehicles,
        theta_range=theta_range,
        x_max=args.x_max,
        u=args.u,
        v=args.v,
        gamma=args.gamma,
        omega=args.omega,
        deadline_factor=args.deadline_factor,
        capacity=args.capacity,
    )
    rows = run_experiment(
        params, args.trials, counts, master_seed=args.seed, workers=args.workers
    )
    text = csv_text(EXPERIMENT_CSV_HEADER, [r.as_csv_row() for r in rows])
    _emit(text, args.output)

    if args.emit_scenarios:
        os.makedirs(args.emit_scenarios, exist_ok=True)
        case_tag = f"case{args.case}" if args.case else "custom"
        for count in counts:
            for t in range(args.trials):
                label = f"{case_tag}_I{count}_t{t}"
                p = replace(params, n_uavs=count, label=label)
                s = generate_scenario(p, derive_trial_seed(args.seed, count, t))
                save_scenario(s, os.path.join(args.emit_scenarios, label + ".json"))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    grid = {
        key: value
        for key, value in (
            ("x", args.x),
            ("u", args.u),
            ("v", args.v),
            ("omega", args.omega),
            ("theta", args.theta),
            ("gamma", args.gamma),
            ("deadline", args.deadline),
            ("v_min", args.v_min),
            ("v_max", args.v_max),
            ("gamma_min", args.gamma_min),
            ("gamma_max", args.gamma_max),
            ("delta_e_min", args.delta_e_min),
            ("delta_e_max", args.delta_e_max),
            ("points", args.points),
            ("v_points", args.v_points),
            ("gamma_points", args.gamma_points),
        )
        if value is not None
    }
    header, rows = sweep_curves(args.kind, **grid)
    _emit(csv_text(header, rows), args.output)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    for path in args.scenarios:
        scenario = load_scenario(path)
        print(f"{path}: ok ({len(scenario.tasks)} uavs, {len(scenario.offers)} vehicles)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavhitch",
        description="Plan, match and simulate UAV hitching on ground vehicles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan a single UAV-vehicle pair")
    p.add_argument("--x", type=float, required=True, help="distance to destination (km)")
    p.add_argument("--u", type=float, default=60.0, help="UAV flight speed (km/h)")
    p.add_argument("--v", type=float, required=True, help="vehicle speed (km/h)")
    p.add_argument("--gamma", type=_float_or_inf, default=0.0, help="charging rate (or 'inf')")
    p.add_argument("--theta", type=float, default=0.0, help="direction deviation (radians)")
    p.add_argument("--degrees", action="store_true", help="interpret --theta in degrees")
    p.add_argument("--omega", type=float, default=0.8, help="energy-vs-time weight")
    p.add_argument("--deadline", type=_float_or_inf, default=math.inf, help="deadline (h)")
    p.add_argument("--battery-capacity", type=_float_or_inf, default=math.inf)
    p.add_argument("--battery-level", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("match", help="match the UAVs of a scenario file to vehicles")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--solver", choices=["msa", "greedy", "brute"], default="msa")
    p.add_argument("--limited", action="store_true", help="respect battery capacities")
    p.add_argument("--format", choices=["human", "json"], default="human")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("simulate", help="run seeded Monte Carlo experiments")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--case", type=int, choices=[1, 2], help="standard deviation range")
    group.add_argument("--theta-max", type=float, default=math.pi, help="custom theta range")
    p.add_argument("--uavs", default="5,10,20,30,40", help="comma-separated UAV counts")
    p.add_argument("--vehicles", type=int, default=40)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--omega", type=float, default=0.8)
    p.add_argument("--u", type=float, default=60.0)
    p.add_argument("--v", type=float, default=40.0)
    p.add_argument("--gamma", type=float, default=0.3)
    p.add_argument("--x-max", type=float, default=20.0)
    p.add_argument("--deadline-factor", type=float, default=None)
    p.add_argument("--capacity", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default=None)
    p.add_argument("--emit-scenarios", default=None, help="directory for scenario files")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="tabulate consumption/distance curves")
    p.add_argument("--kind", choices=["speed", "gamma", "surface", "battery"], required=True)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--u", type=float, default=None)
    p.add_argument("--v", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--deadline", type=_float_or_inf, default=None)
    p.add_argument("--v-min", type=float, default=None)
    p.add_argument("--v-max", type=float, default=None)
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.add_argument("--delta-e-min", type=float, default=None)
    p.add_argument("--delta-e-max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--v-points", type=int, default=None)
    p.add_argument("--gamma-points", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("validate", help="check scenario files")
    p.add_argument("scenarios", nargs="+")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = _default_seed()
    try:
        return args.func(args)
    except BruteForceSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
