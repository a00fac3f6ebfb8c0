"""Command-line entry point.

Verbs: predict, simulate, validate, cases. Exit codes: 0 ok, 2 usage or
parse error, 3 prediction error, 4 guidance/convergence failure, 5
validation failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import IipError
from .geo import eci_to_ecef_matrix, latlon_from_unit
from .oracles import rocket_equation_check, run_oracle_suite
from .predictor import predict
from .scenario_io import ScenarioError, load_scenario
from .sim import OUTCOME_CONVERGED, Scenario, run_closed_loop, \
    target_from_offsets

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PREDICT = 3
EXIT_GUIDANCE = 4
EXIT_VALIDATE = 5

# Built-in case-study offsets (downrange km, crossrange km) and the
# baseline feedback-guidance reference results they are compared with.
CASE_OFFSETS = [(-100.0, 0.0), (-200.0, 0.0), (100.0, 0.0), (200.0, 0.0),
                (0.0, 150.0)]
CASE_REFERENCE = {
    "final_time_s": [12.5, 29.5, 9.4, 16.4, 21.8],
    "propellant_t": [11.2, 26.5, 8.4, 14.7, 19.6],
    "delta_v_mps": [465.0, 1247.0, 343.0, 627.0, 868.0],
}

_G15 = "{:.15g}".format


def _write_history_csv(path, result):
    cols = ("t_s,rx_m,ry_m,rz_m,vx_mps,vy_mps,vz_mps,m_kg,"
            "iip_lat_deg,iip_lon_deg,a_r,a_theta,a_h,dist_to_target_m")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cols + "\n")
        for rec in result.history:
            row = [rec.t, *rec.r, *rec.v, rec.m,
                   np.degrees(rec.iip_lat_ecef), np.degrees(rec.iip_lon_ecef),
                   rec.a_r, rec.a_theta, rec.a_h, rec.dist_to_target]
            fh.write(",".join(_G15(x) for x in row) + "\n")


def _write_ground_track_csv(path, result, earth):
    cols = "t_s,sub_lon_deg,sub_lat_deg,iip_lon_deg,iip_lat_deg"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cols + "\n")
        for rec in result.history:
            sub = eci_to_ecef_matrix(rec.t - earth.t_ref, earth) \
                @ (rec.r / np.linalg.norm(rec.r))
            lat, lon = latlon_from_unit(sub / np.linalg.norm(sub))
            row = [rec.t, np.degrees(lon), np.degrees(lat),
                   np.degrees(rec.iip_lon_ecef), np.degrees(rec.iip_lat_ecef)]
            fh.write(",".join(_G15(x) for x in row) + "\n")


def _write_commands_csv(path, result):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t_s,a_r,a_theta,a_h\n")
        for rec in result.history:
            fh.write(",".join(_G15(x) for x in
                              [rec.t, rec.a_r, rec.a_theta, rec.a_h]) + "\n")


def _write_summary(path, result):
    summary = {
        "final_time_s": result.final_time,
        "propellant_used_kg": result.propellant_used,
        "delta_v_mps": result.delta_v,
        "miss_distance_m": result.miss_distance,
        "outcome": result.outcome,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return summary


def _emit_run(out_dir: Path, result, earth, prefix=""):
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_history_csv(out_dir / f"{prefix}history.csv", result)
    _write_ground_track_csv(out_dir / f"{prefix}ground_track.csv", result,
                            earth)
    _write_commands_csv(out_dir / f"{prefix}commands.csv", result)
    return _write_summary(out_dir / f"{prefix}summary.json", result)


def _load(path):
    """Load a scenario, mapping failures to exit codes.

    Returns (scenario, None) on success or (None, exit_code) on failure.
    Target construction from offsets runs the predictor, so an initial
    state with no ballistic impact surfaces here as a prediction error.
    """
    try:
        return load_scenario(path), None
    except (OSError, ScenarioError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return None, EXIT_USAGE
    except IipError as exc:
        print(f"prediction error ({type(exc).__name__}): {exc}",
              file=sys.stderr)
        return None, EXIT_PREDICT


def cmd_predict(args):
    scenario, code = _load(args.scenario)
    if scenario is None:
        return code
    try:
        pred = predict(scenario.initial, scenario.earth)
    except IipError as exc:
        print(f"prediction error ({type(exc).__name__}): {exc}",
              file=sys.stderr)
        return EXIT_PREDICT

    fields = {
        "iip_lat_deg": np.degrees(pred.lat_p),
        "iip_lon_eci_deg": np.degrees(pred.lon_p),
        "iip_lon_ecef_deg": np.degrees(pred.lon_p_ecef),
        "time_of_flight_s": pred.t_f,
        "angle_of_flight_deg": np.degrees(pred.phi),
        "flight_path_angle_deg": np.degrees(pred.gamma0),
    }
    for key, value in fields.items():
        print(f"{key} = {_G15(value)}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(fields, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_simulate(args):
    scenario, code = _load(args.scenario)
    if scenario is None:
        return code
    if args.dt is not None:
        scenario = Scenario(earth=scenario.earth, vehicle=scenario.vehicle,
                            initial=scenario.initial,
                            target=scenario.target, dt=args.dt,
                            max_time=scenario.max_time,
                            convergence_radius=scenario.convergence_radius)

    result = run_closed_loop(scenario)
    summary = _emit_run(Path(args.out), result, scenario.earth)
    for key, value in summary.items():
        print(f"{key} = {value if isinstance(value, str) else _G15(value)}")
    return EXIT_OK if result.outcome == OUTCOME_CONVERGED else EXIT_GUIDANCE


def cmd_validate(args):
    if args.samples < 1:
        print("validate requires --samples >= 1", file=sys.stderr)
        return EXIT_USAGE
    reports = run_oracle_suite(args.seed, args.samples)
    out = Path(args.out) if args.out else Path("validation_report.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    n_fail = sum(not r.passed for r in reports)
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("quantity,analytic,oracle,rel_error,tolerance,passed\n")
        for r in reports:
            fh.write(f"{r.quantity},{_G15(r.analytic)},{_G15(r.oracle)},"
                     f"{_G15(r.rel_error)},{_G15(r.tolerance)},"
                     f"{'pass' if r.passed else 'FAIL'}\n")
    print(f"{len(reports)} oracle checks, {n_fail} failures "
          f"(seed {args.seed}, {args.samples} states) -> {out}")
    return EXIT_OK if n_fail == 0 else EXIT_VALIDATE


def cmd_cases(args):
    if args.scenario:
        scenario, code = _load(args.scenario)
        if scenario is None:
            return code
    else:
        scenario = _builtin_scenario()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    all_converged = True
    for idx, (downrange, crossrange) in enumerate(CASE_OFFSETS, start=1):
        target = target_from_offsets(scenario.initial, downrange, crossrange,
                                     scenario.earth)
        case = Scenario(earth=scenario.earth, vehicle=scenario.vehicle,
                        initial=scenario.initial, target=target,
                        dt=args.dt if args.dt is not None else scenario.dt,
                        max_time=scenario.max_time,
                        convergence_radius=scenario.convergence_radius)
        result = run_closed_loop(case)
        _emit_run(out_dir, result, scenario.earth, prefix=f"case{idx}_")
        all_converged &= result.outcome == OUTCOME_CONVERGED

        ref_t = CASE_REFERENCE["final_time_s"][idx - 1]
        ref_p = CASE_REFERENCE["propellant_t"][idx - 1]
        ref_dv = CASE_REFERENCE["delta_v_mps"][idx - 1]
        rocket_eq = rocket_equation_check(result, scenario.vehicle)
        rows.append({
            "case": idx,
            "downrange_km": downrange, "crossrange_km": crossrange,
            "outcome": result.outcome,
            "final_time_s": result.final_time, "ref_final_time_s": ref_t,
            "final_time_dev_pct": 100.0 * (result.final_time / ref_t - 1.0),
            "propellant_t": result.propellant_used / 1e3,
            "ref_propellant_t": ref_p,
            "propellant_dev_pct":
                100.0 * (result.propellant_used / 1e3 / ref_p - 1.0),
            "delta_v_mps": result.delta_v, "ref_delta_v_mps": ref_dv,
            "delta_v_dev_pct": 100.0 * (result.delta_v / ref_dv - 1.0),
            "miss_distance_m": result.miss_distance,
            "rocket_eq_rel_error": rocket_eq.rel_error,
        })

    keys = list(rows[0].keys())
    with open(out_dir / "cases_table.csv", "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(
                str(row[k]) if isinstance(row[k], (str, int))
                else _G15(row[k]) for k in keys) + "\n")

    for row in rows:
        print(f"case {row['case']}: {row['outcome']}, "
              f"t_f {row['final_time_s']:.2f} s "
              f"(ref {row['ref_final_time_s']}, "
              f"{row['final_time_dev_pct']:+.1f}%), "
              f"dV {row['delta_v_mps']:.0f} m/s "
              f"(ref {row['ref_delta_v_mps']:.0f}, "
              f"{row['delta_v_dev_pct']:+.1f}%), "
              f"miss {row['miss_distance_m']:.0f} m")
    return EXIT_OK if all_converged else EXIT_GUIDANCE


def _builtin_scenario() -> Scenario:
    """Table-style default: separated first stage at 125.5 km."""
    from .geo import EarthModel, StateVector
    from .sim import VehicleModel

    earth = EarthModel(t_ref=-240.0)
    vehicle = VehicleModel(dry_mass=22.2e3, propellant_mass=57.0e3,
                           thrust=279.6e3 * 9.80665, isp=311.0)
    initial = StateVector(t=0.0,
                          r=np.array([1164.0e3, -5507.0e3, 3258.0e3]),
                          v=np.array([1337.0, 743.0, 1029.0]),
                          m=vehicle.initial_mass)
    # Target is per-case; placeholder pointing at the unpowered IIP.
    target = target_from_offsets(initial, 0.0, 0.0, earth)
    return Scenario(earth=earth, vehicle=vehicle, initial=initial,
                    target=target, dt=0.05, max_time=300.0,
                    convergence_radius=500.0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="iipguidance",
        description="Ballistic impact point prediction and feedback "
                    "guidance simulation")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="impact prediction for a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", default=None, help="optional JSON output path")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", help="closed-loop guidance run")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="oracle validation suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--out", default=None, help="report CSV path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cases", help="run the five built-in study cases")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--scenario", default=None,
                   help="override the built-in base scenario")
    p.add_argument("--dt", type=float, default=None)
    p.set_defaults(func=cmd_cases)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code) if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
