"""Command-line frontend.

Subcommands: scenario1, scenario2, radius, search, entanglement,
calibrate, table. All reports are JSON (CSV only as a plot-data
projection); floats are printed with 9 significant digits so reruns
diff cleanly. Exit codes: 0 success, 1 verification/feasibility failure,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import entanglement as ent
from . import lhs, search, states, steering


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(data: dict, out: str | None):
    text = json.dumps(_round_floats(data), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


class InputError(Exception):
    pass


def _load_source(spec: str):
    """Resolve --state: 'builtin:<id>' or a state-file path."""
    if spec.startswith("builtin:"):
        try:
            return states.builtin_state(spec.split(":", 1)[1]), None
        except KeyError as e:
            raise InputError(str(e)) from None
    try:
        loaded = states.load_state(spec)
    except FileNotFoundError:
        raise InputError(f"state file not found: {spec}") from None
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        raise InputError(f"bad state file {spec}: {e}") from None
    if isinstance(loaded, tuple):
        psi, p = loaded
        return psi, p
    return loaded, None


def _resolve_pair(spec: str, p: float):
    """Return (rho_AB, rho_BA, rho3-or-None) for a state source."""
    obj, file_p = _load_source(spec)
    if isinstance(obj, states.PureState3Q):
        eff_p = p if p is not None else (file_p if file_p is not None else 1.0)
        rho3 = states.build_family(obj.normalized(), eff_p)
        rho_ab = states.reduce_pair(rho3, "AB")
        return rho_ab, states.swap_state(rho_ab), rho3
    if obj.dims == (2, 2, 2):
        rho_ab = states.reduce_pair(obj, "AB")
        return rho_ab, states.swap_state(rho_ab), obj
    if obj.dims == (2, 2):
        return obj, states.swap_state(obj), None
    raise InputError(f"unsupported state dims {obj.dims}")


def _radius_params(args) -> lhs.RadiusParams:
    return lhs.RadiusParams(
        meas_level=args.meas_level, hidden_level=args.hidden_level,
        bisection_tol=args.tol,
    )


def _fig_data_csv(report: steering.Scenario1Report, path: str):
    """Bloch endpoints (+-a_x, +-b_x) as plot data."""
    with open(path, "w") as f:
        f.write("party,setting,sign,x,y,z\n")
        for x, obs in enumerate(report.observables_ab):
            for s in (1, -1):
                v = s * obs.bloch
                f.write(f"A,{x + 1},{s},{v[0]:.9g},{v[1]:.9g},{v[2]:.9g}\n")
        for x, b in enumerate(report.setting_blochs):
            for s in (1, -1):
                v = s * b
                f.write(f"B,{x + 1},{s},{v[0]:.9g},{v[1]:.9g},{v[2]:.9g}\n")


def cmd_scenario1(args) -> int:
    rho_ab, _, _ = _resolve_pair(args.state, args.p)
    report = steering.one_way_gap_scenario1(rho_ab, steering.icosahedron_settings())
    if abs(report.Q_ab - report.Q_ba) < 1e-9:
        verdict = "symmetric"
    elif report.one_way:
        verdict = "one-way"
    elif report.violates_ab and not report.respects_ba:
        verdict = "two-way"
    else:
        verdict = "none"
    data = report.to_dict()
    data["negativity"] = ent.negativity(rho_ab, 0)
    data["verdict"] = verdict
    _emit(data, args.out)
    if args.fig_data:
        _fig_data_csv(report, args.fig_data)
    return 0 if verdict == "one-way" else 1


def cmd_scenario2(args) -> int:
    rho_ab, rho_ba, _ = _resolve_pair(args.state, args.p)
    report = lhs.one_way_report(rho_ab, rho_ba, _radius_params(args))
    _emit(report.to_dict(), args.out)
    if args.certify and report.verdict == "refuted":
        return 1
    return 0


def cmd_radius(args) -> int:
    rho_ab, rho_ba, _ = _resolve_pair(args.state, args.p)
    rho = rho_ab if args.pair == "AB" else rho_ba
    report = lhs.critical_radius_bounds(rho, _radius_params(args))
    _emit(report.to_dict(), args.out)
    return 0


def cmd_entanglement(args) -> int:
    _, _, rho3 = _resolve_pair(args.state, args.p)
    if rho3 is None:
        raise InputError("entanglement report needs a three-qubit state")
    data = ent.entanglement_report(rho3)
    data["negativity_reduced_AB"] = ent.negativity(states.reduce_pair(rho3, "AB"), 0)
    _emit(data, args.out)
    return 0


def cmd_search(args) -> int:
    if args.scenario == 1:
        spec = search.ObjectiveSpec(kind="scenario1", parameterization=args.parameterization)
    elif args.stage == "prefilter":
        spec = search.ObjectiveSpec(
            kind="scenario2_prefilter", parameterization=args.parameterization,
            meas_level=0, hidden_level=0, bisection_tol=1e-2,
        )
    else:
        spec = search.ObjectiveSpec(
            kind="scenario2_full", parameterization=args.parameterization,
            meas_level=args.meas_level, hidden_level=args.hidden_level,
            bisection_tol=args.tol,
        )
    log_file = open(args.out, "a") if args.out else None
    try:
        if args.scenario == 2 and args.stage == "two-stage":
            prefilter = search.ObjectiveSpec(
                kind="scenario2_prefilter", parameterization=args.parameterization,
                meas_level=0, hidden_level=0, bisection_tol=1e-2,
            )
            result = search.two_stage_search(
                prefilter, spec, args.restarts, args.seed, log_file=log_file
            )
        else:
            result = search.multi_restart(
                spec, args.restarts, args.seed,
                log_file=log_file, resume_path=args.resume,
            )
    finally:
        if log_file:
            log_file.close()
    if args.best_out:
        with open(args.best_out, "w") as f:
            json.dump(_round_floats(states.state_to_json(result.best_state)), f, sort_keys=True)
            f.write("\n")
    _emit({"best_q": result.best_q, "best_coeffs": list(result.best_coeffs),
           "restarts": len(result.records)}, None)
    return 0


def cmd_calibrate(args) -> int:
    """Werner-family calibration against the known thresholds: the
    entanglement boundary at p = 1/3 (PPT) and the projective steering
    boundary at p = 1/2 (critical-radius bracket on the singlet)."""
    lo, hi = 0.2, 0.5
    while hi - lo > 1e-4:
        mid = (lo + hi) / 2
        if ent.is_ppt(states.werner(mid), 0):
            lo = mid
        else:
            hi = mid
    ppt_bracket = (lo, hi)
    report = lhs.critical_radius_bounds(states.werner(1.0), _radius_params(args))
    data = {
        "entanglement_threshold_bracket": list(ppt_bracket),
        "entanglement_threshold_known": 1 / 3,
        "steering_radius_bracket": [report.r_in, report.r_out],
        "steering_threshold_known": 0.5,
    }
    ok = ppt_bracket[0] <= 1 / 3 <= ppt_bracket[1] and report.r_in <= 0.5 <= report.r_out
    data["brackets_contain_known_thresholds"] = ok
    _emit(data, args.out)
    return 0 if ok else 1


def cmd_table(args) -> int:
    """Summary table over the builtin states at p = 1."""
    ico = steering.icosahedron_settings()
    rows = {}
    for sid in states.BUILTIN_IDS:
        rho3 = states.build_family(states.builtin_state(sid).normalized(), 1.0)
        rho_ab = states.reduce_pair(rho3, "AB")
        q_ab = steering.quantum_value_Q(rho_ab, ico)[0]
        q_ba = steering.quantum_value_Q(states.swap_state(rho_ab), ico)[0]
        gte = ent.gte_criterion(rho3)
        rows[sid] = {
            "negativity_AB": ent.negativity(rho_ab, 0),
            "Q_AB": q_ab,
            "Q_BA": q_ba,
            "gte": gte.to_dict(),
        }
    _emit({"L": float(steering.lhs_bound_L(ico)[0]), "states": rows}, args.out)
    return 0


def _add_common(p: argparse.ArgumentParser, state: bool = True):
    if state:
        p.add_argument("--state", required=True, help="builtin:<id> or state-file path")
        p.add_argument("--p", type=float, default=None, help="family mixing weight (default 1)")
    p.add_argument("--meas-level", type=int, default=0)
    p.add_argument("--hidden-level", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-3, help="bisection tolerance in t")
    p.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclesteer")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("scenario1", help="six-setting steering-inequality report")
    _add_common(p1)
    p1.add_argument("--fig-data", default=None, help="write Bloch-endpoint CSV here")
    p1.set_defaults(func=cmd_scenario1)

    p2 = sub.add_parser("scenario2", help="critical-radius one-way report")
    _add_common(p2)
    p2.add_argument("--certify", action="store_true",
                    help="exit 1 when the cyclic property is refuted")
    p2.set_defaults(func=cmd_scenario2)

    pr = sub.add_parser("radius", help="critical-radius bracket for one direction")
    _add_common(pr)
    pr.add_argument("--pair", choices=["AB", "BA"], default="AB")
    pr.set_defaults(func=cmd_radius)

    ps = sub.add_parser("search", help="multi-restart Nelder-Mead campaigns")
    ps.add_argument("--scenario", type=int, choices=[1, 2], required=True)
    ps.add_argument("--stage", choices=["full", "prefilter", "two-stage"], default="full")
    ps.add_argument("--restarts", type=int, default=500)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--parameterization", choices=sorted(search.PARAM_DIMS),
                    default="real-7")
    ps.add_argument("--meas-level", type=int, default=0)
    ps.add_argument("--hidden-level", type=int, default=2)
    ps.add_argument("--tol", type=float, default=1e-3)
    ps.add_argument("--out", default=None, help="JSON-lines restart log")
    ps.add_argument("--resume", default=None, help="existing log to resume from")
    ps.add_argument("--best-out", default=None, help="write best state file here")
    ps.set_defaults(func=cmd_search)

    pe = sub.add_parser("entanglement", help="negativities and GTE criterion")
    _add_common(pe)
    pe.set_defaults(func=cmd_entanglement)

    pc = sub.add_parser("calibrate", help="Werner-family threshold calibration")
    pc.add_argument("--werner", action="store_true", default=True)
    _add_common(pc, state=False)
    pc.set_defaults(func=cmd_calibrate)

    pt = sub.add_parser("table", help="summary of the builtin states")
    pt.add_argument("--out", default=None)
    pt.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except lhs.LpFailure as e:
        print(f"LP failure: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
