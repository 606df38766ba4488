"""Command-line front end: calibration, curves, optimizers, figure runners.

Exit codes: 0 success, 2 configuration error, 3 infeasible problem, 4 I/O
failure.  All tabular output is CSV with LF line endings and full double
precision; optimizer results print as JSON.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

from . import geometry, montecarlo
from .asymptotic import (InfeasibleAntennasError, RateUnachievableError,
                         deterministic_sinr, energy_efficiency,
                         required_transmit_power, sinr_breakdown,
                         total_power_at_se)
from .config import (ConfigError, PowerModel, SystemConfig, dbm_from_watts,
                     load_scenario)
from .optimize import (OptimizationError, optimal_k, optimal_m, optimal_n,
                       optimal_n_no_pc)

_MODEL_KEYS = ("L", "M", "K", "n", "psi", "T", "B", "d", "iota", "Rc", "beta",
               "alpha1", "alpha2", "p_u", "p_d", "sigma2", "pilot_noise_mode")
_DBM_KEYS = ("p_u_dbm", "p_d_dbm", "sigma2_dbm")
_POWER_KEYS = ("P_FIX", "P_RRH", "P_0", "P_BT", "zeta")
_INT_KEYS = {"L", "M", "K", "n", "psi", "T", "d"}


@dataclass(frozen=True)
class Scenario:
    """One sweep experiment: model, swept variable, values, and modes."""

    cfg: SystemConfig
    pm: PowerModel
    sweep: str                  # config field or "gamma"
    values: tuple
    gamma: float | None = None  # None means fixed-p_d mode
    realizations: int = 0       # > 0 adds a Monte-Carlo column
    seed: int = 1


def add_model_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file")
    for key in _MODEL_KEYS:
        flag = "--" + key.replace("_", "-")
        if key in _INT_KEYS:
            parser.add_argument(flag, dest=key, type=int)
        elif key == "pilot_noise_mode":
            parser.add_argument(flag, dest=key, choices=("exact", "negligible"))
        else:
            parser.add_argument(flag, dest=key, type=float)
    for key in _DBM_KEYS:
        parser.add_argument("--" + key.replace("_", "-"), dest=key, type=float)
    for key in _POWER_KEYS:
        parser.add_argument("--" + key.replace("_", "-"), dest=key, type=float)


def scenario_from_args(args) -> tuple[SystemConfig, PowerModel]:
    overrides = {}
    for key in _MODEL_KEYS + _DBM_KEYS + _POWER_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    return load_scenario(getattr(args, "config", None), overrides)


def write_rows(header, rows, output=None) -> None:
    """CSV with LF endings; numbers at full double precision via repr."""
    handle = open(output, "w", newline="") if output else sys.stdout
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    finally:
        if output:
            handle.close()


def run_sweep(scenario: Scenario):
    """One row per sweep value: EE (and optional MC EE), p_d, total power."""
    if not scenario.values:
        raise ConfigError("empty sweep range")
    rows = []
    for value in scenario.values:
        if scenario.sweep == "gamma":
            cfg, gamma = scenario.cfg, float(value)
        else:
            cfg, gamma = scenario.cfg.replace(**{scenario.sweep: value}), scenario.gamma
        if gamma is None:
            sinr = deterministic_sinr(cfg)
            se = montecarlo.rate_from_sinr(cfg, [sinr] * cfg.K)
            p_d = cfg.p_d
            ptot = total_power_at_se(cfg, scenario.pm, se)
            ee = cfg.B * se / ptot
            feasible = True
        else:
            try:
                brk = sinr_breakdown(cfg)
                p_d = required_transmit_power(cfg, brk, gamma, cfg.n)
                ee = energy_efficiency(cfg, scenario.pm, gamma)
                se = (cfg.T - cfg.tau_u) / cfg.T * cfg.K * gamma
                ptot = total_power_at_se(cfg, scenario.pm, se, p_d=p_d)
                feasible = True
            except (InfeasibleAntennasError, RateUnachievableError):
                p_d = ee = ptot = float("nan")
                feasible = False
        row = {"sweep": value, "ee_de": ee, "p_d": p_d, "p_total": ptot,
               "feasible": int(feasible)}
        if scenario.realizations > 0:
            row["ee_mc"] = montecarlo.empirical_ee(
                cfg, scenario.pm, scenario.realizations, scenario.seed)
        rows.append(row)
    return rows


def _int_range(text: str):
    """Parse '10:60:10' or comma list '10,20,30' into a tuple of ints."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return tuple(range(start, stop + 1, step))
    return tuple(int(p) for p in text.split(",") if p.strip())


# --- subcommands ----------------------------------------------------------

def cmd_calibrate(args) -> int:
    layout = geometry.build_layout(args.M or 7, args.Rc or 2000.0,
                                   L=args.L or 7)
    result = geometry.calibrate(layout, args.iota or 2.5, args.K or 10,
                                args.drops, seed=args.seed,
                                min_distance=args.min_distance)
    lines = [f"{key} = {value!r}" for key, value in
             result.config_overrides().items()]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
    sys.stdout.write(text)
    return 0


def cmd_de_curve(args) -> int:
    cfg, pm = scenario_from_args(args)
    scenario = Scenario(cfg, pm, "n", _int_range(args.n_range))
    rows = run_sweep(scenario)
    write_rows(["n", "ee_de_bits_per_joule", "ee_de_mbits_per_joule",
                "p_d_watts", "p_d_dbm", "p_total_watts", "feasible"],
               [[r["sweep"], r["ee_de"], r["ee_de"] / 1e6, r["p_d"],
                 dbm_from_watts(r["p_d"]), r["p_total"], r["feasible"]]
                for r in rows], args.output)
    return 0


def cmd_mc_validate(args) -> int:
    cfg, pm = scenario_from_args(args)
    scenario = Scenario(cfg, pm, "n", _int_range(args.n_range),
                        realizations=args.realizations, seed=args.seed)
    rows = run_sweep(scenario)
    write_rows(["n", "ee_de_bits_per_joule", "ee_mc_bits_per_joule",
                "rel_error", "p_d_watts", "p_total_watts", "feasible"],
               [[r["sweep"], r["ee_de"], r["ee_mc"],
                 abs(r["ee_mc"] - r["ee_de"]) / r["ee_de"], r["p_d"],
                 r["p_total"], r["feasible"]] for r in rows], args.output)
    return 0


def _print_result(result) -> int:
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_opt_n(args) -> int:
    cfg, pm = scenario_from_args(args)
    fn = optimal_n_no_pc if args.no_pc else optimal_n
    return _print_result(fn(cfg, pm, args.gamma))


def cmd_opt_k(args) -> int:
    cfg, pm = scenario_from_args(args)
    return _print_result(optimal_k(cfg, pm, args.gamma))


def cmd_opt_m(args) -> int:
    cfg, pm = scenario_from_args(args)
    fixed_n = cfg.n if args.fixed_n else None
    return _print_result(optimal_m(cfg, pm, args.gamma, M_max=args.M_max,
                                   n=fixed_n))


def cmd_joint(args) -> int:
    cfg, pm = scenario_from_args(args)
    return _print_result(optimal_m(cfg, pm, args.gamma, M_max=args.M_max))


def cmd_figure(args) -> int:
    from . import figures
    runner = figures.RUNNERS.get(args.number)
    if runner is None:
        raise ConfigError(f"no runner for figure {args.number} (valid: 2..10)")
    cfg, pm = scenario_from_args(args)
    header, rows = runner(cfg, pm, realizations=args.realizations,
                          seed=args.seed)
    write_rows(header, rows, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dasee",
        description="Energy efficiency of multi-cell massive distributed-"
                    "antenna downlinks: deterministic equivalents, Monte-"
                    "Carlo validation, and EE-optimal n / K / M.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="fit (beta, alpha1, alpha2) from geometry")
    p.add_argument("--M", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--Rc", type=float)
    p.add_argument("--iota", type=float)
    p.add_argument("--drops", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--min-distance", type=float,
                   default=geometry.DEFAULT_MIN_DISTANCE)
    p.add_argument("--output")
    p.set_defaults(fn=cmd_calibrate)

    p = sub.add_parser("de-curve", help="deterministic-equivalent EE vs n at fixed p_d")
    add_model_args(p)
    p.add_argument("--n-range", default="10:60:10")
    p.add_argument("--output")
    p.set_defaults(fn=cmd_de_curve)

    p = sub.add_parser("mc-validate", help="Monte-Carlo EE vs the deterministic curve")
    add_model_args(p)
    p.add_argument("--n-range", default="10:60:10")
    p.add_argument("--realizations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(fn=cmd_mc_validate)

    p = sub.add_parser("opt-n", help="EE-optimal antennas per RRH")
    add_model_args(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--no-pc", action="store_true",
                   help="contamination-free bound (orthogonal pilots)")
    p.set_defaults(fn=cmd_opt_n)

    p = sub.add_parser("opt-k", help="EE-optimal user count")
    add_model_args(p)
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(fn=cmd_opt_k)

    p = sub.add_parser("opt-m", help="EE-optimal RRH count")
    add_model_args(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--M-max", type=int, default=30)
    p.add_argument("--fixed-n", action="store_true",
                   help="evaluate every M at the configured n")
    p.set_defaults(fn=cmd_opt_m)

    p = sub.add_parser("joint", help="joint (M, n) search at the configured K")
    add_model_args(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--M-max", type=int, default=30)
    p.set_defaults(fn=cmd_joint)

    p = sub.add_parser("figure", help="run a predefined study sweep as CSV")
    p.add_argument("number", type=int)
    add_model_args(p)
    p.add_argument("--realizations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(fn=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleAntennasError, RateUnachievableError,
            OptimizationError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
