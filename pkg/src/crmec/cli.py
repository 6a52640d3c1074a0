"""Command-line front door.

Subcommands:
  analytic   closed-form success probability for a scenario (no random draws)
  simulate   Monte Carlo estimate for one scheme at the optimal plan
  optimize   closed-form offloading plan plus feasibility diagnostics
  sweep      one of the experiment sweeps, emitted as CSV or JSON

Exit codes: 0 success, 2 configuration error, 3 when the request was valid
but every evaluated point was infeasible.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import analytics, rsma
from .experiments import (AXIS_VALUE_KEYS, SWEEP_AXES, ConfigError, ExperimentConfig,
                          build_config, emit_results, load_config_file, run_experiment)
from .montecarlo import Scheme, estimate_psucc
from .optimizer import InfeasibleParameters, execution_times, optimal_offload_plan
from .system import channel_snrs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crmec",
        description="Rate-splitting uplink offloading simulator for cognitive-radio MEC")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH", help="flat key=value config file")
        p.add_argument("--seed", type=int, metavar="U64", help="master random seed")
        p.add_argument("--trials", type=int, metavar="N", help="Monte Carlo trials")
        p.add_argument("--workers", type=int, metavar="W", help="concurrent workers")
        p.add_argument("--output", metavar="PATH", help="write results to this file")
        p.add_argument("--format", choices=("csv", "json"), help="output file format")

    p = sub.add_parser("analytic", help="closed-form success probability")
    common(p)

    p = sub.add_parser("simulate", help="Monte Carlo estimate for one scheme")
    common(p)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default="rsma")

    p = sub.add_parser("optimize", help="closed-form offloading plan")
    common(p)

    p = sub.add_parser("sweep", help="run an experiment sweep")
    common(p)
    p.add_argument("--sweep", choices=SWEEP_AXES, dest="sweep_axis", help="sweep axis")
    p.add_argument("--scheme", metavar="LIST", dest="schemes",
                   help="comma-separated schemes (analytic,rsma,noma_pu_first,noma_su_first)")
    p.add_argument("--values", metavar="LIST", help="comma-separated sweep values")
    return parser


def _load_mapping(args) -> dict:
    mapping = load_config_file(args.config) if args.config else {}
    for attr, key in (("seed", "seed"), ("trials", "trials"), ("workers", "workers"),
                      ("output", "output_path"), ("format", "output_format")):
        value = getattr(args, attr, None)
        if value is not None:
            mapping[key] = value
    if getattr(args, "sweep_axis", None):
        mapping["sweep_axis"] = args.sweep_axis
    if getattr(args, "schemes", None):
        mapping["schemes"] = [s.strip() for s in args.schemes.split(",")]
    if getattr(args, "values", None):
        axis = mapping.get("sweep_axis", "task_length")
        mapping[AXIS_VALUE_KEYS.get(axis, "sweep_values_bits")] = [
            float(v) for v in args.values.split(",")]
    return mapping


def _emit_record(record: dict, path: str | None) -> None:
    for key in sorted(record):
        print(f"{key} = {record[key]}")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(record, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _plan_record(plan) -> dict:
    return {f"plan_{k}": v for k, v in dataclasses.asdict(plan).items()}


def _cmd_analytic(cfg: ExperimentConfig, output: str | None) -> int:
    p = cfg.scenario
    plan = optimal_offload_plan(p)
    rho_a, rho_b = channel_snrs(p)
    record = {"rho_a": rho_a, "rho_b": rho_b}
    record.update(_plan_record(plan))
    if plan.t2 > 0:
        eps_a, eps_b = rsma.plan_thresholds(plan, p)
        breakdown = analytics.ps_breakdown_closed(rho_a, rho_b, eps_a, eps_b)
        record.update(eps_a=eps_a, eps_b=eps_b,
                      ps_case1=breakdown.ps_case1, ps_case2=breakdown.ps_case2,
                      ps_case3=breakdown.ps_case3, ps_total=breakdown.ps_total)
    else:
        record.update(ps_total=1.0, note="local-only plan: nothing is offloaded")
    _emit_record(record, output)
    return EXIT_OK


def _cmd_simulate(cfg: ExperimentConfig, scheme_name: str, output: str | None) -> int:
    p = cfg.scenario
    plan = optimal_offload_plan(p)
    est = estimate_psucc(p, plan, Scheme(scheme_name), cfg.trials, cfg.seed, cfg.workers)
    record = {"scheme": scheme_name, "trials": est.trials, "seed": est.seed,
              "ps_mean": est.mean, "ps_stderr": est.std_err}
    record.update(_plan_record(plan))
    for field in ("case1_frac", "case2_frac", "case3_frac", "wilson_low", "wilson_high"):
        value = getattr(est, field)
        if value is not None:
            record[field] = value
    if plan.t2 > 0:
        rho_a, rho_b = channel_snrs(p)
        eps_a, eps_b = rsma.plan_thresholds(plan, p)
        record["ps_analytic"] = analytics.ps_total_closed(rho_a, rho_b, eps_a, eps_b)
    _emit_record(record, output)
    return EXIT_OK


def _cmd_optimize(cfg: ExperimentConfig, output: str | None) -> int:
    plan = optimal_offload_plan(cfg.scenario)
    times = execution_times(plan, cfg.scenario)
    record = _plan_record(plan)
    record.update(t_mec=times.t_mec, t_user_a=times.t_ua, t_user_b=times.t_ub,
                  feasible=True)
    _emit_record(record, output)
    return EXIT_OK


def _cmd_sweep(cfg: ExperimentConfig) -> int:
    table = run_experiment(cfg)
    fmt = cfg.output_format
    text = emit_results(table, fmt, cfg.output_path)
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        print(f"wrote {len(table.rows)} rows to {cfg.output_path}")
    return EXIT_INFEASIBLE if table.all_infeasible() else EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        mapping = _load_mapping(args)
        cfg = build_config(mapping)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "analytic":
            return _cmd_analytic(cfg, cfg.output_path)
        if args.command == "simulate":
            return _cmd_simulate(cfg, args.scheme, cfg.output_path)
        if args.command == "optimize":
            return _cmd_optimize(cfg, cfg.output_path)
        return _cmd_sweep(cfg)
    except InfeasibleParameters as exc:
        for reason in exc.diagnostics:
            print(f"infeasible: {reason}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
