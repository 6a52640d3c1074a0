"""Experiment sweeps and result emission for the CLI front door.

A sweep evaluates one scenario knob over a list of values, computing the
closed-form plan at each point and then every requested scheme's success
probability (closed form and/or Monte Carlo).  Points where no interior plan
exists are emitted as flagged rows rather than dropped, so the output always
has exactly len(values) * len(schemes) rows.

Configs are flat ``key = value`` text files whose keys carry their units
(bandwidth_hz, latency_budget_s, sweep_values_dbm, ...); dB(m) values are
converted to linear watts right here at the boundary and nowhere else.
"""

from __future__ import annotations

import dataclasses
import io
import json
import math
from dataclasses import dataclass

from . import analytics, rsma
from .montecarlo import MIN_TRIALS, Scheme, estimate_psucc
from .optimizer import InfeasibleParameters, OffloadPlan, optimal_offload_plan
from .system import SystemParams, channel_snrs, validate_params

SWEEP_AXES = ("task_length", "power", "latency_study")
AXIS_VALUE_KEYS = {
    "task_length": "sweep_values_bits",
    "power": "sweep_values_dbm",
    "latency_study": "sweep_values_hz",
}
SCHEME_NAMES = ("analytic", "rsma", "noma_pu_first", "noma_su_first")

DEFAULT_SWEEP_VALUES = {
    "task_length": [1000.0, 3000.0, 5000.0, 7000.0, 9000.0, 11000.0],
    "power": [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
    "latency_study": [0.5e9, 1.0e9, 1.5e9, 2.0e9, 2.5e9, 3.0e9],
}

CSV_COLUMNS = ("sweep_axis", "sweep_value", "scheme", "ps_mean", "ps_stderr",
               "ps_analytic", "eta_a", "eta_b", "t2", "t3", "case1_frac",
               "case2_frac", "case3_frac", "seed", "trials", "status")

_SCENARIO_KEYS = tuple(f.name for f in dataclasses.fields(SystemParams))


class ConfigError(ValueError):
    pass


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: SystemParams
    sweep_axis: str = "task_length"
    sweep_values: tuple[float, ...] = ()
    schemes: tuple[str, ...] = ("analytic", "rsma")
    trials: int = 100_000
    seed: int = 12345
    workers: int = 1
    output_path: str | None = None
    output_format: str = "csv"

    def resolved_values(self) -> tuple[float, ...]:
        if self.sweep_values:
            return self.sweep_values
        return tuple(DEFAULT_SWEEP_VALUES[self.sweep_axis])


@dataclass(frozen=True)
class ResultRow:
    sweep_axis: str
    sweep_value: float
    scheme: str
    ps_mean: float | None
    ps_stderr: float | None
    ps_analytic: float | None
    eta_a: float | None
    eta_b: float | None
    t2: float | None
    t3: float | None
    case1_frac: float | None
    case2_frac: float | None
    case3_frac: float | None
    seed: int
    trials: int
    status: str


@dataclass(frozen=True)
class ResultTable:
    config: dict
    rows: tuple[ResultRow, ...]

    def all_infeasible(self) -> bool:
        return all(row.status != "ok" for row in self.rows)


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.startswith('"') and raw.endswith('"') and len(raw) >= 2:
        return raw[1:-1]
    if "," in raw:
        return [_parse_value(part) for part in raw.split(",")]
    try:
        as_float = float(raw)
    except ValueError:
        return raw
    if as_float.is_integer() and "." not in raw and "e" not in raw.lower():
        return int(as_float)
    return as_float


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment; commas make lists."""
    mapping = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in mapping:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = _parse_value(raw)
    return mapping


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _as_list(value) -> list:
    return value if isinstance(value, list) else [value]


def build_config(mapping: dict) -> ExperimentConfig:
    """Resolve a flat mapping into a validated ExperimentConfig."""
    mapping = dict(mapping)
    scenario_kwargs = {k: float(mapping.pop(k)) for k in _SCENARIO_KEYS if k in mapping}
    scenario = SystemParams(**scenario_kwargs)

    axis = mapping.pop("sweep_axis", "task_length")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep_axis must be one of {SWEEP_AXES}, got {axis!r}")
    values = ()
    for candidate_axis, key in AXIS_VALUE_KEYS.items():
        if key in mapping:
            if candidate_axis != axis:
                raise ConfigError(f"{key} given but sweep_axis is {axis!r}")
            values = tuple(float(v) for v in _as_list(mapping.pop(key)))
    schemes = tuple(str(s) for s in _as_list(mapping.pop("schemes", ["analytic", "rsma"])))

    cfg = ExperimentConfig(
        scenario=scenario,
        sweep_axis=axis,
        sweep_values=values,
        schemes=schemes,
        trials=int(mapping.pop("trials", ExperimentConfig.trials)),
        seed=int(mapping.pop("seed", ExperimentConfig.seed)),
        workers=int(mapping.pop("workers", ExperimentConfig.workers)),
        output_path=mapping.pop("output_path", None),
        output_format=str(mapping.pop("output_format", "csv")),
    )
    if mapping:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(mapping))}")
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    problems = validate_params(cfg.scenario)
    if not cfg.schemes:
        problems.append("schemes must not be empty")
    for name in cfg.schemes:
        if name not in SCHEME_NAMES:
            problems.append(f"unknown scheme {name!r} (choose from {SCHEME_NAMES})")
    values = cfg.resolved_values()
    if not values:
        problems.append("sweep values must not be empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        problems.append("sweep values must be strictly increasing")
    needs_mc = any(s != "analytic" for s in cfg.schemes)
    if needs_mc and cfg.trials < MIN_TRIALS:
        problems.append(f"trials >= {MIN_TRIALS} required for simulate runs, got {cfg.trials}")
    if cfg.workers < 1:
        problems.append("workers must be >= 1")
    if cfg.output_format not in ("csv", "json"):
        problems.append(f"output_format must be csv or json, got {cfg.output_format!r}")
    if problems:
        raise ConfigError("; ".join(problems))


def config_echo(cfg: ExperimentConfig) -> dict:
    """Everything needed to re-run the experiment exactly."""
    echo = {k: getattr(cfg.scenario, k) for k in _SCENARIO_KEYS}
    echo.update({
        "sweep_axis": cfg.sweep_axis,
        AXIS_VALUE_KEYS[cfg.sweep_axis]: list(cfg.resolved_values()),
        "schemes": list(cfg.schemes),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "output_format": cfg.output_format,
    })
    # worker count never changes results, so it is deliberately not echoed:
    # outputs must be byte-identical however the trials were chunked out
    return echo


def _point_params(cfg: ExperimentConfig, value: float) -> SystemParams:
    if cfg.sweep_axis == "task_length":
        return cfg.scenario.with_overrides(task_b_bits=value)
    if cfg.sweep_axis == "power":
        watts = dbm_to_watts(value)
        return cfg.scenario.with_overrides(power_a_w=watts, power_b_w=watts)
    return cfg.scenario.with_overrides(user_cpu_hz=value)


def _point_plan(cfg: ExperimentConfig, p: SystemParams) -> OffloadPlan:
    if cfg.sweep_axis != "latency_study":
        return optimal_offload_plan(p)
    # Latency study: the offload phase stays frozen at the reference
    # scenario's optimum while the execute phase shrinks with the swept CPU
    # speed, so the achieved latency t2 + t3 falls and the success
    # probability is untouched.
    reference = optimal_offload_plan(cfg.scenario)
    if reference.t2 == 0.0:
        raise InfeasibleParameters(
            ["reference scenario computes everything locally; no offload phase to study"])
    n = p.mec_cpu_ratio
    t3 = (p.task_a_bits + p.task_b_bits) * p.cycles_per_bit / ((n + 2.0) * p.user_cpu_hz)
    return OffloadPlan(reference.eta_a, reference.eta_b, reference.t2, t3)


def _infeasible_row(cfg: ExperimentConfig, value: float, scheme: str, reason: str) -> ResultRow:
    return ResultRow(cfg.sweep_axis, value, scheme, None, None, None, None, None,
                     None, None, None, None, None, cfg.seed, 0, f"infeasible: {reason}")


def run_experiment(cfg: ExperimentConfig) -> ResultTable:
    """One row per (sweep value, scheme); infeasible points flagged, not dropped."""
    validate_config(cfg)
    rows = []
    for value in cfg.resolved_values():
        p = _point_params(cfg, value)
        try:
            plan = _point_plan(cfg, p)
        except InfeasibleParameters as exc:
            rows.extend(_infeasible_row(cfg, value, scheme, "; ".join(exc.diagnostics))
                        for scheme in cfg.schemes)
            continue
        rho_a, rho_b = channel_snrs(p)
        if plan.t2 > 0:
            eps_a, eps_b = rsma.plan_thresholds(plan, p)
            ps_analytic = analytics.ps_total_closed(rho_a, rho_b, eps_a, eps_b)
        else:
            ps_analytic = 1.0  # local-only plan: nothing offloaded, deadline holds
        for scheme in cfg.schemes:
            if scheme == "analytic":
                rows.append(ResultRow(cfg.sweep_axis, value, scheme, None, None,
                                      ps_analytic, plan.eta_a, plan.eta_b, plan.t2,
                                      plan.t3, None, None, None, cfg.seed, 0, "ok"))
                continue
            est = estimate_psucc(p, plan, Scheme(scheme), cfg.trials, cfg.seed, cfg.workers)
            rows.append(ResultRow(
                cfg.sweep_axis, value, scheme, est.mean, est.std_err,
                ps_analytic if scheme == "rsma" else None,
                plan.eta_a, plan.eta_b, plan.t2, plan.t3,
                est.case1_frac, est.case2_frac, est.case3_frac,
                cfg.seed, cfg.trials, "ok"))
    return ResultTable(config_echo(cfg), tuple(rows))


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    buf.write("# config = " + json.dumps(table.config, sort_keys=True) + "\n")
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in table.rows:
        cells = [_cell(getattr(row, col)) for col in CSV_COLUMNS]
        # diagnostics may contain commas; keep the row machine-splittable
        cells[-1] = '"' + cells[-1] + '"' if "," in cells[-1] else cells[-1]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def render_json(table: ResultTable) -> str:
    payload = {
        "config": table.config,
        "rows": [{col: getattr(row, col) for col in CSV_COLUMNS} for row in table.rows],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def emit_results(table: ResultTable, fmt: str, path: str | None = None) -> str:
    """Render the table and optionally write it; returns the rendered text."""
    if not table.rows:
        raise ValueError("result table is empty")
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    text = render_csv(table) if fmt == "csv" else render_json(table)
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write results to {path}: {exc}") from exc
    return text
