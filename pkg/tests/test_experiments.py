import csv
import io
import json
import time

import pytest

from crmec.experiments import (CSV_COLUMNS, ConfigError, ExperimentConfig,
                               build_config, config_echo, dbm_to_watts,
                               emit_results, parse_config_text, render_csv,
                               render_json, run_experiment, watts_to_dbm)
from crmec.system import SystemParams


def make_cfg(**kwargs) -> ExperimentConfig:
    base = dict(scenario=SystemParams(), sweep_axis="task_length",
                sweep_values=(1000.0, 5000.0), schemes=("analytic",),
                trials=10_000, seed=1, workers=1)
    base.update(kwargs)
    return ExperimentConfig(**base)


def read_csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_dbm_round_trip():
    assert dbm_to_watts(30.0) == pytest.approx(1.0)
    assert dbm_to_watts(20.0) == pytest.approx(0.1)
    assert watts_to_dbm(dbm_to_watts(17.5)) == pytest.approx(17.5)


def test_parse_config_text_basics():
    mapping = parse_config_text("""
        # scenario
        bandwidth_hz = 1e6
        task_b_bits = 8000        # inline comment
        schemes = analytic, rsma
        output_format = "csv"
        seed = 42
    """)
    assert mapping["bandwidth_hz"] == 1e6
    assert mapping["task_b_bits"] == 8000
    assert mapping["schemes"] == ["analytic", "rsma"]
    assert mapping["output_format"] == "csv"
    assert mapping["seed"] == 42


def test_parse_config_rejects_bad_lines():
    with pytest.raises(ConfigError):
        parse_config_text("bandwidth 1e6")
    with pytest.raises(ConfigError):
        parse_config_text("a = 1\na = 2")


def test_build_config_applies_scenario_and_defaults():
    cfg = build_config({"task_a_bits": 10_000, "task_b_bits": 8_000, "seed": 9})
    assert cfg.scenario.task_a_bits == 10_000.0
    assert cfg.seed == 9
    assert cfg.sweep_axis == "task_length"
    assert cfg.resolved_values()  # defaults kick in


def test_build_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown config keys"):
        build_config({"bandwith_hz": 1e6})


def test_build_config_rejects_mismatched_value_key():
    with pytest.raises(ConfigError, match="sweep_axis"):
        build_config({"sweep_axis": "power", "sweep_values_bits": [1, 2]})


def test_config_validation_errors():
    with pytest.raises(ConfigError, match="schemes"):
        build_config({"schemes": []})
    with pytest.raises(ConfigError, match="strictly increasing"):
        build_config({"sweep_values_bits": [5000, 1000]})
    with pytest.raises(ConfigError, match="trials"):
        build_config({"schemes": ["rsma"], "trials": 100})
    with pytest.raises(ConfigError, match="unknown scheme"):
        build_config({"schemes": ["rsma", "tdma"]})
    # analytic-only runs may use any trial count
    assert build_config({"schemes": ["analytic"], "trials": 100})


def test_task_length_sweep_flags_infeasible_points():
    cfg = make_cfg(sweep_values=(1000.0, 3000.0, 5000.0, 7000.0, 9000.0, 11000.0),
                   schemes=("analytic", "rsma"))
    table = run_experiment(cfg)
    assert len(table.rows) == 6 * 2
    by_value = {}
    for row in table.rows:
        by_value.setdefault(row.sweep_value, []).append(row)
    # ratio 20k/1k and 20k/3k exceed N+1: flagged, never dropped
    for value in (1000.0, 3000.0):
        assert all(r.status.startswith("infeasible") for r in by_value[value])
        assert all(r.ps_analytic is None and r.eta_a is None for r in by_value[value])
    for value in (5000.0, 7000.0, 9000.0, 11000.0):
        assert all(r.status == "ok" for r in by_value[value])
    mc = [r for r in table.rows if r.scheme == "rsma" and r.status == "ok"]
    assert all(abs(r.ps_mean - r.ps_analytic) <= 3 * r.ps_stderr + 0.002 for r in mc)


def test_power_sweep_reuses_plan_and_improves():
    cfg = make_cfg(sweep_axis="power", sweep_values=(0.0, 10.0, 20.0, 30.0, 40.0))
    table = run_experiment(cfg)
    plans = {(r.eta_a, r.eta_b, r.t2, r.t3) for r in table.rows}
    assert len(plans) == 1  # the plan does not depend on transmit power
    ps = [r.ps_analytic for r in table.rows]
    assert all(a < b for a, b in zip(ps, ps[1:]))


def test_latency_study_fixes_offload_phase():
    scenario = SystemParams(task_a_bits=10_000.0, task_b_bits=8_000.0)
    cfg = make_cfg(scenario=scenario, sweep_axis="latency_study",
                   sweep_values=(0.5e9, 1.0e9, 1.5e9, 2.0e9))
    table = run_experiment(cfg)
    t2s = {r.t2 for r in table.rows}
    assert len(t2s) == 1  # offload phase frozen at the reference optimum
    t3s = [r.t3 for r in table.rows]
    assert all(a > b for a, b in zip(t3s, t3s[1:]))  # latency t2 + t3 falls
    ps = {r.ps_analytic for r in table.rows}
    assert len(ps) == 1  # success probability untouched by faster CPUs
    totals = [r.t2 + r.t3 for r in table.rows]
    assert totals[0] == pytest.approx(scenario.latency_budget_s, rel=1e-12)


def test_latency_study_rejects_local_only_reference():
    scenario = SystemParams(task_a_bits=3_000.0, task_b_bits=2_000.0)
    cfg = make_cfg(scenario=scenario, sweep_axis="latency_study",
                   sweep_values=(0.5e9, 1.0e9))
    table = run_experiment(cfg)
    assert table.all_infeasible()


def test_csv_shape_and_round_trip():
    cfg = make_cfg(schemes=("analytic", "rsma"), sweep_values=(5000.0, 7000.0))
    table = run_experiment(cfg)
    text = render_csv(table)
    first, header = text.splitlines()[:2]
    assert first.startswith("# config = ")
    assert json.loads(first[len("# config = "):]) == table.config
    assert header == ",".join(CSV_COLUMNS)
    rows = read_csv_rows(text)
    assert len(rows) == len(table.rows)
    series = {}
    for row in rows:
        series.setdefault(row["scheme"], []).append(
            (float(row["sweep_value"]), float(row["ps_analytic"])))
    assert len(series["analytic"]) == 2 and len(series["rsma"]) == 2


def test_json_mirrors_csv_fields():
    cfg = make_cfg()
    table = run_experiment(cfg)
    payload = json.loads(render_json(table))
    assert payload["config"] == table.config
    assert set(payload["rows"][0]) == set(CSV_COLUMNS)
    assert len(payload["rows"]) == len(table.rows)


def test_same_config_renders_identical_bytes():
    cfg = make_cfg(schemes=("analytic", "rsma", "noma_pu_first"), trials=10_000)
    assert render_csv(run_experiment(cfg)) == render_csv(run_experiment(cfg))
    assert render_json(run_experiment(cfg)) == render_json(run_experiment(cfg))


def test_emit_results_writes_named_file(tmp_path):
    cfg = make_cfg()
    table = run_experiment(cfg)
    out = tmp_path / "results.csv"
    text = emit_results(table, "csv", str(out))
    assert out.read_text(encoding="utf-8") == text


def test_emit_results_errors_name_the_path():
    table = run_experiment(make_cfg())
    missing_dir = "/nonexistent-dir/results.csv"
    with pytest.raises(OSError, match="nonexistent-dir"):
        emit_results(table, "csv", missing_dir)
    with pytest.raises(ValueError):
        emit_results(table, "yaml")


def test_analytic_sweep_is_fast():
    cfg = make_cfg(sweep_values=tuple(float(v) for v in range(4000, 12001, 1000)))
    start = time.perf_counter()
    table = run_experiment(cfg)
    assert time.perf_counter() - start < 1.0
    assert len(table.rows) == 9


def test_config_echo_is_replayable():
    cfg = make_cfg(schemes=("analytic", "rsma"))
    echo = config_echo(cfg)
    rebuilt = build_config(dict(echo))
    assert run_experiment(rebuilt).config == run_experiment(cfg).config
