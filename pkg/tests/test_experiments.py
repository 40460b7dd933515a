"""Experiment configs, trial runners, reports, and the CLI."""

import json

import pytest

from prodperc.cli import main
from prodperc.experiments import (ConfigError, ExperimentConfig, emit_report,
                                  render_report, resolve_product, round9,
                                  run_trials, verify_all, _percentile)
from prodperc.process import critical_p

K2 = {"kind": "complete", "m": 2}


def make(**kwargs):
    return ExperimentConfig.from_dict(kwargs)


def hitting(product="Q2", **kwargs):
    kwargs.setdefault("kind", "hitting_times")
    kwargs.setdefault("product", product)
    kwargs.setdefault("seed", 0)
    return make(**kwargs)


# --- config validation -------------------------------------------------------

@pytest.mark.parametrize("data", [
    {"kind": "nope", "product": "Q2", "seed": 0},
    {"kind": "hitting_times", "seed": 0},                                # no product
    {"kind": "hitting_times", "product": "Q2"},                         # no seed
    {"kind": "hitting_times", "product": "Q2", "seed": "zero"},
    {"kind": "hitting_times", "product": "Q2", "seed": True},
    {"kind": "hitting_times", "product": "Q2", "seed": -1},
    {"kind": "hitting_times", "product": "Q2", "seed": 1 << 64},
    {"kind": "hitting_times", "product": "Q2", "seed": 0, "trials": 0},
    {"kind": "hitting_times", "product": "Q2", "seed": 0, "p": 0.5},
    {"kind": "hitting_times", "product": "Q2", "seed": 0, "tau3_mode": "magic"},
    {"kind": "hitting_times", "product": "Q2", "seed": 0, "format": "xml"},
    {"kind": "hitting_times", "product": "Q2", "seed": 0, "workers": 0},
    {"kind": "hitting_times", "product": "Q2", "seed": 0, "bogus": 1},
    {"kind": "hitting_times", "product": [], "seed": 0},
    {"kind": "hitting_times", "product": "Q99", "seed": 0},
    {"kind": "hitting_times", "product": [{"kind": "complete"}], "seed": 0},
    {"kind": "percolation_profile", "product": "Q2", "seed": 0},         # needs p
    {"kind": "percolation_profile", "product": "Q2", "seed": 0, "p": 0.5, "omega": 1.0},
    {"kind": "percolation_profile", "product": "Q2", "seed": 0, "p": 0.0},
    {"kind": "percolation_profile", "product": "Q2", "seed": 0, "p": 1.5},
    {"kind": "percolation_profile", "product": "Q2", "seed": 0, "omega": -1.0},
    {"kind": "isoperimetry", "product": "Q2", "seed": 0, "p": 0.5, "omega": 1.0},
    {"kind": "obstructions", "product": "Q2", "seed": 0, "p": 0.5, "u_max": 0},
    {"kind": "obstructions", "product": "Q2", "seed": 0, "p": 0.5,
     "component_threshold": 0.0},
    {"kind": "verify_all", "seed": 0, "p": 0.5},
    {"kind": "verify_all", "seed": 0, "fault_injection": "rng"},
])
def test_rejected_configs(data):
    with pytest.raises(ConfigError):
        make(**data)


def test_accepted_minimal_configs():
    assert hitting().trials == 1
    assert make(kind="verify_all", seed=3).product_label() == "builtin-corpus"
    assert make(kind="isoperimetry", product="Q3", seed=0).p is None
    cfg = make(kind="obstructions", product="Q2", seed=0, p=0.5, u_max=2)
    assert cfg.u_max == 2


def test_resolve_product_forms():
    specs, name = resolve_product("Q2")
    assert name == "Q2" and len(specs) == 2
    specs2, name2 = resolve_product([K2, K2])
    assert name2 is None and specs2 == specs
    with pytest.raises(ConfigError):
        resolve_product(7)


# --- canonical identity ------------------------------------------------------

def test_hash_tracks_science_fields_only():
    base = hitting(trials=5)
    assert base.config_hash() != hitting(trials=6).config_hash()
    assert base.config_hash() != hitting(trials=5, seed=1).config_hash()
    assert base.config_hash() != hitting(trials=5, tau3_mode="incremental").config_hash()
    assert base.config_hash() != hitting("Q3", trials=5).config_hash()
    same = hitting(trials=5, out="x.csv", format="json", workers=8)
    assert base.config_hash() == same.config_hash()


def test_hash_agrees_between_catalog_and_explicit_specs():
    named = hitting("Q2")
    explicit = hitting([K2, K2])
    assert named.config_hash() == explicit.config_hash()
    assert named.product_label() == "Q2"
    assert explicit.product_label() == "K2xK2"


def test_percolation_hash_tracks_p_and_omega():
    by_p = make(kind="percolation_profile", product="Q2", seed=0, p=0.5)
    assert by_p.config_hash() != make(kind="percolation_profile", product="Q2",
                                      seed=0, p=0.25).config_hash()
    assert by_p.config_hash() != make(kind="percolation_profile", product="Q2",
                                      seed=0, omega=1.0).config_hash()
    obs = make(kind="obstructions", product="Q2", seed=0, p=0.5)
    assert obs.config_hash() != make(kind="obstructions", product="Q2",
                                     seed=0, p=0.5, u_max=2).config_hash()


# --- small numeric helpers ----------------------------------------------------

def test_round9_and_percentile():
    assert round9(0.12345678912345) == 0.123456789
    assert round9(1.0) == 1.0
    assert _percentile([3, 1, 2, 4], 0.5) == 2
    assert _percentile([3, 1, 2, 4], 0.9) == 4
    assert _percentile([7], 0.5) == 7


# --- trial runs ----------------------------------------------------------------

def test_single_edge_hitting_times_are_all_one():
    summary = run_trials(make(kind="hitting_times", product=[K2], seed=9, trials=10))
    assert len(summary.rows) == 10
    assert [row[0] for row in summary.rows] == list(range(10))
    for row in summary.rows:
        assert row[2:] == (1, 1, 1, 1)
    agg = summary.aggregates
    assert agg["coincidence_rate"] == 1.0
    assert agg["order_violations"] == 0 and agg["tau3_never"] == 0
    assert agg["mean_tau1"] == agg["p50_tau3"] == 1


def test_hitting_rows_are_reproducible_and_seeded_per_trial():
    config = hitting("Q3", trials=6, seed=123)
    a = run_trials(config)
    b = run_trials(config)
    assert a.rows == b.rows
    assert len({row[1] for row in a.rows}) == 6
    assert a.config_hash == config.config_hash()


def test_workers_do_not_change_rows():
    base = hitting("Q4", trials=8, seed=77)
    parallel = hitting("Q4", trials=8, seed=77, workers=2)
    assert run_trials(base).rows == run_trials(parallel).rows


def test_percolation_profile_run():
    config = make(kind="percolation_profile", product="Q4", seed=4,
                  trials=12, omega=1.0)
    summary = run_trials(config)
    pg = config.build()
    expected_p = round9(critical_p(pg, 1.0))
    assert all(row[2] == expected_p for row in summary.rows)
    for row in summary.rows:
        assert sum(1 for s in (row[4],) if s) >= 0
        assert row[3] >= 1 and 1 <= row[4] <= pg.n
        assert row[9] in (0, 1)
    agg = summary.aggregates
    assert agg["trials"] == 12 and agg["p"] == expected_p
    assert 0.0 <= agg["frac_structure_ok"] <= 1.0
    mean_giant = round9(sum(row[4] for row in summary.rows) / 12)
    assert agg["mean_giant"] == mean_giant


def test_obstruction_run_counts_checks():
    config = make(kind="obstructions", product="Q2", seed=5, trials=20, p=0.4)
    summary = run_trials(config)
    assert len(summary.rows) == 20
    for row in summary.rows:
        assert (row[3] == -1) == (row[4] == 0)
    agg = summary.aggregates
    assert 0.0 <= agg["obstruction_rate"] <= 1.0
    assert agg["three_counterexamples"] == 0
    assert agg["wsb_violations"] == 0


def test_obstruction_enumeration_guard():
    config = make(kind="obstructions", product="K3xK3xK2", seed=0, p=0.5)
    with pytest.raises(ConfigError):
        run_trials(config)
    # explicit small u_max keeps the same product runnable
    run_trials(make(kind="obstructions", product="K3xK3xK2", seed=0, p=0.9,
                    u_max=1))


def test_isoperimetry_run_exact_branch():
    summary = run_trials(make(kind="isoperimetry", product="Q3", seed=0, p=0.5))
    assert [row[0] for row in summary.rows] == list(range(1, 8))
    assert tuple(row[2] for row in summary.rows) == (3, 4, 5, 4, 5, 4, 3)
    agg = summary.aggregates
    assert agg["min_cut"] == 3 and agg["min_cut_equals_d"] == 1
    assert agg["bound_violations"] == 0 and agg["symmetry_ok"] == 1
    assert "s_threshold" in agg and "b_threshold" in agg
    bare = run_trials(make(kind="isoperimetry", product="Q3", seed=0))
    assert "s_threshold" not in bare.aggregates


def test_isoperimetry_run_large_branch():
    summary = run_trials(make(kind="isoperimetry", product="Q5", seed=0))
    assert all(row[2] == -1 for row in summary.rows)
    assert summary.aggregates["profile_exhaustive"] == 0
    assert summary.aggregates["bound_violations"] == -1
    assert summary.aggregates["min_cut"] == 5


# --- reports --------------------------------------------------------------------

def test_render_report_deterministic_bytes():
    config = hitting("Q3", trials=4, seed=2)
    first = render_report(run_trials(config), "csv", generated_at="T")
    second = render_report(run_trials(config), "csv", generated_at="T")
    assert first == second
    assert render_report(run_trials(config), "json", generated_at="T") \
        == render_report(run_trials(config), "json", generated_at="T")


def test_csv_and_json_reports_agree():
    config = make(kind="percolation_profile", product="Q3", seed=8,
                  trials=5, p=0.6)
    summary = run_trials(config)
    csv_text = render_report(summary, "csv", generated_at="T")
    doc = json.loads(render_report(summary, "json", generated_at="T"))
    assert list(doc) == ["config_hash", "kind", "product", "config",
                         "generated_at", "columns", "rows", "aggregates"]
    assert doc["config_hash"] == summary.config_hash
    lines = csv_text.strip().split("\n")
    assert lines[0] == f"# config_hash={summary.config_hash}"
    header_at = next(i for i, line in enumerate(lines) if not line.startswith("#"))
    assert lines[header_at].split(",") == list(doc["columns"])
    data_lines = [line for line in lines[header_at + 1:] if not line.startswith("#")]
    assert len(data_lines) == len(doc["rows"])
    for text_row, json_row in zip(data_lines, doc["rows"]):
        for cell, value in zip(text_row.split(","), json_row):
            assert float(cell) == pytest.approx(float(value))
    agg_lines = [line for line in lines if line.startswith("# agg:")]
    assert len(agg_lines) == len(doc["aggregates"])


def test_emit_report_writes_file(tmp_path):
    config = hitting("Q2", trials=2, seed=1)
    path = tmp_path / "report.csv"
    emit_report(run_trials(config), str(path), "csv")
    text = path.read_text(encoding="utf-8")
    assert text.startswith("# config_hash=")
    assert text.endswith("\n")


def test_render_report_rejects_unknown_format():
    with pytest.raises(ConfigError):
        render_report(run_trials(hitting("Q2")), "xml")


# --- verification battery ---------------------------------------------------------

def test_battery_passes_clean():
    status, summary = verify_all(make(kind="verify_all", seed=11))
    assert status == 0
    assert summary.aggregates["exit_status"] == 0
    assert summary.aggregates["counterexamples"] == 0
    assert len(summary.rows) == 8
    assert all(row[3] == "ok" for row in summary.rows)
    assert all(row[2] == 0 for row in summary.rows)


def test_battery_catches_injected_fault():
    status, summary = verify_all(make(kind="verify_all", seed=11,
                                      fault_injection="matching"))
    assert status == 1
    failing = {row[0] for row in summary.rows if row[3] == "fail"}
    assert "oracle_equivalence" in failing


def test_verify_all_rejects_other_kinds():
    with pytest.raises(ConfigError):
        verify_all(hitting("Q2"))


# --- command line -----------------------------------------------------------------

def test_cli_product(capsys):
    assert main(["product", "--product", "Q3"]) == 0
    out = capsys.readouterr().out
    assert "label=Q3" in out and "n=8" in out and "d=3" in out


def test_cli_product_unknown_name(capsys):
    assert main(["product", "--product", "Q99"]) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_product_needs_a_product(capsys):
    assert main(["product"]) == 2


def test_cli_process_stdout_json(capsys):
    code = main(["process", "--product", "Q2", "--trials", "3",
                 "--seed", "4", "--format", "json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kind"] == "hitting_times"
    assert len(doc["rows"]) == 3


def test_cli_out_file(tmp_path, capsys):
    path = tmp_path / "run.csv"
    code = main(["percolate", "--product", "Q2", "--p", "0.5",
                 "--trials", "2", "--out", str(path)])
    assert code == 0
    assert path.exists()
    assert f"wrote {path}" in capsys.readouterr().out


def test_cli_config_file_roundtrip(tmp_path, capsys):
    config_path = tmp_path / "exp.json"
    config_path.write_text(json.dumps(
        {"kind": "hitting_times", "product": "Q2", "seed": 6, "trials": 2}))
    assert main(["process", "--config", str(config_path)]) == 0
    # flags override config file values
    assert main(["process", "--config", str(config_path), "--trials", "1"]) == 0
    rows = [line for line in capsys.readouterr().out.splitlines()
            if line and not line.startswith("#") and not line.startswith("trial")]
    assert len(rows) == 2 + 1


def test_cli_config_kind_mismatch(tmp_path, capsys):
    config_path = tmp_path / "exp.json"
    config_path.write_text(json.dumps(
        {"kind": "hitting_times", "product": "Q2", "seed": 0}))
    assert main(["percolate", "--config", str(config_path), "--p", "0.5"]) == 2
    assert "does not match" in capsys.readouterr().err


def test_cli_rejects_unknown_config_key(tmp_path, capsys):
    config_path = tmp_path / "exp.json"
    config_path.write_text(json.dumps(
        {"kind": "hitting_times", "product": "Q2", "seed": 0, "bogus": 1}))
    assert main(["process", "--config", str(config_path)]) == 2


def test_cli_missing_config_file(capsys):
    assert main(["process", "--config", "/nonexistent/exp.json"]) == 2


def test_cli_bad_probability(capsys):
    assert main(["percolate", "--product", "Q2", "--p", "0"]) == 2


def test_cli_fault_injection_exits_nonzero(capsys):
    assert main(["verify", "--fault-injection", "matching", "--seed", "1"]) == 1


def test_cli_respects_size_cap(monkeypatch, capsys):
    monkeypatch.setenv("PPL_MAX_VERTICES", "16")
    assert main(["product", "--product", "Q6"]) == 2
    assert main(["process", "--product", "Q6"]) == 2


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "prodperc", "product",
                           "--product", "K3xK3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "n=9" in proc.stdout
