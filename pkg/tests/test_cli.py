import json
import shutil
import subprocess

import numpy as np
import pytest

from mixtureopt import (
    ConfigurationError,
    build_policy,
    config_hash,
    load_config,
    parse_alpha,
    resolve_config,
)
from mixtureopt.cli import main, simplex_lattice, write_points_csv

SMALL_OVERRIDES = {
    "population": {"n_users": 300},
    "objectives": {"replications": 4},
    "moo": {"population_size": 8, "evaluation_budget": 24},
}

NEGATIVE_OVERRIDES = {
    "population": {"n_users": 300},
    "eval_policy": {"kind": "threshold_complement", "feature_index": 1, "threshold": 0.5},
    "objectives": {"replications": 4},
}


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SMALL_OVERRIDES))
    return path


def test_resolve_config_defaults():
    cfg = resolve_config()
    assert cfg["seed"] == 0
    assert len(cfg["logging_policies"]) == 3
    assert cfg["logging_policies"][0]["kind"] == "random_feature"
    assert cfg["objectives"]["overlap_mode"] == "error"


def test_resolve_config_seed_override():
    assert resolve_config(seed=5)["seed"] == 5
    assert resolve_config({"seed": 3})["seed"] == 3
    # the explicit argument wins over the file value
    assert resolve_config({"seed": 3}, seed=9)["seed"] == 9


def test_resolve_config_rejects_unknown_keys():
    with pytest.raises(ConfigurationError):
        resolve_config({"not_a_section": {}})
    with pytest.raises(ConfigurationError):
        resolve_config({"population": {"n_user": 10}})
    with pytest.raises(ConfigurationError):
        resolve_config({"seed": -1})


def test_config_hash_tracks_content_not_key_order():
    a = resolve_config({"population": {"n_users": 500, "n_features": 4}})
    b = resolve_config({"population": {"n_features": 4, "n_users": 500}})
    assert config_hash(a) == config_hash(b)
    c = resolve_config({"population": {"n_users": 501}})
    assert config_hash(a) != config_hash(c)


def test_load_config_round_trip(tmp_path, small_config):
    cfg = load_config(small_config)
    assert cfg["population"]["n_users"] == 300
    assert cfg["moo"]["evaluation_budget"] == 24
    # untouched sections keep their defaults
    assert cfg["reward_model"]["coupon_cost"] == 0.25


def test_load_config_errors_are_configuration_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigurationError):
        load_config(bad)


def test_build_policy_validation():
    spec = build_policy({"kind": "threshold", "feature_index": 2, "threshold": 0.4})
    assert spec.kind == "threshold" and spec.feature_index == 2
    with pytest.raises(ConfigurationError):
        build_policy({"feature_index": 0})
    with pytest.raises(ConfigurationError):
        build_policy({"kind": "threshold", "feature_index": 0, "extra": 1})


def test_parse_alpha():
    assert parse_alpha("0.5,0.25,0.25", 3).tolist() == [0.5, 0.25, 0.25]
    with pytest.raises(ConfigurationError):
        parse_alpha("0.5,0.5", 3)
    with pytest.raises(ConfigurationError):
        parse_alpha("0.5,abc,0.1", 3)
    with pytest.raises(ConfigurationError):
        parse_alpha("0.9,0.2,-0.1", 3)


def test_simplex_lattice_counts_and_order():
    assert len(simplex_lattice(3, 4)) == 15
    assert len(simplex_lattice(3, 20)) == 231
    assert [tuple(p) for p in simplex_lattice(2, 2)] == [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]
    assert [tuple(p) for p in simplex_lattice(1, 5)] == [(1.0,)]
    for point in simplex_lattice(4, 6):
        assert abs(point.sum() - 1.0) <= 1e-12


def test_write_points_csv_format(tmp_path):
    path = tmp_path / "points.csv"
    write_points_csv(path, 2, [((0.25, 0.75), 0.5, float("inf"))])
    lines = path.read_text().splitlines()
    assert lines[0] == "alpha_1,alpha_2,revenue,ope_mse,random_ratio"
    assert lines[1] == "0.25,0.75,0.5,inf,0.25"


def test_evaluate_subcommand_prints_report(small_config, capsys):
    code = main(["evaluate", "--config", str(small_config), "--alpha", "0.5,0.25,0.25"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["alpha"] == [0.5, 0.25, 0.25]
    assert report["support_violations"] == 0
    assert report["replications"] == 4
    assert isinstance(report["ope_mse"], float)
    assert report["config_sha256"] == config_hash(load_config(small_config))


def test_evaluate_reports_infinite_error_as_string(tmp_path, capsys):
    path = tmp_path / "negative.json"
    path.write_text(json.dumps(NEGATIVE_OVERRIDES))
    code = main(["evaluate", "--config", str(path), "--alpha", "0,1,0"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ope_mse"] == "inf"
    assert report["support_violations"] > 0


def test_simulate_subcommand_writes_dataset(small_config, tmp_path):
    out = tmp_path / "sim"
    code = main(
        ["simulate", "--config", str(small_config), "--alpha", "0.4,0.3,0.3", "--out", str(out)]
    )
    assert code == 0
    lines = (out / "dataset.csv").read_text().splitlines()
    assert lines[0] == "x_0,x_1,x_2,x_3,action,reward,propensity,source_policy"
    assert len(lines) == 301
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["subcommand"] == "simulate"
    assert manifest["outputs"] == ["dataset.csv"]
    assert manifest["config"]["population"]["n_users"] == 300


def test_sweep_subcommand_covers_lattice(small_config, tmp_path):
    out = tmp_path / "sweep"
    code = main(
        ["sweep", "--config", str(small_config), "--grid", "4", "--out", str(out), "--threads", "1"]
    )
    assert code == 0
    lines = (out / "grid.csv").read_text().splitlines()
    assert lines[0] == "alpha_1,alpha_2,alpha_3,revenue,ope_mse,random_ratio"
    assert len(lines) == 16
    for line in lines[1:]:
        cells = line.split(",")
        assert len(cells) == 6
        assert cells[5] == cells[0]
        np.array([float(c) for c in cells])


def test_optimize_subcommand_outputs_are_consistent(small_config, tmp_path):
    out = tmp_path / "opt"
    code = main(
        ["optimize", "--config", str(small_config), "--out", str(out), "--threads", "1"]
    )
    assert code == 0
    frontier = (out / "frontier.csv").read_text().splitlines()
    trials = (out / "all_trials.csv").read_text().splitlines()
    assert frontier[0] == trials[0] == "alpha_1,alpha_2,alpha_3,revenue,ope_mse,random_ratio"
    assert 2 <= len(trials) <= 25
    points = []
    for line in frontier[1:]:
        cells = [float(c) for c in line.split(",")]
        assert abs(sum(cells[:3]) - 1.0) <= 1e-9
        points.append((cells[3], cells[4]))
    # mutually non-dominated under (maximize revenue, minimize error)
    for i, (r1, e1) in enumerate(points):
        for j, (r2, e2) in enumerate(points):
            if i != j:
                assert not (r1 >= r2 and e1 <= e2)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["outputs"] == ["all_trials.csv", "frontier.csv"]
    assert "config_sha256" in manifest


def test_optimize_reruns_are_byte_identical(small_config, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["optimize", "--config", str(small_config), "--out", str(out_a), "--threads", "1"]) == 0
    assert main(["optimize", "--config", str(small_config), "--out", str(out_b), "--threads", "2"]) == 0
    assert (out_a / "frontier.csv").read_bytes() == (out_b / "frontier.csv").read_bytes()
    assert (out_a / "all_trials.csv").read_bytes() == (out_b / "all_trials.csv").read_bytes()
    assert (out_a / "manifest.json").read_bytes() == (out_b / "manifest.json").read_bytes()


def test_seed_flag_changes_outputs(small_config, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    base = ["optimize", "--config", str(small_config), "--threads", "1"]
    assert main(base + ["--out", str(out_a), "--seed", "1"]) == 0
    assert main(base + ["--out", str(out_b), "--seed", "2"]) == 0
    assert (out_a / "all_trials.csv").read_bytes() != (out_b / "all_trials.csv").read_bytes()


def test_exit_code_for_config_errors(tmp_path, capsys):
    assert main(["evaluate", "--config", str(tmp_path / "nope.json"), "--alpha", "1,0,0"]) == 2
    assert main(["evaluate", "--alpha", "0.5,0.5"]) == 2
    assert main(["simulate", "--alpha", "2,-1,0", "--out", str(tmp_path / "x")]) == 2
    err = capsys.readouterr().err
    assert "error:" in err


def test_console_script_logs_via_environment(tmp_path, small_config):
    exe = shutil.which("mixtureopt")
    assert exe, "console script should be installed"
    out = tmp_path / "sim"
    proc = subprocess.run(
        [exe, "simulate", "--config", str(small_config), "--alpha", "1,0,0", "--out", str(out)],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin:/usr/local/bin", "MIXTUREOPT_LOG": "INFO"},
    )
    assert proc.returncode == 0
    assert "simulate: wrote 300 log entries" in proc.stderr
