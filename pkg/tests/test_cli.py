import json
import math
import subprocess
import sys

import numpy as np
import pytest

from crpmap import delta_equal_width
from crpmap.cli import main, read_dataset, write_dataset


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_generate_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _ = run_cli(
            capsys, "generate", "--dist", "uniform_segment(-1,1)",
            "--n", "50", "--seed", "7", "--out", str(path),
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    pts = read_dataset(a)
    assert pts.shape == (50, 1)
    assert (np.abs(pts) <= 1).all()


def test_dataset_round_trip(tmp_path):
    pts = np.random.default_rng(0).normal(size=(9, 2))
    path = tmp_path / "d.csv"
    write_dataset(path, pts)
    back = read_dataset(path)
    assert np.allclose(back, pts, atol=0, rtol=0)
    assert path.read_text().splitlines()[0] == "x1,x2"


def test_score_reports_posterior_and_prior(tmp_path, capsys):
    path = tmp_path / "d.csv"
    write_dataset(path, np.array([[-2.0], [-1.9], [2.0], [2.1]]))
    code, out = run_cli(
        capsys, "score", "--data", str(path), "--labels", "0,0,1,1",
        "--alpha", "1.0", "--within", "0.1", "--between", "2.0",
    )
    assert code == 0
    payload = json.loads(out)
    assert {"log_score", "log_prior", "n", "cluster_count"} <= payload.keys()
    assert payload["cluster_count"] == 2
    assert math.isfinite(payload["log_score"])


def test_map_methods_agree_on_separated_data(tmp_path, capsys):
    rng = np.random.default_rng(3)
    pts = np.concatenate([rng.normal(-4, 0.2, 12), rng.normal(4, 0.2, 12)])[:, None]
    path = tmp_path / "d.csv"
    write_dataset(path, pts)
    scores = {}
    for method in ("dp", "local", "mcmc"):
        code, out = run_cli(
            capsys, "map", "--data", str(path), "--method", method,
            "--within", "0.05", "--between", "4.0", "--seed", "1",
        )
        assert code == 0
        rec = json.loads(out)
        scores[method] = rec["map"]["log_score"]
        assert rec["map"]["cluster_count"] == 2
        assert rec["weakly_convex"] is True
    assert scores["dp"] == pytest.approx(scores["local"], abs=1e-8)
    assert scores["dp"] == pytest.approx(scores["mcmc"], abs=1e-8)


def test_map_writes_record_file(tmp_path, capsys):
    path = tmp_path / "d.csv"
    write_dataset(path, np.random.default_rng(1).normal(size=(8, 1)))
    out_file = tmp_path / "rec.json"
    code, out = run_cli(
        capsys, "map", "--data", str(path), "--method", "exhaustive",
        "--out", str(out_file),
    )
    assert code == 0
    rec = json.loads(out_file.read_text())
    assert rec["method"] == "exhaustive"
    assert len(rec["map"]["labels"]) == 8


def test_delta_equal_width_command(capsys):
    code, out = run_cli(
        capsys, "delta", "--dist", "uniform_segment(-1,1)", "--R", "10",
        "--equal-width", "6",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["delta"] == pytest.approx(delta_equal_width(6, 10.0), abs=1e-12)
    assert payload["optimal_equal_width_count"] == 6


def test_delta_breakpoints_and_optimize(capsys):
    code, out = run_cli(
        capsys, "delta", "--dist", "uniform_segment(-1,1)", "--R", "10",
        "--breakpoints=-0.5,0.0,0.5", "--moments", "closed_form",
    )
    assert code == 0
    val = json.loads(out)["delta"]
    assert val == pytest.approx(delta_equal_width(4, 10.0), abs=1e-12)

    code, out = run_cli(
        capsys, "delta", "--dist", "uniform_segment(-1,1)", "--R", "10",
        "--optimize", "--max-clusters", "7",
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["breakpoints"]) == 5  # six intervals
    assert payload["delta"] == pytest.approx(delta_equal_width(6, 10.0), abs=1e-5)


def test_metrics_interval_families(capsys):
    # leading dashes require the --flag=value spelling
    code, out = run_cli(
        capsys, "metrics", "--base", "sym_diff", "--dist", "uniform_segment(-1,1)",
        "--a=-1,0;0,1", "--b=-1,0.1;0.1,1",
    )
    assert code == 0
    assert json.loads(out)["family_distance"] == pytest.approx(0.05, abs=1e-12)


def test_metrics_hull_families_from_labels(tmp_path, capsys):
    pts = np.array([[0.0, 0], [1, 0], [0.5, 1], [5, 5], [6, 5], [5.5, 6]])
    path = tmp_path / "d.csv"
    write_dataset(path, pts)
    code, out = run_cli(
        capsys, "metrics", "--base", "hausdorff", "--data", str(path),
        "--labels-a", "0,0,0,1,1,1", "--labels-b", "0,0,0,1,1,1",
    )
    assert code == 0
    assert json.loads(out)["family_distance"] == pytest.approx(0.0, abs=1e-12)


def test_experiment_command_end_to_end(tmp_path, capsys):
    cfg = tmp_path / "seg.cfg"
    cfg.write_text(
        "# tiny smoke config\n"
        "experiment = segment\n"
        "within_cov = 0.01\n"
        "between_cov = 1.0\n"
        "sizes = 80\n"
        "seeds = 0,1\n"
        "method = dp\n"
        f"out = {tmp_path / 'runs'}\n"
    )
    code, out = run_cli(capsys, "experiment", "--config", str(cfg))
    assert code == 0
    summary_path = out.strip().splitlines()[-1]
    summary = json.loads(open(summary_path).read())
    assert summary["cells"][0]["runs"] == 2
    assert not summary["failed_cells"]
    # per-record files accompany the summary
    names = {p.name for p in (tmp_path / "runs").iterdir()}
    assert "summary.json" in names
    assert len(names) >= 3


def test_convergence_command_forces_experiment(tmp_path, capsys):
    cfg = tmp_path / "conv.cfg"
    cfg.write_text(
        "experiment = convergence\n"
        "within_cov = 0.01\n"
        "sizes = 120\n"
        "seeds = 0\n"
        "method = dp\n"
        f"out = {tmp_path / 'runs'}\n"
    )
    code, out = run_cli(capsys, "convergence", "--config", str(cfg))
    assert code == 0
    summary = json.loads(open(out.strip().splitlines()[-1]).read())
    assert summary["cells"][0]["experiment"] == "convergence"


def test_exit_code_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("experiment = segment\nbogus_key = 1\n")
    code = main(["experiment", "--config", str(bad)])
    capsys.readouterr()
    assert code == 2

    # missing dataset file
    code = main(["score", "--data", str(tmp_path / "nope.csv"), "--labels", "0"])
    capsys.readouterr()
    assert code == 2

    # malformed distribution
    code = main(["delta", "--dist", "mystery(1)", "--R", "1", "--equal-width", "2"])
    capsys.readouterr()
    assert code == 2


def test_exit_code_capacity_error(tmp_path, capsys):
    path = tmp_path / "d.csv"
    write_dataset(path, np.random.default_rng(0).normal(size=(20, 1)))
    code = main(["map", "--data", str(path), "--method", "exhaustive"])
    capsys.readouterr()
    assert code == 3


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "crpmap.cli", "--help"] if False else
        ["crpmap", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    for name in ("generate", "score", "map", "delta", "metrics", "experiment", "convergence"):
        assert name in proc.stdout
