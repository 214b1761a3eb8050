import json

import numpy as np
import pytest

from app.main import EXIT_CONFIG, EXIT_OK, EXIT_PRECONDITION, main
from datagen import load_dataset, save_dataset
from metrics import sliced_w2
from models import MetricConfig

SMALL_RUN = {"h": 1.0, "lambda": 0.001, "n_theta": 40, "k_steps": 3, "n_particles": 200, "seed": 5}


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


@pytest.fixture
def small_config(tmp_path):
    return write_json(tmp_path / "small.json", SMALL_RUN)


def test_toy_run_writes_all_outputs(tmp_path, capsys, small_config):
    out = tmp_path / "run"
    code, captured = run_cli(capsys, "run", "--toy", "--config", small_config, "--out", str(out), "--snapshots", "0,1")
    assert code == EXIT_OK
    summary = json.loads(captured.out)
    assert summary["iterations"] == 3
    assert summary["snapshots"] == [0, 1, 3]
    assert summary["over_budget"] is False
    for name in ("manifest.json", "snapshot_0000.csv", "snapshot_0001.csv", "snapshot_0003.csv", "final.csv", "target.csv"):
        assert (out / name).is_file()

    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["status"] == "completed"
    assert manifest["finished_at"] is not None
    assert manifest["config"]["n_theta"] == 40
    assert manifest["dataset_shape"] == [1000, 2]

    report = json.loads((out / "privacy_report.json").read_text())
    assert report["events"] == []
    assert report["epsilon_total"] is None
    assert report["config_echo"]["lambda"] == 0.001
    assert load_dataset(out / "final.csv").rows.shape == (200, 2)


def test_same_seed_gives_identical_files(tmp_path, capsys, small_config):
    for name in ("a", "b"):
        code, _ = run_cli(capsys, "run", "--toy", "--config", small_config, "--out", str(tmp_path / name))
        assert code == EXIT_OK
    for name in ("snapshot_0001.csv", "final.csv", "target.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_preset_values_reach_the_run(tmp_path, capsys):
    override = write_json(tmp_path / "short.json", {"k_steps": 2, "n_particles": 100})
    out = tmp_path / "toy"
    code, _ = run_cli(capsys, "run", "--toy", "--preset", "paper-toy", "--config", override, "--out", str(out))
    assert code == EXIT_OK
    echo = json.loads((out / "privacy_report.json").read_text())["config_echo"]
    assert (echo["n_theta"], echo["h"], echo["lambda"], echo["sigma"]) == (200, 1.0, 0.001, 0.0)


@pytest.mark.parametrize(
    "payload",
    [
        None,
        "{not json",
        {"h": 1.0, "n_theta": 40, "k_steps": 2, "lamda": 0.1},
        {"h": -1.0, "n_theta": 40, "k_steps": 2},
    ],
)
def test_configuration_errors_exit_2(tmp_path, capsys, payload):
    path = tmp_path / "config.json"
    if isinstance(payload, dict):
        write_json(path, payload)
    elif payload is not None:
        path.write_text(payload)
    code, captured = run_cli(capsys, "run", "--toy", "--config", str(path), "--out", str(tmp_path / "out"))
    assert code == EXIT_CONFIG
    assert "error:" in captured.err


def test_missing_config_and_preset_exit_2(tmp_path, capsys):
    code, _ = run_cli(capsys, "run", "--toy", "--out", str(tmp_path))
    assert code == EXIT_CONFIG


def test_unnormalized_private_dataset_exits_3(tmp_path, capsys):
    data = save_dataset(np.array([[2.0, 0.0], [0.0, 3.0], [1.0, 1.0]]), tmp_path / "data.csv")
    config = write_json(tmp_path / "private.json", {**SMALL_RUN, "sigma": 0.5})
    out = tmp_path / "out"
    code, _ = run_cli(capsys, "run", "--config", config, "--dataset", str(data), "--out", str(out))
    assert code == EXIT_PRECONDITION
    assert json.loads((out / "manifest.json").read_text())["status"] == "failed"

    code, captured = run_cli(capsys, "run", "--config", config, "--dataset", str(data), "--normalize", "--out", str(out))
    assert code == EXIT_OK
    assert json.loads(captured.out)["events"] == 3


def test_eval_identical_files(tmp_path, capsys, rng):
    path = save_dataset(rng.standard_normal((30, 2)), tmp_path / "a.csv")
    code, captured = run_cli(capsys, "eval", str(path), str(path))
    assert code == EXIT_OK
    assert json.loads(captured.out) == {"swd": pytest.approx(0.0, abs=1e-12)}


def test_eval_matches_library_call(tmp_path, capsys, rng):
    a = save_dataset(rng.standard_normal((30, 2)), tmp_path / "a.csv")
    b = save_dataset(rng.standard_normal((40, 2)) + 1.0, tmp_path / "b.csv")
    code, captured = run_cli(capsys, "eval", str(a), str(b), "--n-theta-eval", "64", "--sigma-eval", "0.5", "--seed", "9")
    assert code == EXIT_OK
    result = json.loads(captured.out)
    rows_a, rows_b = load_dataset(a).rows, load_dataset(b).rows
    assert result["swd"] == sliced_w2(rows_a, rows_b, MetricConfig(n_theta_eval=64, seed=9))
    assert result["smoothed_swd"] == sliced_w2(rows_a, rows_b, MetricConfig(n_theta_eval=64, sigma_eval=0.5, seed=9))


def test_eval_dimension_mismatch_exits_3(tmp_path, capsys):
    a = save_dataset(np.ones((3, 2)), tmp_path / "a.csv")
    b = save_dataset(np.ones((3, 3)), tmp_path / "b.csv")
    code, _ = run_cli(capsys, "eval", str(a), str(b))
    assert code == EXIT_PRECONDITION


def test_privacy_event_counts(capsys):
    code, captured = run_cli(capsys, "privacy", "--preset", "paper-latent-8d")
    assert code == EXIT_OK
    report = json.loads(captured.out)
    assert len(report["events"]) == 35
    assert report["config_echo"]["n_theta"] == 70

    code, captured = run_cli(capsys, "privacy", "--preset", "paper-latent-8d-presampled")
    assert code == EXIT_OK
    assert len(json.loads(captured.out)["events"]) == 1


@pytest.mark.parametrize("budget, exceeded", [(10.0, True), (1e6, False)])
def test_privacy_report_flags_budget_overrun(tmp_path, capsys, budget, exceeded):
    config = write_json(tmp_path / "budget.json", {"epsilon_budget": budget})
    code, captured = run_cli(capsys, "privacy", "--preset", "paper-latent-8d", "--config", config)
    assert code == EXIT_OK
    report = json.loads(captured.out)
    assert report["epsilon_budget"] == budget
    assert report["over_budget"] is exceeded


def test_privacy_epsilon_round_trip(tmp_path, capsys):
    config = write_json(
        tmp_path / "latent.json",
        {"h": 1.0, "lambda": 0.001, "n_theta": 70, "k_steps": 100, "variant": "presampled", "dim": 8},
    )
    code, captured = run_cli(capsys, "privacy", "--config", config, "--epsilon", "10")
    assert code == EXIT_OK
    report = json.loads(captured.out)
    assert report["sigma"] == pytest.approx(3.63, abs=0.01)
    # Rényi conversion of a single release costs about 20% more than the classical bound at this epsilon
    assert abs(report["epsilon_total"] - 10) / 10 < 0.25


def test_privacy_rejects_small_projection_counts(tmp_path, capsys):
    config = write_json(tmp_path / "few.json", {"h": 1.0, "n_theta": 20, "k_steps": 5, "sigma": 1.0, "dim": 8})
    code, captured = run_cli(capsys, "privacy", "--config", config)
    assert code == EXIT_PRECONDITION
    assert "30" in captured.err


def test_privacy_needs_a_dimension(tmp_path, capsys):
    config = write_json(tmp_path / "nodim.json", {"h": 1.0, "n_theta": 40, "k_steps": 5, "sigma": 1.0})
    code, _ = run_cli(capsys, "privacy", "--config", config)
    assert code == EXIT_CONFIG


def test_toy_export(tmp_path, capsys):
    code, captured = run_cli(capsys, "toy-export", "--out", str(tmp_path), "--grid-size", "12")
    assert code == EXIT_OK
    summary = json.loads(captured.out)
    assert summary["points"] == 144
    assert summary["threshold_99"] > 0
    grid = json.loads((tmp_path / "level_sets.json").read_text())
    assert len(grid) == 144 and len(grid[0]) == 3
