# -*- coding: utf-8 -*-
import os

import pytest

from evocar.cli import EXIT_FAILED, EXIT_INVALID, EXIT_OK, command_for_kind, main


def _files(out_dir):
    return sorted(f for f in os.listdir(out_dir) if not f.startswith("."))


def _contents(out_dir):
    return {f: open(os.path.join(out_dir, f), "rb").read() for f in _files(out_dir)}


def test_validate(setup_config_writer, setup_small_navigation_config, capsys):
    assert main(["validate", "-c", setup_config_writer(setup_small_navigation_config)]) == EXIT_OK
    assert "valid navigation experiment 'tiny'" in capsys.readouterr().out

    config = dict(setup_small_navigation_config, ga={"population_size": 201})
    assert main(["validate", "-c", setup_config_writer(config, "bad.json")]) == EXIT_INVALID
    assert "ga.population_size must be even" in capsys.readouterr().err


def test_missing_config(tmp_path):
    assert main(["train", "-c", str(tmp_path / "absent.json")]) == EXIT_INVALID


def test_command_must_match_the_experiment(setup_config_writer, setup_small_navigation_config, capsys):
    assert main(["sweep", "-c", setup_config_writer(setup_small_navigation_config)]) == EXIT_INVALID
    assert "use 'evocar train'" in capsys.readouterr().err


def test_command_for_kind():
    assert command_for_kind("individual-ca") == "train"
    assert command_for_kind("broadcast-population") == "broadcast"
    with pytest.raises(ValueError):
        command_for_kind("racing")


def test_train_writes_identical_files_on_rerun(setup_config_writer, setup_small_navigation_config, tmp_path, capsys):
    path = setup_config_writer(setup_small_navigation_config)
    first, second, parallel = (str(tmp_path / d) for d in ("first", "second", "parallel"))
    assert main(["train", "-c", path, "-o", first, "-q"]) == EXIT_OK
    assert main(["train", "-c", path, "-o", second, "-q"]) == EXIT_OK
    assert main(["train", "-c", path, "-o", parallel, "-q", "-w", "2"]) == EXIT_OK

    assert _files(first) == ["champion_tiny_seed0.weights", "curves_tiny_seed0.csv", "population_tiny_seed0.csv"]
    assert _contents(first) == _contents(second) == _contents(parallel)
    assert capsys.readouterr().out == ""


def test_seed_override_changes_the_run(setup_config_writer, setup_small_navigation_config, tmp_path):
    path = setup_config_writer(setup_small_navigation_config)
    assert main(["train", "-c", path, "-o", str(tmp_path / "a"), "-q"]) == EXIT_OK
    assert main(["train", "-c", path, "-o", str(tmp_path / "b"), "-q", "-s", "8"]) == EXIT_OK
    a, b = _contents(str(tmp_path / "a")), _contents(str(tmp_path / "b"))
    assert b"seed=8" in b["curves_tiny_seed0.csv"]
    assert a["population_tiny_seed0.csv"] != b["population_tiny_seed0.csv"]


def test_sweep_writes_one_curve_per_beam_count(setup_config_writer, setup_small_navigation_config, tmp_path):
    config = dict(setup_small_navigation_config,
                  experiment=dict(setup_small_navigation_config["experiment"], kind="sensor-sweep", generations=2),
                  sweep={"beam_counts": [1, 3]})
    out = str(tmp_path / "out")
    assert main(["sweep", "-c", setup_config_writer(config), "-o", out, "-q"]) == EXIT_OK
    curves = [f for f in _files(out) if f.startswith("curves_")]
    assert curves == ["curves_tiny_1beams_seed0.csv", "curves_tiny_3beams_seed0.csv"]
    assert b"# topology 1 6 2" in _contents(out)["champion_tiny_1beams_seed0.weights"]


def test_replay_writes_traces(setup_config_writer, setup_small_navigation_config, tmp_path, capsys):
    path = setup_config_writer(setup_small_navigation_config)
    out = str(tmp_path / "out")
    assert main(["train", "-c", path, "-o", out, "-q"]) == EXIT_OK
    assert main(["replay", "-c", path, "-o", out, "--track", "narrow"]) == EXIT_OK
    assert "track-narrow: fitness" in capsys.readouterr().out
    traces = [f for f in _files(out) if f.startswith("trace_")]
    assert traces == ["trace_replay_tiny_seed0_track-narrow.csv", "trace_replay_tiny_seed0_track.csv"]


def test_replay_without_weights(setup_config_writer, setup_small_navigation_config, tmp_path, capsys):
    path = setup_config_writer(setup_small_navigation_config)
    assert main(["replay", "-c", path, "-o", str(tmp_path / "empty")]) == EXIT_INVALID
    assert "weights file not found" in capsys.readouterr().err


def test_corrupt_weights_fail_the_run(setup_config_writer, setup_small_navigation_config, tmp_path, capsys):
    weights = tmp_path / "broken.weights"
    weights.write_text("# topology 5 6 2\n0.1\n0.2\n")
    path = setup_config_writer(setup_small_navigation_config)
    assert main(["replay", "-c", path, "-o", str(tmp_path), "--weights", str(weights)]) == EXIT_FAILED
    assert "replay failed" in capsys.readouterr().err


def test_population_broadcast_writes_both_rate_tables(setup_config_writer, setup_small_arena_config, tmp_path):
    config = dict(setup_small_arena_config,
                  experiment=dict(setup_small_arena_config["experiment"], kind="broadcast-population"),
                  broadcast={"learners": 2, "measure_seconds": 3, "training_seconds": 3, "source_strategy": "random"})
    out = str(tmp_path / "out")
    assert main(["broadcast", "-c", setup_config_writer(config), "-o", out, "-q"]) == EXIT_OK
    files = _files(out)
    assert "rates.csv" in files and "rates_champion.csv" in files
    assert "curves_tiny_ca_source_random_seed0.csv" in files
    assert b"learners=2" in _contents(out)["rates.csv"]


def test_champion_broadcast_summary(setup_config_writer, setup_small_arena_config, tmp_path, capsys):
    config = dict(setup_small_arena_config,
                  experiment=dict(setup_small_arena_config["experiment"], kind="broadcast-champion"),
                  broadcast={"learners": 2, "measure_seconds": 3, "source_strategy": "straight"})
    out = str(tmp_path / "out")
    assert main(["broadcast", "-c", setup_config_writer(config), "-o", out]) == EXIT_OK
    assert "champion broadcast: mean reduction" in capsys.readouterr().out
    assert "rates.csv" in _files(out)


def test_plots_are_written(setup_config_writer, setup_small_arena_config, tmp_path):
    config = dict(setup_small_arena_config,
                  experiment=dict(setup_small_arena_config["experiment"], kind="cross-eval"))
    out = str(tmp_path / "out")
    assert main(["cross-eval", "-c", setup_config_writer(config), "-o", out, "-q", "--plot"]) == EXIT_OK
    files = _files(out)
    assert "matrix.csv" in files and "matrix.png" in files
    assert open(os.path.join(out, "matrix.png"), "rb").read(8) == b"\x89PNG\r\n\x1a\n"


if __name__ == '__main__':
    pytest.main([__file__, "-v", "-s"])
