import csv
import json

import pytest

from romp_kit.cli import build_parser, main


def read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.reader(handle))


def test_parser_accepts_full_flag_set(tmp_path):
    args = build_parser().parse_args(
        [
            "run", "recovery_percent",
            "--d", "64", "--n", "2,4", "--N", "24,48",
            "--signal", "both", "--algo", "omp", "--ensemble", "bernoulli",
            "--p", "0.7", "--trials", "9", "--seed", "5",
            "--out", str(tmp_path / "r.csv"), "--workers", "2",
            "--matrix-per-trial", "--grid-step", "8",
        ]
    )
    assert args.experiment == "recovery_percent"
    assert args.d == 64
    assert args.n == (2, 4)
    assert args.N == (24, 48)
    assert args.matrix_per_trial is True
    assert args.grid_step == 8


def test_parser_rejects_unknown_experiment():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["run", "phase_portrait", "--d", "8"])
    assert exc.value.code == 2


def test_parser_rejects_malformed_int_list():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["run", "recovery_percent", "--n", "2,x"])


def test_main_runs_and_reports_row_count(tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = main(
        [
            "run", "recovery_percent",
            "--d", "64", "--n", "2", "--N", "24,48",
            "--trials", "3", "--out", str(out),
        ]
    )
    assert code == 0
    assert f"wrote 2 rows to {out}" in capsys.readouterr().out
    assert out.exists()
    assert out.with_suffix(".json").exists()
    assert len(read_csv(out)) == 3


def test_main_reads_config_file(tmp_path):
    out = tmp_path / "cfg.csv"
    config = tmp_path / "job.toml"
    config.write_text(
        "\n".join(
            [
                'experiment = "recovery_percent"',
                "d = 64",
                "n = [2]",
                "N = [32]",
                "trials = 2",
                f'out = "{out}"',
            ]
        )
    )
    assert main(["run", "--config", str(config)]) == 0
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["config"]["dim"] == 64
    assert sidecar["config"]["trials"] == 2


def test_flags_override_config_file(tmp_path):
    out = tmp_path / "override.csv"
    config = tmp_path / "job.toml"
    config.write_text(
        "\n".join(
            [
                'experiment = "recovery_percent"',
                "d = 64",
                "n = [2]",
                "N = [32]",
                "trials = 2",
                "seed = 11",
                f'out = "{out}"',
            ]
        )
    )
    assert main(["run", "--config", str(config), "--seed", "99", "--trials", "1"]) == 0
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["config"]["seed"] == 99
    assert sidecar["config"]["trials"] == 1
    assert sidecar["config"]["dim"] == 64


def test_unknown_config_key_fails_cleanly(tmp_path, capsys):
    config = tmp_path / "job.toml"
    config.write_text('experiment = "recovery_percent"\nd = 64\nn = [2]\nbogus = 1\n')
    assert main(["run", "--config", str(config)]) == 2
    assert "bogus" in capsys.readouterr().err


def test_missing_measurement_counts_fails_cleanly(tmp_path, capsys):
    assert main(["run", "recovery_percent", "--d", "64", "--n", "2"]) == 2
    assert "measurement count" in capsys.readouterr().err


def test_scalar_config_values_promote_to_lists(tmp_path):
    out = tmp_path / "scalar.csv"
    config = tmp_path / "job.toml"
    config.write_text(
        f'experiment = "recovery_percent"\nd = 64\nn = 2\nN = 32\ntrials = 1\nout = "{out}"\n'
    )
    assert main(["run", "--config", str(config)]) == 0
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["config"]["sparsities"] == [2]
    assert sidecar["config"]["measurement_counts"] == [32]


def test_experiment_required_from_somewhere(tmp_path, capsys):
    config = tmp_path / "job.toml"
    config.write_text("d = 64\nn = [2]\nN = [32]\n")
    assert main(["run", "--config", str(config)]) == 2
