"""Command line entry point: ``romp-kit run <experiment> [options]``.

Settings come from an optional TOML file (``--config``) overridden by
flags.  TOML keys use the same vocabulary as the flags: ``experiment``,
``d``, ``n``, ``N``, ``ensemble``, ``signal``, ``p``, ``trials``,
``seed``, ``algo``, ``out``, ``workers``, ``matrix_per_trial``,
``grid_step``.  The experiment may be named positionally or in the file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .ensembles import ENSEMBLES
from .harness import (
    ALGORITHMS,
    EXPERIMENTS,
    SIGNAL_KINDS,
    ExperimentConfig,
    run_experiment,
    write_rows,
)

# Interface vocabulary -> ExperimentConfig field names.
_KEY_MAP = {
    "experiment": "experiment",
    "d": "dim",
    "n": "sparsities",
    "N": "measurement_counts",
    "signal": "signal_kind",
    "algo": "algorithm",
    "ensemble": "ensemble",
    "p": "p",
    "trials": "trials",
    "seed": "seed",
    "out": "out",
    "workers": "workers",
    "matrix_per_trial": "matrix_per_trial",
    "grid_step": "grid_step",
}
_LIST_FIELDS = ("sparsities", "measurement_counts")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _load_toml(path: Path) -> dict:
    with path.open("rb") as handle:
        raw = tomllib.load(handle)
    settings = {}
    for key, value in raw.items():
        field = _KEY_MAP.get(key)
        if field is None:
            raise ValueError(f"unknown config key {key!r} in {path}")
        settings[field] = value
    return settings


def _normalize(settings: dict) -> dict:
    for field in _LIST_FIELDS:
        if field in settings:
            value = settings[field]
            settings[field] = (value,) if isinstance(value, int) else tuple(value)
    if "out" in settings:
        settings["out"] = str(settings["out"])
    return settings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="romp-kit",
        description="Sparse recovery experiments with regularized matching pursuit.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    run = commands.add_parser("run", help="run an experiment grid and write CSV results")
    run.add_argument(
        "experiment", nargs="?", choices=EXPERIMENTS,
        help="experiment name; may come from the config file instead",
    )
    run.add_argument("--config", type=Path, help="TOML file with experiment settings")
    run.add_argument("--d", type=int, help="ambient dimension")
    run.add_argument("--n", type=_int_list, help="sparsity levels, comma separated")
    run.add_argument("--N", type=_int_list, help="measurement counts, comma separated")
    run.add_argument("--trials", type=int, help="trials per cell")
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--ensemble", choices=ENSEMBLES)
    run.add_argument("--signal", choices=SIGNAL_KINDS)
    run.add_argument("--p", type=float, help="decay exponent for compressible signals")
    run.add_argument("--algo", choices=ALGORITHMS)
    run.add_argument("--out", help="output CSV path")
    run.add_argument("--workers", type=int, help="parallel workers over cells")
    run.add_argument(
        "--matrix-per-trial", action="store_true", default=None,
        help="draw a fresh matrix per trial instead of per cell",
    )
    run.add_argument("--grid-step", type=int, help="N grid spacing for boundary_99")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings: dict = {}
        if args.config is not None:
            settings = _load_toml(args.config)
        overrides = {
            "d": args.d,
            "n": args.n,
            "N": args.N,
            "trials": args.trials,
            "seed": args.seed,
            "ensemble": args.ensemble,
            "signal": args.signal,
            "p": args.p,
            "algo": args.algo,
            "out": args.out,
            "workers": args.workers,
            "matrix_per_trial": args.matrix_per_trial,
            "grid_step": args.grid_step,
        }
        for key, value in overrides.items():
            if value is not None:
                settings[_KEY_MAP[key]] = value
        if args.experiment is not None:
            settings["experiment"] = args.experiment
        if "experiment" not in settings:
            raise ValueError("no experiment given on the command line or in the config file")
        settings = _normalize(settings)
        config = ExperimentConfig(**settings)
        rows = run_experiment(config)
        out = write_rows(rows, config.out, config)
    except (ValueError, TypeError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {len(rows)} rows to {out}")
    return 0
