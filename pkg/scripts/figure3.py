#!/usr/bin/env python3
"""Iteration counts versus sparsity at d = 10,000 with N = 200.

Runs flat and compressible (p = 0.5) signals over a sparsity grid and
writes one CSV row per (n, kind).  Feed the output to
``plot_figures --kind iterations``.
"""

import argparse

from romp_kit.harness import ExperimentConfig, run_and_write


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=500, help="trials per cell")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--p", type=float, default=0.5, help="compressible decay exponent")
    parser.add_argument("--out", default="figure3.csv")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    config = ExperimentConfig(
        experiment="iteration_count",
        dim=10_000,
        sparsities=(4, 12, 20, 28, 36, 40),
        measurement_counts=(200,),
        ensemble="gaussian",
        signal_kind="both",
        p=args.p,
        trials=args.trials,
        seed=args.seed,
        algorithm="romp",
        out=args.out,
        workers=args.workers,
    )
    print(f"wrote {run_and_write(config)}")


if __name__ == "__main__":
    main()
