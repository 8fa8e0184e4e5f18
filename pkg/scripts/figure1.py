#!/usr/bin/env python3
"""Exact-recovery percentage versus measurement count at d = 256.

Sweeps N for several sparsity levels with flat signals and writes one CSV
row per (n, N) cell.  Feed the output to ``plot_figures --kind percent``.
"""

import argparse

from romp_kit.harness import ExperimentConfig, run_and_write


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=500, help="trials per cell")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--algo", default="romp", choices=("romp", "omp", "both"))
    parser.add_argument("--out", default="figure1.csv")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    config = ExperimentConfig(
        experiment="recovery_percent",
        dim=256,
        sparsities=(4, 12, 20, 28, 36),
        measurement_counts=tuple(range(32, 257, 16)),
        ensemble="gaussian",
        signal_kind="flat",
        trials=args.trials,
        seed=args.seed,
        algorithm=args.algo,
        out=args.out,
        workers=args.workers,
    )
    print(f"wrote {run_and_write(config)}")


if __name__ == "__main__":
    main()
