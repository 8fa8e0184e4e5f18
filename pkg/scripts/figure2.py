#!/usr/bin/env python3
"""99% recovery boundary: minimal N per sparsity level at d = 256.

Binary-searches the measurement count on a grid for each n and writes one
CSV row per sparsity.  Feed the output to ``plot_figures --kind boundary``.
"""

import argparse

from romp_kit.harness import ExperimentConfig, run_and_write


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=500, help="trials per probed cell")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--grid-step", type=int, default=4, help="N grid spacing")
    parser.add_argument("--out", default="figure2.csv")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    config = ExperimentConfig(
        experiment="boundary_99",
        dim=256,
        sparsities=(4, 8, 12, 16, 20, 24, 28, 32),
        ensemble="gaussian",
        signal_kind="flat",
        trials=args.trials,
        seed=args.seed,
        algorithm="romp",
        out=args.out,
        grid_step=args.grid_step,
        workers=args.workers,
    )
    print(f"wrote {run_and_write(config)}")


if __name__ == "__main__":
    main()
