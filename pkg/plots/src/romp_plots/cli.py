"""Command line entry point: ``plot_figures --kind <kind> --in a.csv --out fig.png``."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, SchemaError, read_rows, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot_figures",
        description="Render a figure from a results CSV.",
    )
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="input", required=True, help="results CSV path")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title")
    parser.add_argument("--xlabel")
    parser.add_argument("--ylabel")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows = read_rows(args.input)
        spec = FigureSpec(
            kind=args.kind, title=args.title, xlabel=args.xlabel, ylabel=args.ylabel
        )
        summary = render(rows, spec, args.out)
    except (SchemaError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"rendered {args.kind} figure with {len(summary['series'])} series to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
