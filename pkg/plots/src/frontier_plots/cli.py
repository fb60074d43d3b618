"""plot-frontier: render a frontier CSV (and optionally its trials) to an image.

Exit codes: 0 on success, 2 when the input is missing, malformed, or has no
drawable point.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=False)

import matplotlib.pyplot as plt

from .reader import CsvFormatError, read_points
from .render import NoSupportedPoints, build_figure

EXIT_OK = 0
EXIT_INPUT = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot-frontier",
        description="Plot a revenue vs OPE-error frontier from its CSV contract.",
    )
    parser.add_argument("--frontier", type=Path, required=True, help="frontier.csv to draw")
    parser.add_argument("--trials", type=Path, default=None, help="all_trials.csv backdrop")
    parser.add_argument("--out", type=Path, required=True, help="image file to write (.png, .svg, ...)")
    parser.add_argument(
        "--linear-y", action="store_true", help="linear error axis (default: log scale)"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        frontier = read_points(args.frontier)
        trials = read_points(args.trials) if args.trials is not None else None
        fig, info = build_figure(frontier, trials, log_y=not args.linear_y)
    except (OSError, CsvFormatError, NoSupportedPoints) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(args.out, dpi=150)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        plt.close(fig)
    dropped = info["frontier_dropped"] + info["trials_dropped"]
    extra = f", {dropped} unsupported point(s) dropped" if dropped else ""
    print(
        f"wrote {args.out}: {info['frontier_shown']} frontier points, "
        f"{info['trials_shown']} trial points{extra}"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
