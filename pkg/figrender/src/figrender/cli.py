"""Command-line entry point: flags in, one PNG out."""
from __future__ import annotations

import argparse
import sys

from . import CsvFormatError, FigureSpec, MEASURE_COLUMNS, render

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures exit with code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="figrender", description=__doc__)
    p.add_argument("--input", required=True, help="scan CSV with the measure and b_max columns")
    p.add_argument("--measure", required=True, choices=tuple(MEASURE_COLUMNS))
    p.add_argument("--boundary", help="optional frontier polyline CSV (family sweep or binned)")
    p.add_argument("--out", required=True, help="output PNG path")
    p.add_argument("--dpi", type=int, default=150)
    p.add_argument("--xlabel", help="override the x axis label")
    p.add_argument("--ylabel", help="override the y axis label")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.dpi < 1:
        parser.error("--dpi must be >= 1")
    spec = FigureSpec(
        input_csv=args.input,
        measure=args.measure,
        output=args.out,
        boundary_csv=args.boundary,
        dpi=args.dpi,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
    )
    try:
        res = render(spec)
    except (CsvFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    boundary = f", boundary {res.boundary_points} points" if res.boundary_points else ""
    print(
        f"wrote {args.out}: {res.points_plotted}/{res.points_total} points{boundary}"
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
