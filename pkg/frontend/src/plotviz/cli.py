"""plotviz command line: CSV in, image out."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, preset_spec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render a sweep CSV table to an image",
    )
    parser.add_argument("table", help="input CSV path")
    parser.add_argument("output", help="output image path")
    parser.add_argument("--figure", choices=("fig1", "fig2", "fig3"),
                        help="preset column selection and axis range")
    parser.add_argument("--columns", nargs="+",
                        help="explicit columns to draw (overrides --figure)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.columns:
        spec = FigureSpec(table=args.table, output=args.output,
                          columns=tuple(args.columns))
    elif args.figure:
        spec = preset_spec(args.figure, args.table, args.output)
    else:
        spec = FigureSpec(table=args.table, output=args.output)
    try:
        render(spec)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
