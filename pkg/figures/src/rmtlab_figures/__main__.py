"""Batch figure rendering from rmtlab CSV output.

    python -m rmtlab_figures <figure-id> --input <csv...> \
        --summary summary.json --output <path> [--png]
"""

from __future__ import annotations

import argparse
import sys

from .csvio import FigureInputError, load_config_hash
from .render import FIGURES, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="rmtlab_figures")
    parser.add_argument("figure", help="figure id, or 'list'")
    parser.add_argument("--input", nargs="+", default=[],
                        help="input CSV file(s), in the figure's order")
    parser.add_argument("--summary", help="summary.json of the producing run")
    parser.add_argument("--output", help="output image path")
    parser.add_argument("--png", action="store_true",
                        help="write PNG instead of SVG")
    args = parser.parse_args(argv)

    if args.figure == "list":
        for name, (_, inputs) in sorted(FIGURES.items()):
            print(f"{name}: inputs {inputs}")
        return 0
    if not args.input or not args.summary or not args.output:
        print("error: --input, --summary and --output are required",
              file=sys.stderr)
        return 2
    try:
        config_hash = load_config_hash(args.summary)
        render(args.figure, args.input, args.output, config_hash, png=args.png)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
