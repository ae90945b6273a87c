"""Command line: render one or more figure recipes.

    bjjplots render recipes/fig2.json --data-dir sample_data --out-dir out
"""

from __future__ import annotations

import argparse
import sys

from .readers import ParseError
from .render import render_to_file


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bjjplots", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("recipes", nargs="+", help="recipe JSON files")
    p.add_argument("--data-dir", default="sample_data")
    p.add_argument("--out-dir", default="figures")
    args = parser.parse_args(argv)

    try:
        for recipe in args.recipes:
            out = render_to_file(recipe, args.data_dir, args.out_dir)
            print(out)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
