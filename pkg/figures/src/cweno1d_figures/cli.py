"""Command-line front end: render one figure from a directory of tables."""

import argparse
import sys

from .recipes import RECIPES, render
from .tables import FigureDataError


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; argparse would use 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="cweno1d-figures",
                     description="Render figures from cweno1d CSV output.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    p = sub.add_parser("render", help="render one figure to a PNG")
    p.add_argument("--fig", required=True, choices=sorted(RECIPES))
    p.add_argument("--in", dest="in_dir", required=True,
                   help="directory holding the input CSV files")
    p.add_argument("--out", dest="out_dir", required=True,
                   help="directory the PNG is written into")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        path = render(args.fig, args.in_dir, args.out_dir)
    except (FigureDataError, OSError) as exc:
        print(f"cweno1d-figures: error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
