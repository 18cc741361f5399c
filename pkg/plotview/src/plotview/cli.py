"""``render`` entry point: one CSV in, one image file out.

Exit codes: 0 success, 2 schema/configuration error.  No output file is
written when the input is rejected.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from .figures import render
from .schema import SCHEMAS, SchemaError, read_table


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render micromacro sweep CSVs into publication-style figures.",
    )
    parser.add_argument("--kind", required=True,
                        choices=("fig2", "fig3", "fig4", "fig5", "remote"))
    parser.add_argument("--in", dest="infile", required=True, help="input CSV path")
    parser.add_argument("--tbal", default=None,
                        help="companion balanced-transmission CSV (fig5 overlay)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default=None)
    return parser


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    rows = read_table(args.infile, args.kind)
    overlay = None
    if args.tbal is not None:
        if args.kind != "fig5":
            raise SchemaError("--tbal overlay applies to --kind fig5 only")
        overlay = read_table(args.tbal, "fig5_tbal")
    fig = render(args.kind, rows, overlay_rows=overlay, title=args.title)
    try:
        fig.savefig(args.out)
    finally:
        plt.close(fig)
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except SchemaError as exc:
        print(f"render: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
