"""plotviz command line: one subcommand per figure id.

    plotviz fig1 --csv out/fig1.csv --out fig1.png
    plotviz fig3 --csv out/fig3.csv --format svg

Exit codes: 0 rendered, 2 schema or argument error (the message names the
offending column or file).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import PlotJob, SchemaError, render
from .schemas import FIGURES

EXIT_OK = 0
EXIT_SCHEMA = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render photonmix figure tables into images with "
        "numeric sidecar summaries.",
    )
    sub = parser.add_subparsers(dest="figure", required=True)
    for fig in FIGURES:
        p = sub.add_parser(fig, help=f"render a {fig} table")
        p.add_argument("--csv", required=True, help="input table from photonmix")
        p.add_argument("--out", help=f"image path (default {fig}.<format>)")
        p.add_argument("--format", choices=("png", "svg"), default="png")
        p.add_argument("--no-shade", action="store_true",
                       help="skip the nonclassical-region shading")
        p.add_argument("--no-errorbars", action="store_true",
                       help="draw plain markers instead of error bars")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = args.out or f"{args.figure}.{args.format}"
    if Path(out).suffix.lower() not in (".png", ".svg"):
        out = f"{out}.{args.format}"
    job = PlotJob(
        figure_id=args.figure,
        csv_path=args.csv,
        out_path=out,
        shade=not args.no_shade,
        errorbars=not args.no_errorbars,
    )
    try:
        image, sidecar, manifest = render(job)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    print(f"wrote {image} (+ {sidecar.name}, {manifest.name})")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
