"""`render_figs <csv-dir> <out-dir> [--formats png,svg]`

Renders every recognized sweep CSV found in <csv-dir> (fig2.csv, fig3a.csv,
fig3b.csv, fig4.csv; custom.csv is rendered with the fig2 layout) into one
image per requested format. Exit codes: 0 success, 2 bad input data
(schema mismatch / empty input / nothing recognized), 4 I/O error.
"""

import argparse
import os
import sys

from .errors import FigscriptsError
from .figures import FIGURE_SPECS, build_figure, save_figure
from .reader import load_csv, load_sidecar

EXIT_OK = 0
EXIT_DATA = 2
EXIT_IO = 4

#: csv stem -> figure layout
RECOGNIZED = {
    "fig2": "fig2",
    "fig3a": "fig3a",
    "fig3b": "fig3b",
    "fig4": "fig4",
    "custom": "fig2",
}


def _log(msg):
    print(msg, file=sys.stderr)


def render_dir(csv_dir, out_dir, formats):
    """Render all recognized CSVs; returns the list of written image paths."""
    written = []
    os.makedirs(out_dir, exist_ok=True)
    for stem, figure_id in RECOGNIZED.items():
        csv_path = os.path.join(csv_dir, stem + ".csv")
        if not os.path.exists(csv_path):
            continue
        data = load_csv(csv_path)
        sidecar = load_sidecar(csv_path)
        for fmt in formats:
            fig = build_figure(figure_id, data, sidecar=sidecar)
            out_path = os.path.join(out_dir, f"{stem}.{fmt}")
            save_figure(fig, out_path)
            written.append(out_path)
            _log(f"{csv_path} -> {out_path}")
    return written


def build_parser():
    parser = argparse.ArgumentParser(
        prog="render_figs",
        description="Regenerate figures from sweep CSV output")
    parser.add_argument("csv_dir", help="directory containing sweep CSV files")
    parser.add_argument("out_dir", help="directory for rendered images")
    parser.add_argument("--formats", default="png",
                        help="comma-separated image formats (default: png)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    if not formats:
        _log("error: no output formats given")
        return EXIT_DATA
    try:
        written = render_dir(args.csv_dir, args.out_dir, formats)
    except FigscriptsError as exc:
        _log(f"error: {exc}")
        return EXIT_DATA
    except OSError as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO
    if not written:
        _log(f"error: no recognized CSV files in {args.csv_dir} "
             f"(expected one of: {', '.join(s + '.csv' for s in RECOGNIZED)})")
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
