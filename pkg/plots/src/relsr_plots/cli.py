"""Entry points: one small argument parser per figure script."""

from __future__ import annotations

import argparse
import sys

from .figures import plot_kernel, plot_scan, plot_transient
from .io import CsvFormatError


def _parser(description: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("csvs", nargs="+", help="input CSV files")
    parser.add_argument(
        "--out", required=True, help="output base path; .svg and .png are written"
    )
    parser.add_argument(
        "--labels",
        help="comma-separated legend labels, one per input (default: from metadata)",
    )
    return parser


def _split_labels(raw):
    return [part.strip() for part in raw.split(",")] if raw else None


def _run(plot, args, **kw) -> int:
    try:
        written = plot(args.csvs, args.out, labels=_split_labels(args.labels), **kw)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


def main_kernel(argv=None) -> int:
    parser = _parser("Overlay squared kernel profiles from kernel CSVs.")
    return _run(plot_kernel, parser.parse_args(argv))


def main_transient(argv=None) -> int:
    parser = _parser("Overlay emission-rate transients from transient CSVs.")
    parser.add_argument(
        "--no-independent",
        action="store_true",
        help="omit the dashed independent-emitters reference",
    )
    args = parser.parse_args(argv)
    return _run(plot_transient, args, independent=not args.no_independent)


def main_scan(argv=None) -> int:
    parser = _parser("Overlay coherence-metric curves from scan CSVs.")
    return _run(plot_scan, parser.parse_args(argv))
