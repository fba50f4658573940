"""Figure assembly: overlay CSV series and write SVG + PNG pairs."""

from __future__ import annotations

import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .io import CsvFormatError, read_result_csv

KERNEL_HEADER = ["q", "re_c", "im_c", "abs_c_sq"]
TRANSIENT_HEADER = [
    "q", "rho_ee", "rho_1", "rho_gg", "trace", "rate", "rate_independent"
]
SCAN_HEADER = ["delta_v", "g"]


@dataclass(frozen=True)
class FigureSpec:
    """One figure: the (csv path, label) series, axes, and output base."""

    series: list
    x_label: str
    y_label: str
    out_base: str


def _strip_known_extension(path: str) -> str:
    base, ext = os.path.splitext(path)
    return base if ext.lower() in (".svg", ".png") else path


def _save_both(fig, out_base: str) -> list[str]:
    base = _strip_known_extension(out_base)
    written = []
    for ext in ("svg", "png"):
        target = f"{base}.{ext}"
        fig.savefig(target, format=ext, bbox_inches="tight")
        written.append(target)
    return written


def _meta_float(table, key: str) -> float:
    try:
        return float(table.meta.get(key, "nan"))
    except ValueError:
        return float("nan")


def _resolve_labels(tables, labels, meta_key: str, symbol: str):
    """Explicit labels if given, else read the key off each metadata line."""
    if labels is not None:
        if len(labels) != len(tables):
            raise CsvFormatError(
                f"got {len(labels)} labels for {len(tables)} input files"
            )
        return list(labels)
    out = []
    for table in tables:
        value = table.meta.get(meta_key)
        out.append(f"{symbol} = {value}" if value is not None else table.path)
    return out


def _sort_by_meta(tables, labels, key: str):
    order = sorted(range(len(tables)), key=lambda j: (_meta_float(tables[j], key), j))
    return [tables[j] for j in order], [labels[j] for j in order]


def _draw(spec: FigureSpec, tables, x_col: str, y_col: str, decorate=None):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        for table, (_, label) in zip(tables, spec.series):
            ax.plot(table.column(x_col), table.column(y_col), label=label)
        if decorate is not None:
            decorate(ax, tables)
        ax.set_xlabel(spec.x_label)
        ax.set_ylabel(spec.y_label)
        ax.legend()
        return _save_both(fig, spec.out_base)
    finally:
        plt.close(fig)


def plot_kernel(csv_paths, out_base: str, labels=None) -> list[str]:
    """Overlay squared kernel magnitude against q, one curve per file.

    Legend entries default to the beta recorded in each file's metadata
    and the curves are drawn in ascending beta order.
    """
    tables = [read_result_csv(p, KERNEL_HEADER) for p in csv_paths]
    labels = _resolve_labels(tables, labels, "beta", r"$\beta$")
    tables, labels = _sort_by_meta(tables, labels, "beta")
    spec = FigureSpec(
        series=[(t.path, lab) for t, lab in zip(tables, labels)],
        x_label="q",
        y_label=r"$|C|^2$",
        out_base=out_base,
    )
    return _draw(spec, tables, "q", "abs_c_sq")


def plot_transient(
    csv_paths, out_base: str, labels=None, independent: bool = True
) -> list[str]:
    """Emission rate against q, one curve per file.

    With independent=True the first file's two-independent-emitters
    column is added as a dashed reference curve.
    """
    tables = [read_result_csv(p, TRANSIENT_HEADER) for p in csv_paths]
    labels = _resolve_labels(tables, labels, "delta_v", r"$\delta$")
    spec = FigureSpec(
        series=[(t.path, lab) for t, lab in zip(tables, labels)],
        x_label="q",
        y_label="emission rate",
        out_base=out_base,
    )

    def add_reference(ax, drawn):
        if independent:
            ax.plot(
                drawn[0].column("q"),
                drawn[0].column("rate_independent"),
                linestyle="--",
                color="black",
                label="independent",
            )

    return _draw(spec, tables, "q", "rate", decorate=add_reference)


def plot_scan(csv_paths, out_base: str, labels=None) -> list[str]:
    """Coherence metric G against delta, one curve per file, by beta."""
    tables = [read_result_csv(p, SCAN_HEADER) for p in csv_paths]
    labels = _resolve_labels(tables, labels, "beta", r"$\beta$")
    tables, labels = _sort_by_meta(tables, labels, "beta")
    spec = FigureSpec(
        series=[(t.path, lab) for t, lab in zip(tables, labels)],
        x_label=r"$\delta$",
        y_label="G",
        out_base=out_base,
    )

    def add_half_line(ax, drawn):
        del drawn  # the half-maximum guide does not depend on the data
        ax.axhline(0.5, linestyle=":", linewidth=0.8, color="gray")

    return _draw(spec, tables, "delta_v", "g", decorate=add_half_line)
