"""Matplotlib renderer for figure manifests.

Strictly read-only over the datasets: every number in an image comes from the
CSV files, nothing is recomputed. Fit-overlay curves are drawn from the
(exponent, coefficient) rows emitted next to the scaling plots.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .manifest import FigureManifest, ManifestError, load_manifest, read_curve

#: style role -> matplotlib (linestyle, color)
ROLE_STYLES = {
    "solid-black": ("-", "black"),
    "dashed-red": ("--", "red"),
    "dotted-green": (":", "green"),
    "fit-overlay": ("--", "tab:blue"),
}


def _is_trajectory(header) -> bool:
    return header[:2] == ["t", "x"]


def _plot_data_curve(ax, manifest: FigureManifest, curve, header, rows):
    style, color = ROLE_STYLES[curve.style]
    data = np.asarray(rows)
    xs, ys = data[:, 0], data[:, 1]
    if _is_trajectory(header):
        ax.plot(xs, ys, linestyle=style, color=color, label=curve.label)
    else:
        # scaling series: scatter on log-log axes
        ax.plot(xs, ys, linestyle="none", marker="o", markersize=3,
                color=color, label=curve.label)
        ax.set_xscale("log")
        ax.set_yscale("log")
    return xs


def _plot_fit_overlay(ax, curve, header, rows, x_range):
    cols = {name: i for i, name in enumerate(header)}
    if "exponent" not in cols or "coefficient" not in cols:
        raise ManifestError(f"{curve.filename}: fit overlay needs exponent/coefficient columns")
    exponent = rows[0][cols["exponent"]]
    coefficient = rows[0][cols["coefficient"]]
    xs = np.geomspace(float(np.min(x_range)), float(np.max(x_range)), 200)
    style, color = ROLE_STYLES["fit-overlay"]
    ax.plot(xs, coefficient * xs**exponent, linestyle=style, color=color,
            linewidth=1, label=curve.label)


def render(manifest_path, out_path) -> Path:
    """Render one manifest to an image file; returns the output path."""
    manifest = load_manifest(manifest_path)
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        last_x = None
        for curve in manifest.curves:
            header, rows = read_curve(manifest.curve_path(curve))
            if curve.style == "fit-overlay":
                if last_x is None:
                    raise ManifestError(
                        f"{manifest.figure_id}: fit overlay before any data curve"
                    )
                _plot_fit_overlay(ax, curve, header, rows, last_x)
            else:
                last_x = _plot_data_curve(ax, manifest, curve, header, rows)
        ax.set_title(manifest.title, fontsize=10)
        ax.set_xlabel(manifest.xlabel)
        ax.set_ylabel(manifest.ylabel)
        ax.legend(fontsize=8)
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path, dpi=150)
    finally:
        plt.close(fig)
    return out_path


def render_to_axes(manifest_path, ax):
    """Render onto an existing Axes (for tests and embedding); no file output."""
    manifest = load_manifest(manifest_path)
    last_x = None
    for curve in manifest.curves:
        header, rows = read_curve(manifest.curve_path(curve))
        if curve.style == "fit-overlay":
            _plot_fit_overlay(ax, curve, header, rows, last_x)
        else:
            last_x = _plot_data_curve(ax, manifest, curve, header, rows)
    ax.legend()
    return manifest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figplots", description="Render a figure manifest to an image"
    )
    parser.add_argument("manifest", help="path to <figid>_manifest.txt")
    parser.add_argument("out", help="output image path (png/pdf/svg)")
    args = parser.parse_args(argv)
    try:
        path = render(args.manifest, args.out)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
