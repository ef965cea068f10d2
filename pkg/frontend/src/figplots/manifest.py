"""Parsing of figure manifests and their curve CSVs.

A manifest is a flat key=value text file:

    figure=fig4
    title=...
    xlabel=t
    ylabel=success probability
    source=...
    curve=fig4_g10.csv|g = 10|solid-black
    curve=...

Style roles are one of solid-black, dashed-red, dotted-green, fit-overlay.
Curve files are plain CSVs with a header row; floats in scientific notation.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

STYLE_ROLES = ("solid-black", "dashed-red", "dotted-green", "fit-overlay")


class ManifestError(ValueError):
    """Manifest missing, malformed, or referencing absent curve files."""


@dataclass(frozen=True)
class CurveRef:
    filename: str
    label: str
    style: str


@dataclass(frozen=True)
class FigureManifest:
    figure_id: str
    title: str
    xlabel: str
    ylabel: str
    curves: Tuple[CurveRef, ...]
    directory: Path

    def curve_path(self, curve: CurveRef) -> Path:
        return self.directory / curve.filename


def load_manifest(path) -> FigureManifest:
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    fields: Dict[str, str] = {}
    curves: List[CurveRef] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ManifestError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        if key == "curve":
            parts = value.split("|")
            if len(parts) != 3:
                raise ManifestError(f"{path}:{lineno}: curve needs file|label|style")
            filename, label, style = parts
            if style not in STYLE_ROLES:
                raise ManifestError(f"{path}:{lineno}: unknown style role {style!r}")
            curves.append(CurveRef(filename, label, style))
        else:
            fields[key] = value
    for required in ("figure", "title", "xlabel", "ylabel"):
        if required not in fields:
            raise ManifestError(f"{path}: missing {required}=")
    if not curves:
        raise ManifestError(f"{path}: no curves listed")
    manifest = FigureManifest(
        figure_id=fields["figure"],
        title=fields["title"],
        xlabel=fields["xlabel"],
        ylabel=fields["ylabel"],
        curves=tuple(curves),
        directory=path.parent,
    )
    for curve in curves:
        if not manifest.curve_path(curve).is_file():
            raise ManifestError(f"{path}: curve file missing: {curve.filename}")
    return manifest


def read_curve(path) -> Tuple[List[str], List[List[float]]]:
    """Read one curve CSV; returns (header, rows) with floats parsed."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: empty curve file")
        rows = []
        for lineno, row in enumerate(reader, 2):
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise ManifestError(f"{path}:{lineno}: non-numeric cell in {row}")
    if not rows:
        raise ManifestError(f"{path}: no data rows")
    return header, rows
