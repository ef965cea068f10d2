"""Renders nlwalk figure datasets (CSV curves + manifest) into images."""

from .manifest import CurveRef, FigureManifest, ManifestError, load_manifest, read_curve
from .render import render, render_to_axes

__version__ = "0.1.0"
