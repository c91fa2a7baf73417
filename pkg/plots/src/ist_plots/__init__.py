"""Offline figure generation from experiment result CSVs.

Couples only to the frozen CSV schema written by the experiment harness;
the harness itself is never imported.  Every figure writes a sidecar
``<out>.data.txt`` holding the aggregated table, byte-stable across runs.
"""

from .cli import FigureSpec, aggregate, main, render

__all__ = ["FigureSpec", "aggregate", "render", "main"]
