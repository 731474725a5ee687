"""Run reports: a delimited stroke table plus diagnostic figures.

Everything here is presentation; nothing feeds back into rendering.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .brush import StarPolygon
from .cld import CldDiagram, directions
from .image import RgbImage
from .render import RenderResult

__all__ = [
    "write_stroke_table",
    "save_comparison_figure",
    "save_coverage_figure",
    "save_stroke_area_figure",
    "save_diagram_figure",
    "write_report",
]


def write_stroke_table(path: Path, result: RenderResult) -> None:
    """One CSV row per applied stroke, in application order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "base_x", "base_y", "placed_x", "placed_y", "r", "g", "b", "pixels_painted"])
        for rec in result.strokes:
            writer.writerow([rec.step, *rec.seed.base, *rec.seed.placed, *rec.seed.color, rec.pixels_painted])


def save_comparison_figure(path: Path, source: RgbImage, result: RenderResult) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 4.5))
    for ax, data, title in zip(axes, (source.pixels, result.image.pixels), ("Source", "Rendered")):
        ax.imshow(data)
        ax.set_title(title)
        ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_coverage_figure(path: Path, result: RenderResult) -> None:
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(result.coverage, cmap="gray", vmin=0.0, vmax=1.0)
    covered = float(result.coverage.mean())
    ax.set_title(f"Stroke coverage ({covered:.1%} painted)")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_stroke_area_figure(path: Path, result: RenderResult) -> None:
    areas = [rec.pixels_painted for rec in result.strokes]
    fig, ax = plt.subplots(figsize=(6, 4))
    if areas:
        ax.hist(areas, bins=min(40, max(5, len(set(areas)))), color="#39688a")
    ax.set_xlabel("pixels painted per stroke")
    ax.set_ylabel("strokes")
    ax.set_title(f"Stroke areas ({len(areas)} strokes)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_diagram_figure(path: Path, diagram: CldDiagram, polygon: StarPolygon | None = None) -> None:
    """Ray plot of the 32 coherence lengths, optionally with the scaled stroke outline."""
    table = directions()
    cx, cy = diagram.center
    fig, ax = plt.subplots(figsize=(5, 5))
    for i in range(diagram.lengths.size):
        ex = cx + diagram.lengths[i] * table.unit_x[i]
        ey = cy + diagram.lengths[i] * table.unit_y[i]
        style = "-" if diagram.defined[i] else "--"
        color = "#39688a" if diagram.defined[i] else "#c45b4e"
        ax.plot([cx, ex], [cy, ey], style, color=color, linewidth=1.2)
    tips_x = cx + diagram.lengths * table.unit_x
    tips_y = cy + diagram.lengths * table.unit_y
    ax.plot(np.append(tips_x, tips_x[0]), np.append(tips_y, tips_y[0]), color="#666666", linewidth=0.8)
    if polygon is not None:
        closed = np.vstack([polygon.vertices, polygon.vertices[:1]])
        ax.plot(closed[:, 0], closed[:, 1], color="#222222", linewidth=1.5, label=f"stroke (alpha={polygon.alpha:.3g})")
        ax.legend(loc="upper right", fontsize=8)
    ax.plot([cx], [cy], "k.", markersize=6)
    ax.set_aspect("equal")
    ax.invert_yaxis()  # image coordinates: y grows downward
    ax.set_title(f"Coherence lengths at ({cx}, {cy}), tau={diagram.tau:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(
    out_dir: Path,
    source: RgbImage,
    result: RenderResult,
    diagram: CldDiagram | None = None,
    polygon: StarPolygon | None = None,
) -> list[Path]:
    """Write the stroke table and all figures into ``out_dir``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    table = out_dir / "strokes.csv"
    write_stroke_table(table, result)
    written.append(table)

    comparison = out_dir / "comparison.png"
    save_comparison_figure(comparison, source, result)
    written.append(comparison)

    coverage = out_dir / "coverage.png"
    save_coverage_figure(coverage, result)
    written.append(coverage)

    areas = out_dir / "stroke_areas.png"
    save_stroke_area_figure(areas, result)
    written.append(areas)

    if diagram is not None:
        cx, cy = diagram.center
        fig_path = out_dir / f"cld_{cx}_{cy}.png"
        save_diagram_figure(fig_path, diagram, polygon)
        written.append(fig_path)

    return written
