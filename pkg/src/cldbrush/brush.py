"""Star-polygon brushstrokes and the fan-fill rasterizer.

A coherence diagram becomes a 32-vertex star polygon around its center, the
center is guaranteed to lie in the polygon's kernel, and the interior is
painted by fanning pixel-wide digital lines from points along each
center-to-vertex pivot segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cld import DIRECTION_COUNT, CldDiagram, directions

__all__ = [
    "DEFAULT_TRACE_DISTANCE",
    "StarPolygon",
    "scale_for_size",
    "polygon_from_cld",
    "min_trace_distance",
    "line_cells",
    "stroke_pixels",
    "fan_fill",
]

# Adjacent fan spokes are pi/16 apart, so they separate to two pixels at
# radius 2 / (pi/16) ~= 10.2; skipping the redundant near-center portions of
# all but the first line of each fan is harmless from there inward.
DEFAULT_TRACE_DISTANCE = 10.0

# Radius inside which the skip is provably lossless: a pixel on the bisector
# of two adjacent spokes sits rho * sin(pi/32) from the nearer one, and any
# cell whose center is within 0.5 px of a crossing segment is painted by the
# traversal, so rho <= 0.5 / sin(pi/32) ~= 5.10 guarantees spoke coverage.
_SAFE_SKIP_RADIUS = 0.5 / math.sin(math.pi / 32.0)


@dataclass(frozen=True, eq=False)
class StarPolygon:
    """32 vertices around a center that lies in the polygon's kernel.

    Vertex i sits at ``center + alpha * length_i * (cos, sin)`` of direction
    i; vertices are connected in ascending direction order, closing 31 -> 0.
    """

    center: tuple[int, int]
    vertices: np.ndarray
    alpha: float

    def __post_init__(self) -> None:
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.shape != (DIRECTION_COUNT, 2):
            raise ValueError(f"expected ({DIRECTION_COUNT}, 2) vertices, got {v.shape}")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)


def scale_for_size(cld: CldDiagram, size: float) -> float:
    """Scale factor alpha making the mean vertex distance equal ``size``."""
    if size <= 0.0:
        raise ValueError(f"target size must be > 0, got {size}")
    total = cld.total_length()
    if total <= 0:
        raise ValueError("cannot scale a diagram whose lengths sum to zero")
    return DIRECTION_COUNT * size / total


def polygon_from_cld(cld: CldDiagram, alpha: float) -> StarPolygon:
    """Place vertex i at center + alpha * length_i along direction i.

    Coordinates stay real-valued; rounding happens only at rasterization.
    Undefined directions use their clamped in-bounds length.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    table = directions()
    radii = alpha * cld.lengths.astype(np.float64)
    vx = cld.center[0] + radii * table.unit_x
    vy = cld.center[1] + radii * table.unit_y
    return StarPolygon(center=cld.center, vertices=np.stack([vx, vy], axis=1), alpha=float(alpha))


def min_trace_distance() -> float:
    """Default near-center cutoff radius for the fan-fill optimization."""
    return DEFAULT_TRACE_DISTANCE


def line_cells(x0: float, y0: float, x1: float, y1: float) -> list[tuple[int, int]]:
    """Every pixel whose cell the segment crosses, endpoints included.

    Pixel (i, j) owns the unit cell centered on it. The traversal never steps
    diagonally, so two nearby lines cannot straddle a pixel without painting
    it, and every reported pixel center lies within sqrt(2)/2 of the segment.
    """
    cx, cy = math.floor(x0 + 0.5), math.floor(y0 + 0.5)
    ex, ey = math.floor(x1 + 0.5), math.floor(y1 + 0.5)
    cells = [(cx, cy)]
    dx = x1 - x0
    dy = y1 - y0
    step_x = 1 if dx > 0 else -1
    step_y = 1 if dy > 0 else -1
    if dx != 0.0:
        t_max_x = ((cx + 0.5 * step_x) - x0) / dx
        t_dx = abs(1.0 / dx)
    else:
        t_max_x = t_dx = math.inf
    if dy != 0.0:
        t_max_y = ((cy + 0.5 * step_y) - y0) / dy
        t_dy = abs(1.0 / dy)
    else:
        t_max_y = t_dy = math.inf
    # float drift cannot stall the walk: bail out after the taxicab distance
    limit = abs(ex - cx) + abs(ey - cy) + 4
    steps = 0
    while (cx != ex or cy != ey) and steps < limit:
        if t_max_x < t_max_y:
            cx += step_x
            t_max_x += t_dx
        elif t_max_y < t_max_x:
            cy += step_y
            t_max_y += t_dy
        else:
            # exact corner crossing: take both cells, staying 4-connected
            cx += step_x
            t_max_x += t_dx
            cells.append((cx, cy))
            cy += step_y
            t_max_y += t_dy
        cells.append((cx, cy))
        steps += 1
    if cx != ex or cy != ey:
        cells.append((ex, ey))
    return cells


def stroke_pixels(poly: StarPolygon, d0: float) -> tuple[np.ndarray, np.ndarray]:
    """Every pixel the fan fill touches for this polygon, unclipped.

    For each consecutive vertex pair (a, a+1): the pivot segment from the
    center to vertex a+1 is divided into one-pixel steps, and a digital line
    runs from each step point to vertex a. The first line of every fan
    starts at the center itself and is always drawn in full; later lines
    skip pixels closer to the center than ``d0``.

    The effective skip radius is conservatively clamped to the shortest
    vertex distance (the always-drawn first lines must pass through the
    skipped region) and to ``_SAFE_SKIP_RADIUS`` (beyond it adjacent spokes
    spread more than a pixel apart and can miss cells). Inside the clamped
    radius the skip provably drops only pixels a first line already painted,
    so any ``d0`` produces the identical pixel set.

    Returns parallel x and y arrays; duplicates are allowed.
    """
    if d0 < 0.0:
        raise ValueError(f"d0 must be >= 0, got {d0}")
    ox, oy = poly.center
    verts = poly.vertices
    radii = np.hypot(verts[:, 0] - ox, verts[:, 1] - oy)
    r_skip = min(d0, float(radii.min()), _SAFE_SKIP_RADIUS)
    skip_sq = r_skip * r_skip
    xs: list[int] = []
    ys: list[int] = []
    for a in range(DIRECTION_COUNT):
        target_x, target_y = verts[a]
        nxt = verts[(a + 1) % DIRECTION_COUNT]
        seg_x = nxt[0] - ox
        seg_y = nxt[1] - oy
        n1 = max(1, math.ceil(math.hypot(seg_x, seg_y)))
        for t in range(n1 + 1):
            frac = t / n1
            pts = line_cells(ox + seg_x * frac, oy + seg_y * frac, target_x, target_y)
            if t >= 1 and r_skip > 0.0:
                pts = [(px, py) for px, py in pts if (px - ox) ** 2 + (py - oy) ** 2 >= skip_sq]
            for px, py in pts:
                xs.append(px)
                ys.append(py)
    return np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64)


def fan_fill(poly: StarPolygon, color: tuple[int, int, int], d0: float, canvas) -> None:
    """Paint the polygon's fan-fill pixels onto a canvas in one solid color.

    ``canvas`` needs uint8 ``pixels`` of shape (H, W, 3) and boolean
    ``coverage`` of shape (H, W); pixels outside the canvas are clipped
    silently. Later fills override earlier ones, so callers own the stroke
    order.
    """
    xs, ys = stroke_pixels(poly, d0)
    height, width = canvas.coverage.shape
    keep = (xs >= 0) & (xs < width) & (ys >= 0) & (ys < height)
    xs, ys = xs[keep], ys[keep]
    canvas.pixels[ys, xs] = color
    canvas.coverage[ys, xs] = True
