"""Full-image rendering: disk-stamp baseline and coherence-shaped strokes.

Both renderers share the same seeded grid machinery; they differ only in the
stamp placed at each seed. Stroke application is sequential in a canonical
order (steps ascending, row-major within each step's lattice), so outputs
are byte-reproducible for a fixed configuration regardless of how many
worker threads compute the stroke shapes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .brush import DEFAULT_TRACE_DISTANCE, polygon_from_cld, scale_for_size, stroke_pixels
from .cld import cld_at, default_scan_limit
from .grid import (
    FillMode,
    GridSpec,
    StrokeSeed,
    displace_grid,
    make_seeds,
    regular_grid,
    sample_spacing,
    step_rng,
)
from .image import RgbImage, global_mean, to_gray

__all__ = [
    "RenderMode",
    "DefaultColor",
    "RenderConfig",
    "Canvas",
    "StrokeRecord",
    "RenderResult",
    "resolve_default",
    "render_cpb",
    "render_cpb_trace",
    "render_cldpb",
    "render_cldpb_trace",
]

WHITE = (255, 255, 255)


class RenderMode(Enum):
    CPB = "cpb"
    CLDPB = "cldpb"


@dataclass(frozen=True)
class DefaultColor:
    """Policy for pixels no stroke covered: white, the source pixel, or a blend."""

    kind: str
    weight: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("white", "source", "blend"):
            raise ValueError(f"unknown default-color policy {self.kind!r}")
        if self.kind == "blend":
            if self.weight is None or not (0.0 <= self.weight <= 1.0):
                raise ValueError(f"blend weight must be in [0, 1], got {self.weight}")
        elif self.weight is not None:
            raise ValueError(f"{self.kind!r} policy takes no weight")

    @classmethod
    def white(cls) -> "DefaultColor":
        return cls("white")

    @classmethod
    def source(cls) -> "DefaultColor":
        return cls("source")

    @classmethod
    def blend(cls, weight: float) -> "DefaultColor":
        return cls("blend", float(weight))

    @classmethod
    def parse(cls, text: str) -> "DefaultColor":
        if text == "white":
            return cls.white()
        if text == "source":
            return cls.source()
        if text.startswith("blend:"):
            return cls.blend(float(text.split(":", 1)[1]))
        raise ValueError(f"expected white, source, or blend:W, got {text!r}")

    def __str__(self) -> str:
        if self.kind == "blend":
            return f"blend:{self.weight!r}"
        return self.kind


@dataclass(frozen=True)
class RenderConfig:
    """Every tunable of a render.

    ``spacing_min``/``spacing_max`` of None derive the lattice spacing range
    from the stroke scale (target size for coherence strokes, radius for
    disks): [max(2, floor(scale)), 4 * max(2, floor(scale))]. ``delta=None``
    jitters by ceil(s_k / 2) per step.
    """

    mode: RenderMode = RenderMode.CLDPB
    tau: float = 0.2
    size: float = 2.0
    radius: float = 4.0
    steps: int = 3
    spacing_min: int | None = None
    spacing_max: int | None = None
    delta: int | None = None
    fill_mode: FillMode = FillMode.NON_DISPLACED
    default_color: DefaultColor = field(default_factory=DefaultColor.white)
    d0: float = DEFAULT_TRACE_DISTANCE
    seed: int = 0
    threads: int = 1
    cache: bool = True

    def __post_init__(self) -> None:
        if self.tau < 0.0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.size <= 0.0:
            raise ValueError(f"size must be > 0, got {self.size}")
        if self.radius <= 0.0:
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.d0 < 0.0:
            raise ValueError(f"d0 must be >= 0, got {self.d0}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")
        self.grid_spec()  # validates spacing bounds and delta

    def stroke_scale(self) -> float:
        return self.size if self.mode is RenderMode.CLDPB else self.radius

    def grid_spec(self) -> GridSpec:
        base = max(2, math.floor(self.stroke_scale()))
        spacing_min = base if self.spacing_min is None else self.spacing_min
        spacing_max = 4 * base if self.spacing_max is None else self.spacing_max
        return GridSpec(
            step_count=self.steps,
            spacing_min=spacing_min,
            spacing_max=spacing_max,
            delta=self.delta,
            seed=self.seed,
        )


@dataclass
class Canvas:
    """Mutable paint target: pixel colors plus a painted-yet flag per pixel."""

    pixels: np.ndarray
    coverage: np.ndarray

    @classmethod
    def blank(cls, width: int, height: int) -> "Canvas":
        return cls(
            pixels=np.zeros((height, width, 3), dtype=np.uint8),
            coverage=np.zeros((height, width), dtype=bool),
        )


@dataclass(frozen=True)
class StrokeRecord:
    """One applied stroke, for reports: which seed, at which step, how many pixels."""

    step: int
    seed: StrokeSeed
    pixels_painted: int


@dataclass
class RenderResult:
    image: RgbImage
    coverage: np.ndarray
    strokes: list[StrokeRecord]


def resolve_default(canvas: Canvas, policy: DefaultColor, source: RgbImage) -> RgbImage:
    """Fill every unpainted canvas pixel according to the default-color policy."""
    out = canvas.pixels.copy()
    unset = ~canvas.coverage
    if policy.kind == "white":
        out[unset] = WHITE
    elif policy.kind == "source":
        out[unset] = source.pixels[unset]
    else:
        w = policy.weight
        blended = np.floor(w * source.pixels.astype(np.float64) + (1.0 - w) * 255.0 + 0.5)
        out[unset] = blended.astype(np.uint8)[unset]
    return RgbImage(out)


def _stroke_seeds(img: RgbImage, cfg: RenderConfig) -> list[tuple[int, StrokeSeed]]:
    """All seeds in canonical order: steps ascending, row-major within a step."""
    spec = cfg.grid_spec()
    out: list[tuple[int, StrokeSeed]] = []
    for k in range(1, spec.step_count + 1):
        rng = step_rng(spec.seed, k)
        s_k = sample_spacing(spec, rng)
        base = regular_grid(img.width, img.height, s_k)
        delta = spec.delta if spec.delta is not None else math.ceil(s_k / 2)
        placed = displace_grid(base, delta, img.width, img.height, rng)
        for seed in make_seeds(img, base, placed, cfg.fill_mode):
            out.append((k, seed))
    return out


def _clip(xs: np.ndarray, ys: np.ndarray, width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    keep = (xs >= 0) & (xs < width) & (ys >= 0) & (ys < height)
    return xs[keep], ys[keep]


def _painted_count(xs: np.ndarray, ys: np.ndarray, width: int) -> int:
    if xs.size == 0:
        return 0
    return int(np.unique(ys * width + xs).size)


def render_cpb_trace(img: RgbImage, cfg: RenderConfig) -> RenderResult:
    """Disk-stamp render with per-stroke bookkeeping."""
    if cfg.mode is not RenderMode.CPB:
        raise ValueError(f"config mode is {cfg.mode}, expected CPB")
    width, height = img.width, img.height
    canvas = Canvas.blank(width, height)

    r = cfg.radius
    reach = int(math.floor(r))
    dy, dx = np.mgrid[-reach : reach + 1, -reach : reach + 1]
    inside = dx * dx + dy * dy <= r * r
    disk_dx = dx[inside].astype(np.int64)
    disk_dy = dy[inside].astype(np.int64)

    records: list[StrokeRecord] = []
    for step, seed in _stroke_seeds(img, cfg):
        px, py = seed.placed
        xs, ys = _clip(px + disk_dx, py + disk_dy, width, height)
        canvas.pixels[ys, xs] = seed.color
        canvas.coverage[ys, xs] = True
        records.append(StrokeRecord(step=step, seed=seed, pixels_painted=int(xs.size)))

    image = resolve_default(canvas, cfg.default_color, img)
    return RenderResult(image=image, coverage=canvas.coverage, strokes=records)


def render_cpb(img: RgbImage, cfg: RenderConfig) -> RgbImage:
    """Stamp a solid disk of fixed radius at every seed; fill leftovers per policy."""
    return render_cpb_trace(img, cfg).image


def render_cldpb_trace(img: RgbImage, cfg: RenderConfig) -> RenderResult:
    """Coherence-shaped stroke render with per-stroke bookkeeping.

    The gray field and its global mean come from the source image once, never
    from the evolving canvas. Stroke shapes are pure functions of the source,
    so they may be computed by a worker pool; application stays sequential in
    canonical order, keeping output bytes independent of the thread count.
    """
    if cfg.mode is not RenderMode.CLDPB:
        raise ValueError(f"config mode is {cfg.mode}, expected CLDPB")
    width, height = img.width, img.height
    gray = to_gray(img)
    m0 = global_mean(gray)
    l_max = default_scan_limit(width, height)
    entries = _stroke_seeds(img, cfg)
    memo: dict[tuple[int, int], object] | None = {} if cfg.cache else None

    def compute(entry: tuple[int, StrokeSeed]) -> tuple[np.ndarray, np.ndarray]:
        _, seed = entry
        pos = seed.placed
        diagram = memo.get(pos) if memo is not None else None
        if diagram is None:
            diagram = cld_at(gray, m0, pos[0], pos[1], cfg.tau, l_max)
            if memo is not None:
                memo[pos] = diagram
        if diagram.total_length() == 0:
            empty = np.empty(0, dtype=np.int64)
            return empty, empty
        alpha = scale_for_size(diagram, cfg.size)
        poly = polygon_from_cld(diagram, alpha)
        xs, ys = stroke_pixels(poly, cfg.d0)
        return _clip(xs, ys, width, height)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            shapes = list(pool.map(compute, entries, chunksize=64))
    else:
        shapes = [compute(entry) for entry in entries]

    canvas = Canvas.blank(width, height)
    records: list[StrokeRecord] = []
    for (step, seed), (xs, ys) in zip(entries, shapes):
        canvas.pixels[ys, xs] = seed.color
        canvas.coverage[ys, xs] = True
        records.append(StrokeRecord(step=step, seed=seed, pixels_painted=_painted_count(xs, ys, width)))

    image = resolve_default(canvas, cfg.default_color, img)
    return RenderResult(image=image, coverage=canvas.coverage, strokes=records)


def render_cldpb(img: RgbImage, cfg: RenderConfig) -> RgbImage:
    """Shape every stroke from the local coherence diagram at its seed."""
    return render_cldpb_trace(img, cfg).image
