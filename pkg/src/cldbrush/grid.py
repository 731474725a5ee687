"""Randomized stroke-placement grids and seed generation.

Each rendering step lays a regular lattice over the image, jitters every
lattice point by an independent displacement, and pairs each surviving
position with a fill color sampled from the source image.
"""

from __future__ import annotations

import hashlib
import random
import struct
from dataclasses import dataclass
from enum import Enum

from .image import RgbImage

__all__ = [
    "RNG_ALGORITHM",
    "Position",
    "FillMode",
    "GridSpec",
    "StrokeSeed",
    "step_rng",
    "regular_grid",
    "sample_spacing",
    "displace_grid",
    "make_seeds",
]

# Recorded in run manifests so a render can be replayed byte-for-byte:
# per-step Mersenne Twister streams, split from the master seed by hashing
# the step index with BLAKE2b.
RNG_ALGORITHM = "mt19937/blake2b-step-split"

Position = tuple[int, int]


class FillMode(Enum):
    """Where a stroke's color is sampled from.

    DISPLACED paints the jittered position with the color of the original
    lattice point; NON_DISPLACED samples the color at the jittered position
    itself.
    """

    DISPLACED = "displaced"
    NON_DISPLACED = "nondisplaced"


@dataclass(frozen=True)
class GridSpec:
    """Tunables for the per-step grids.

    ``delta=None`` means each step uses ceil(s_k / 2), which keeps the jitter
    comparable to the lattice spacing.
    """

    step_count: int = 3
    spacing_min: int = 2
    spacing_max: int = 8
    delta: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.step_count < 1:
            raise ValueError(f"step_count must be >= 1, got {self.step_count}")
        if not (1 <= self.spacing_min <= self.spacing_max):
            raise ValueError(f"need 1 <= spacing_min <= spacing_max, got [{self.spacing_min}, {self.spacing_max}]")
        if self.delta is not None and self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")


@dataclass(frozen=True)
class StrokeSeed:
    """One brushstroke site: lattice position, jittered position, fill color."""

    base: Position
    placed: Position
    color: tuple[int, int, int]


def step_rng(seed: int, step: int) -> random.Random:
    """Independent per-step generator, split from the master seed.

    The step index is mixed into the 64-bit seed with BLAKE2b so streams for
    different steps share no structure; hashing keeps the split stable across
    processes.
    """
    payload = struct.pack("<QQ", seed & 0xFFFFFFFFFFFFFFFF, step & 0xFFFFFFFFFFFFFFFF)
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "little"))


def regular_grid(width: int, height: int, s_k: int) -> list[Position]:
    """Every lattice point (i*s_k, j*s_k) inside a width x height image.

    Multiples are counted from 1, then shifted to 0-based pixel coordinates;
    the result is in row-major order.
    """
    if s_k < 1:
        raise ValueError(f"grid spacing must be >= 1, got {s_k}")
    xs = range(s_k - 1, width, s_k)
    ys = range(s_k - 1, height, s_k)
    return [(x, y) for y in ys for x in xs]


def sample_spacing(spec: GridSpec, rng: random.Random) -> int:
    """Uniform integer draw from [spacing_min, spacing_max]."""
    return rng.randint(spec.spacing_min, spec.spacing_max)


def displace_grid(
    grid: list[Position],
    delta: int,
    width: int,
    height: int,
    rng: random.Random,
) -> list[Position | None]:
    """Jitter each position by independent integer offsets in [-delta, +delta].

    The output is aligned with the input; positions pushed outside the image
    rectangle are dropped and reported as None. Offsets are drawn x-then-y in
    grid order for every point, including dropped ones, so the stream is
    independent of image size.
    """
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    out: list[Position | None] = []
    for x, y in grid:
        dx = rng.randint(-delta, delta)
        dy = rng.randint(-delta, delta)
        nx, ny = x + dx, y + dy
        if 0 <= nx < width and 0 <= ny < height:
            out.append((nx, ny))
        else:
            out.append(None)
    return out


def make_seeds(
    img: RgbImage,
    base_grid: list[Position],
    displaced_grid: list[Position | None],
    mode: FillMode,
) -> list[StrokeSeed]:
    """Pair surviving jittered positions with their fill colors.

    Strokes are always drawn at the jittered position; the fill mode only
    decides which pixel the color comes from. Dropped positions contribute
    no seed.
    """
    if len(base_grid) != len(displaced_grid):
        raise ValueError("base and displaced grids must be in positional correspondence")
    px = img.pixels
    seeds: list[StrokeSeed] = []
    for base, placed in zip(base_grid, displaced_grid):
        if placed is None:
            continue
        sample_at = base if mode is FillMode.DISPLACED else placed
        r, g, b = px[sample_at[1], sample_at[0]]
        seeds.append(StrokeSeed(base=base, placed=placed, color=(int(r), int(g), int(b))))
    return seeds
