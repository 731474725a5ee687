"""Coherence length diagrams: directional brightness statistics at a pixel.

For each of 32 directions, the coherence length is the smallest ray length
at which the mean brightness sampled along the ray enters a tolerance band
around the global mean. Short lengths mean the texture decorrelates quickly
in that direction; the 32-length profile captures local orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .image import GrayField

__all__ = [
    "DIRECTION_COUNT",
    "ZERO_MEAN_GUARD",
    "DirectionTable",
    "CldDiagram",
    "directions",
    "default_scan_limit",
    "local_moment",
    "coherence_length",
    "cld_at",
]

DIRECTION_COUNT = 32

# The relative tolerance test divides by the global mean; for an all-black
# image that mean is zero, so the comparison degrades to an absolute test
# against this many brightness units instead.
ZERO_MEAN_GUARD = 1.0

# cos/sin at the axis-aligned angles come out as ~1e-16 residue instead of 0;
# left alone, floor() would turn that residue into a spurious -1 pixel drift.
_SNAP_EPS = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class DirectionTable:
    """The 32 scan directions: angles i*(2*pi/32) and their unit vectors."""

    angles: np.ndarray
    unit_x: np.ndarray
    unit_y: np.ndarray


@lru_cache(maxsize=1)
def directions() -> DirectionTable:
    index = np.arange(DIRECTION_COUNT, dtype=np.float64)
    angles = index * (2.0 * math.pi / DIRECTION_COUNT)
    unit_x = np.cos(angles)
    unit_y = np.sin(angles)
    for arr in (unit_x, unit_y):
        snapped = np.rint(arr)
        near = np.abs(arr - snapped) < _SNAP_EPS
        arr[near] = snapped[near]
    return DirectionTable(_frozen(angles), _frozen(unit_x), _frozen(unit_y))


@lru_cache(maxsize=8)
def _offset_tables(l_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer sample offsets floor(r * cos), floor(r * sin), shape (32, l_max + 1)."""
    table = directions()
    r = np.arange(l_max + 1, dtype=np.float64)
    dx = np.floor(np.outer(table.unit_x, r)).astype(np.int64)
    dy = np.floor(np.outer(table.unit_y, r)).astype(np.int64)
    return _frozen(dx), _frozen(dy)


def default_scan_limit(width: int, height: int) -> int:
    """Longest useful scan: no ray stays in bounds past the image diagonal."""
    return max(1, math.ceil(math.hypot(width, height)))


@dataclass(frozen=True, eq=False)
class CldDiagram:
    """Per-direction coherence lengths at one pixel.

    ``defined[i]`` is False when the ray left the image (or hit the scan
    limit) before the tolerance band was entered; ``lengths[i]`` then holds
    the last fully in-bounds length explored, which can be 0 at a border
    pixel whose very first sample already falls outside.
    """

    center: tuple[int, int]
    lengths: np.ndarray
    defined: np.ndarray
    tau: float

    def __post_init__(self) -> None:
        lengths = np.asarray(self.lengths, dtype=np.int64)
        defined = np.asarray(self.defined, dtype=bool)
        if lengths.shape != (DIRECTION_COUNT,) or defined.shape != (DIRECTION_COUNT,):
            raise ValueError("diagram needs exactly one entry per direction")
        # defined directions need length >= 1, undefined ones >= 0
        if not (lengths >= defined).all():
            raise ValueError("defined directions need length >= 1, others >= 0")
        object.__setattr__(self, "lengths", _frozen(lengths))
        object.__setattr__(self, "defined", _frozen(defined))

    def total_length(self) -> int:
        return int(self.lengths.sum())


def _require_in_bounds(gray: GrayField, x: int, y: int) -> None:
    if not (0 <= x < gray.width and 0 <= y < gray.height):
        raise ValueError(f"pixel ({x}, {y}) outside {gray.width}x{gray.height} field")


def local_moment(gray: GrayField, x: int, y: int, direction: int, length: int) -> float | None:
    """Mean brightness of the length+1 ray samples, or None if the ray exits.

    Samples sit at (x + floor(r*cos), y + floor(r*sin)) for r = 0..length;
    the sum is divided by the sample count length + 1.
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    _require_in_bounds(gray, x, y)
    table = directions()
    ux = table.unit_x[direction]
    uy = table.unit_y[direction]
    values = gray.values
    width, height = gray.width, gray.height
    total = 0.0
    for r in range(length + 1):
        sx = x + math.floor(r * ux)
        sy = y + math.floor(r * uy)
        if not (0 <= sx < width and 0 <= sy < height):
            return None
        total += values[sy, sx]
    return total / (length + 1)


def coherence_length(
    gray: GrayField,
    m0: float,
    x: int,
    y: int,
    direction: int,
    tau: float,
    l_max: int | None = None,
) -> tuple[int, bool]:
    """Smallest ray length whose moment is within tau of the global mean.

    Returns ``(length, True)`` for the first length satisfying
    ``|moment - m0| <= tau * max(m0, ZERO_MEAN_GUARD)``. If the ray exits the
    image or the scan limit is hit first, returns the last fully in-bounds
    length explored with ``False``; that undefinedness is data, not an error.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    _require_in_bounds(gray, x, y)
    if l_max is None:
        l_max = default_scan_limit(gray.width, gray.height)
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    table = directions()
    ux = table.unit_x[direction]
    uy = table.unit_y[direction]
    values = gray.values
    width, height = gray.width, gray.height
    threshold = tau * max(m0, ZERO_MEAN_GUARD)
    total = values[y, x]
    for ell in range(1, l_max + 1):
        sx = x + math.floor(ell * ux)
        sy = y + math.floor(ell * uy)
        if not (0 <= sx < width and 0 <= sy < height):
            return ell - 1, False
        total += values[sy, sx]
        if abs(total / (ell + 1) - m0) <= threshold:
            return ell, True
    return l_max, False


@lru_cache(maxsize=32)
def _chunk_constants(cap: int) -> tuple[np.ndarray, np.ndarray]:
    divisors = _frozen(np.arange(1, cap + 2, dtype=np.float64))
    columns = _frozen(np.arange(cap + 1))
    return divisors, columns


@lru_cache(maxsize=8)
def _chunk_caps(l_max: int) -> tuple[int, ...]:
    caps: list[int] = []
    cap = 8
    while cap < l_max:
        caps.append(cap)
        cap *= 8
    caps.append(l_max)
    return tuple(caps)


def cld_at(
    gray: GrayField,
    m0: float,
    x: int,
    y: int,
    tau: float,
    l_max: int | None = None,
) -> CldDiagram:
    """Coherence lengths over all 32 directions at one pixel.

    Vectorized equivalent of calling :func:`coherence_length` per direction;
    rays are scanned in growing chunks so the common small-length case never
    touches the full diagonal-length tables.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    _require_in_bounds(gray, x, y)
    if l_max is None:
        l_max = default_scan_limit(gray.width, gray.height)
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")

    values = gray.values
    width, height = gray.width, gray.height
    threshold = tau * max(m0, ZERO_MEAN_GUARD)
    dx_all, dy_all = _offset_tables(l_max)

    lengths = np.zeros(DIRECTION_COUNT, dtype=np.int64)
    defined = np.zeros(DIRECTION_COUNT, dtype=bool)
    unresolved = None  # None: all directions still open (first chunk fast path)

    for cap in _chunk_caps(l_max):
        if unresolved is None:
            idx = None
            xs = x + dx_all[:, : cap + 1]
            ys = y + dy_all[:, : cap + 1]
        else:
            idx = np.flatnonzero(unresolved)
            if idx.size == 0:
                break
            xs = x + dx_all[idx, : cap + 1]
            ys = y + dy_all[idx, : cap + 1]

        in_bounds = (xs >= 0) & (xs < width) & (ys >= 0) & (ys < height)
        if in_bounds.all():
            first_out = None
            samples = values[ys, xs]
        else:
            out = ~in_bounds
            first_out = np.where(out.any(axis=1), out.argmax(axis=1), cap + 1)
            xs[out] = 0
            ys[out] = 0
            samples = values[ys, xs]

        divisors, columns = _chunk_constants(cap)
        means = samples.cumsum(axis=1)
        means /= divisors
        means -= m0
        ok = np.abs(means) <= threshold
        ok[:, 0] = False
        if first_out is not None:
            ok &= columns < first_out[:, None]

        found = ok.any(axis=1)
        if idx is None and first_out is None and found.all():
            # all 32 directions resolved in bounds within the first chunk
            return CldDiagram(center=(x, y), lengths=ok.argmax(axis=1), defined=np.ones(DIRECTION_COUNT, bool), tau=float(tau))

        if idx is None:
            idx = np.arange(DIRECTION_COUNT)
            unresolved = np.ones(DIRECTION_COUNT, dtype=bool)

        first_ok = ok.argmax(axis=1)
        lengths[idx[found]] = first_ok[found]
        defined[idx[found]] = True
        unresolved[idx[found]] = False

        if first_out is not None:
            exited = ~found & (first_out <= cap)
            lengths[idx[exited]] = first_out[exited] - 1
            unresolved[idx[exited]] = False
        else:
            exited = np.zeros(found.shape, dtype=bool)

        if cap == l_max:
            rest = ~found & ~exited
            lengths[idx[rest]] = l_max
            unresolved[idx[rest]] = False

    return CldDiagram(center=(x, y), lengths=lengths, defined=defined, tau=float(tau))
