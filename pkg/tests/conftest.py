from __future__ import annotations

import numpy as np
import pytest

from cldbrush import GrayField, RgbImage


def natural_image(width: int = 256, height: int = 256, seed: int = 7) -> RgbImage:
    """Deterministic photo-like test image: gradients, texture, hard edges."""
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    base = 120 + 55 * np.sin(x / 17.0) * np.cos(y / 23.0) + 30 * np.sin((x + y) / 31.0)
    r = np.hypot(x - width * 0.62, y - height * 0.41)
    disk = r < min(width, height) * 0.18
    bar = (x > width * 0.15) & (x < width * 0.22)
    ch_r = base + 40 * disk - 30 * bar + rng.normal(0, 5, base.shape)
    ch_g = base + 15 * np.cos(x / 11.0) - 25 * disk + 35 * bar + rng.normal(0, 5, base.shape)
    ch_b = 255 - base * 0.7 + 20 * np.sin(y / 13.0) + rng.normal(0, 5, base.shape)
    px = np.stack([ch_r, ch_g, ch_b], axis=2)
    # keep below pure white so painted-vs-default pixels stay separable
    return RgbImage(np.clip(px, 0, 250).astype(np.uint8))


def stripe_gray(width: int = 64, height: int = 64, period: int = 8) -> GrayField:
    """Vertical stripes: columns alternate black/white runs of period/2."""
    x = np.arange(width)
    col = np.where((x // (period // 2)) % 2 == 1, 255.0, 0.0)
    return GrayField(np.tile(col, (height, 1)))


def white_stripe_centers(width: int = 64, period: int = 8) -> list[int]:
    """x of the middle column of each white run, away from the image border."""
    half = period // 2
    centers = []
    for start in range(0, width, period):
        c = start + half + half // 2
        if half + 1 < c < width - half - 1:
            centers.append(c)
    return centers


def random_gray(rng: np.random.Generator, width: int, height: int) -> GrayField:
    return GrayField(rng.uniform(0.0, 255.0, size=(height, width)))


@pytest.fixture(scope="session")
def photo() -> RgbImage:
    return natural_image()


@pytest.fixture(scope="session")
def small_photo() -> RgbImage:
    return natural_image(width=64, height=64, seed=11)
