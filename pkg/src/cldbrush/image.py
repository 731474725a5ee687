"""Image containers, grayscale brightness, and lossless PNG/PPM I/O.

Positions are (x, y) with x indexing columns and y indexing rows; storage is
0-based row-major, so numpy arrays are indexed ``[y, x]``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

__all__ = [
    "RgbImage",
    "GrayField",
    "UnsupportedFormatError",
    "CorruptImageError",
    "to_gray",
    "global_mean",
    "load_image",
    "save_image",
]

SUPPORTED_EXTENSIONS = (".png", ".ppm")


class UnsupportedFormatError(ValueError):
    """File extension or container variant is not one we read or write."""


class CorruptImageError(ValueError):
    """File looks like a supported format but its data cannot be decoded."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = arr.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class RgbImage:
    """8-bit three-channel raster; ``pixels`` has shape (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise ValueError(f"pixels must have shape (H, W, 3), got {px.shape}")
        if px.dtype != np.uint8:
            raise ValueError(f"pixels must be uint8, got {px.dtype}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must contain at least one pixel")
        object.__setattr__(self, "pixels", _frozen(px))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def constant(cls, width: int, height: int, color: tuple[int, int, int]) -> "RgbImage":
        px = np.empty((height, width, 3), dtype=np.uint8)
        px[:, :] = color
        return cls(px)


@dataclass(frozen=True, eq=False)
class GrayField:
    """Real-valued brightness raster in [0, 255]; ``values`` is (height, width)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.ndim != 2:
            raise ValueError(f"values must be 2-D, got shape {v.shape}")
        if v.dtype != np.float64:
            raise ValueError(f"values must be float64, got {v.dtype}")
        if v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("field must contain at least one value")
        if not np.all(np.isfinite(v)) or v.min() < 0.0 or v.max() > 255.0:
            raise ValueError("brightness values must lie in [0.0, 255.0]")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


def to_gray(img: RgbImage) -> GrayField:
    """Per-pixel arithmetic mean of the three channels, kept as a real number."""
    values = img.pixels.astype(np.float64).sum(axis=2) / 3.0
    return GrayField(values)


def global_mean(gray: GrayField) -> float:
    """Mean brightness over the whole field."""
    return float(gray.values.sum() / gray.values.size)


def _parse_ppm(data: bytes) -> np.ndarray:
    pos = 0

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            c = data[pos : pos + 1]
            if c == b"#":
                while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                    pos += 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise CorruptImageError("unexpected end of PPM header")
        return data[start:pos]

    magic = next_token()
    if magic != b"P6":
        if len(magic) == 2 and magic.startswith(b"P"):
            raise UnsupportedFormatError(f"only binary P6 PPM is supported, got {magic.decode('ascii', 'replace')}")
        raise CorruptImageError("not a PPM file")
    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError as exc:
        raise CorruptImageError(f"malformed PPM header: {exc}") from exc
    if width < 1 or height < 1:
        raise CorruptImageError(f"invalid PPM dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedFormatError(f"only maxval 255 PPM is supported, got {maxval}")
    pos += 1  # single whitespace byte between header and raster
    need = width * height * 3
    raw = data[pos : pos + need]
    if len(raw) < need:
        raise CorruptImageError(f"truncated PPM raster: expected {need} bytes, got {len(raw)}")
    return np.frombuffer(raw, dtype=np.uint8).reshape(height, width, 3).copy()


def _encode_ppm(pixels: np.ndarray) -> bytes:
    height, width = pixels.shape[:2]
    header = f"P6\n{width} {height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(pixels).tobytes()


def _decode_png(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as im:
            im.load()
            if "A" in im.getbands() or (im.mode == "P" and "transparency" in im.info):
                # alpha is composited over white
                rgba = im.convert("RGBA")
                background = Image.new("RGBA", rgba.size, (255, 255, 255, 255))
                im = Image.alpha_composite(background, rgba)
            rgb = im.convert("RGB")
            return np.asarray(rgb, dtype=np.uint8).copy()
    except UnidentifiedImageError as exc:
        raise CorruptImageError(f"not a decodable PNG: {exc}") from exc
    except OSError as exc:
        raise CorruptImageError(f"corrupt PNG data: {exc}") from exc


def load_image(path: str | Path) -> RgbImage:
    """Decode a PNG or binary PPM file, chosen by extension.

    Raises FileNotFoundError (or other OSError) for I/O problems,
    UnsupportedFormatError for formats we do not handle, and
    CorruptImageError for undecodable data.
    """
    p = Path(path)
    ext = p.suffix.lower()
    if ext not in SUPPORTED_EXTENSIONS:
        raise UnsupportedFormatError(f"unsupported image extension {ext!r} (supported: {SUPPORTED_EXTENSIONS})")
    data = p.read_bytes()
    if ext == ".ppm":
        return RgbImage(_parse_ppm(data))
    return RgbImage(_decode_png(data))


def save_image(img: RgbImage, path: str | Path) -> None:
    """Encode to PNG or binary PPM by extension; both round-trip bit-exactly."""
    p = Path(path)
    ext = p.suffix.lower()
    if ext == ".ppm":
        p.write_bytes(_encode_ppm(img.pixels))
    elif ext == ".png":
        Image.fromarray(img.pixels, mode="RGB").save(p, format="PNG")
    else:
        raise UnsupportedFormatError(f"unsupported image extension {ext!r} (supported: {SUPPORTED_EXTENSIONS})")
