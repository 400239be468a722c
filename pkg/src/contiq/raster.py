"""Core raster types and image I/O.

All rasters are immutable after construction (the backing numpy arrays are
marked read-only), so every operation in the package is a pure function that
is safe to call from concurrent workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .geometry import bresenham_line

# ITU-R 601 luminance weights for RGB -> gray conversion.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _check_scale(scale: float) -> float:
    scale = float(scale)
    if not scale > 0:
        raise ValueError(f"pixel scale must be positive, got {scale}")
    return scale


@dataclass(frozen=True)
class GrayRaster:
    """8-bit single-channel image with a physical pixel scale.

    ``pixels`` is a read-only (height, width) uint8 array indexed [y, x];
    ``scale`` is the physical size of one pixel in µm.
    """

    pixels: np.ndarray
    scale: float

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise ValueError("pixels must be a non-empty 2-D array")
        object.__setattr__(self, "pixels", _freeze(px.astype(np.uint8)))
        object.__setattr__(self, "scale", _check_scale(self.scale))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class BinaryRaster:
    """Two-phase raster: 1 = particle (bright) phase, 0 = binder phase."""

    bits: np.ndarray
    scale: float

    def __post_init__(self):
        b = np.asarray(self.bits)
        if b.ndim != 2 or b.size == 0:
            raise ValueError("bits must be a non-empty 2-D array")
        b = b.astype(np.uint8)
        if b.max(initial=0) > 1:
            raise ValueError("bits must contain only 0 and 1")
        object.__setattr__(self, "bits", _freeze(b))
        object.__setattr__(self, "scale", _check_scale(self.scale))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @classmethod
    def from_mask(cls, mask: np.ndarray, scale: float) -> "BinaryRaster":
        return cls(np.asarray(mask).astype(np.uint8), scale)

    def to_gray(self) -> GrayRaster:
        """Render as an 8-bit image (phase 1 -> 255)."""
        return GrayRaster(self.bits * np.uint8(255), self.scale)


@dataclass(frozen=True)
class LabeledRaster:
    """Per-pixel component labels: 0 = background, 1..K = components.

    The label set is contiguous: every label in [1, max_label] is present.
    """

    labels: np.ndarray
    scale: float

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 2 or lab.size == 0:
            raise ValueError("labels must be a non-empty 2-D array")
        lab = lab.astype(np.int32)
        if lab.min(initial=0) < 0:
            raise ValueError("labels must be non-negative")
        k = int(lab.max(initial=0))
        if k > 0:
            counts = np.bincount(lab.ravel(), minlength=k + 1)
            if (counts[1:] == 0).any():
                raise ValueError("label set must be contiguous 1..K")
        object.__setattr__(self, "labels", _freeze(lab))
        object.__setattr__(self, "scale", _check_scale(self.scale))
        object.__setattr__(self, "_max_label", k)

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def max_label(self) -> int:
        return self._max_label


def load_image(path: str | Path, scale: float) -> GrayRaster:
    """Load a PNG/JPEG/BMP image as a grayscale raster.

    RGB (or palette/alpha) inputs are converted with the standard luminance
    weighting 0.299 R + 0.587 G + 0.114 B, rounded to the nearest integer;
    already-gray inputs pass through unchanged.
    """
    _check_scale(scale)
    try:
        with Image.open(path) as im:
            im.load()
            if im.width == 0 or im.height == 0:
                raise ValueError(f"zero-sized image: {path}")
            if im.mode == "L":
                gray = np.asarray(im, dtype=np.uint8)
            else:
                rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
                luma = (
                    LUMA_WEIGHTS[0] * rgb[:, :, 0]
                    + LUMA_WEIGHTS[1] * rgb[:, :, 1]
                    + LUMA_WEIGHTS[2] * rgb[:, :, 2]
                )
                gray = np.clip(np.rint(luma), 0, 255).astype(np.uint8)
    except UnidentifiedImageError as exc:
        raise ValueError(f"unsupported or unreadable image: {path}") from exc
    return GrayRaster(gray, scale)


@dataclass(frozen=True)
class OverlaySegment:
    """Straight annotation line between two pixels (drawn with Bresenham)."""

    a: tuple[int, int]
    b: tuple[int, int]
    color: tuple[int, int, int] = (0, 255, 255)


@dataclass(frozen=True)
class OverlayMarker:
    """Point marker (a small plus shape) at one pixel."""

    position: tuple[int, int]
    color: tuple[int, int, int] = (255, 0, 0)


@dataclass(frozen=True)
class OverlayPixels:
    """Arbitrary pixel set (e.g. a traced boundary) in one color."""

    pixels: tuple[tuple[int, int], ...]
    color: tuple[int, int, int] = (255, 255, 0)

    def __post_init__(self):
        object.__setattr__(self, "pixels", tuple(map(tuple, self.pixels)))


OverlayPrimitive = OverlaySegment | OverlayMarker | OverlayPixels


def _check_inside(x: int, y: int, base: GrayRaster, what: str) -> None:
    if not (0 <= x < base.width and 0 <= y < base.height):
        raise ValueError(f"{what} ({x}, {y}) outside raster "
                         f"{base.width}x{base.height}")


def save_overlay(base: GrayRaster, annotations, path: str | Path) -> None:
    """Write base as an 8-bit RGB PNG with annotation primitives drawn on top.

    Base pixels not touched by a primitive are unchanged (gray replicated to
    the three channels); with an empty annotation list the output decodes to
    the base image exactly.
    """
    rgb = np.repeat(base.pixels[:, :, None], 3, axis=2).copy()
    h, w = base.pixels.shape
    for ann in annotations:
        if isinstance(ann, OverlaySegment):
            _check_inside(*ann.a, base, "segment endpoint")
            _check_inside(*ann.b, base, "segment endpoint")
            for x, y in bresenham_line(*ann.a, *ann.b):
                rgb[y, x] = ann.color
        elif isinstance(ann, OverlayMarker):
            x0, y0 = ann.position
            _check_inside(x0, y0, base, "marker")
            for dx, dy in ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)):
                x, y = x0 + dx, y0 + dy
                if 0 <= x < w and 0 <= y < h:
                    rgb[y, x] = ann.color
        elif isinstance(ann, OverlayPixels):
            for x, y in ann.pixels:
                _check_inside(x, y, base, "annotation pixel")
                rgb[y, x] = ann.color
        else:
            raise TypeError(f"unknown overlay primitive: {type(ann).__name__}")
    Image.fromarray(rgb, mode="RGB").save(path, format="PNG")
