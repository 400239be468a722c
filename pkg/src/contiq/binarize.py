"""Threshold a grayscale micrograph into the two-phase raster.

Either a fixed normalized threshold or an automatic search: when the
threshold is set too high the binarized image fragments into many small
bright specks, while a well-placed threshold leaves very few sub-micron
particles.  The auto mode sweeps thresholds from high to low and picks the
largest one whose small-particle count stays under a per-area limit.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .morphology import STRUCTURE_8, _majority_pass
from .raster import BinaryRaster, GrayRaster

logger = logging.getLogger(__name__)

# Field of view the small-particle count limit refers to (µm²).
REFERENCE_AREA_UM2 = 215.0 * 159.0

# Sweep grid for the auto threshold: 0.05 .. 0.95 in steps of 0.01.
SWEEP_GRID = tuple(k / 100.0 for k in range(5, 96))


@dataclass(frozen=True)
class ThresholdChoice:
    """Thresholding configuration and, for auto mode, its tuning constants.

    ``small_particle_count_limit`` is the allowed number of particles smaller
    than ``small_particle_diameter_cutoff`` (µm) per reference area; it is
    scaled linearly with the actual image area.
    """

    mode: str = "auto"  # "fixed" | "auto"
    value: float = 0.20
    small_particle_diameter_cutoff: float = 1.0
    small_particle_count_limit: float = 20.0

    def __post_init__(self):
        if self.mode not in ("fixed", "auto"):
            raise ValueError(f"mode must be 'fixed' or 'auto', got {self.mode!r}")
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"value must be in [0, 1], got {self.value}")
        if self.small_particle_diameter_cutoff <= 0:
            raise ValueError("small_particle_diameter_cutoff must be positive")
        if self.small_particle_count_limit <= 0:
            raise ValueError("small_particle_count_limit must be positive")


def binarize_fixed(img: GrayRaster, t: float) -> BinaryRaster:
    """Bit = 1 iff intensity >= round(t * 255); phase 1 is the bright phase."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {t}")
    level = int(round(t * 255.0))
    return BinaryRaster((img.pixels >= level).astype(np.uint8), img.scale)


@dataclass(frozen=True)
class AutoThresholdResult:
    """Outcome of the auto-threshold sweep.

    ``curve`` holds (threshold, small-particle count) for the whole grid in
    ascending threshold order; ``fallback`` is set when no grid threshold
    qualified and the inter-class-variance criterion was used instead.
    """

    raster: BinaryRaster
    threshold: float
    fallback: bool
    curve: tuple[tuple[float, int], ...]


def _small_particle_count(bits: np.ndarray, scale: float,
                          cutoff_um: float) -> tuple[int, bool]:
    """Count sub-cutoff components after one majority pass.

    Returns (count, both_phases_present).  The single filter pass smooths
    pixel noise without hiding the speck signal the heuristic relies on.
    Works on raw arrays: the count is invariant to label numbering, so the
    sweep skips the raster-order relabeling of the public API.
    """
    filtered = _majority_pass(bits)
    ones = int(filtered.sum())
    both = 0 < ones < filtered.size
    if ones == 0:
        return 0, both
    lab, n = ndimage.label(filtered, structure=STRUCTURE_8)
    areas = np.bincount(lab.ravel())[1:]
    diam_um = np.sqrt(4.0 * areas * (scale * scale) / math.pi)
    return int((diam_um < cutoff_um).sum()), both


def otsu_threshold(img: GrayRaster) -> float:
    """Inter-class-variance-maximizing threshold, normalized to [0, 1].

    The split is consistent with binarize_fixed: class 1 is intensity >= T.
    Degenerate single-level images give 0.
    """
    hist = np.bincount(img.pixels.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    levels = np.arange(256, dtype=np.float64)
    cum = np.cumsum(hist)
    cum_i = np.cumsum(hist * levels)
    best_t, best_var = 0, -1.0
    for t in range(1, 256):
        w0 = cum[t - 1]
        w1 = total - w0
        if w0 == 0 or w1 == 0:
            continue
        mu0 = cum_i[t - 1] / w0
        mu1 = (cum_i[255] - cum_i[t - 1]) / w1
        var = w0 * w1 * (mu0 - mu1) ** 2
        if var > best_var:
            best_var = var
            best_t = t
    return best_t / 255.0


def binarize_auto(img: GrayRaster,
                  cfg: ThresholdChoice | None = None) -> AutoThresholdResult:
    """Pick the threshold by the small-particle-count heuristic.

    Sweeps the grid from high to low; a threshold qualifies when the
    binarized-and-smoothed image still contains both phases and its count of
    particles below the diameter cutoff stays within the area-scaled limit.
    The largest qualifying threshold wins.  If nothing qualifies the Otsu
    criterion is used and the result is flagged as a fallback.
    """
    cfg = cfg or ThresholdChoice()
    area_um2 = img.width * img.height * img.scale * img.scale
    limit = cfg.small_particle_count_limit * area_um2 / REFERENCE_AREA_UM2
    curve = []
    chosen = None
    for t in reversed(SWEEP_GRID):
        bits = (img.pixels >= int(round(t * 255.0))).astype(np.uint8)
        count, both = _small_particle_count(bits, img.scale,
                                            cfg.small_particle_diameter_cutoff)
        curve.append((t, count))
        if chosen is None and both and count <= limit:
            chosen = t
    curve.reverse()
    if chosen is None:
        chosen = otsu_threshold(img)
        logger.warning("no sweep threshold qualified; falling back to "
                       "inter-class-variance threshold %.4f", chosen)
        return AutoThresholdResult(binarize_fixed(img, chosen), chosen, True,
                                   tuple(curve))
    return AutoThresholdResult(binarize_fixed(img, chosen), chosen, False,
                               tuple(curve))
