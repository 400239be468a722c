"""Binary cleanup and component analysis.

Covers the 3x3 majority filter used for noise removal, connected-component
labeling (8-connectivity for the particle phase, 4-connectivity for binder),
per-component shape metrics, and hole detection/filling.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .boundary import moore_trace
from .geometry import STEP_LENGTH
from .raster import BinaryRaster, LabeledRaster

logger = logging.getLogger(__name__)

# Upper bound on majority-filter passes when running until stable.
MAX_MAJORITY_PASSES = 10

STRUCTURE_8 = np.ones((3, 3), dtype=bool)


def _neighborhood_ones(bits: np.ndarray) -> np.ndarray:
    """3x3 sum of ones around each pixel, zero-padded at the borders."""
    p = np.pad(bits.astype(np.int16), 1)
    return (
        p[:-2, :-2] + p[:-2, 1:-1] + p[:-2, 2:]
        + p[1:-1, :-2] + p[1:-1, 1:-1] + p[1:-1, 2:]
        + p[2:, :-2] + p[2:, 1:-1] + p[2:, 2:]
    )


def _valid_counts(shape: tuple[int, int]) -> np.ndarray:
    """Number of in-image pixels in each 3x3 neighborhood (9/6/4 at borders)."""
    h, w = shape
    cy = np.full(h, 3, dtype=np.int16)
    cy[0] = cy[-1] = min(2, h)
    cx = np.full(w, 3, dtype=np.int16)
    cx[0] = cx[-1] = min(2, w)
    return np.outer(cy, cx)


def _majority_pass(bits: np.ndarray) -> np.ndarray:
    ones = _neighborhood_ones(bits)
    zeros = _valid_counts(bits.shape) - ones
    # Ties (possible only in clipped border neighborhoods) keep the original.
    return np.where(ones > zeros, 1, np.where(ones < zeros, 0, bits)).astype(np.uint8)


def majority_filter(img: BinaryRaster, passes: int | None = None) -> BinaryRaster:
    """3x3 majority vote ("5 out of 9") applied repeatedly.

    ``passes`` gives a fixed pass count; None runs until a pass changes no
    pixel, capped at MAX_MAJORITY_PASSES.  Border pixels vote over the
    neighborhood clipped to the image, keeping their value on ties.
    """
    if passes is not None and passes < 0:
        raise ValueError("passes must be >= 0")
    limit = MAX_MAJORITY_PASSES if passes is None else passes
    bits = img.bits
    for _ in range(limit):
        nxt = _majority_pass(bits)
        if np.array_equal(nxt, bits):
            bits = nxt
            break
        bits = nxt
    return BinaryRaster(bits, img.scale)


def _label_raster_order(mask: np.ndarray, connectivity: int) -> tuple[np.ndarray, int]:
    """Label a boolean mask with labels in raster-scan discovery order."""
    structure = STRUCTURE_8 if connectivity == 8 else None
    lab, n = ndimage.label(mask, structure=structure)
    if n == 0:
        return lab.astype(np.int32), 0
    uniq, first = np.unique(lab.ravel(), return_index=True)
    order = uniq[np.argsort(first)]
    table = np.zeros(n + 1, dtype=np.int32)
    nxt = 1
    for v in order:
        if v != 0:
            table[v] = nxt
            nxt += 1
    return table[lab], n


def label_components(img: BinaryRaster, phase: int) -> LabeledRaster:
    """Connected components of one phase, labeled in raster-scan order.

    Phase 1 (particles) uses 8-connectivity, phase 0 (binder) 4-connectivity.
    """
    if phase not in (0, 1):
        raise ValueError("phase must be 0 or 1")
    mask = img.bits == phase
    lab, _ = _label_raster_order(mask, 8 if phase == 1 else 4)
    return LabeledRaster(lab, img.scale)


@dataclass(frozen=True)
class ComponentShape:
    """Shape metrics of one labeled component (areas/lengths in µm)."""

    label: int
    area_um2: float
    perimeter_um: float
    centroid: tuple[float, float]
    equivalent_diameter_um: float
    edge_um: float
    circularity: float
    touches_border: bool


def _region_perimeter_px(mask: np.ndarray) -> float:
    """Outer boundary walk length in pixels (diagonal steps weigh sqrt(2)).

    Single-pixel regions have no walk; they get a 1 px floor so derived
    ratios stay finite.
    """
    ys, xs = np.nonzero(mask)
    start = (int(xs[0]), int(ys[0]))
    moves = moore_trace(mask, start, (start[0] - 1, start[1]))
    if not moves:
        return 1.0
    return sum(STEP_LENGTH[m] for m in moves)


def _shape_from_mask(mask: np.ndarray, offset: tuple[int, int], label: int,
                     scale: float, touches_border: bool) -> ComponentShape:
    ys, xs = np.nonzero(mask)
    area_um2 = ys.size * scale * scale
    perimeter_um = _region_perimeter_px(mask) * scale
    centroid = (float(xs.mean()) + offset[0], float(ys.mean()) + offset[1])
    return ComponentShape(
        label=label,
        area_um2=area_um2,
        perimeter_um=perimeter_um,
        centroid=centroid,
        equivalent_diameter_um=math.sqrt(4.0 * area_um2 / math.pi),
        edge_um=math.sqrt(area_um2),
        circularity=4.0 * math.pi * area_um2 / (perimeter_um * perimeter_um),
        touches_border=touches_border,
    )


def component_shape(labels: LabeledRaster, label: int) -> ComponentShape:
    """Shape metrics for one component of a labeled raster."""
    if not 1 <= label <= labels.max_label:
        raise ValueError(f"unknown label {label}")
    sl = ndimage.find_objects(labels.labels, max_label=label)[label - 1]
    mask = labels.labels[sl] == label
    h, w = labels.labels.shape
    touches = (sl[0].start == 0 or sl[1].start == 0
               or sl[0].stop == h or sl[1].stop == w)
    return _shape_from_mask(mask, (sl[1].start, sl[0].start), label,
                            labels.scale, touches)


def all_component_shapes(labels: LabeledRaster) -> list[ComponentShape]:
    """Shape metrics for every component (single pass over the raster)."""
    k = labels.max_label
    if k == 0:
        return []
    slices = ndimage.find_objects(labels.labels, max_label=k)
    h, w = labels.labels.shape
    shapes = []
    for label, sl in enumerate(slices, start=1):
        mask = labels.labels[sl] == label
        touches = (sl[0].start == 0 or sl[1].start == 0
                   or sl[0].stop == h or sl[1].stop == w)
        shapes.append(_shape_from_mask(mask, (sl[1].start, sl[0].start), label,
                                       labels.scale, touches))
    return shapes


@dataclass(frozen=True)
class HoleInfo:
    """A binder region enclosed by a single particle component.

    ``seed`` is the top-left-most hole pixel and doubles as a stable id for
    locating the region; ``enclosing_component`` refers to the labels of
    ``label_components(img, phase=1)``.
    """

    label: int
    area_um2: float
    circularity: float
    enclosing_component: int
    seed: tuple[int, int]

    @property
    def equivalent_diameter_um(self) -> float:
        return math.sqrt(4.0 * self.area_um2 / math.pi)


def _interior_binder_labels(bits: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """4-connected binder labeling plus ids of regions not touching the border."""
    lab, n = _label_raster_order(bits == 0, 4)
    if n == 0:
        return lab, []
    border = np.unique(np.concatenate(
        [lab[0, :], lab[-1, :], lab[:, 0], lab[:, -1]]))
    border_set = {int(b) for b in border if b > 0}
    interior = [v for v in range(1, n + 1) if v not in border_set]
    return lab, interior


def interior_hole_mask(img: BinaryRaster) -> np.ndarray:
    """Boolean mask of every binder pixel enclosed away from the image border."""
    lab, interior = _interior_binder_labels(img.bits)
    if not interior:
        return np.zeros_like(img.bits, dtype=bool)
    return np.isin(lab, interior)


def find_holes(img: BinaryRaster) -> list[HoleInfo]:
    """Every interior hole of the raster with shape metrics, in raster order."""
    holes, _, _ = _holes_with_labels(img)
    return holes


def _holes_with_labels(img: BinaryRaster
                       ) -> tuple[list[HoleInfo], np.ndarray, list[int]]:
    lab, interior = _interior_binder_labels(img.bits)
    if not interior:
        return [], lab, []
    particle_lab, _ = _label_raster_order(img.bits == 1, 8)
    slices = ndimage.find_objects(lab, max_label=max(interior))
    holes = []
    scale = img.scale
    for hid, v in enumerate(interior, start=1):
        sl = slices[v - 1]
        mask = lab[sl] == v
        ys, xs = np.nonzero(mask)
        seed = (int(xs[0]) + sl[1].start, int(ys[0]) + sl[0].start)
        area_um2 = ys.size * scale * scale
        perim_um = _region_perimeter_px(mask) * scale
        # The pixel above the top-left hole pixel is particle phase.
        enclosing = int(particle_lab[seed[1] - 1, seed[0]])
        holes.append(HoleInfo(
            label=hid,
            area_um2=area_um2,
            circularity=4.0 * math.pi * area_um2 / (perim_um * perim_um),
            enclosing_component=enclosing,
            seed=seed,
        ))
    return holes, lab, interior


def classify_and_fill_holes(img: BinaryRaster, size_threshold_um: float = 3.0,
                            circ_threshold: float = 0.6
                            ) -> tuple[BinaryRaster, list[HoleInfo]]:
    """Fill small round holes; keep (and return) the rest.

    A hole is filled when its equivalent diameter is below ``size_threshold_um``
    AND its circularity exceeds ``circ_threshold`` — those are binder pockets
    inside single particles.  Larger or irregular holes sit between particles
    and stay available for binding-point detection.
    """
    if size_threshold_um <= 0 or circ_threshold <= 0:
        raise ValueError("hole thresholds must be positive")
    holes, lab, interior = _holes_with_labels(img)
    if not holes:
        return img, []
    kept = []
    fill_ids = []
    for hole, region in zip(holes, interior):
        if (hole.equivalent_diameter_um < size_threshold_um
                and hole.circularity > circ_threshold):
            fill_ids.append(region)
        else:
            kept.append(hole)
    if not fill_ids:
        return img, kept
    bits = img.bits.copy()
    bits[np.isin(lab, fill_ids)] = 1
    return BinaryRaster(bits, img.scale), kept
