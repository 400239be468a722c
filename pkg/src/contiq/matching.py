"""Binding-point pairing, neck drawing, and the full particle-separation pass.

Pairing is greedy over a feasibility-filtered candidate list: a pair must be
close enough, both inward directions must roughly face each other, and the
straight segment between the points must stay in the particle phase.  Drawn
necks are 2 px wide so the split survives 8-connectivity.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .boundary import BindingPoint, detect_binding_points, trace_boundaries
from .geometry import angle_diff, angle_of_step, bresenham_line, thickening_offset
from .morphology import (ComponentShape, all_component_shapes,
                         classify_and_fill_holes, label_components)
from .raster import BinaryRaster, LabeledRaster

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatchedPair:
    """Two binding points joined across a neck."""

    a: BindingPoint
    b: BindingPoint
    neck_length_um: float
    score: float


@dataclass(frozen=True)
class SegmentationConfig:
    """Thresholds steering the separation pass.

    ``max_neck_um`` of None means adaptive: ``neck_factor`` times the mean
    equivalent diameter of the image's high-circularity (single-particle)
    components.
    """

    circularity_threshold: float = 0.85
    hole_size_um: float = 3.0
    hole_circularity: float = 0.6
    chain_window: int = 7
    max_neck_um: float | None = None
    neck_factor: float = 0.75
    angle_tol_deg: float = 45.0
    pairing: str = "greedy"  # "greedy" | "optimal"

    def __post_init__(self):
        if self.pairing not in ("greedy", "optimal"):
            raise ValueError(f"pairing must be 'greedy' or 'optimal', "
                             f"got {self.pairing!r}")
        if not 0.0 < self.angle_tol_deg <= 90.0:
            raise ValueError("angle_tol_deg must be in (0, 90]")


def _segment_in_phase(bits: np.ndarray, a: tuple[int, int],
                      b: tuple[int, int]) -> bool:
    for x, y in bresenham_line(a[0], a[1], b[0], b[1]):
        if bits[y, x] == 0:
            return False
    return True


def _feasible_candidates(points: list[BindingPoint], img: BinaryRaster,
                         max_dist_um: float, angle_tol_deg: float
                         ) -> list[tuple[float, int, int, float]]:
    """(score, i, j, distance µm) for every feasible pair, i < j."""
    out = []
    bits = img.bits
    scale = img.scale
    for i in range(len(points)):
        ax, ay = points[i].position
        for j in range(i + 1, len(points)):
            bx, by = points[j].position
            dx, dy = bx - ax, by - ay
            if dx == 0 and dy == 0:
                continue
            dist_um = math.hypot(dx, dy) * scale
            if dist_um > max_dist_um:
                continue
            fwd = angle_of_step(dx, dy)
            dev_a = angle_diff(points[i].inward_direction, fwd)
            dev_b = angle_diff(points[j].inward_direction, (fwd + 180.0) % 360.0)
            if dev_a > angle_tol_deg or dev_b > angle_tol_deg:
                continue
            if not _segment_in_phase(bits, points[i].position, points[j].position):
                continue
            score = dist_um / max_dist_um + ((dev_a + dev_b) / 2.0) / angle_tol_deg
            out.append((score, i, j, dist_um))
    return out


def match_pairs(points: list[BindingPoint], img: BinaryRaster,
                max_dist_um: float, angle_tol_deg: float = 45.0,
                pairing: str = "greedy"
                ) -> tuple[list[MatchedPair], list[BindingPoint]]:
    """Pair up binding points; leftovers come back unmatched.

    A candidate pair (a, b) is feasible iff the distance is at most
    ``max_dist_um``, each point's inward direction is within
    ``angle_tol_deg`` of the direction toward its partner, and the discrete
    segment between them runs entirely through phase 1 of ``img``.  Feasible
    pairs are taken greedily by ascending score (ties by point indices); the
    optimal mode instead maximizes pair count, then minimizes total score.
    """
    if max_dist_um <= 0:
        raise ValueError("max_dist_um must be positive")
    if not 0.0 < angle_tol_deg <= 90.0:
        raise ValueError("angle_tol_deg must be in (0, 90]")
    candidates = _feasible_candidates(points, img, max_dist_um, angle_tol_deg)
    if pairing == "greedy":
        chosen = _greedy_select(candidates)
    elif pairing == "optimal":
        chosen = _optimal_select(candidates, len(points))
    else:
        raise ValueError(f"unknown pairing mode {pairing!r}")
    pairs = [MatchedPair(points[i], points[j], dist, score)
             for score, i, j, dist in chosen]
    used = {id(p.a) for p in pairs} | {id(p.b) for p in pairs}
    unmatched = [p for p in points if id(p) not in used]
    return pairs, unmatched


def _greedy_select(candidates):
    chosen = []
    used: set[int] = set()
    for score, i, j, dist in sorted(candidates):
        if i in used or j in used:
            continue
        used.add(i)
        used.add(j)
        chosen.append((score, i, j, dist))
    chosen.sort(key=lambda c: (c[1], c[2]))
    return chosen


def _optimal_select(candidates, n_points: int):
    """Maximum-cardinality, minimum-score matching (blossom algorithm)."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(n_points))
    by_edge = {}
    for score, i, j, dist in sorted(candidates):
        if (i, j) not in by_edge:
            by_edge[(i, j)] = (score, i, j, dist)
            g.add_edge(i, j, weight=-score)
    mate = nx.max_weight_matching(g, maxcardinality=True)
    chosen = [by_edge[(min(i, j), max(i, j))] for i, j in mate]
    chosen.sort(key=lambda c: (c[1], c[2]))
    return chosen


def draw_necks(img: BinaryRaster, pairs: list[MatchedPair]) -> BinaryRaster:
    """Carve each pair's segment, widened to 2 px, out of the particle phase.

    Pairs whose segment leaves phase 1 of ``img`` are rejected with a logged
    diagnostic and drawn pixels are the only change to the raster.
    """
    bits = img.bits.copy()
    h, w = bits.shape
    for pair in pairs:
        a, b = pair.a.position, pair.b.position
        if not _segment_in_phase(img.bits, a, b):
            logger.warning("rejecting infeasible neck %s-%s: segment leaves "
                           "the particle phase", a, b)
            continue
        ox, oy = thickening_offset(a[0], a[1], b[0], b[1])
        for x, y in bresenham_line(a[0], a[1], b[0], b[1]):
            bits[y, x] = 0
            if 0 <= x + ox < w and 0 <= y + oy < h:
                bits[y + oy, x + ox] = 0
    return BinaryRaster(bits, img.scale)


@dataclass(frozen=True)
class SegmentationResult:
    """Outcome of the separation pass over one cleaned binary raster."""

    separated: BinaryRaster
    particles: LabeledRaster
    pairs: list[MatchedPair]
    unmatched: list[BindingPoint]
    per_particle: list[ComponentShape]


def _adaptive_max_dist(shapes: list[ComponentShape],
                       cfg: SegmentationConfig) -> float:
    if cfg.max_neck_um is not None:
        return cfg.max_neck_um
    total_area = sum(s.area_um2 for s in shapes)
    singles = [s for s in shapes if s.circularity > cfg.circularity_threshold]
    # Area weighting keeps leftover noise specks (tiny, highly circular)
    # from dragging the reference diameter down; a pool that covers almost
    # none of the phase is specks only, so fall back to all components.
    if not singles or sum(s.area_um2 for s in singles) < 0.05 * total_area:
        singles = shapes
    weight = sum(s.area_um2 for s in singles)
    ref = sum(s.area_um2 * s.equivalent_diameter_um for s in singles) / weight
    return cfg.neck_factor * ref


def _shift_point(p: BindingPoint, dx: int, dy: int) -> BindingPoint:
    sx, sy = p.source[2]
    return replace(p, position=(p.position[0] + dx, p.position[1] + dy),
                   source=(p.source[0], p.source[1], (sx + dx, sy + dy),
                           p.source[3]))


def process_particles(img: BinaryRaster,
                      cfg: SegmentationConfig | None = None) -> SegmentationResult:
    """Run the full separation pass on a cleaned binary raster.

    High-circularity components are single particles and pass through
    untouched.  Every other component gets the hole-classification step (the
    fill is only for boundary tracing; the output raster keeps the original
    holes), boundary tracing, binding-point detection, and — with two or more
    points — pair matching.  All necks are drawn into one separated raster,
    which is relabeled for the per-particle table.
    """
    cfg = cfg or SegmentationConfig()
    labels = label_components(img, 1)
    shapes = all_component_shapes(labels)
    if not shapes:
        return SegmentationResult(img, labels, [], [], [])
    max_dist_um = _adaptive_max_dist(shapes, cfg)

    all_pairs: list[MatchedPair] = []
    all_unmatched: list[BindingPoint] = []
    for shape in shapes:
        if shape.circularity > cfg.circularity_threshold:
            continue
        pairs, unmatched = _separate_component(img, labels, shape.label, cfg,
                                               max_dist_um)
        all_pairs.extend(pairs)
        all_unmatched.extend(unmatched)

    separated = draw_necks(img, all_pairs) if all_pairs else img
    particles = label_components(separated, 1)
    return SegmentationResult(
        separated=separated,
        particles=particles,
        pairs=all_pairs,
        unmatched=all_unmatched,
        per_particle=all_component_shapes(particles),
    )


def _separate_component(img: BinaryRaster, labels: LabeledRaster, label: int,
                        cfg: SegmentationConfig, max_dist_um: float
                        ) -> tuple[list[MatchedPair], list[BindingPoint]]:
    """Separation pass for one combined piece, in a padded local crop."""
    mask = labels.labels == label
    ys, xs = np.nonzero(mask)
    y0 = max(int(ys.min()) - 1, 0)
    y1 = min(int(ys.max()) + 2, mask.shape[0])
    x0 = max(int(xs.min()) - 1, 0)
    x1 = min(int(xs.max()) + 2, mask.shape[1])
    local = BinaryRaster(mask[y0:y1, x0:x1].astype(np.uint8), img.scale)
    local_labels = LabeledRaster(local.bits.astype(np.int32), img.scale)

    filled, kept = classify_and_fill_holes(local, cfg.hole_size_um,
                                           cfg.hole_circularity)
    chains = trace_boundaries(filled, local_labels, 1, kept_holes=kept)
    points: list[BindingPoint] = []
    for chain in chains:
        points.extend(detect_binding_points(chain, filled, cfg.chain_window))
    points = [_shift_point(p, x0, y0) for p in points]
    # Re-tag with the global component id (the local crop labels it 1).
    points = [replace(p, source=(label,) + p.source[1:]) for p in points]

    if len(points) <= 1:
        # Zero points: a single particle.  One point: nothing to join, most
        # likely a partial particle at the frame edge.
        return [], points
    # Feasibility runs against the unfilled raster so drawn necks never
    # cross internal binder and the area bookkeeping stays exact.
    return match_pairs(points, img, max_dist_um, cfg.angle_tol_deg, cfg.pairing)
