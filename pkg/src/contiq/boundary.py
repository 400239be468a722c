"""Chain-code boundary tracing and binding-point detection.

Boundaries are traced with Moore-neighbor tracing using Jacob's stopping
criterion.  Outer boundaries run counterclockwise and hole boundaries
clockwise, so the particle phase is always on the left of travel; with that
orientation a concave turn (binder in the wedge of the turn) is exactly a
right turn of the smoothed direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .geometry import DIR8, code_of_step, nearest_code
from .raster import BinaryRaster, LabeledRaster


@dataclass(frozen=True)
class ChainCode:
    """Closed boundary walk encoded as 8-direction moves.

    ``start`` is the trace starting pixel: the top-left-most boundary pixel
    for outer boundaries, the particle pixel directly above the hole's
    top-left-most pixel for hole boundaries.  The move sequence returns to
    ``start`` (its vector sum is zero); a single-pixel component has an empty
    move list.
    """

    start: tuple[int, int]
    moves: tuple[int, ...]
    kind: str  # "outer" | "hole"
    component: int

    def positions(self) -> list[tuple[int, int]]:
        """Boundary pixels visited, one per move (the start pixel first)."""
        pts = [self.start]
        x, y = self.start
        for m in self.moves[:-1]:
            dx, dy = DIR8[m]
            x += dx
            y += dy
            pts.append((x, y))
        return pts


@dataclass(frozen=True)
class BindingPoint:
    """Concave boundary location marking one side of a particle-particle neck.

    ``inward_direction`` is a math-convention angle in [0, 360) pointing into
    the particle phase: the pixel one 8-neighbour step along it is phase 1.
    ``source`` records (component, chain kind, chain start, index along chain).
    """

    position: tuple[int, int]
    inward_direction: float
    turn_angle: float
    source: tuple


def moore_trace(mask: np.ndarray, start: tuple[int, int],
                backtrack: tuple[int, int]) -> tuple[int, ...]:
    """Trace one closed boundary of ``mask`` from ``start``.

    ``backtrack`` must be a non-mask pixel 8-adjacent to ``start`` (it may lie
    outside the array).  Neighbours are scanned counterclockwise from the
    backtrack, which keeps the mask on the left of travel.  The walk stops
    when it is about to repeat its first move out of ``start`` (Jacob's
    stopping criterion).  Returns the move codes; empty for an isolated pixel.
    """
    h, w = mask.shape
    moves: list[int] = []
    px, py = start
    bx, by = backtrack
    first_move = -1
    limit = 8 * int(mask.sum()) + 16
    while True:
        bcode = code_of_step(bx - px, by - py)
        found = -1
        pex, pey = bx, by
        for i in range(1, 9):
            c = (bcode + i) % 8
            qx, qy = px + DIR8[c][0], py + DIR8[c][1]
            if 0 <= qx < w and 0 <= qy < h and mask[qy, qx]:
                found = c
                break
            pex, pey = qx, qy
        if found < 0:
            return ()  # isolated pixel
        if (px, py) == start:
            if first_move < 0:
                first_move = found
            elif found == first_move:
                break
        moves.append(found)
        bx, by = pex, pey
        px, py = px + DIR8[found][0], py + DIR8[found][1]
        if len(moves) > limit:
            raise RuntimeError("boundary trace did not close")
    return tuple(moves)


def trace_boundaries(img: BinaryRaster, labels: LabeledRaster, component: int,
                     kept_holes=None) -> list[ChainCode]:
    """Outer chain code of a component plus one chain per interior hole.

    Holes are the binder regions of ``img`` enclosed by the component (they
    are exactly the holes left unfilled by the hole-classification step).
    When ``kept_holes`` is given, only holes whose seed pixels appear in it
    are traced, in the given order; otherwise every interior hole is traced
    in raster order of its top-left pixel.
    """
    if not 1 <= component <= labels.max_label:
        raise ValueError(f"component {component} does not exist")
    mask = labels.labels == component
    ys, xs = np.nonzero(mask)
    if ys.size == 0:
        raise ValueError(f"component {component} has no pixels")
    start = (int(xs[0]), int(ys[0]))
    chains = [ChainCode(start, moore_trace(mask, start, (start[0] - 1, start[1])),
                        "outer", component)]

    if kept_holes is not None:
        seeds = [h.seed for h in kept_holes
                 if getattr(h, "enclosing_component", component) == component]
    else:
        seeds = _hole_seeds(mask, ys, xs)
    for hx, hy in seeds:
        hstart = (hx, hy - 1)
        if not mask[hstart[1], hstart[0]]:
            raise ValueError(f"hole seed ({hx}, {hy}) does not touch "
                             f"component {component}")
        chains.append(ChainCode(hstart, moore_trace(mask, hstart, (hx, hy)),
                                "hole", component))
    return chains


def _hole_seeds(mask: np.ndarray, ys, xs) -> list[tuple[int, int]]:
    """Top-left pixels of binder regions enclosed by the masked component."""
    y0, y1 = int(ys.min()), int(ys.max()) + 1
    x0, x1 = int(xs.min()), int(xs.max()) + 1
    # Pad the crop so binder reaching past the bounding box touches the frame.
    sub = np.pad(mask[y0:y1, x0:x1], 1)
    # 4-connectivity for the complement; frame-touching regions are not holes.
    lab, n = ndimage.label(~sub)
    if n == 0:
        return []
    border = np.unique(np.concatenate([lab[0, :], lab[-1, :], lab[:, 0], lab[:, -1]]))
    border_set = set(int(b) for b in border if b > 0)
    seeds = []
    flat = lab.ravel()
    uniq, first = np.unique(flat, return_index=True)
    order = np.argsort(first)
    for k in order:
        v = int(uniq[k])
        if v == 0 or v in border_set:
            continue
        idx = int(first[k])
        sy, sx = divmod(idx, lab.shape[1])
        seeds.append((sx - 1 + x0, sy - 1 + y0))
    return seeds


def detect_binding_points(cc: ChainCode, img: BinaryRaster,
                          window: int = 7) -> list[BindingPoint]:
    """Find concave >90-degree turns of a chain code.

    At each boundary pixel the incoming and outgoing directions are circular
    means (unit-vector averages) of the previous/next ``window`` moves.  A
    point is emitted when the unsigned turn exceeds 90 degrees and the turn
    is concave (right turn with the particle on the left).  Runs of
    detections within ``window`` pixels along the chain collapse to the
    single sharpest point.  Chains shorter than ``2 * window`` yield nothing.
    """
    n = len(cc.moves)
    if window < 1:
        raise ValueError("window must be >= 1")
    if n < 2 * window:
        return []
    # Unit move vectors in math convention (y up); circular mean, never raw
    # angles, so 0/360 wrap-around cannot bite.
    vec = np.array([(DIR8[m][0], -DIR8[m][1]) for m in cc.moves], dtype=float)
    vec /= np.linalg.norm(vec, axis=1, keepdims=True)
    ext = np.concatenate([vec, vec[:window]], axis=0)
    cs = np.concatenate([np.zeros((1, 2)), np.cumsum(ext, axis=0)], axis=0)
    win = cs[window:window + n] - cs[:n]  # win[j] = sum of moves j..j+window-1

    candidates: list[tuple[int, float, float, float, float, float]] = []
    for i in range(n):
        ox, oy = win[i]
        ix, iy = win[(i - window) % n]
        nin = math.hypot(ix, iy)
        nout = math.hypot(ox, oy)
        if nin < 1e-9 or nout < 1e-9:
            continue
        cross = ix * oy - iy * ox
        dot = ix * ox + iy * oy
        turn = math.degrees(math.atan2(abs(cross), dot))
        if turn > 90.0 and cross < 0.0:
            candidates.append((i, turn, ix / nin, iy / nin, ox / nout, oy / nout))
    if not candidates:
        return []

    clusters = _cluster_circular([c[0] for c in candidates], window, n)
    by_index = {c[0]: c for c in candidates}
    positions = cc.positions()
    points = []
    for cluster in clusters:
        best = max(cluster, key=lambda i: (by_index[i][1], -i))
        i, turn, inx, iny, outx, outy = by_index[best]
        bp = _make_point(cc, positions[i], i, turn, inx, iny, outx, outy, img)
        if bp is not None:
            points.append(bp)
    points.sort(key=lambda p: p.source[-1])
    return points


def _cluster_circular(indices: list[int], gap: int, n: int) -> list[list[int]]:
    """Group sorted chain indices whose spacing is <= gap, wrapping at n."""
    clusters = [[indices[0]]]
    for i in indices[1:]:
        if i - clusters[-1][-1] <= gap:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    if len(clusters) > 1 and (indices[0] + n - clusters[-1][-1]) <= gap:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters


def _make_point(cc: ChainCode, pos: tuple[int, int], i: int, turn: float,
                inx: float, iny: float, outx: float, outy: float,
                img: BinaryRaster) -> BindingPoint | None:
    # The short-way bisector of the reversed incoming and the outgoing
    # direction spans the binder wedge (its opening is 180 - turn < 90 at a
    # concave turn with the particle on the left), so the inward direction
    # is its exact opposite.  The probe only verifies the invariant that one
    # step inward lands on phase 1, nudging by 45 degrees on jagged pixels.
    bx = inx - outx
    by = iny - outy
    angle = math.degrees(math.atan2(by, bx)) % 360.0
    k0 = nearest_code(angle)
    attempts = [(angle, k0),
                (45.0 * ((k0 - 1) % 8), (k0 - 1) % 8),
                (45.0 * ((k0 + 1) % 8), (k0 + 1) % 8)]
    x, y = pos
    h, w = img.bits.shape
    for final, kk in attempts:
        px, py = x + DIR8[kk][0], y + DIR8[kk][1]
        if 0 <= px < w and 0 <= py < h and img.bits[py, px] == 1:
            return BindingPoint(
                position=pos,
                inward_direction=final % 360.0,
                turn_angle=turn,
                source=(cc.component, cc.kind, cc.start, i),
            )
    return None
