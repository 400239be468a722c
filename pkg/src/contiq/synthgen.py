"""Synthetic two-phase microstructures with analytic ground truth.

Particles are discs; necks are modeled as overlapping disc pairs whose waist
is the chord of the intersection lens, matching the near-spherical grain
morphology of sintered structures.  Everything is derived from the geometry
before rasterization, so the ground truth is an oracle independent of the
image pipeline: particle counts, neck chords, areas, binder fraction, and
brute-force line-scan interface counts at any mesh spacing.

Generation is reproducible: the pseudo-random generator is numpy's PCG64,
seeded from the spec seed, so the same spec yields bit-identical rasters on
every run and platform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .raster import GrayRaster
from .stereology import InterfaceCounts, contiguity

# Minimum clearance between non-necked discs (px).  Narrower gaps can be
# bridged by the majority filter, which would fuse separate particles.
LAYOUT_GAP_PX = 4.0
# Validation floor for explicit geometry, per the placement contract.
MIN_GAP_PX = 2.0
# Clearance kept between a disc and the canvas edge (beyond its radius).
MARGIN_PX = 3.0
# Minimum angle between two neck attachments on the same disc, so their
# concave wedges stay separated along the boundary chain.
MIN_ATTACH_ANGLE_DEG = 55.0

PLACEMENT_ATTEMPTS = 400


@dataclass(frozen=True)
class Disc:
    """Particle disc: center in pixels, radius in µm."""

    x: float
    y: float
    radius_um: float


@dataclass(frozen=True)
class Neck:
    """Overlap bond between discs i and j.

    ``waist_um`` is the chord width of the intersection lens; 0 means
    "derive from the disc geometry" (always the case after resolution).
    """

    i: int
    j: int
    waist_um: float = 0.0


@dataclass(frozen=True)
class Inclusion:
    """Internal binder disc strictly inside its host particle."""

    host: int
    x: float
    y: float
    radius_um: float


@dataclass(frozen=True)
class SynthSpec:
    """Declarative description of one synthetic microstructure.

    Give either explicit ``discs`` (plus necks/inclusions), or a random
    layout via ``particles``/``necks_count`` and the radius/waist knobs; the
    layout is materialized deterministically from ``seed``.
    """

    seed: int = 0
    width: int = 400
    height: int = 300
    scale: float = 0.5
    particle_intensity: int = 200
    binder_intensity: int = 30
    noise: float = 0.0
    discs: tuple[Disc, ...] = ()
    necks: tuple[Neck, ...] = ()
    inclusions: tuple[Inclusion, ...] = ()
    # Random layout mode:
    particles: int = 0
    radius_um: float = 10.0
    radius_sd_um: float = 0.0
    necks_count: int = 0
    waist_min_frac: float = 0.10
    waist_max_frac: float = 0.40
    inclusion_count: int = 0
    inclusion_radius_um: float = 1.1

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("canvas must be at least 1x1")
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if not 0.0 <= self.noise < 1.0:
            raise ValueError("noise must be in [0, 1)")
        for name in ("particle_intensity", "binder_intensity"):
            v = getattr(self, name)
            if not 0 <= v <= 255:
                raise ValueError(f"{name} must be in [0, 255]")
        if self.particle_intensity == self.binder_intensity:
            raise ValueError("phase intensities must differ")
        if not 0.0 < self.waist_min_frac <= self.waist_max_frac < 1.0:
            raise ValueError("waist fractions must satisfy 0 < min <= max < 1")
        if self.particles and self.necks_count > max(self.particles - 1, 0):
            raise ValueError("necks_count cannot exceed particles - 1")


@dataclass(frozen=True)
class GroundTruth:
    """Analytic ground truth of a resolved spec (pre-rasterization geometry)."""

    spec: SynthSpec  # resolved: explicit discs/necks/inclusions
    particle_count: int
    neck_count: int
    neck_endpoints_px: tuple[tuple[tuple[float, float], tuple[float, float]], ...]
    neck_waists_um: tuple[float, ...]
    particle_areas_um2: tuple[float, ...]
    particle_diameters_um: tuple[float, ...]
    binder_fraction_pct: float
    internal_binder_count: int
    internal_binder_mean_um: float
    internal_binder_pct_of_binder: float


def _r_px(radius_um: float, scale: float) -> float:
    return radius_um / scale


def _lens(da: Disc, db: Disc, scale: float):
    """Chord endpoints and per-disc segment areas of two overlapping discs.

    Returns (endpoint1, endpoint2, half_chord_px, seg_a_px2, seg_b_px2) or
    None when the discs do not properly overlap.
    """
    ra, rb = _r_px(da.radius_um, scale), _r_px(db.radius_um, scale)
    d = math.hypot(db.x - da.x, db.y - da.y)
    if d >= ra + rb or d <= abs(ra - rb) or d == 0:
        return None
    a = (d * d + ra * ra - rb * rb) / (2.0 * d)
    h2 = ra * ra - a * a
    if h2 <= 0:
        return None
    h = math.sqrt(h2)
    ux, uy = (db.x - da.x) / d, (db.y - da.y) / d
    mx, my = da.x + a * ux, da.y + a * uy
    e1 = (mx - h * uy, my + h * ux)
    e2 = (mx + h * uy, my - h * ux)
    b = d - a
    seg_a = ra * ra * math.acos(max(-1.0, min(1.0, a / ra))) - a * h
    seg_b = rb * rb * math.acos(max(-1.0, min(1.0, b / rb))) - b * h
    return e1, e2, h, seg_a, seg_b


def resolve_layout(spec: SynthSpec) -> SynthSpec:
    """Materialize a random-mode spec into explicit geometry.

    Explicit specs are validated and passed through (with neck waists derived
    from the actual overlaps).  Raises if a placement cannot be found within
    the retry budget or the explicit geometry violates the constraints.
    """
    if spec.discs:
        return _validate_explicit(spec)
    if not spec.particles:
        raise ValueError("spec has neither explicit discs nor a particle count")
    rng = np.random.default_rng(spec.seed)
    scale = spec.scale
    radii_um = rng.normal(spec.radius_um, spec.radius_sd_um, spec.particles)
    radii_um = np.clip(radii_um, max(0.5 * spec.radius_um, 2.0 * scale), None)

    # The first necks_count+1 discs form a tree: each attaches to some
    # earlier disc with room left.  Remaining discs are placed free.
    waist_fracs = rng.uniform(spec.waist_min_frac, spec.waist_max_frac,
                              spec.necks_count)

    discs: list[Disc] = []
    necks: list[Neck] = []
    attach_angles: dict[int, list[float]] = {}
    for i in range(spec.particles):
        r_um = float(radii_um[i])
        rpx = _r_px(r_um, scale)
        lo_x, hi_x = rpx + MARGIN_PX, spec.width - 1 - rpx - MARGIN_PX
        lo_y, hi_y = rpx + MARGIN_PX, spec.height - 1 - rpx - MARGIN_PX
        if lo_x >= hi_x or lo_y >= hi_y:
            raise RuntimeError(f"disc {i} does not fit the canvas")
        placed = None
        if 1 <= i <= spec.necks_count:
            for parent in rng.permutation(i):
                parent = int(parent)
                pd = discs[parent]
                p_rpx = _r_px(pd.radius_um, scale)
                waist_um = waist_fracs[i - 1] * 2.0 * min(r_um, pd.radius_um)
                h = _r_px(waist_um, scale) / 2.0
                d = math.sqrt(max(p_rpx * p_rpx - h * h, 0.0)) \
                    + math.sqrt(max(rpx * rpx - h * h, 0.0))
                for _ in range(PLACEMENT_ATTEMPTS // 4):
                    theta = float(rng.uniform(0.0, 2.0 * math.pi))
                    cx = pd.x + d * math.cos(theta)
                    cy = pd.y + d * math.sin(theta)
                    if not (lo_x <= cx <= hi_x and lo_y <= cy <= hi_y):
                        continue
                    if any(_too_close(theta, a)
                           for a in attach_angles.get(parent, [])):
                        continue
                    if _clear_of_others(cx, cy, rpx, discs, skip=parent,
                                        scale=scale):
                        placed = Disc(cx, cy, r_um)
                        attach_angles.setdefault(parent, []).append(theta)
                        attach_angles.setdefault(i, []).append(
                            (theta + math.pi) % (2.0 * math.pi))
                        necks.append(Neck(parent, i, waist_um))
                        break
                if placed is not None:
                    break
        else:
            for _ in range(PLACEMENT_ATTEMPTS):
                cx = float(rng.uniform(lo_x, hi_x))
                cy = float(rng.uniform(lo_y, hi_y))
                if _clear_of_others(cx, cy, rpx, discs, skip=-1, scale=scale):
                    placed = Disc(cx, cy, r_um)
                    break
        if placed is None:
            raise RuntimeError(f"infeasible placement for disc {i} "
                               f"after {PLACEMENT_ATTEMPTS} attempts")
        discs.append(placed)

    inclusions = _place_inclusions(spec, discs, necks, rng)
    resolved = replace(spec, discs=tuple(discs), necks=tuple(necks),
                       inclusions=tuple(inclusions))
    return _validate_explicit(resolved)


def _too_close(theta: float, other: float) -> bool:
    d = abs(theta - other) % (2.0 * math.pi)
    d = min(d, 2.0 * math.pi - d)
    return math.degrees(d) < MIN_ATTACH_ANGLE_DEG


def _clear_of_others(cx: float, cy: float, rpx: float, discs: list[Disc],
                     skip: int, scale: float) -> bool:
    for k, dk in enumerate(discs):
        if k == skip:
            continue
        if math.hypot(cx - dk.x, cy - dk.y) < rpx + _r_px(dk.radius_um, scale) \
                + LAYOUT_GAP_PX:
            return False
    return True


def _place_inclusions(spec: SynthSpec, discs: list[Disc], necks: list[Neck],
                      rng) -> list[Inclusion]:
    inclusions: list[Inclusion] = []
    if not spec.inclusion_count:
        return inclusions
    scale = spec.scale
    partners: dict[int, list[int]] = {}
    for nk in necks:
        partners.setdefault(nk.i, []).append(nk.j)
        partners.setdefault(nk.j, []).append(nk.i)
    for _ in range(spec.inclusion_count):
        placed = None
        for _ in range(PLACEMENT_ATTEMPTS):
            host = int(rng.integers(0, len(discs)))
            hd = discs[host]
            r_inc_um = float(spec.inclusion_radius_um * rng.uniform(0.85, 1.15))
            r_inc = _r_px(r_inc_um, scale)
            host_rpx = _r_px(hd.radius_um, scale)
            max_u = host_rpx - r_inc - 2.0
            if max_u <= 0:
                continue
            u = float(rng.uniform(0.0, max_u))
            phi = float(rng.uniform(0.0, 2.0 * math.pi))
            cx, cy = hd.x + u * math.cos(phi), hd.y + u * math.sin(phi)
            # Stay clear of every other disc so no chord or lens is touched.
            ok = all(
                math.hypot(cx - dk.x, cy - dk.y)
                >= _r_px(dk.radius_um, scale) + r_inc + 2.0
                for k, dk in enumerate(discs) if k != host)
            ok = ok and all(
                math.hypot(cx - inc.x, cy - inc.y)
                >= r_inc + _r_px(inc.radius_um, scale) + 2.0
                for inc in inclusions)
            if ok:
                placed = Inclusion(host, cx, cy, r_inc_um)
                break
        if placed is None:
            raise RuntimeError("infeasible inclusion placement")
        inclusions.append(placed)
    return inclusions


def _validate_explicit(spec: SynthSpec) -> SynthSpec:
    scale = spec.scale
    necked = set()
    necks: list[Neck] = []
    for nk in spec.necks:
        if not (0 <= nk.i < len(spec.discs) and 0 <= nk.j < len(spec.discs)) \
                or nk.i == nk.j:
            raise ValueError(f"neck references invalid discs ({nk.i}, {nk.j})")
        lens = _lens(spec.discs[nk.i], spec.discs[nk.j], scale)
        if lens is None:
            raise ValueError(f"necked discs {nk.i} and {nk.j} do not overlap")
        derived_um = 2.0 * lens[2] * scale
        if nk.waist_um and abs(nk.waist_um - derived_um) > 0.25:
            raise ValueError(
                f"neck ({nk.i}, {nk.j}) declares waist {nk.waist_um:.3f} µm "
                f"but the geometry gives {derived_um:.3f} µm")
        necks.append(Neck(nk.i, nk.j, derived_um))
        necked.add((min(nk.i, nk.j), max(nk.i, nk.j)))
    for i in range(len(spec.discs)):
        for j in range(i + 1, len(spec.discs)):
            if (i, j) in necked:
                continue
            di, dj = spec.discs[i], spec.discs[j]
            gap = math.hypot(di.x - dj.x, di.y - dj.y) \
                - _r_px(di.radius_um, scale) - _r_px(dj.radius_um, scale)
            if gap < MIN_GAP_PX:
                raise ValueError(f"non-necked discs {i} and {j} are closer "
                                 f"than {MIN_GAP_PX} px (gap {gap:.2f})")
    for inc in spec.inclusions:
        if not 0 <= inc.host < len(spec.discs):
            raise ValueError(f"inclusion references invalid disc {inc.host}")
        hd = spec.discs[inc.host]
        d = math.hypot(inc.x - hd.x, inc.y - hd.y)
        if d + _r_px(inc.radius_um, scale) >= _r_px(hd.radius_um, scale):
            raise ValueError("inclusion is not strictly inside its host disc")
    return replace(spec, necks=tuple(necks))


def _render_mask(spec: SynthSpec) -> np.ndarray:
    """Particle-phase mask: pixel centers covered by a disc, inclusions carved."""
    mask = np.zeros((spec.height, spec.width), dtype=bool)
    for disc in spec.discs:
        _paint_disc(mask, disc.x, disc.y, _r_px(disc.radius_um, spec.scale), True)
    for inc in spec.inclusions:
        _paint_disc(mask, inc.x, inc.y, _r_px(inc.radius_um, spec.scale), False)
    return mask


def _paint_disc(mask: np.ndarray, cx: float, cy: float, rpx: float,
                value: bool) -> None:
    h, w = mask.shape
    x0 = max(int(math.floor(cx - rpx)), 0)
    x1 = min(int(math.ceil(cx + rpx)) + 1, w)
    y0 = max(int(math.floor(cy - rpx)), 0)
    y1 = min(int(math.ceil(cy + rpx)) + 1, h)
    if x0 >= x1 or y0 >= y1:
        return
    yy, xx = np.mgrid[y0:y1, x0:x1]
    inside = (xx - cx) ** 2 + (yy - cy) ** 2 <= rpx * rpx
    mask[y0:y1, x0:x1][inside] = value


def _ground_truth(spec: SynthSpec) -> GroundTruth:
    scale = spec.scale
    px2_to_um2 = scale * scale
    seg_by_disc: dict[int, float] = {i: 0.0 for i in range(len(spec.discs))}
    gain_by_disc: dict[int, float] = {i: 0.0 for i in range(len(spec.discs))}
    endpoints = []
    waists = []
    lens_total_px2 = 0.0
    for nk in spec.necks:
        e1, e2, h, seg_i, seg_j = _lens(spec.discs[nk.i], spec.discs[nk.j], scale)
        endpoints.append((e1, e2))
        waists.append(2.0 * h * scale)
        seg_by_disc[nk.i] += seg_i
        seg_by_disc[nk.j] += seg_j
        gain_by_disc[nk.i] += seg_j
        gain_by_disc[nk.j] += seg_i
        lens_total_px2 += seg_i + seg_j

    incl_area_by_disc: dict[int, float] = {i: 0.0 for i in range(len(spec.discs))}
    incl_total_px2 = 0.0
    for inc in spec.inclusions:
        a = math.pi * _r_px(inc.radius_um, scale) ** 2
        incl_area_by_disc[inc.host] += a
        incl_total_px2 += a

    areas_um2 = []
    for i, disc in enumerate(spec.discs):
        rpx = _r_px(disc.radius_um, scale)
        a_px2 = (math.pi * rpx * rpx - seg_by_disc[i] + gain_by_disc[i]
                 - incl_area_by_disc[i])
        areas_um2.append(a_px2 * px2_to_um2)
    diameters_um = [math.sqrt(4.0 * a / math.pi) for a in areas_um2]

    union_px2 = sum(math.pi * _r_px(d.radius_um, scale) ** 2
                    for d in spec.discs) - lens_total_px2
    particle_px2 = union_px2 - incl_total_px2
    canvas_px2 = spec.width * spec.height
    binder_px2 = canvas_px2 - particle_px2
    incl_mean_um = (2.0 * sum(i.radius_um for i in spec.inclusions)
                    / len(spec.inclusions)) if spec.inclusions else 0.0
    incl_pct = 100.0 * incl_total_px2 / binder_px2 if binder_px2 > 0 else 0.0

    return GroundTruth(
        spec=spec,
        particle_count=len(spec.discs),
        neck_count=len(spec.necks),
        neck_endpoints_px=tuple(endpoints),
        neck_waists_um=tuple(waists),
        particle_areas_um2=tuple(areas_um2),
        particle_diameters_um=tuple(diameters_um),
        binder_fraction_pct=100.0 * binder_px2 / canvas_px2,
        internal_binder_count=len(spec.inclusions),
        internal_binder_mean_um=incl_mean_um,
        internal_binder_pct_of_binder=incl_pct,
    )


def generate(spec: SynthSpec) -> tuple[GrayRaster, GroundTruth]:
    """Render a spec to a grayscale raster and compute its ground truth."""
    resolved = resolve_layout(spec)
    truth = _ground_truth(resolved)
    mask = _render_mask(resolved)
    gray = np.where(mask, np.uint8(resolved.particle_intensity),
                    np.uint8(resolved.binder_intensity))
    if resolved.noise > 0:
        rng = np.random.default_rng((resolved.seed, 0x5EED))
        flips = rng.random(mask.shape) < resolved.noise
        flipped = np.where(mask, np.uint8(resolved.binder_intensity),
                           np.uint8(resolved.particle_intensity))
        gray = np.where(flips, flipped, gray)
    return GrayRaster(gray, resolved.scale), truth


def _axis_intervals(spec: SynthSpec, coord: float, horizontal: bool
                    ) -> list[tuple[float, float]]:
    """Particle intervals along one test line, inclusions subtracted."""
    spans = []
    for disc in spec.discs:
        rpx = _r_px(disc.radius_um, spec.scale)
        c_perp = disc.y if horizontal else disc.x
        c_along = disc.x if horizontal else disc.y
        w2 = rpx * rpx - (coord - c_perp) ** 2
        if w2 <= 0:
            continue
        w = math.sqrt(w2)
        spans.append((c_along - w, c_along + w))
    spans.sort()
    merged: list[list[float]] = []
    for s, e in spans:
        if merged and s <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    holes = []
    for inc in spec.inclusions:
        rpx = _r_px(inc.radius_um, spec.scale)
        c_perp = inc.y if horizontal else inc.x
        c_along = inc.x if horizontal else inc.y
        w2 = rpx * rpx - (coord - c_perp) ** 2
        if w2 <= 0:
            continue
        w = math.sqrt(w2)
        holes.append((c_along - w, c_along + w))
    if not holes:
        return [(s, e) for s, e in merged]
    holes.sort()
    out = []
    for s, e in merged:
        cur = s
        for hs, he in holes:
            if he <= cur or hs >= e:
                continue
            if hs > cur:
                out.append((cur, hs))
            cur = max(cur, he)
        if cur < e:
            out.append((cur, e))
    return out


def oracle_counts(truth: GroundTruth, spacing_um: float,
                  direction: str) -> InterfaceCounts:
    """Brute-force analytic interface counts on the ideal geometry.

    Scans the same test lines the pipeline uses: WB toggles come from the
    particle-interval structure of each line, WW crossings from intersections
    of the line with the true neck chords.  Completely independent of the
    raster pipeline.
    """
    spec = truth.spec
    if direction not in ("horizontal", "vertical"):
        raise ValueError("direction must be 'horizontal' or 'vertical'")
    horizontal = direction == "horizontal"
    extent = spec.height if horizontal else spec.width
    length_px = spec.width if horizontal else spec.height
    step_px = int(round(spacing_um / spec.scale))
    if step_px < 1:
        raise ValueError(f"mesh spacing {spacing_um} µm is below one pixel")
    lines = list(range(step_px // 2, extent, step_px))
    if not lines:
        raise ValueError("mesh spacing leaves no test line in the image")

    wb_total = 0
    ww_total = 0
    hi = length_px - 1
    for coord in lines:
        for s, e in _axis_intervals(spec, float(coord), horizontal):
            if e < 0 or s > hi:
                continue
            if s > 0:
                wb_total += 1
            if e < hi:
                wb_total += 1
        for (x1, y1), (x2, y2) in truth.neck_endpoints_px:
            lo, hi_c = ((y1, y2) if horizontal else (x1, x2))
            if min(lo, hi_c) <= coord <= max(lo, hi_c):
                ww_total += 1
    return InterfaceCounts(
        direction=direction,
        mesh_spacing_um=spacing_um,
        lines=len(lines),
        line_length_um=length_px * spec.scale,
        ww_total=float(ww_total),
        wb_total=float(wb_total),
    )


def oracle_contiguity(truth: GroundTruth, spacing_um: float) -> float:
    """Combined contiguity of the ideal geometry at one mesh spacing."""
    h = oracle_counts(truth, spacing_um, "horizontal")
    v = oracle_counts(truth, spacing_um, "vertical")
    return contiguity(h.ww_total + v.ww_total, h.wb_total + v.wb_total)


# --- declarative spec files -------------------------------------------------

_SCALAR_KEYS = {
    "seed": int, "width": int, "height": int, "scale": float,
    "particle_intensity": int, "binder_intensity": int, "noise": float,
    "particles": int, "radius_um": float, "radius_sd_um": float,
    "necks_count": int, "waist_min_frac": float, "waist_max_frac": float,
    "inclusion_count": int, "inclusion_radius_um": float,
}


def parse_spec_text(text: str) -> SynthSpec:
    """Parse the key-value + record spec format.

    Scalar lines are ``key = value``; geometry records are ``disc x y r_um``,
    ``neck i j [waist_um]`` and ``inclusion host x y r_um`` (an optional ``=``
    after the record name is accepted).
    """
    fields: dict = {}
    discs: list[Disc] = []
    necks: list[Neck] = []
    inclusions: list[Inclusion] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.replace("=", " ").split()
        key = tokens[0]
        args = tokens[1:]
        try:
            if key == "disc":
                discs.append(Disc(float(args[0]), float(args[1]), float(args[2])))
            elif key == "neck":
                waist = float(args[2]) if len(args) > 2 else 0.0
                necks.append(Neck(int(args[0]), int(args[1]), waist))
            elif key == "inclusion":
                inclusions.append(Inclusion(int(args[0]), float(args[1]),
                                            float(args[2]), float(args[3])))
            elif key in _SCALAR_KEYS:
                fields[key] = _SCALAR_KEYS[key](args[0])
            else:
                raise ValueError(f"unknown key {key!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"spec line {lineno}: {exc}") from exc
    return SynthSpec(discs=tuple(discs), necks=tuple(necks),
                     inclusions=tuple(inclusions), **fields)


def format_spec_text(spec: SynthSpec) -> str:
    """Serialize a spec back to the declarative text format."""
    lines = []
    defaults = SynthSpec()
    for key in _SCALAR_KEYS:
        value = getattr(spec, key)
        if value != getattr(defaults, key):
            lines.append(f"{key} = {value}")
    for d in spec.discs:
        lines.append(f"disc {d.x:.4f} {d.y:.4f} {d.radius_um:.4f}")
    for n in spec.necks:
        lines.append(f"neck {n.i} {n.j} {n.waist_um:.4f}")
    for i in spec.inclusions:
        lines.append(f"inclusion {i.host} {i.x:.4f} {i.y:.4f} {i.radius_um:.4f}")
    return "\n".join(lines) + "\n"


def dumbbell_spec(r_px: float = 30.0, center_dist_px: float = 50.0,
                  scale: float = 0.5, canvas: int = 160,
                  noise: float = 0.0, seed: int = 7) -> SynthSpec:
    """Two equal discs overlapping into a single waist (test fixture).

    Centers sit on exact pixel coordinates: the default geometry has a wide
    waist whose corner angle is close to the 90-degree detection limit, and
    grid-aligned centers keep both rasterized corners sharp.
    """
    r_um = r_px * scale
    cx = canvas / 2.0
    cy = canvas / 2.0
    return SynthSpec(
        seed=seed, width=canvas, height=canvas, scale=scale, noise=noise,
        discs=(Disc(cx - center_dist_px / 2.0, cy, r_um),
               Disc(cx + center_dist_px / 2.0, cy, r_um)),
        necks=(Neck(0, 1),),
    )


def default_suite() -> list[tuple[str, SynthSpec]]:
    """The bundled validation suite: 22 specs spanning the tuning ranges.

    Field specs carry 18-30 particles with waists from 10% to 40% of the
    particle diameter; cluster specs carry 5-12 large particles in fully
    necked trees.  All use 1% flip noise.  The 0.25 µm/px scale keeps
    particles 40 px radius and up, where the majority filter's corner
    blunting stays small against the concavity signal.
    """
    specs: list[tuple[str, SynthSpec]] = []
    fields = [
        # (name, seed, n, necks, r_um, sd, w_lo, w_hi, inclusions)
        ("field-a", 1101, 24, 16, 11.0, 1.2, 0.10, 0.40, 0),
        ("field-b", 4102, 26, 19, 11.0, 1.0, 0.15, 0.40, 0),
        ("field-c", 103, 28, 22, 10.5, 1.0, 0.20, 0.40, 0),
        ("field-d", 104, 30, 24, 10.0, 1.0, 0.25, 0.40, 0),
        ("field-e", 2105, 22, 15, 12.0, 1.5, 0.10, 0.40, 0),
        ("field-f", 106, 25, 18, 11.5, 1.2, 0.15, 0.35, 3),
        ("field-g", 107, 27, 21, 11.0, 1.0, 0.20, 0.40, 4),
        ("field-h", 3108, 24, 17, 11.5, 1.2, 0.12, 0.35, 2),
        ("field-i", 7109, 29, 23, 10.5, 1.0, 0.18, 0.38, 0),
        ("field-j", 4110, 26, 20, 11.0, 1.3, 0.22, 0.40, 0),
        ("field-k", 4111, 23, 16, 12.0, 1.2, 0.10, 0.35, 3),
        ("field-l", 4112, 30, 25, 10.0, 0.8, 0.25, 0.40, 0),
        ("field-m", 3113, 28, 21, 10.5, 1.1, 0.15, 0.30, 0),
        ("field-n", 3114, 25, 19, 11.5, 1.0, 0.30, 0.40, 2),
    ]
    for name, seed, n, k, r, sd, lo, hi, incl in fields:
        specs.append((name, SynthSpec(
            seed=seed, width=1000, height=720, scale=0.25, noise=0.01,
            particles=n, radius_um=r, radius_sd_um=sd, necks_count=k,
            waist_min_frac=lo, waist_max_frac=hi, inclusion_count=incl,
            inclusion_radius_um=1.1,
        )))
    clusters = [
        # (name, seed, n, necks, r_um, w_lo, w_hi)
        ("cluster-a", 1201, 5, 4, 26.0, 0.30, 0.40),
        ("cluster-b", 202, 6, 5, 25.0, 0.28, 0.40),
        ("cluster-c", 5203, 8, 7, 24.0, 0.30, 0.40),
        ("cluster-d", 1204, 10, 9, 23.0, 0.28, 0.38),
        ("cluster-e", 2205, 12, 11, 22.0, 0.30, 0.40),
        ("cluster-f", 206, 6, 5, 26.0, 0.32, 0.40),
        ("cluster-g", 1207, 8, 7, 25.0, 0.30, 0.40),
        ("cluster-h", 1208, 10, 9, 24.0, 0.28, 0.40),
    ]
    for name, seed, n, k, r, lo, hi in clusters:
        specs.append((name, SynthSpec(
            seed=seed, width=900, height=680, scale=0.25, noise=0.01,
            particles=n, radius_um=r, radius_sd_um=1.0, necks_count=k,
            waist_min_frac=lo, waist_max_frac=hi,
        )))
    return specs
