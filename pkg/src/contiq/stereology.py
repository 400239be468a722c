"""Line-intercept stereology: interface counts, contiguity, and the summary.

Interface counting follows the toggle method: along each test line, every
value change of the pre-separation raster is a particle-binder (WB)
interface; each drawn neck crossed adds two extra toggles in the separated
raster, so particle-particle (WW) interfaces per line are half the toggle
difference between the two rasters.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .matching import SegmentationResult
from .morphology import find_holes, interior_hole_mask
from .raster import BinaryRaster

logger = logging.getLogger(__name__)

DIRECTIONS = ("horizontal", "vertical")


class ContiguityUndefinedError(ValueError):
    """Raised when both interface counts are zero (no interfaces at all)."""


def contiguity(n_ww: float, n_wb: float) -> float:
    """Contiguity of the particle network: 2 Nww / (2 Nww + Nwb).

    Accepts raw counts or per-length rates; the ratio is the same either way.
    """
    if n_ww < 0 or n_wb < 0:
        raise ValueError("interface counts must be non-negative")
    if n_ww == 0 and n_wb == 0:
        raise ContiguityUndefinedError("no interfaces: contiguity undefined")
    return 2.0 * n_ww / (2.0 * n_ww + n_wb)


@dataclass(frozen=True)
class InterfaceCounts:
    """Interface statistics over one direction's grid of test lines."""

    direction: str
    mesh_spacing_um: float
    lines: int
    line_length_um: float
    ww_total: float
    wb_total: float

    @property
    def n_ww_per_line(self) -> float:
        return self.ww_total / self.lines

    @property
    def n_wb_per_line(self) -> float:
        return self.wb_total / self.lines

    @property
    def n_ww_per_um(self) -> float:
        return self.n_ww_per_line / self.line_length_um

    @property
    def n_wb_per_um(self) -> float:
        return self.n_wb_per_line / self.line_length_um


def _line_indices(extent: int, step_px: int) -> range:
    return range(step_px // 2, extent, step_px)


def count_interfaces(initial: BinaryRaster, separated: BinaryRaster,
                     spacing_um: float, direction: str) -> InterfaceCounts:
    """Count WB and WW interfaces along one direction's test lines.

    Lines are placed every round(spacing / scale) pixels.  Per line, WB is
    the toggle count of ``initial`` and WW is half the toggle surplus of
    ``separated``; a negative surplus (drawing artifact) clamps to zero with
    a diagnostic.
    """
    if initial.bits.shape != separated.bits.shape:
        raise ValueError("initial and separated rasters differ in size")
    if initial.scale != separated.scale:
        raise ValueError("initial and separated rasters differ in scale")
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    scale = initial.scale
    step_px = int(round(spacing_um / scale))
    if step_px < 1:
        raise ValueError(f"mesh spacing {spacing_um} µm is below one pixel")

    if direction == "horizontal":
        extent, length_px = initial.bits.shape[0], initial.bits.shape[1]
        rows = _line_indices(extent, step_px)
        if len(rows) == 0:
            raise ValueError("mesh spacing leaves no test line in the image")
        init_lines = initial.bits[list(rows), :]
        sep_lines = separated.bits[list(rows), :]
    else:
        extent, length_px = initial.bits.shape[1], initial.bits.shape[0]
        cols = _line_indices(extent, step_px)
        if len(cols) == 0:
            raise ValueError("mesh spacing leaves no test line in the image")
        init_lines = initial.bits[:, list(cols)].T
        sep_lines = separated.bits[:, list(cols)].T

    t_init = np.count_nonzero(np.diff(init_lines.astype(np.int8), axis=1), axis=1)
    t_sep = np.count_nonzero(np.diff(sep_lines.astype(np.int8), axis=1), axis=1)
    ww = (t_sep - t_init) / 2.0
    if (ww < 0).any():
        logger.warning("%d test line(s) lost toggles after separation; "
                       "clamping WW to 0", int((ww < 0).sum()))
        ww = np.clip(ww, 0.0, None)
    return InterfaceCounts(
        direction=direction,
        mesh_spacing_um=spacing_um,
        lines=init_lines.shape[0],
        line_length_um=length_px * scale,
        ww_total=float(ww.sum()),
        wb_total=float(t_init.sum()),
    )


@dataclass(frozen=True)
class ContiguityReport:
    """Directional interface counts and contiguity at one mesh spacing."""

    variant: str  # "unfilled" | "filled"
    mesh_spacing_um: float
    horizontal: InterfaceCounts
    vertical: InterfaceCounts
    c_w_horizontal: float
    c_w_vertical: float
    combined_c_w: float

    @property
    def n_ww_per_line(self) -> float:
        return ((self.horizontal.ww_total + self.vertical.ww_total)
                / (self.horizontal.lines + self.vertical.lines))

    @property
    def n_wb_per_line(self) -> float:
        return ((self.horizontal.wb_total + self.vertical.wb_total)
                / (self.horizontal.lines + self.vertical.lines))


def contiguity_report(initial: BinaryRaster, separated: BinaryRaster,
                      spacing_um: float, variant: str = "unfilled"
                      ) -> ContiguityReport:
    """Both directions at one spacing; combined C_w comes from summed counts."""
    h = count_interfaces(initial, separated, spacing_um, "horizontal")
    v = count_interfaces(initial, separated, spacing_um, "vertical")
    return ContiguityReport(
        variant=variant,
        mesh_spacing_um=spacing_um,
        horizontal=h,
        vertical=v,
        c_w_horizontal=contiguity(h.ww_total, h.wb_total),
        c_w_vertical=contiguity(v.ww_total, v.wb_total),
        combined_c_w=contiguity(h.ww_total + v.ww_total,
                                h.wb_total + v.wb_total),
    )


def contiguity_sweep(initial: BinaryRaster, separated: BinaryRaster,
                     spacings_um, variant: str = "unfilled"
                     ) -> list[ContiguityReport]:
    """One report per mesh spacing."""
    spacings = list(spacings_um)
    if not spacings:
        raise ValueError("spacings must be non-empty")
    return [contiguity_report(initial, separated, s, variant) for s in spacings]


def filled_variant(initial: BinaryRaster, separated: BinaryRaster
                   ) -> tuple[BinaryRaster, BinaryRaster]:
    """Remove internal binder from both rasters, keeping the drawn necks.

    The hole set is taken from ``initial`` (every interior hole regardless of
    size or shape) and filled in both rasters; pixels carved by neck lines
    (1 in ``initial`` but 0 in ``separated``) are restored to binder in the
    filled separated raster so the neck record survives.  A neck overlapping
    a hole is diagnosed — by construction neck lines run through the particle
    phase only.
    """
    holes = interior_hole_mask(initial)
    neck_px = (initial.bits == 1) & (separated.bits == 0)
    filled_init = initial.bits | holes.astype(np.uint8)
    filled_sep = filled_init.copy()
    filled_sep[neck_px] = 0
    # Necks should stay border-connected through the binder network; a neck
    # sealed inside the particle phase would be eaten by naive hole filling.
    sealed = int((interior_hole_mask(separated) & neck_px).sum())
    if sealed:
        logger.warning("%d neck pixel(s) are not border-connected in the "
                       "separated raster; they are preserved anyway", sealed)
    return (BinaryRaster(filled_init, initial.scale),
            BinaryRaster(filled_sep, separated.scale))


@dataclass(frozen=True)
class MicrostructureSummary:
    """All reported microstructural parameters for one image."""

    particle_count: int
    particle_diameter_mean_um: float
    particle_diameter_sd_um: float
    binder_pct: float
    internal_binder_count: int
    internal_binder_mean_um: float
    internal_binder_pct_of_binder: float
    contiguity_unfilled: ContiguityReport | None
    contiguity_filled: ContiguityReport | None
    neck_lengths_um: tuple[float, ...]


def _mean_sd(values) -> tuple[float, float]:
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        return float("nan"), float("nan")
    mean = float(vals.mean())
    sd = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
    return mean, sd


def summarize(seg: SegmentationResult, cleaned: BinaryRaster,
              mesh_spacing_um: float = 1.0) -> MicrostructureSummary:
    """Microstructural parameters from a completed segmentation.

    Diameter statistics exclude border-touching particles (falling back to
    all particles if none lie fully inside).  Contiguity reports are attached
    in both variants at the given mesh; an all-particle raster has no
    interfaces, in which case the reports are None.
    """
    if not seg.per_particle:
        raise ValueError("segmentation produced zero particles")
    total_px = cleaned.bits.size
    binder_px = int(total_px - cleaned.bits.sum())
    binder_pct = 100.0 * binder_px / total_px

    interior = [s for s in seg.per_particle if not s.touches_border]
    pool = interior or seg.per_particle
    d_mean, d_sd = _mean_sd(s.equivalent_diameter_um for s in pool)

    holes = find_holes(cleaned)
    hole_area_um2 = sum(h.area_um2 for h in holes)
    binder_area_um2 = binder_px * cleaned.scale ** 2
    internal_mean = (sum(h.equivalent_diameter_um for h in holes) / len(holes)
                     if holes else 0.0)
    internal_pct = (100.0 * hole_area_um2 / binder_area_um2
                    if binder_area_um2 > 0 else 0.0)

    try:
        unfilled = contiguity_report(cleaned, seg.separated, mesh_spacing_um,
                                     "unfilled")
        f_init, f_sep = filled_variant(cleaned, seg.separated)
        filled = contiguity_report(f_init, f_sep, mesh_spacing_um, "filled")
    except ContiguityUndefinedError:
        logger.warning("no interfaces found; contiguity left undefined")
        unfilled = filled = None

    return MicrostructureSummary(
        particle_count=len(seg.per_particle),
        particle_diameter_mean_um=d_mean,
        particle_diameter_sd_um=d_sd,
        binder_pct=binder_pct,
        internal_binder_count=len(holes),
        internal_binder_mean_um=internal_mean,
        internal_binder_pct_of_binder=internal_pct,
        contiguity_unfilled=unfilled,
        contiguity_filled=filled,
        neck_lengths_um=tuple(p.neck_length_um for p in seg.pairs),
    )
