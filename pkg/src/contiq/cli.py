"""Batch command-line driver.

Subcommands:

* ``analyze``  — run the five-stage pipeline (load, threshold, clean,
  separate, measure) over images and write JSON/CSV reports plus optional
  overlays and a batch summary.
* ``synthgen`` — render a synthetic spec file to PNG + ground-truth JSON.
* ``validate`` — generate synthetic structures, run the pipeline, and score
  it against their analytic ground truth.
* ``sweep``    — emit threshold or mesh sweep curves as CSV.

Exit codes: 0 success, 1 at least one image failed, 2 usage/config error.
"""
from __future__ import annotations

import argparse
import dataclasses
import glob
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import binarize, synthgen
from .matching import SegmentationConfig, SegmentationResult, process_particles
from .morphology import majority_filter
from .raster import (BinaryRaster, GrayRaster, OverlayMarker, OverlaySegment,
                     load_image, save_overlay)
from .report import (PER_PARTICLE_HEADER, jsonable, per_particle_rows,
                     write_csv, write_json)
from .stereology import ContiguityReport, contiguity_sweep, summarize

logger = logging.getLogger(__name__)

DEFAULT_SCALE = 215.0 / 2259.0  # µm per pixel of the reference micrographs


class ConfigError(ValueError):
    """Configuration/usage problem; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one pipeline run (echoed into every report)."""

    scale: float = DEFAULT_SCALE
    threshold: str | float = "auto"
    majority_passes: int | str = 1  # pass count, or "stable" (capped)
    hole_size_um: float = 3.0
    hole_circularity: float = 0.6
    chain_window: int = 7
    circularity_threshold: float = 0.85
    max_neck_um: float | None = None
    angle_tol_deg: float = 45.0
    pairing: str = "greedy"
    mesh_um: float = 1.0
    mesh_sweep: bool = False
    outdir: str = "out"
    overlays: bool = False
    dump_chains: bool = False
    filled: bool = True
    jobs: int = 1

    def validate(self) -> "RunConfig":
        if self.scale <= 0:
            raise ConfigError(f"scale: must be positive, got {self.scale}")
        if isinstance(self.threshold, str):
            if self.threshold != "auto":
                raise ConfigError(
                    f"threshold: must be 'auto' or a number in [0, 1], "
                    f"got {self.threshold!r}")
        elif not 0.0 <= float(self.threshold) <= 1.0:
            raise ConfigError(
                f"threshold: must be in [0, 1], got {self.threshold}")
        if isinstance(self.majority_passes, str):
            if self.majority_passes != "stable":
                raise ConfigError("majority_passes: must be an integer >= 0 "
                                  f"or 'stable', got {self.majority_passes!r}")
        elif int(self.majority_passes) < 0:
            raise ConfigError("majority_passes: must be >= 0")
        if self.hole_size_um <= 0:
            raise ConfigError("hole_size_um: must be positive")
        if self.hole_circularity <= 0:
            raise ConfigError("hole_circularity: must be positive")
        if self.chain_window < 1:
            raise ConfigError("chain_window: must be >= 1")
        if not 0 < self.circularity_threshold <= 1.1:
            raise ConfigError("circularity_threshold: must be in (0, 1.1]")
        if self.max_neck_um is not None and self.max_neck_um <= 0:
            raise ConfigError("max_neck_um: must be positive when set")
        if not 0 < self.angle_tol_deg <= 90:
            raise ConfigError("angle_tol_deg: must be in (0, 90]")
        if self.pairing not in ("greedy", "optimal"):
            raise ConfigError(f"pairing: must be 'greedy' or 'optimal', "
                              f"got {self.pairing!r}")
        if self.mesh_um <= 0:
            raise ConfigError("mesh_um: must be positive")
        if self.jobs < 1:
            raise ConfigError("jobs: must be >= 1")
        return self

    def segmentation(self) -> SegmentationConfig:
        return SegmentationConfig(
            circularity_threshold=self.circularity_threshold,
            hole_size_um=self.hole_size_um,
            hole_circularity=self.hole_circularity,
            chain_window=self.chain_window,
            max_neck_um=self.max_neck_um,
            angle_tol_deg=self.angle_tol_deg,
            pairing=self.pairing,
        )

    def mesh_spacings(self) -> list[float]:
        # 1 px plus the fixed µm grid, dropping sub-pixel entries.
        spacings = [self.scale] + [s for s in (0.5, 1.0, 2.0, 5.0, 10.0)
                                   if round(s / self.scale) >= 1]
        return sorted(set(spacings))


@dataclass(frozen=True)
class ImageAnalysis:
    """In-memory artifacts of one analyzed image."""

    binary: BinaryRaster
    cleaned: BinaryRaster
    seg: SegmentationResult
    report: dict
    sweep_curve: tuple


def analyze_raster(gray: GrayRaster, cfg: RunConfig, name: str = "image"
                   ) -> ImageAnalysis:
    """Run the full pipeline on a loaded raster and assemble its report."""
    curve = ()
    if isinstance(cfg.threshold, str):
        auto = binarize.binarize_auto(gray)
        binary, tvalue, fallback = auto.raster, auto.threshold, auto.fallback
        curve = auto.curve
    else:
        tvalue, fallback = float(cfg.threshold), False
        binary = binarize.binarize_fixed(gray, tvalue)

    passes = None if cfg.majority_passes == "stable" else int(cfg.majority_passes)
    cleaned = majority_filter(binary, passes)
    seg = process_particles(cleaned, cfg.segmentation())
    summary = summarize(seg, cleaned, cfg.mesh_um)

    report = {
        "image": name,
        "config": jsonable(cfg),
        "threshold": {"mode": "auto" if isinstance(cfg.threshold, str) else "fixed",
                      "value": tvalue, "fallback": fallback},
        "binder_pct": summary.binder_pct,
        "particle_count": summary.particle_count,
        "particle_diameter_um": {"mean": summary.particle_diameter_mean_um,
                                 "sd": summary.particle_diameter_sd_um},
        "internal_binder": {"count": summary.internal_binder_count,
                            "mean_um": summary.internal_binder_mean_um,
                            "pct_of_binder": summary.internal_binder_pct_of_binder},
        "necks": [{"a": list(p.a.position), "b": list(p.b.position),
                   "length_um": p.neck_length_um, "score": p.score}
                  for p in seg.pairs],
        "contiguity": {},
    }
    for variant, rep in (("unfilled", summary.contiguity_unfilled),
                         ("filled", summary.contiguity_filled if cfg.filled else None)):
        report["contiguity"][variant] = _contiguity_block(rep)
    unfilled = summary.contiguity_unfilled
    report["n_ww_per_line"] = unfilled.n_ww_per_line if unfilled else None
    report["n_wb_per_line"] = unfilled.n_wb_per_line if unfilled else None
    report["n_ww_per_um"] = _per_um(unfilled, "ww") if unfilled else None
    report["n_wb_per_um"] = _per_um(unfilled, "wb") if unfilled else None

    if cfg.mesh_sweep:
        reports = contiguity_sweep(cleaned, seg.separated, cfg.mesh_spacings())
        report["mesh_sweep"] = [
            {"spacing_um": r.mesh_spacing_um, "combined": r.combined_c_w,
             "horizontal": r.c_w_horizontal, "vertical": r.c_w_vertical}
            for r in reports]
    return ImageAnalysis(binary, cleaned, seg, report, curve)


def _contiguity_block(rep: ContiguityReport | None):
    if rep is None:
        return None
    return {"combined": rep.combined_c_w,
            "horizontal": rep.c_w_horizontal,
            "vertical": rep.c_w_vertical,
            "mesh_spacing_um": rep.mesh_spacing_um}


def _per_um(rep: ContiguityReport, which: str) -> float:
    h, v = rep.horizontal, rep.vertical
    total = (h.ww_total + v.ww_total) if which == "ww" else (h.wb_total + v.wb_total)
    length = h.lines * h.line_length_um + v.lines * v.line_length_um
    return total / length


def _write_outputs(analysis: ImageAnalysis, stem: str,
                   outdir: Path, cfg: RunConfig) -> None:
    write_json(outdir / f"{stem}.json", analysis.report)
    write_csv(outdir / f"{stem}_particles.csv", PER_PARTICLE_HEADER,
              per_particle_rows(analysis.seg.per_particle))
    if analysis.sweep_curve:
        write_csv(outdir / f"{stem}_threshold_sweep.csv",
                  ["t", "small_particle_count"], analysis.sweep_curve)
    if cfg.dump_chains:
        write_csv(outdir / f"{stem}_chains.csv",
                  ["component", "index", "x", "y", "move"],
                  _chain_rows(analysis.cleaned))
    if cfg.overlays:
        save_overlay(analysis.binary.to_gray(), [], outdir / f"{stem}_binary.png")
        save_overlay(analysis.cleaned.to_gray(), [], outdir / f"{stem}_cleaned.png")
        save_overlay(analysis.seg.separated.to_gray(), [],
                     outdir / f"{stem}_separated.png")
        ann = []
        for p in analysis.seg.pairs:
            ann.append(OverlaySegment(p.a.position, p.b.position, (0, 255, 255)))
            ann.append(OverlayMarker(p.a.position, (255, 0, 0)))
            ann.append(OverlayMarker(p.b.position, (255, 0, 0)))
        for bp in analysis.seg.unmatched:
            ann.append(OverlayMarker(bp.position, (255, 160, 0)))
        save_overlay(analysis.cleaned.to_gray(), ann,
                     outdir / f"{stem}_annotated.png")


def _chain_rows(cleaned: BinaryRaster):
    from .boundary import trace_boundaries
    from .morphology import label_components

    labels = label_components(cleaned, 1)
    rows = []
    for comp in range(1, labels.max_label + 1):
        for cc in trace_boundaries(cleaned, labels, comp):
            for i, ((x, y), move) in enumerate(zip(cc.positions(), cc.moves)):
                rows.append([comp, i, x, y, move])
    return rows


def _analyze_one(path: str, cfg: RunConfig) -> dict:
    gray = load_image(path, cfg.scale)
    analysis = analyze_raster(gray, cfg, name=Path(path).name)
    outdir = Path(cfg.outdir)
    _write_outputs(analysis, Path(path).stem, outdir, cfg)
    return analysis.report


SUMMARY_ROWS = [
    ("Particle diameter (um)", lambda r: r["particle_diameter_um"]["mean"]),
    ("Binder phase (pct)", lambda r: r["binder_pct"]),
    ("N_WW", lambda r: r["n_ww_per_line"]),
    ("N_WB", lambda r: r["n_wb_per_line"]),
    ("Contiguity", lambda r: r["contiguity"]["unfilled"]["combined"]
        if r["contiguity"]["unfilled"] else None),
    ("Contiguity (filled)", lambda r: r["contiguity"]["filled"]["combined"]
        if r["contiguity"].get("filled") else None),
]


def _batch_summary(reports: list[dict]) -> tuple[list[str], list[list]]:
    header = ["parameter"] + [r["image"] for r in reports] + ["mean", "sd"]
    rows = []
    for label, getter in SUMMARY_ROWS:
        values = [getter(r) for r in reports]
        present = [v for v in values if v is not None]
        mean = float(np.mean(present)) if present else None
        sd = (float(np.std(present, ddof=1)) if len(present) > 1
              else (0.0 if present else None))
        rows.append([label] + values + [mean, sd])
    return header, rows


def cmd_analyze(args) -> int:
    cfg = _build_config(args)
    inputs = _expand_inputs(args.inputs)
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    reports = []
    failures = []
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [(p, pool.submit(_analyze_one, p, cfg)) for p in inputs]
            for path, fut in futures:
                try:
                    reports.append(fut.result())
                except Exception as exc:
                    failures.append((path, exc))
                    logger.error("failed to analyze %s: %s", path, exc)
    else:
        for path in inputs:
            try:
                reports.append(_analyze_one(path, cfg))
            except Exception as exc:
                failures.append((path, exc))
                logger.error("failed to analyze %s: %s", path, exc)

    if reports:
        header, rows = _batch_summary(reports)
        write_csv(outdir / "batch_summary.csv", header, rows)
        write_json(outdir / "batch_summary.json", {
            "images": [r["image"] for r in reports],
            "rows": {label: {"values": row[1:-2], "mean": row[-2], "sd": row[-1]}
                     for (label, _), row in zip(SUMMARY_ROWS, rows)},
        })
        for (label, _), row in zip(SUMMARY_ROWS, rows):
            mean, sd = row[-2], row[-1]
            if mean is not None:
                print(f"{label:24s} {mean:10.4g} +/- {sd:.4g}")
    for path, exc in failures:
        print(f"FAILED {path}: {exc}", file=sys.stderr)
    return 1 if failures else 0


def score_necks(truth: synthgen.GroundTruth, seg: SegmentationResult
                ) -> tuple[int, float, float]:
    """Match detected pairs to true necks (greedy, by midpoint distance).

    A detected pair credits the true neck whose chord midpoint lies within
    half the smaller partner radius.  Returns (matched, recall, precision).
    """
    spec = truth.spec
    true_mids = [((e1[0] + e2[0]) / 2.0, (e1[1] + e2[1]) / 2.0)
                 for e1, e2 in truth.neck_endpoints_px]
    tolerances = [0.5 * min(spec.discs[nk.i].radius_um,
                            spec.discs[nk.j].radius_um) / spec.scale
                  for nk in spec.necks]
    det_mids = [((p.a.position[0] + p.b.position[0]) / 2.0,
                 (p.a.position[1] + p.b.position[1]) / 2.0)
                for p in seg.pairs]
    candidates = []
    for ti, (tm, tol) in enumerate(zip(true_mids, tolerances)):
        for di, dm in enumerate(det_mids):
            d = math.hypot(tm[0] - dm[0], tm[1] - dm[1])
            if d <= tol:
                candidates.append((d, ti, di))
    used_t: set[int] = set()
    used_d: set[int] = set()
    for d, ti, di in sorted(candidates):
        if ti in used_t or di in used_d:
            continue
        used_t.add(ti)
        used_d.add(di)
    matched = len(used_t)
    recall = matched / len(true_mids) if true_mids else 1.0
    precision = matched / len(det_mids) if det_mids else 1.0
    return matched, recall, precision


def validate_specs(specs: list[tuple[str, synthgen.SynthSpec]],
                   cfg: RunConfig) -> dict:
    """Run the pipeline over synthetic specs and score it against truth."""
    rows = []
    total_true = total_matched = total_detected = 0
    for name, spec in specs:
        gray, truth = synthgen.generate(spec)
        run_cfg = replace(cfg, scale=spec.scale)
        analysis = analyze_raster(gray, run_cfg, name=name)
        seg = analysis.seg
        matched, recall, precision = score_necks(truth, seg)
        total_true += truth.neck_count
        total_matched += matched
        total_detected += len(seg.pairs)
        oracle_c = synthgen.oracle_contiguity(truth, cfg.mesh_um)
        pipeline_c = analysis.report["contiguity"]["unfilled"]["combined"]
        truth_dmean = (float(np.mean(truth.particle_diameters_um))
                       if truth.particle_diameters_um else float("nan"))
        rows.append({
            "spec": name,
            "particles_true": truth.particle_count,
            "particles_found": seg.particles.max_label,
            "particle_count_error": seg.particles.max_label - truth.particle_count,
            "necks_true": truth.neck_count,
            "necks_detected": len(seg.pairs),
            "neck_recall": recall,
            "neck_precision": precision,
            "contiguity": pipeline_c,
            "contiguity_oracle": oracle_c,
            "contiguity_abs_error": abs(pipeline_c - oracle_c),
            "binder_pct": analysis.report["binder_pct"],
            "binder_pct_truth": truth.binder_fraction_pct,
            "binder_abs_error_pp": abs(analysis.report["binder_pct"]
                                       - truth.binder_fraction_pct),
            "diameter_mean_um": analysis.report["particle_diameter_um"]["mean"],
            "diameter_rel_error_pct": abs(
                analysis.report["particle_diameter_um"]["mean"] - truth_dmean)
                / truth_dmean * 100.0,
        })
    return {
        "specs": rows,
        "overall": {
            "neck_recall": total_matched / total_true if total_true else 1.0,
            "neck_precision": (total_matched / total_detected
                               if total_detected else 1.0),
            "mean_contiguity_abs_error": float(np.mean(
                [r["contiguity_abs_error"] for r in rows])) if rows else None,
            "max_contiguity_abs_error": max(
                (r["contiguity_abs_error"] for r in rows), default=None),
        },
    }


def cmd_validate(args) -> int:
    cfg = _build_config(args)
    if args.specs:
        specs = []
        for path in args.specs:
            spec = synthgen.parse_spec_text(Path(path).read_text())
            specs.append((Path(path).stem, spec))
    else:
        specs = synthgen.default_suite()
    scorecard = validate_specs(specs, cfg)
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_json(outdir / "scorecard.json", scorecard)
    write_csv(outdir / "scorecard.csv",
              list(scorecard["specs"][0].keys()),
              [list(r.values()) for r in scorecard["specs"]])
    print(f"{'spec':12s} {'parts':>11s} {'necks':>9s} {'recall':>7s} "
          f"{'prec':>6s} {'c_err':>7s} {'b_err':>7s} {'d_err%':>7s}")
    for r in scorecard["specs"]:
        print(f"{r['spec']:12s} {r['particles_found']:4d}/{r['particles_true']:<4d} "
              f"{r['necks_detected']:4d}/{r['necks_true']:<4d} "
              f"{r['neck_recall']:7.3f} {r['neck_precision']:6.3f} "
              f"{r['contiguity_abs_error']:7.4f} {r['binder_abs_error_pp']:7.3f} "
              f"{r['diameter_rel_error_pct']:7.3f}")
    o = scorecard["overall"]
    print(f"overall: recall={o['neck_recall']:.4f} "
          f"precision={o['neck_precision']:.4f} "
          f"mean_c_err={o['mean_contiguity_abs_error']:.4f} "
          f"max_c_err={o['max_contiguity_abs_error']:.4f}")
    return 0


def cmd_synthgen(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.emit_suite:
        for name, spec in synthgen.default_suite():
            (outdir / f"{name}.spec").write_text(synthgen.format_spec_text(spec))
        print(f"wrote {len(synthgen.default_suite())} suite specs to {outdir}")
        return 0
    if not args.spec:
        raise ConfigError("spec: a spec file is required unless --emit-suite")
    spec = synthgen.parse_spec_text(Path(args.spec).read_text())
    gray, truth = synthgen.generate(spec)
    stem = Path(args.spec).stem
    save_overlay(gray, [], outdir / f"{stem}.png")
    write_json(outdir / f"{stem}_truth.json", {
        "particle_count": truth.particle_count,
        "neck_count": truth.neck_count,
        "neck_waists_um": list(truth.neck_waists_um),
        "neck_endpoints_px": [[list(e1), list(e2)]
                              for e1, e2 in truth.neck_endpoints_px],
        "particle_diameters_um": list(truth.particle_diameters_um),
        "binder_fraction_pct": truth.binder_fraction_pct,
        "internal_binder": {
            "count": truth.internal_binder_count,
            "mean_um": truth.internal_binder_mean_um,
            "pct_of_binder": truth.internal_binder_pct_of_binder,
        },
        "scale": spec.scale,
    })
    print(f"wrote {stem}.png and {stem}_truth.json to {outdir}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _build_config(args)
    inputs = _expand_inputs(args.inputs)
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for path in inputs:
        gray = load_image(path, cfg.scale)
        stem = Path(path).stem
        if args.kind == "threshold":
            auto = binarize.binarize_auto(gray)
            write_csv(outdir / f"{stem}_threshold_sweep.csv",
                      ["t", "small_particle_count"], auto.curve)
        else:
            analysis = analyze_raster(gray, replace(cfg, mesh_sweep=True),
                                      name=Path(path).name)
            rows = [[r["spacing_um"], r["combined"], r["horizontal"], r["vertical"]]
                    for r in analysis.report["mesh_sweep"]]
            write_csv(outdir / f"{stem}_mesh_sweep.csv",
                      ["spacing_um", "combined_c_w", "c_w_horizontal",
                       "c_w_vertical"], rows)
    return 0


def _expand_inputs(patterns: list[str]) -> list[str]:
    inputs: list[str] = []
    for pattern in patterns:
        hits = sorted(glob.glob(pattern))
        inputs.extend(hits if hits else ([pattern] if Path(pattern).exists() else []))
    if not inputs:
        raise ConfigError("inputs: no input files matched")
    return inputs


def _build_config(args) -> RunConfig:
    values = {}
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            loaded = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {config_path}: {exc}")
        field_names = {f.name for f in dataclasses.fields(RunConfig)}
        for key, value in loaded.items():
            if key not in field_names:
                raise ConfigError(f"config: unknown key {key!r}")
            values[key] = value
    for field in dataclasses.fields(RunConfig):
        arg = getattr(args, field.name, None)
        if arg is not None:
            values[field.name] = arg
    if "threshold" in values and not isinstance(values["threshold"], (int, float)):
        if values["threshold"] != "auto":
            try:
                values["threshold"] = float(values["threshold"])
            except ValueError:
                raise ConfigError(
                    f"threshold: must be 'auto' or a number in [0, 1], "
                    f"got {values['threshold']!r}")
    if "majority_passes" in values and isinstance(values["majority_passes"], str) \
            and values["majority_passes"] != "stable":
        try:
            values["majority_passes"] = int(values["majority_passes"])
        except ValueError:
            raise ConfigError("majority_passes: must be an integer >= 0 "
                              f"or 'stable', got {values['majority_passes']!r}")
    return RunConfig(**values).validate()


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (CLI flags win)")
    p.add_argument("--scale", type=float, help="pixel scale in µm/px")
    p.add_argument("--threshold", help="'auto' or a fixed level in [0, 1]")
    p.add_argument("--majority-passes", dest="majority_passes",
                   help="majority filter passes (integer or 'stable')")
    p.add_argument("--hole-size-um", dest="hole_size_um", type=float)
    p.add_argument("--hole-circularity", dest="hole_circularity", type=float)
    p.add_argument("--chain-window", dest="chain_window", type=int)
    p.add_argument("--circularity-threshold", dest="circularity_threshold",
                   type=float)
    p.add_argument("--max-neck-um", dest="max_neck_um", type=float,
                   help="absolute neck length limit (default: adaptive)")
    p.add_argument("--angle-tol-deg", dest="angle_tol_deg", type=float)
    p.add_argument("--pairing", choices=["greedy", "optimal"])
    p.add_argument("--mesh-um", dest="mesh_um", type=float)
    p.add_argument("--mesh-sweep", dest="mesh_sweep", action="store_const",
                   const=True, help="attach a mesh-spacing sweep to reports")
    p.add_argument("--outdir")
    p.add_argument("--overlays", action="store_const", const=True,
                   help="write binary/cleaned/separated/annotated PNGs")
    p.add_argument("--dump-chains", dest="dump_chains", action="store_const",
                   const=True, help="write boundary chain codes as CSV")
    p.add_argument("--no-filled", dest="filled", action="store_const",
                   const=False, help="skip the filled-variant contiguity")
    p.add_argument("--jobs", type=int, help="parallel image workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contiq",
        description="Automated microstructure analysis and contiguity "
                    "estimation for two-phase sintered alloys.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze micrographs")
    p.add_argument("inputs", nargs="+", help="image files or globs")
    _add_config_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synthgen", help="render a synthetic spec")
    p.add_argument("spec", nargs="?", help="spec file")
    p.add_argument("--outdir", default="out")
    p.add_argument("--emit-suite", action="store_true",
                   help="write the bundled validation suite spec files")
    p.set_defaults(func=cmd_synthgen)

    p = sub.add_parser("validate", help="score the pipeline on synthetics")
    p.add_argument("specs", nargs="*", help="spec files (default: bundled suite)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="emit threshold or mesh sweep CSVs")
    p.add_argument("inputs", nargs="+", help="image files or globs")
    p.add_argument("--kind", choices=["threshold", "mesh"], default="threshold")
    _add_config_flags(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
