import json

import numpy as np
import pytest

from contiq.cli import ConfigError, RunConfig, main
from contiq.raster import save_overlay
from contiq.synthgen import SynthSpec, dumbbell_spec, format_spec_text, generate

REPORT_KEYS = {
    "image", "config", "threshold", "binder_pct", "particle_count",
    "particle_diameter_um", "internal_binder", "necks", "contiguity",
    "n_ww_per_line", "n_wb_per_line", "n_ww_per_um", "n_wb_per_um",
}


@pytest.fixture(scope="module")
def family_images(tmp_path_factory):
    """Three images generated from one spec family."""
    outdir = tmp_path_factory.mktemp("family")
    paths = []
    for k in range(3):
        spec = SynthSpec(seed=300 + k, width=280, height=220, scale=0.25,
                         noise=0.01, particles=8, radius_um=8.0,
                         radius_sd_um=0.6, necks_count=5,
                         waist_min_frac=0.25, waist_max_frac=0.4)
        gray, _ = generate(spec)
        path = outdir / f"fam{k}.png"
        save_overlay(gray, [], path)
        paths.append(path)
    return paths


def test_analyze_batch_summary(family_images, tmp_path):
    out = tmp_path / "rep"
    rc = main(["analyze", *map(str, family_images),
               "--scale", "0.25", "--outdir", str(out)])
    assert rc == 0
    reports = [json.loads((out / f"fam{k}.json").read_text()) for k in range(3)]
    for rep in reports:
        assert REPORT_KEYS <= set(rep)
        assert set(rep["contiguity"]) == {"unfilled", "filled"}
        assert rep["contiguity"]["unfilled"]["combined"] is not None
    summary = json.loads((out / "batch_summary.json").read_text())
    binders = [r["binder_pct"] for r in reports]
    row = summary["rows"]["Binder phase (pct)"]
    assert row["mean"] == pytest.approx(np.mean(binders), rel=1e-4)
    assert row["sd"] == pytest.approx(np.std(binders, ddof=1), rel=1e-4)
    assert (out / "batch_summary.csv").exists()
    assert (out / "fam0_particles.csv").exists()
    header = (out / "fam0_particles.csv").read_text().splitlines()[0]
    assert header == ("label,area_um2,diameter_um,perimeter_um,"
                      "circularity,edge_um,touches_border")


def test_analyze_reports_are_byte_identical_on_rerun(family_images, tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    for out in (out1, out2):
        assert main(["analyze", str(family_images[0]),
                     "--scale", "0.25", "--outdir", str(out)]) == 0
    a = (out1 / "fam0.json").read_bytes()
    b = (out2 / "fam0.json").read_bytes()
    # the config echo contains the outdir, which legitimately differs
    a = a.replace(str(out1).encode(), b"OUT")
    b = b.replace(str(out2).encode(), b"OUT")
    assert a == b


def test_analyze_empty_inputs_usage_error(tmp_path):
    rc = main(["analyze", str(tmp_path / "none-*.png"),
               "--outdir", str(tmp_path / "o")])
    assert rc == 2


def test_analyze_bad_threshold_names_field(tmp_path, capsys, family_images):
    rc = main(["analyze", str(family_images[0]), "--threshold", "1.5",
               "--outdir", str(tmp_path / "o")])
    assert rc == 2
    assert "threshold" in capsys.readouterr().err


def test_analyze_unreadable_image_partial_failure(tmp_path, family_images):
    bad = tmp_path / "broken.png"
    bad.write_bytes(b"nope")
    rc = main(["analyze", str(family_images[0]), str(bad),
               "--scale", "0.25", "--outdir", str(tmp_path / "o")])
    assert rc == 1
    assert (tmp_path / "o" / "fam0.json").exists()


def test_config_file_precedence(tmp_path, family_images):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"scale": 0.25, "mesh_um": 2.0}))
    out = tmp_path / "o"
    rc = main(["analyze", str(family_images[0]), "--config", str(cfgfile),
               "--mesh-um", "1.0", "--outdir", str(out)])
    assert rc == 0
    rep = json.loads((out / "fam0.json").read_text())
    assert rep["config"]["scale"] == 0.25       # from file
    assert rep["config"]["mesh_um"] == 1.0      # flag wins over the file


def test_config_unknown_key_rejected(tmp_path, family_images):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"sacle": 0.25}))
    rc = main(["analyze", str(family_images[0]), "--config", str(cfgfile),
               "--outdir", str(tmp_path / "o")])
    assert rc == 2


def test_runconfig_validation_messages():
    with pytest.raises(ConfigError, match="scale"):
        RunConfig(scale=-1).validate()
    with pytest.raises(ConfigError, match="angle_tol_deg"):
        RunConfig(angle_tol_deg=120).validate()
    with pytest.raises(ConfigError, match="pairing"):
        RunConfig(pairing="magic").validate()
    with pytest.raises(ConfigError, match="majority_passes"):
        RunConfig(majority_passes="sometimes").validate()


def test_synthgen_subcommand_roundtrip(tmp_path):
    spec = dumbbell_spec(r_px=40, center_dist_px=74.9, scale=0.25, canvas=240)
    spec_path = tmp_path / "pair.spec"
    spec_path.write_text(format_spec_text(spec))
    gen = tmp_path / "gen"
    assert main(["synthgen", str(spec_path), "--outdir", str(gen)]) == 0
    truth = json.loads((gen / "pair_truth.json").read_text())
    assert truth["particle_count"] == 2
    assert truth["neck_count"] == 1

    rep = tmp_path / "rep"
    assert main(["analyze", str(gen / "pair.png"), "--scale", "0.25",
                 "--outdir", str(rep), "--overlays", "--mesh-sweep"]) == 0
    data = json.loads((rep / "pair.json").read_text())
    assert data["particle_count"] == 2
    assert len(data["necks"]) == 1
    assert "mesh_sweep" in data
    for suffix in ("binary", "cleaned", "separated", "annotated"):
        assert (rep / f"pair_{suffix}.png").exists()


def test_emit_suite_specs(tmp_path):
    out = tmp_path / "suite"
    assert main(["synthgen", "--emit-suite", "--outdir", str(out)]) == 0
    files = sorted(out.glob("*.spec"))
    assert len(files) >= 20


def test_validate_single_disc_spec(tmp_path):
    spec = SynthSpec(seed=21, width=160, height=140, scale=0.25,
                     particles=1, radius_um=9.0, necks_count=0)
    spec_path = tmp_path / "one.spec"
    spec_path.write_text(format_spec_text(spec))
    out = tmp_path / "val"
    assert main(["validate", str(spec_path), "--outdir", str(out)]) == 0
    card = json.loads((out / "scorecard.json").read_text())
    row = card["specs"][0]
    assert row["particle_count_error"] == 0
    assert row["neck_recall"] == 1.0 and row["neck_precision"] == 1.0
    assert row["diameter_rel_error_pct"] <= 1.0  # rasterization only


def test_validate_dumbbell_contiguity(tmp_path):
    spec = dumbbell_spec(r_px=40, center_dist_px=74.9, scale=0.25,
                         canvas=260, noise=0.01)
    spec_path = tmp_path / "pair.spec"
    spec_path.write_text(format_spec_text(spec))
    out = tmp_path / "val"
    assert main(["validate", str(spec_path), "--outdir", str(out)]) == 0
    card = json.loads((out / "scorecard.json").read_text())
    assert card["specs"][0]["contiguity_abs_error"] <= 0.03


def test_dump_chains_csv(tmp_path, family_images):
    out = tmp_path / "o"
    rc = main(["analyze", str(family_images[0]), "--scale", "0.25",
               "--outdir", str(out), "--dump-chains"])
    assert rc == 0
    lines = (out / "fam0_chains.csv").read_text().splitlines()
    assert lines[0] == "component,index,x,y,move"
    assert len(lines) > 100
    first = lines[1].split(",")
    assert first[0] == "1" and first[1] == "0"


def test_sweep_threshold_csv(tmp_path, family_images):
    out = tmp_path / "sw"
    rc = main(["sweep", str(family_images[0]), "--kind", "threshold",
               "--scale", "0.25", "--outdir", str(out)])
    assert rc == 0
    lines = (out / "fam0_threshold_sweep.csv").read_text().splitlines()
    assert lines[0] == "t,small_particle_count"
    assert len(lines) == 92  # header + the 0.05..0.95 grid


def test_sweep_mesh_csv(tmp_path, family_images):
    out = tmp_path / "sw"
    rc = main(["sweep", str(family_images[0]), "--kind", "mesh",
               "--scale", "0.25", "--outdir", str(out)])
    assert rc == 0
    lines = (out / "fam0_mesh_sweep.csv").read_text().splitlines()
    assert lines[0].startswith("spacing_um,")
    assert len(lines) >= 5
