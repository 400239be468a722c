import time

import pytest

from contiq import synthgen
from contiq.binarize import binarize_auto
from contiq.cli import score_necks
from contiq.matching import process_particles
from contiq.morphology import majority_filter
from contiq.stereology import contiguity_sweep, summarize

# Pass count of the default pipeline (mirrors cli.RunConfig).
DEFAULT_PASSES = 1

MESH_SWEEP_UM = (0.5, 1.0, 2.0, 5.0, 10.0)  # plus 1 px, added per spec scale


def run_pipeline(gray, passes=DEFAULT_PASSES):
    """Default pipeline: auto threshold, cleanup, separation."""
    auto = binarize_auto(gray)
    cleaned = majority_filter(auto.raster, passes)
    seg = process_particles(cleaned)
    return auto, cleaned, seg


@pytest.fixture(scope="session")
def suite_results():
    """Every bundled suite spec run once through the default pipeline."""
    results = []
    pipeline_seconds = 0.0
    for name, spec in synthgen.default_suite():
        t0 = time.perf_counter()
        gray, truth = synthgen.generate(spec)
        auto, cleaned, seg = run_pipeline(gray)
        matched, recall, precision = score_necks(truth, seg)
        pipeline_seconds += time.perf_counter() - t0
        spacings = sorted({spec.scale, *MESH_SWEEP_UM})
        sweep = contiguity_sweep(cleaned, seg.separated, spacings)
        results.append({
            "name": name,
            "spec": spec,
            "truth": truth,
            "cleaned": cleaned,
            "seg": seg,
            "matched": matched,
            "recall": recall,
            "precision": precision,
            "sweep": sweep,
            "summary": summarize(seg, cleaned, 1.0),
        })
    return {"results": results, "pipeline_seconds": pipeline_seconds}
