import math

import numpy as np

from contiq.binarize import binarize_fixed
from contiq.boundary import BindingPoint
from contiq.matching import (SegmentationConfig, draw_necks, match_pairs,
                             process_particles)
from contiq.morphology import label_components
from contiq.raster import BinaryRaster
from contiq.synthgen import Disc, Neck, SynthSpec, dumbbell_spec, generate


def dumbbell_raster():
    gray, truth = generate(dumbbell_spec())
    return binarize_fixed(gray, 0.5), truth


def bp(x, y, inward, turn=120.0):
    return BindingPoint((x, y), inward, turn, (1, "outer", (0, 0), 0))


def test_dumbbell_matches_single_pair():
    img, _ = dumbbell_raster()
    seg = process_particles(img)
    assert len(seg.pairs) == 1
    assert seg.unmatched == []


def test_single_point_stays_unmatched():
    img = BinaryRaster(np.ones((10, 10), dtype=np.uint8), 1.0)
    pairs, unmatched = match_pairs([bp(5, 5, 0.0)], img, max_dist_um=10.0)
    assert pairs == []
    assert len(unmatched) == 1


def test_segment_through_binder_is_infeasible():
    bits = np.ones((9, 9), dtype=np.uint8)
    bits[:, 4] = 0  # binder wall between the two half-planes
    img = BinaryRaster(bits, 1.0)
    points = [bp(2, 4, 0.0), bp(6, 4, 180.0)]  # facing each other
    pairs, unmatched = match_pairs(points, img, max_dist_um=20.0)
    assert pairs == []
    assert len(unmatched) == 2


def test_angle_tolerance_rejects_misaligned():
    img = BinaryRaster(np.ones((9, 9), dtype=np.uint8), 1.0)
    points = [bp(2, 4, 90.0), bp(6, 4, 90.0)]  # parallel, not facing
    pairs, _ = match_pairs(points, img, max_dist_um=20.0, angle_tol_deg=45.0)
    assert pairs == []


def test_distance_threshold_rejects_far_pairs():
    img = BinaryRaster(np.ones((30, 30), dtype=np.uint8), 1.0)
    points = [bp(2, 15, 0.0), bp(27, 15, 180.0)]
    pairs, _ = match_pairs(points, img, max_dist_um=10.0)
    assert pairs == []


def test_matching_is_a_partial_matching():
    img = BinaryRaster(np.ones((20, 20), dtype=np.uint8), 1.0)
    points = [bp(2, 10, 0.0), bp(10, 10, 180.0), bp(11, 10, 0.0),
              bp(18, 10, 180.0)]
    pairs, unmatched = match_pairs(points, img, max_dist_um=30.0)
    used = [id(p.a) for p in pairs] + [id(p.b) for p in pairs]
    assert len(used) == len(set(used))
    assert len(pairs) * 2 + len(unmatched) == len(points)


def test_greedy_determinism():
    img, _ = dumbbell_raster()
    a = process_particles(img)
    b = process_particles(img)
    assert [(p.a.position, p.b.position) for p in a.pairs] \
        == [(p.a.position, p.b.position) for p in b.pairs]
    assert np.array_equal(a.separated.bits, b.separated.bits)


def test_optimal_pairing_on_dumbbell():
    img, _ = dumbbell_raster()
    seg = process_particles(img, SegmentationConfig(pairing="optimal"))
    assert len(seg.pairs) == 1
    assert seg.particles.max_label == 2


def test_draw_necks_splits_dumbbell():
    img, _ = dumbbell_raster()
    seg = process_particles(img)
    relabeled = label_components(seg.separated, 1)
    assert relabeled.max_label == 2


def test_draw_necks_empty_is_noop():
    img, _ = dumbbell_raster()
    out = draw_necks(img, [])
    assert np.array_equal(out.bits, img.bits)


def test_draw_necks_only_removes_segment_pixels():
    img, _ = dumbbell_raster()
    seg = process_particles(img)
    changed = (img.bits == 1) & (seg.separated.bits == 0)
    assert not np.any((img.bits == 0) & (seg.separated.bits == 1))
    # area drops by exactly the carved pixels
    assert img.bits.sum() - seg.separated.bits.sum() == changed.sum()


def test_draw_necks_rejects_infeasible_pair(caplog):
    bits = np.ones((9, 9), dtype=np.uint8)
    bits[:, 4] = 0
    img = BinaryRaster(bits, 1.0)
    from contiq.matching import MatchedPair
    bad = MatchedPair(bp(2, 4, 0.0), bp(6, 4, 180.0), 4.0, 0.5)
    with caplog.at_level("WARNING"):
        out = draw_necks(img, [bad])
    assert np.array_equal(out.bits, img.bits)
    assert any("infeasible" in r.message for r in caplog.records)


def three_chain_spec():
    r_um, scale = 10.0, 0.25
    rpx = r_um / scale
    h = 0.35 * rpx
    d = 2 * math.sqrt(rpx * rpx - h * h)
    return SynthSpec(seed=2, width=380, height=160, scale=scale,
                     discs=(Disc(90.3, 80.2, r_um),
                            Disc(90.3 + d, 80.2, r_um),
                            Disc(90.3 + 2 * d, 80.2, r_um)),
                     necks=(Neck(0, 1), Neck(1, 2)))


def test_three_disc_chain_splits_into_three():
    gray, _ = generate(three_chain_spec())
    img = binarize_fixed(gray, 0.5)
    seg = process_particles(img)
    assert len(seg.pairs) == 2
    assert seg.particles.max_label == 3


def test_disjoint_discs_pass_through():
    discs = tuple(Disc(30.2 + 62 * k, 32.3, 6.0) for k in range(5))
    spec = SynthSpec(seed=1, width=320, height=64, scale=0.25, discs=discs)
    gray, _ = generate(spec)
    img = binarize_fixed(gray, 0.5)
    seg = process_particles(img)
    assert seg.particles.max_label == 5
    assert seg.pairs == []
    assert np.array_equal(seg.separated.bits, img.bits)


def test_packing_with_known_necks():
    spec = SynthSpec(seed=42, width=520, height=420, scale=0.25, noise=0.0,
                     particles=12, radius_um=9.0, radius_sd_um=0.8,
                     necks_count=7, waist_min_frac=0.25, waist_max_frac=0.40)
    gray, truth = generate(spec)
    assert truth.particle_count == 12 and truth.neck_count == 7
    seg = process_particles(binarize_fixed(gray, 0.5))
    assert len(seg.pairs) == 7
    assert seg.particles.max_label == 12


def test_dumbbell_neck_length_close_to_waist():
    img, truth = dumbbell_raster()
    seg = process_particles(img)
    assert len(seg.pairs) == 1
    err_px = abs(seg.pairs[0].neck_length_um - truth.neck_waists_um[0]) / 0.5
    assert err_px <= 2.0


def test_particle_count_never_decreases(suite_results):
    for r in suite_results["results"][:6]:
        before = label_components(r["cleaned"], 1).max_label
        after = r["seg"].particles.max_label
        assert after >= before
        if not r["seg"].pairs:
            assert after == before


def test_suite_pairs_are_partial_matching(suite_results):
    for r in suite_results["results"]:
        used = [id(p.a) for p in r["seg"].pairs] + [id(p.b) for p in r["seg"].pairs]
        assert len(used) == len(set(used))
