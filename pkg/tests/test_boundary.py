import math

import numpy as np
import pytest

from contiq.binarize import binarize_fixed
from contiq.boundary import detect_binding_points, trace_boundaries
from contiq.geometry import DIR8, angle_diff
from contiq.morphology import classify_and_fill_holes, label_components
from contiq.raster import BinaryRaster
from contiq.synthgen import Disc, Inclusion, Neck, SynthSpec, dumbbell_spec, generate


def raster(arr, scale=1.0):
    return BinaryRaster(np.asarray(arr, dtype=np.uint8), scale)


def chain_of(img, component=1):
    return trace_boundaries(img, label_components(img, 1), component)


def closes(cc):
    dx = sum(DIR8[m][0] for m in cc.moves)
    dy = sum(DIR8[m][1] for m in cc.moves)
    return (dx, dy) == (0, 0)


def test_single_pixel_chain_is_degenerate():
    bits = np.zeros((3, 3))
    bits[1, 1] = 1
    chains = chain_of(raster(bits))
    assert len(chains) == 1
    assert chains[0].moves == ()
    assert chains[0].start == (1, 1)


def test_three_by_three_block_chain():
    bits = np.zeros((5, 5))
    bits[1:4, 1:4] = 1
    cc = chain_of(raster(bits))[0]
    assert cc.start == (1, 1)
    assert len(cc.moves) == 8
    assert closes(cc)
    visited = set(cc.positions())
    border = {(x, y) for x in range(1, 4) for y in range(1, 4)} - {(2, 2)}
    assert visited == border


def test_annulus_traces_outer_and_hole():
    spec = SynthSpec(seed=3, width=120, height=120, scale=0.25,
                     discs=(Disc(60.2, 60.3, 12.0),),
                     inclusions=(Inclusion(0, 60.2, 60.3, 5.0),))
    gray, _ = generate(spec)
    img = binarize_fixed(gray, 0.5)
    filled, kept = classify_and_fill_holes(img)
    assert len(kept) == 1  # 10 µm across: far too big to fill
    chains = trace_boundaries(filled, label_components(filled, 1), 1,
                              kept_holes=kept)
    assert [c.kind for c in chains] == ["outer", "hole"]
    assert all(closes(c) for c in chains)


def test_hole_discovery_without_kept_list():
    bits = np.ones((9, 9))
    bits[3:6, 3:6] = 0
    chains = chain_of(raster(bits))
    assert [c.kind for c in chains] == ["outer", "hole"]


def test_all_chains_close_on_random_blobs():
    rng = np.random.default_rng(9)
    bits = (rng.random((40, 40)) < 0.45).astype(np.uint8)
    img = raster(bits)
    labels = label_components(img, 1)
    for comp in range(1, labels.max_label + 1):
        for cc in trace_boundaries(img, labels, comp):
            assert closes(cc)


def test_trace_unknown_component():
    img = raster(np.ones((4, 4)))
    with pytest.raises(ValueError):
        trace_boundaries(img, label_components(img, 1), 5)


def test_convex_disc_has_no_binding_points():
    spec = SynthSpec(seed=1, width=90, height=90, scale=0.5,
                     discs=(Disc(45.2, 45.3, 15.0),))
    gray, _ = generate(spec)
    img = binarize_fixed(gray, 0.5)
    cc = chain_of(img)[0]
    for window in range(3, 10):
        assert detect_binding_points(cc, img, window) == []


def test_short_chain_returns_empty():
    bits = np.zeros((6, 6))
    bits[2, 2:4] = 1
    cc = chain_of(raster(bits))[0]
    assert detect_binding_points(cc, raster(bits), window=5) == []


def test_dumbbell_two_points_anti_parallel():
    gray, truth = generate(dumbbell_spec())
    img = binarize_fixed(gray, 0.5)
    cc = chain_of(img)[0]
    points = detect_binding_points(cc, img, 5)
    assert len(points) == 2
    a, b = points
    assert angle_diff(a.inward_direction,
                      (b.inward_direction + 180.0) % 360.0) <= 30.0
    # positions sit at the true chord endpoints
    (e1, e2) = truth.neck_endpoints_px[0]
    got = sorted(p.position for p in points)
    want = sorted([e1, e2])
    for (gx, gy), (wx, wy) in zip(got, want):
        assert math.hypot(gx - wx, gy - wy) <= 2.5


def test_three_disc_chain_has_four_points():
    r_um, scale = 10.0, 0.25
    rpx = r_um / scale
    h = 0.35 * rpx
    d = 2 * math.sqrt(rpx * rpx - h * h)
    spec = SynthSpec(seed=2, width=380, height=160, scale=scale,
                     discs=(Disc(90.3, 80.2, r_um),
                            Disc(90.3 + d, 80.2, r_um),
                            Disc(90.3 + 2 * d, 80.2, r_um)),
                     necks=(Neck(0, 1), Neck(1, 2)))
    gray, _ = generate(spec)
    img = binarize_fixed(gray, 0.5)
    cc = chain_of(img)[0]
    points = detect_binding_points(cc, img, 7)
    assert len(points) == 4


def test_every_point_satisfies_invariants():
    gray, _ = generate(dumbbell_spec())
    img = binarize_fixed(gray, 0.5)
    cc = chain_of(img)[0]
    for p in detect_binding_points(cc, img, 5):
        assert p.turn_angle > 90.0
        k = int(round(p.inward_direction / 45.0)) % 8
        px = p.position[0] + DIR8[k][0]
        py = p.position[1] + DIR8[k][1]
        assert img.bits[py, px] == 1


def test_rotation_by_90_rotates_detections():
    # doublet at a comfortably detectable waist
    r_um, scale = 10.0, 0.5
    rpx = r_um / scale
    h = 0.35 * rpx
    d = 2 * math.sqrt(rpx * rpx - h * h)
    n = 120
    spec = SynthSpec(seed=4, width=n, height=n, scale=scale,
                     discs=(Disc(n / 2 - d / 2, n / 2, r_um),
                            Disc(n / 2 + d / 2, n / 2, r_um)),
                     necks=(Neck(0, 1),))
    gray, _ = generate(spec)
    img = binarize_fixed(gray, 0.5)
    rot = BinaryRaster(np.rot90(img.bits).copy(), scale)

    pts = detect_binding_points(chain_of(img)[0], img, 7)
    pts_rot = detect_binding_points(chain_of(rot)[0], rot, 7)
    assert len(pts) == len(pts_rot) == 2

    # np.rot90 maps pixel (x, y) -> (y, H-1-x); directions gain +90 degrees
    h_px = img.bits.shape[0]
    expected = sorted((y, h_px - 1 - x) for x, y in (p.position for p in pts))
    got = sorted(p.position for p in pts_rot)
    for (ex, ey), (gx, gy) in zip(expected, got):
        assert abs(ex - gx) <= 1.5 and abs(ey - gy) <= 1.5
    exp_dirs = sorted((p.inward_direction + 90.0) % 360.0 for p in pts)
    got_dirs = sorted(p.inward_direction for p in pts_rot)
    for e, g in zip(exp_dirs, got_dirs):
        assert angle_diff(e, g) <= 10.0
