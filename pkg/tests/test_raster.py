import numpy as np
import pytest
from PIL import Image

from contiq.raster import (BinaryRaster, GrayRaster, LabeledRaster,
                           OverlayMarker, OverlayPixels, OverlaySegment,
                           load_image, save_overlay)


def test_gray_raster_invariants():
    g = GrayRaster(np.zeros((4, 6), dtype=np.uint8), 0.1)
    assert g.width == 6 and g.height == 4
    with pytest.raises(ValueError):
        GrayRaster(np.zeros((4, 6), dtype=np.uint8), 0.0)
    with pytest.raises(ValueError):
        GrayRaster(np.zeros((0, 6), dtype=np.uint8), 0.1)
    with pytest.raises(ValueError):
        g.pixels[0, 0] = 1  # immutable


def test_binary_raster_rejects_non_bits():
    with pytest.raises(ValueError):
        BinaryRaster(np.full((3, 3), 2, dtype=np.uint8), 1.0)


def test_labeled_raster_requires_contiguous_labels():
    ok = np.array([[0, 1], [2, 1]])
    LabeledRaster(ok, 1.0)
    with pytest.raises(ValueError):
        LabeledRaster(np.array([[0, 1], [3, 1]]), 1.0)


def test_load_image_grayscale_passthrough(tmp_path):
    arr = np.arange(12, dtype=np.uint8).reshape(3, 4) * 20
    path = tmp_path / "g.png"
    Image.fromarray(arr, mode="L").save(path)
    g = load_image(path, 0.5)
    assert np.array_equal(g.pixels, arr)
    assert g.scale == 0.5


def test_load_image_rgb_luminance(tmp_path):
    # pure white and pure black map to 255 and 0
    rgb = np.zeros((1, 2, 3), dtype=np.uint8)
    rgb[0, 0] = (255, 255, 255)
    path = tmp_path / "rgb.png"
    Image.fromarray(rgb, mode="RGB").save(path)
    g = load_image(path, 1.0)
    assert list(g.pixels[0]) == [255, 0]


def test_load_image_luminance_weights_rounding(tmp_path):
    rgb = np.zeros((1, 3, 3), dtype=np.uint8)
    rgb[0, 0] = (255, 0, 0)
    rgb[0, 1] = (0, 255, 0)
    rgb[0, 2] = (0, 0, 255)
    path = tmp_path / "rgb.png"
    Image.fromarray(rgb, mode="RGB").save(path)
    g = load_image(path, 1.0)
    assert list(g.pixels[0]) == [round(0.299 * 255), round(0.587 * 255),
                                 round(0.114 * 255)]


def test_load_image_single_pixel(tmp_path):
    path = tmp_path / "one.png"
    Image.fromarray(np.zeros((1, 1), dtype=np.uint8), mode="L").save(path)
    g = load_image(path, 1.0)
    assert g.pixels.shape == (1, 1) and g.pixels[0, 0] == 0


def test_load_image_full_size_jpeg(tmp_path):
    # dimension bookkeeping at the reference micrograph size
    arr = np.random.default_rng(0).integers(0, 256, (1670, 2259), dtype=np.uint8)
    path = tmp_path / "big.jpg"
    Image.fromarray(arr, mode="L").save(path, quality=90)
    g = load_image(path, 215.0 / 2259.0)
    assert (g.width, g.height) == (2259, 1670)


def test_load_image_deterministic(tmp_path):
    arr = np.random.default_rng(1).integers(0, 256, (20, 30), dtype=np.uint8)
    path = tmp_path / "x.png"
    Image.fromarray(arr, mode="L").save(path)
    a = load_image(path, 1.0)
    b = load_image(path, 1.0)
    assert np.array_equal(a.pixels, b.pixels)


def test_gray_conversion_idempotent(tmp_path):
    # saving a gray image and reloading changes no pixel
    arr = np.random.default_rng(2).integers(0, 256, (15, 17), dtype=np.uint8)
    p1 = tmp_path / "a.png"
    Image.fromarray(arr, mode="L").save(p1)
    g1 = load_image(p1, 1.0)
    p2 = tmp_path / "b.png"
    Image.fromarray(g1.pixels, mode="L").save(p2)
    g2 = load_image(p2, 1.0)
    assert np.array_equal(g1.pixels, g2.pixels)


def test_load_image_errors(tmp_path):
    with pytest.raises(ValueError):
        load_image(tmp_path / "nope.png", 0.0)  # bad scale checked first
    with pytest.raises(FileNotFoundError):
        load_image(tmp_path / "nope.png", 1.0)
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"this is not an image")
    with pytest.raises(ValueError):
        load_image(bad, 1.0)


def test_save_overlay_empty_is_identity(tmp_path):
    arr = np.random.default_rng(3).integers(0, 256, (10, 12), dtype=np.uint8)
    base = GrayRaster(arr, 1.0)
    out = tmp_path / "o.png"
    save_overlay(base, [], out)
    decoded = np.asarray(Image.open(out))
    assert decoded.shape == (10, 12, 3)
    for c in range(3):
        assert np.array_equal(decoded[:, :, c], arr)


def test_save_overlay_segment_pixels_exact(tmp_path):
    base = GrayRaster(np.zeros((8, 8), dtype=np.uint8), 1.0)
    out = tmp_path / "o.png"
    save_overlay(base, [OverlaySegment((0, 0), (0, 5), (0, 255, 255))], out)
    decoded = np.asarray(Image.open(out))
    colored = set(zip(*np.nonzero((decoded != 0).any(axis=2))))
    assert colored == {(y, 0) for y in range(6)}
    assert all(tuple(decoded[y, 0]) == (0, 255, 255) for y in range(6))


def test_save_overlay_rejects_outside_coords(tmp_path):
    base = GrayRaster(np.zeros((5, 5), dtype=np.uint8), 1.0)
    with pytest.raises(ValueError):
        save_overlay(base, [OverlayMarker((9, 0))], tmp_path / "o.png")
    with pytest.raises(ValueError):
        save_overlay(base, [OverlayPixels(((0, 0), (5, 5)),)], tmp_path / "o.png")


def test_save_overlay_dumbbell_annotation(tmp_path):
    from contiq.binarize import binarize_fixed
    from contiq.matching import process_particles
    from contiq.synthgen import dumbbell_spec, generate

    gray, _ = generate(dumbbell_spec())
    seg = process_particles(binarize_fixed(gray, 0.5))
    assert len(seg.pairs) == 1
    pair = seg.pairs[0]
    ann = [OverlaySegment(pair.a.position, pair.b.position, (0, 255, 255)),
           OverlayMarker(pair.a.position, (255, 0, 0)),
           OverlayMarker(pair.b.position, (255, 0, 0))]
    out = tmp_path / "ann.png"
    save_overlay(gray, ann, out)
    decoded = np.asarray(Image.open(out))
    for x, y in (pair.a.position, pair.b.position):
        assert tuple(decoded[y, x]) == (255, 0, 0)  # marker centers
    mid = ((pair.a.position[0] + pair.b.position[0]) // 2,
           (pair.a.position[1] + pair.b.position[1]) // 2)
    assert tuple(decoded[mid[1], mid[0]]) == (0, 255, 255)  # segment body
