import numpy as np
import pytest

from m2v.raster import (
    ImageFormatError,
    Raster,
    blit,
    crop_array,
    read_image,
    read_ppm,
    read_png,
    resize,
    resize_scale,
    to_gray,
    write_ppm,
    write_png,
)


def checker(w, h):
    a = np.zeros((h, w, 3), dtype=np.uint8)
    a[(np.indices((h, w)).sum(axis=0) % 2) == 0] = (200, 60, 30)
    return Raster(a)


def test_raster_validation():
    with pytest.raises(ValueError):
        Raster(np.zeros((0, 4, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        Raster(np.zeros((4, 4, 4), dtype=np.uint8))


def test_ppm_round_trip(tmp_path):
    img = checker(13, 7)
    p = tmp_path / "img.ppm"
    write_ppm(img, p)
    back = read_ppm(p)
    assert back.same_pixels(img)


def test_ppm_header_with_comment(tmp_path):
    img = Raster.filled(2, 2, (1, 2, 3))
    p = tmp_path / "c.ppm"
    p.write_bytes(b"P6\n# a comment\n2 2\n255\n" + img.tobytes())
    assert read_ppm(p).same_pixels(img)


def test_ppm_rejects_wrong_magic(tmp_path):
    p = tmp_path / "bad.ppm"
    p.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    with pytest.raises(ImageFormatError):
        read_ppm(p)


def test_png_round_trip(tmp_path):
    img = checker(9, 11)
    p = tmp_path / "img.png"
    write_png(img, p)
    assert read_png(p).same_pixels(img)
    assert read_image(p).same_pixels(img)


def test_png_alpha_composites_over_white(tmp_path):
    from PIL import Image

    a = np.zeros((1, 2, 4), dtype=np.uint8)
    a[0, 0] = (255, 0, 0, 255)  # opaque red
    a[0, 1] = (0, 0, 0, 0)      # fully transparent
    p = tmp_path / "alpha.png"
    Image.fromarray(a, mode="RGBA").save(p)
    img = read_png(p)
    assert tuple(img.pixels[0, 0]) == (255, 0, 0)
    assert tuple(img.pixels[0, 1]) == (255, 255, 255)


def test_read_image_unknown_extension(tmp_path):
    p = tmp_path / "img.bmp"
    p.write_bytes(b"")
    with pytest.raises(ImageFormatError):
        read_image(p)


def test_crop_array_exact_copy():
    img = checker(10, 8)
    sub = crop_array(img, 2, 1, 4, 3)
    assert sub.width == 4 and sub.height == 3
    assert np.array_equal(sub.pixels, img.pixels[1:4, 2:6])
    with pytest.raises(ValueError):
        crop_array(img, 8, 0, 4, 3)


def test_blit_clips():
    dst = Raster.filled(5, 5, (0, 0, 0))
    src = Raster.filled(3, 3, (9, 9, 9))
    blit(dst, src, 3, 3)
    assert tuple(dst.pixels[4, 4]) == (9, 9, 9)
    assert tuple(dst.pixels[2, 2]) == (0, 0, 0)


def test_resize_identity():
    img = checker(6, 4)
    assert resize(img, 6, 4).same_pixels(img)
    assert resize(img, 6, 4, method="nearest").same_pixels(img)


def test_resize_scale_round_trip_dims():
    img = checker(20, 10)
    up = resize_scale(img, 1.5)
    assert (up.width, up.height) == (30, 15)
    down = resize_scale(img, 0.5)
    assert (down.width, down.height) == (10, 5)


def test_to_gray_range():
    img = checker(4, 4)
    g = to_gray(img)
    assert g.shape == (4, 4)
    assert g.min() >= 0.0 and g.max() <= 255.0
