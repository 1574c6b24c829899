"""RGB8 pixel buffers and the image file formats the pipeline reads/writes.

A :class:`Raster` is a thin value wrapper around an ``(h, w, 3)`` uint8
numpy array. File support is deliberately narrow: binary PPM (P6, maxval
255) for all pipeline-produced artifacts, plus 8-bit RGB/RGBA PNG as an
accepted input format for manual images (alpha is composited over white).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import M2VError


class ImageFormatError(M2VError):
    """Raised for unreadable or unsupported image files."""


@dataclass(eq=False)
class Raster:
    """An RGB8 image: ``pixels`` is a row-major ``(h, w, 3)`` uint8 array."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.pixels, dtype=np.uint8)
        if a.ndim != 3 or a.shape[2] != 3 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"raster must be (h, w, 3) uint8, got shape {a.shape}")
        self.pixels = a

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def filled(cls, width: int, height: int, color: tuple[int, int, int]) -> "Raster":
        a = np.empty((height, width, 3), dtype=np.uint8)
        a[:, :] = color
        return cls(a)

    def copy(self) -> "Raster":
        return Raster(self.pixels.copy())

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()

    def same_pixels(self, other: "Raster") -> bool:
        return self.pixels.shape == other.pixels.shape and np.array_equal(
            self.pixels, other.pixels
        )


def to_gray(img: Raster) -> np.ndarray:
    """ITU-R 601 luma as float64 in [0, 255], shape (h, w)."""
    p = img.pixels.astype(np.float64)
    return 0.299 * p[:, :, 0] + 0.587 * p[:, :, 1] + 0.114 * p[:, :, 2]


def crop_array(img: Raster, x: int, y: int, w: int, h: int) -> Raster:
    """Exact pixel copy of the region; the caller must ensure bounds."""
    if x < 0 or y < 0 or w < 1 or h < 1 or x + w > img.width or y + h > img.height:
        raise ValueError(f"crop ({x},{y},{w},{h}) outside {img.width}x{img.height}")
    return Raster(img.pixels[y : y + h, x : x + w].copy())


def blit(dst: Raster, src: Raster, x: int, y: int) -> None:
    """Paste ``src`` into ``dst`` at (x, y), clipped to the destination."""
    x0, y0 = max(x, 0), max(y, 0)
    x1 = min(x + src.width, dst.width)
    y1 = min(y + src.height, dst.height)
    if x1 <= x0 or y1 <= y0:
        return
    dst.pixels[y0:y1, x0:x1] = src.pixels[y0 - y : y1 - y, x0 - x : x1 - x]


def _resample_axis_coords(out_n: int, in_n: int) -> np.ndarray:
    # Half-pixel-center convention, same as common image libraries.
    return (np.arange(out_n, dtype=np.float64) + 0.5) * (in_n / out_n) - 0.5


def _resize_plane_bilinear(a: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    in_h, in_w = a.shape[:2]
    ys = np.clip(_resample_axis_coords(out_h, in_h), 0.0, in_h - 1.0)
    xs = np.clip(_resample_axis_coords(out_w, in_w), 0.0, in_w - 1.0)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    if a.ndim == 3:
        wy = wy[:, :, None]
        wx = wx[:, :, None]
    af = a.astype(np.float64)
    top = af[y0][:, x0] * (1 - wx) + af[y0][:, x1] * wx
    bot = af[y1][:, x0] * (1 - wx) + af[y1][:, x1] * wx
    return top * (1 - wy) + bot * wy


def _resize_plane_nearest(a: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    in_h, in_w = a.shape[:2]
    ys = np.clip(np.round(_resample_axis_coords(out_h, in_h)), 0, in_h - 1).astype(np.intp)
    xs = np.clip(np.round(_resample_axis_coords(out_w, in_w)), 0, in_w - 1).astype(np.intp)
    return a[ys][:, xs]


def resize_array(a: np.ndarray, out_h: int, out_w: int, method: str = "bilinear") -> np.ndarray:
    """Resize a 2-D plane or (h, w, c) array; returns float64 for bilinear."""
    if out_h < 1 or out_w < 1:
        raise ValueError("target size must be positive")
    if method == "bilinear":
        return _resize_plane_bilinear(a, out_h, out_w)
    if method == "nearest":
        return _resize_plane_nearest(a, out_h, out_w)
    raise ValueError(f"unknown resize method {method!r}")


def resize(img: Raster, out_w: int, out_h: int, method: str = "bilinear") -> Raster:
    out = resize_array(img.pixels, out_h, out_w, method)
    if method == "bilinear":
        out = np.clip(np.rint(out), 0, 255).astype(np.uint8)
    return Raster(out)


def resize_scale(img: Raster, scale: float, method: str = "bilinear") -> Raster:
    """Uniformly rescale; output dims are max(1, round(dim * scale))."""
    out_w = max(1, int(round(img.width * scale)))
    out_h = max(1, int(round(img.height * scale)))
    return resize(img, out_w, out_h, method)


# --- PPM (P6) ---------------------------------------------------------------

_PPM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n)*(\S+)")


def _ppm_read_tokens(data: bytes, count: int, start: int) -> tuple[list[bytes], int]:
    tokens = []
    pos = start
    for _ in range(count):
        m = _PPM_TOKEN.match(data, pos)
        if not m:
            raise ImageFormatError("truncated PPM header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def read_ppm(path: str | Path) -> Raster:
    data = Path(path).read_bytes()
    if not data.startswith(b"P6"):
        raise ImageFormatError(f"{path}: not a binary PPM (P6) file")
    try:
        (w_tok, h_tok, max_tok), pos = _ppm_read_tokens(data, 3, 2)
        w, h, maxval = int(w_tok), int(h_tok), int(max_tok)
    except ValueError as exc:
        raise ImageFormatError(f"{path}: bad PPM header") from exc
    if maxval != 255:
        raise ImageFormatError(f"{path}: only maxval 255 is supported")
    pos += 1  # single whitespace byte after the header
    need = w * h * 3
    raw = data[pos : pos + need]
    if len(raw) != need:
        raise ImageFormatError(f"{path}: expected {need} pixel bytes, got {len(raw)}")
    return Raster(np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3).copy())


def write_ppm(img: Raster, path: str | Path) -> None:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.tobytes())


# --- PNG (via Pillow) -------------------------------------------------------


def read_png(path: str | Path) -> Raster:
    from PIL import Image

    try:
        with Image.open(path) as im:
            if im.mode in ("RGBA", "LA", "PA") or (
                im.mode == "P" and "transparency" in im.info
            ):
                rgba = im.convert("RGBA")
                white = Image.new("RGBA", rgba.size, (255, 255, 255, 255))
                white.alpha_composite(rgba)
                rgb = white.convert("RGB")
            else:
                rgb = im.convert("RGB")
            return Raster(np.asarray(rgb, dtype=np.uint8).copy())
    except (OSError, SyntaxError) as exc:
        raise ImageFormatError(f"{path}: unreadable PNG: {exc}") from exc


def write_png(img: Raster, path: str | Path) -> None:
    from PIL import Image

    Image.fromarray(img.pixels, mode="RGB").save(path, format="PNG")


def read_image(path: str | Path) -> Raster:
    """Read a PPM or PNG by extension."""
    suffix = Path(path).suffix.lower()
    if suffix == ".ppm":
        return read_ppm(path)
    if suffix == ".png":
        return read_png(path)
    raise ImageFormatError(f"{path}: unsupported image format {suffix!r}")
