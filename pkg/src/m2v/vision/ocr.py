"""Fixed-font OCR: binarization, projection segmentation, glyph matching.

The engine exploits the renderer's font geometry: every letter/digit
glyph inks a full-height, full-width box on a fixed advance. From one
tight ink bounding box it infers the render scale and character count,
slices the line into glyph cells and picks the nearest glyph per cell.

Matching is Hamming distance on ink masks, computed on fractional ink
coverage and normalized by the ink union so that resampled (antialiased)
text degrades gracefully instead of collapsing onto sparse punctuation
glyphs. On native-resolution crops of rendered text, cells reproduce the
atlas bitmaps exactly and the distance is zero.
"""

from __future__ import annotations

import numpy as np

from ..fonts import GlyphAtlas, INK_LEFT, INK_TOP, default_atlas
from ..raster import Raster, resize_array, to_gray

_FRAME_FILL = 0.75  # boundary rows/cols at least this full are widget frame
_BAND_GAP = 3       # blank rows ending a text band


def otsu_threshold(gray: np.ndarray) -> float:
    """Otsu's threshold over a float grayscale image (0..255 scale)."""
    hist, _ = np.histogram(gray, bins=256, range=(0.0, 256.0))
    total = hist.sum()
    if total == 0:
        return 0.0
    bins = np.arange(256, dtype=np.float64)
    weight_bg = np.cumsum(hist)
    weight_fg = total - weight_bg
    sum_bg = np.cumsum(hist * bins)
    sum_all = sum_bg[-1]
    valid = (weight_bg > 0) & (weight_fg > 0)
    if not valid.any():
        return 0.0
    mean_bg = np.where(weight_bg > 0, sum_bg / np.maximum(weight_bg, 1), 0.0)
    mean_fg = np.where(
        weight_fg > 0, (sum_all - sum_bg) / np.maximum(weight_fg, 1), 0.0
    )
    between = weight_bg * weight_fg * (mean_bg - mean_fg) ** 2
    between[~valid] = -1.0
    return float(np.argmax(between)) + 0.5


def binarize(gray: np.ndarray) -> np.ndarray:
    """Foreground mask via Otsu; text is assumed the sparse, darker side."""
    threshold = otsu_threshold(gray)
    fg = gray < threshold
    if not fg.any():
        return fg
    if fg.mean() > 0.5:
        fg = ~fg
    return fg


def _soft_ink(gray: np.ndarray) -> np.ndarray:
    """Ink coverage in [0, 1]: dark pixels read 1, background 0."""
    lo = float(gray.min())
    hi = float(gray.max())
    if hi - lo < 1e-9:
        return np.zeros_like(gray)
    ink = (hi - gray) / (hi - lo)
    if (ink > 0.5).mean() > 0.5:
        ink = 1.0 - ink
    return ink


def _blank_separators(ink: np.ndarray, fg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Erase widget borders and rule lines from the ink field.

    Any row or column that is almost entirely ink across the crop is a
    border/separator, not text (glyph rows never exceed ~60% coverage),
    wherever it sits. Crops from detected boxes can be offset a pixel or
    two from the widget, which puts borders inside the crop rather than
    exactly on its boundary.
    """
    ink = ink.copy()
    fg = fg.copy()
    for _ in range(2):
        if not fg.any():
            break
        row_sep = fg.mean(axis=1) >= _FRAME_FILL
        if row_sep.any():
            fg[row_sep, :] = False
            ink[row_sep, :] = 0.0
        col_sep = fg.mean(axis=0) >= _FRAME_FILL
        if col_sep.any():
            fg[:, col_sep] = False
            ink[:, col_sep] = 0.0
        if not row_sep.any() and not col_sep.any():
            break
    return ink, fg


def _row_bands(fg: np.ndarray) -> list[tuple[int, int]]:
    """Maximal row ranges holding ink, tolerating small blank gaps inside."""
    occupied = fg.any(axis=1)
    bands: list[tuple[int, int]] = []
    start = None
    end = 0
    gap = 0
    for r, has in enumerate(occupied):
        if has:
            if start is None:
                start = r
            end = r
            gap = 0
        elif start is not None:
            gap += 1
            if gap >= _BAND_GAP:
                bands.append((start, end))
                start = None
    if start is not None:
        bands.append((start, end))
    return bands


def _soft_cell(
    ink: np.ndarray, r0: float, c0: float, cell_h: float, cell_w: float,
    atlas: GlyphAtlas,
) -> np.ndarray:
    """Sample one glyph cell (float, atlas-sized) from fractional coords."""
    h, w = ink.shape
    ri0 = int(round(r0))
    ri1 = max(int(round(r0 + cell_h)), ri0 + 1)
    ci0 = int(round(c0))
    ci1 = max(int(round(c0 + cell_w)), ci0 + 1)
    block = np.zeros((ri1 - ri0, ci1 - ci0), dtype=np.float64)
    sr0, sr1 = max(ri0, 0), min(ri1, h)
    sc0, sc1 = max(ci0, 0), min(ci1, w)
    if sr0 < sr1 and sc0 < sc1:
        block[sr0 - ri0 : sr1 - ri0, sc0 - ci0 : sc1 - ci0] = ink[sr0:sr1, sc0:sc1]
    if block.shape != (atlas.glyph_height, atlas.glyph_width):
        block = resize_array(block, atlas.glyph_height, atlas.glyph_width)
    return block


def _read_line(
    ink: np.ndarray, x0: int, width: int, n: int, dy: float, atlas: GlyphAtlas
) -> tuple[str, float, float]:
    """Read ``n`` cells from a line band; returns (text, distance, union)."""
    glyphs = atlas.cell_stack.astype(np.float64)
    scale = width / (atlas.glyph_width * (n - 1) + atlas.ink_width)
    chars: list[str] = []
    distance = 0.0
    union = 1e-9
    top = -INK_TOP * scale + dy
    for k in range(n):
        left = x0 + (k * atlas.glyph_width - INK_LEFT) * scale
        cell = _soft_cell(
            ink, top, left, atlas.glyph_height * scale, atlas.glyph_width * scale,
            atlas,
        )
        diff = np.abs(cell[None, :, :] - glyphs).sum(axis=(1, 2))
        overlap = np.maximum(cell[None, :, :], glyphs).sum(axis=(1, 2)) + 1e-9
        best = int(np.argmin(diff / overlap))
        chars.append(atlas.chars[best])
        distance += float(diff[best])
        union += float(overlap[best])
    return "".join(chars).strip(), distance, union


def _read_band(
    ink: np.ndarray, fg: np.ndarray, atlas: GlyphAtlas
) -> tuple[str, float, float]:
    cols = np.nonzero(fg.any(axis=0))[0]
    x0, x1 = int(cols[0]), int(cols[-1])
    width = x1 - x0 + 1
    rough = fg.shape[0] / atlas.ink_height
    n_float = (width / rough - atlas.ink_width) / atlas.glyph_width + 1
    candidates = sorted(
        {max(1, int(np.floor(n_float))), max(1, int(np.ceil(n_float)))}
    )
    best: tuple[str, float, float] | None = None
    for n in candidates:
        for dy in (-1.0, 0.0, 1.0):
            text, distance, union = _read_line(ink, x0, width, n, dy, atlas)
            if best is None or distance / union < best[1] / best[2]:
                best = (text, distance, union)
    return best


def ocr(region: Raster, atlas: GlyphAtlas | None = None) -> str:
    """Recognize rendered text in a region; empty string when nothing reads.

    Regions shorter than half a glyph cell cannot carry legible text and
    read as empty rather than failing. Multiple text bands join with a
    single space, top to bottom.
    """
    atlas = atlas or default_atlas()
    if region.height < atlas.glyph_height // 2:
        return ""
    ink = _soft_ink(to_gray(region))
    fg = ink > 0.5
    if not fg.any():
        return ""
    ink, fg = _blank_separators(ink, fg)
    if not fg.any():
        return ""
    lines = []
    for r0, r1 in _row_bands(fg):
        text, _, _ = _read_band(ink[r0 : r1 + 1], fg[r0 : r1 + 1], atlas)
        if text:
            lines.append(text)
    return " ".join(lines).strip()
