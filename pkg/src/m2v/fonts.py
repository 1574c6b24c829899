"""Fixed 16x24 bitmap font shared by the GUI renderer and the OCR engine.

Glyphs are authored on a 5x7 design grid and rendered at 2x, so every
letter and digit inks a strict 10x14 box at cell offset (col 2, row 4)
with 2px strokes. That uniform geometry is what lets the OCR stage infer
character count and scale from an ink bounding box alone, and the 2px
strokes keep downsampled text legible. Punctuation may use less ink but
stays inside the same design grid.

Labels that should survive OCR must not start or end with punctuation
narrower than the full design grid (interior punctuation is fine).
"""

from __future__ import annotations

import numpy as np

from .raster import Raster

SCALE = 2
GLYPH_W = 8 * SCALE
GLYPH_H = 12 * SCALE
INK_LEFT = 1 * SCALE
INK_TOP = 2 * SCALE
INK_W = 5 * SCALE
INK_H = 7 * SCALE

# fmt: off
_GLYPHS: dict[str, tuple[str, ...]] = {
    " ": (".....", ".....", ".....", ".....", ".....", ".....", "....."),
    "!": ("..#..", "..#..", "..#..", "..#..", "..#..", ".....", "..#.."),
    '"': (".#.#.", ".#.#.", ".....", ".....", ".....", ".....", "....."),
    "#": (".#.#.", ".#.#.", "#####", ".#.#.", "#####", ".#.#.", ".#.#."),
    "$": ("..#..", ".####", "#.#..", ".###.", "..#.#", "####.", "..#.."),
    "%": ("##..#", "##..#", "...#.", "..#..", ".#...", "#..##", "#..##"),
    "&": (".##..", "#..#.", "#.#..", ".#...", "#.#.#", "#..#.", ".##.#"),
    "'": ("..#..", "..#..", ".....", ".....", ".....", ".....", "....."),
    "(": ("...#.", "..#..", ".#...", ".#...", ".#...", "..#..", "...#."),
    ")": (".#...", "..#..", "...#.", "...#.", "...#.", "..#..", ".#..."),
    "*": (".....", "..#..", "#.#.#", ".###.", "#.#.#", "..#..", "....."),
    "+": (".....", "..#..", "..#..", "#####", "..#..", "..#..", "....."),
    ",": (".....", ".....", ".....", ".....", ".....", ".##..", ".#..."),
    "-": (".....", ".....", ".....", "####.", ".....", ".....", "....."),
    ".": (".....", ".....", ".....", ".....", ".....", "##...", "##..."),
    "/": ("....#", "...#.", "...#.", "..#..", ".#...", ".#...", "#...."),
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": ("#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": ("..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."),
    ":": (".....", "##...", "##...", ".....", "##...", "##...", "....."),
    ";": (".....", ".##..", ".##..", ".....", ".##..", ".#...", "#...."),
    "<": ("...#.", "..#..", ".#...", "#....", ".#...", "..#..", "...#."),
    "=": (".....", ".....", "#####", ".....", "#####", ".....", "....."),
    ">": (".#...", "..#..", "...#.", "....#", "...#.", "..#..", ".#..."),
    "?": (".###.", "#...#", "....#", "...#.", "..#..", ".....", "..#.."),
    "@": (".###.", "#...#", "#.###", "#.#.#", "#.##.", "#....", ".###."),
    "A": (".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "B": ("####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."),
    "C": (".####", "#....", "#....", "#....", "#....", "#....", ".####"),
    "D": ("####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####"),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#...."),
    "G": (".####", "#....", "#....", "#.###", "#...#", "#...#", ".####"),
    "H": ("#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "I": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "J": ("#####", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."),
    "K": ("#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"),
    "L": ("#....", "#....", "#....", "#....", "#....", "#....", "#####"),
    "M": ("#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"),
    "N": ("#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#"),
    "O": (".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#...."),
    "Q": (".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"),
    "R": ("####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"),
    "S": (".####", "#....", "#....", ".###.", "....#", "....#", "####."),
    "T": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."),
    "U": ("#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "V": ("#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."),
    "W": ("#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"),
    "X": ("#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"),
    "Y": ("#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."),
    "Z": ("#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"),
    "[": ("###..", "#....", "#....", "#....", "#....", "#....", "###.."),
    "\\": ("#....", ".#...", ".#...", "..#..", "...#.", "...#.", "....#"),
    "]": ("..###", "....#", "....#", "....#", "....#", "....#", "..###"),
    "^": ("..#..", ".#.#.", "#...#", ".....", ".....", ".....", "....."),
    "_": (".....", ".....", ".....", ".....", ".....", ".....", "#####"),
    "`": (".#...", "..#..", ".....", ".....", ".....", ".....", "....."),
    "a": (".###.", "....#", ".####", "#...#", "#...#", "#..##", ".##.#"),
    "b": ("#....", "#....", "#.##.", "##..#", "#...#", "##..#", "#.##."),
    "c": ("..###", ".#...", "#....", "#....", "#....", ".#...", "..###"),
    "d": ("....#", "....#", ".##.#", "#..##", "#...#", "#..##", ".##.#"),
    "e": (".###.", "#...#", "#...#", "#####", "#....", "#....", ".####"),
    "f": ("..###", ".#...", ".#...", "####.", ".#...", ".#...", "#...."),
    "g": (".####", "#...#", "#...#", ".####", "....#", "....#", "###.."),
    "h": ("#....", "#....", "#....", "#.##.", "##..#", "#...#", "#...#"),
    "i": ("..#..", ".....", ".##..", "..#..", "..#..", "..#..", "#####"),
    "j": ("....#", ".....", "...##", "....#", "....#", "#...#", ".###."),
    "k": ("#....", "#....", "#..##", "#.#..", "##...", "#.#..", "#..##"),
    "l": ("##...", ".#...", ".#...", ".#...", ".#...", ".#...", ".####"),
    "m": ("####.", "#.#.#", "#.#.#", "#.#.#", "#.#.#", "#.#.#", "#.#.#"),
    "n": ("#.##.", "##..#", "#...#", "#...#", "#...#", "#...#", "#...#"),
    "o": ("..#..", ".#.#.", "#...#", "#...#", "#...#", ".#.#.", "..#.."),
    "p": (".###.", "#...#", "#...#", "#...#", "####.", "#....", "#...."),
    "q": (".###.", "#...#", "#...#", "#...#", ".####", "....#", "....#"),
    "r": ("#....", "#....", "#.##.", "##..#", "#....", "#....", "#...."),
    "s": (".####", "#....", "##...", ".###.", "...##", "....#", "####."),
    "t": ("..#..", "..#..", "#####", "..#..", "..#..", "..#..", "...##"),
    "u": ("#...#", "#...#", "#...#", "#...#", "#...#", "#..##", ".##.#"),
    "v": ("#...#", "#...#", "#...#", ".#.#.", ".#.#.", ".#.#.", "..#.."),
    "w": ("#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", ".#.#."),
    "x": ("#...#", ".#.#.", "..#..", "..#..", "..#..", ".#.#.", "#...#"),
    "y": ("#...#", "#...#", "#...#", ".#.#.", "..#..", ".#...", "##..."),
    "z": (".####", "....#", "...#.", "..#..", ".#...", "#....", "####."),
    "{": ("..##.", ".#...", ".#...", "#....", ".#...", ".#...", "..##."),
    "|": ("..#..", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."),
    "}": (".##..", "...#.", "...#.", "....#", "...#.", "...#.", ".##.."),
    "~": (".....", ".....", ".#..#", "#.#.#", "#..#.", ".....", "....."),
}
# fmt: on


def _build_cell(rows: tuple[str, ...]) -> np.ndarray:
    cell = np.zeros((GLYPH_H, GLYPH_W), dtype=bool)
    for r, row in enumerate(rows):
        for c, ch in enumerate(row):
            if ch == "#":
                y = INK_TOP + r * SCALE
                x = INK_LEFT + c * SCALE
                cell[y : y + SCALE, x : x + SCALE] = True
    return cell


class GlyphAtlas:
    """Monochrome glyph bitmaps covering printable ASCII, all 8x12 cells."""

    def __init__(self, glyphs: dict[str, tuple[str, ...]] | None = None):
        source = glyphs if glyphs is not None else _GLYPHS
        self.glyph_width = GLYPH_W
        self.glyph_height = GLYPH_H
        self.ink_width = INK_W
        self.ink_height = INK_H
        self.bitmaps: dict[str, np.ndarray] = {
            ch: _build_cell(rows) for ch, rows in sorted(source.items())
        }
        # Codepoint-ordered stack for vectorized matching; argmin then
        # resolves Hamming ties toward the lowest codepoint.
        self.chars: str = "".join(self.bitmaps)
        self.cell_stack: np.ndarray = np.stack([self.bitmaps[c] for c in self.chars])

    def has(self, ch: str) -> bool:
        return ch in self.bitmaps

    def cell(self, ch: str) -> np.ndarray:
        return self.bitmaps[ch]


_DEFAULT: GlyphAtlas | None = None


def default_atlas() -> GlyphAtlas:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = GlyphAtlas()
    return _DEFAULT


def measure_text(text: str) -> tuple[int, int]:
    return GLYPH_W * len(text), GLYPH_H


def draw_text(
    target: Raster,
    x: int,
    y: int,
    text: str,
    color: tuple[int, int, int],
    atlas: GlyphAtlas | None = None,
) -> None:
    """Draw ``text`` with the glyph cell origin at (x, y), clipped to the target."""
    atlas = atlas or default_atlas()
    h, w = target.pixels.shape[:2]
    for k, ch in enumerate(text):
        if not atlas.has(ch):
            ch = "?"
        cell = atlas.cell(ch)
        gx = x + k * GLYPH_W
        ys, xs = np.nonzero(cell)
        ys = ys + y
        xs = xs + gx
        keep = (ys >= 0) & (ys < h) & (xs >= 0) & (xs < w)
        target.pixels[ys[keep], xs[keep]] = color
