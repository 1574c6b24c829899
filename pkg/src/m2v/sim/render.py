"""Painter's-algorithm renderer for simulation states.

Pure function of the state: background first, then elements in scenario
order (later entries on top). Disabled elements are not drawn at all,
which is how scenarios reveal delayed widgets.
"""

from __future__ import annotations

from ..fonts import GLYPH_H, default_atlas, draw_text, measure_text
from ..raster import Raster, blit
from .state import SimState, element_state

INK = (0, 0, 0)
BUTTON_FILL = (205, 205, 205)
MENU_FILL = (232, 232, 232)
MENU_BORDER = (96, 96, 96)
TEXTBOX_FILL = (255, 255, 255)


def _fill(img: Raster, x: int, y: int, w: int, h: int, color) -> None:
    img.pixels[y : y + h, x : x + w] = color


def _border(img: Raster, x: int, y: int, w: int, h: int, color) -> None:
    img.pixels[y, x : x + w] = color
    img.pixels[y + h - 1, x : x + w] = color
    img.pixels[y : y + h, x] = color
    img.pixels[y : y + h, x + w - 1] = color


def _centered_text(img: Raster, rect, text: str, atlas) -> None:
    if not text:
        return
    x, y, w, h = rect
    tw, _ = measure_text(text)
    draw_text(img, x + (w - tw) // 2, y + (h - GLYPH_H) // 2, text, INK, atlas)


def render(state: SimState) -> Raster:
    scene = state.scene
    screen = scene.screens[state.current_screen]
    width, height = scene.screen_size
    img = Raster.filled(width, height, screen.background)
    atlas = default_atlas()

    for element in screen.elements:
        st = element_state(state, screen.id, element.id)
        if not st.enabled:
            continue
        x, y, w, h = element.rect
        if element.kind == "button":
            _fill(img, x, y, w, h, BUTTON_FILL)
            _border(img, x, y, w, h, INK)
            _centered_text(img, element.rect, element.label, atlas)
        elif element.kind == "menu_item":
            _fill(img, x, y, w, h, MENU_FILL)
            _border(img, x, y, w, h, MENU_BORDER)
            if element.label:
                draw_text(img, x + 8, y + (h - GLYPH_H) // 2, element.label, INK, atlas)
        elif element.kind == "label":
            if element.label:
                draw_text(img, x, y, element.label, INK, atlas)
        elif element.kind == "textbox":
            _fill(img, x, y, w, h, TEXTBOX_FILL)
            _border(img, x, y, w, h, INK)
            content = st.text + ("_" if st.focused else "")
            if content:
                draw_text(img, x + 4, y + (h - GLYPH_H) // 2, content, INK, atlas)
        elif element.kind == "checkbox":
            side = min(h, 18)
            top = y + (h - side) // 2
            _fill(img, x, top, side, side, TEXTBOX_FILL)
            _border(img, x, top, side, side, INK)
            if st.checked:
                inset = max(3, side // 5)
                _fill(
                    img,
                    x + inset,
                    top + inset,
                    side - 2 * inset,
                    side - 2 * inset,
                    INK,
                )
            if element.label:
                draw_text(
                    img, x + side + 8, y + (h - GLYPH_H) // 2, element.label, INK, atlas
                )
        elif element.kind == "icon":
            icon = element.icon_image
            ix = x + (w - icon.width) // 2
            iy = y + (h - icon.height) // 2
            blit(img, icon, ix, iy)
    return img
