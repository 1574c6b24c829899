"""Bounding-box proposals from edge maps, IoU and greedy NMS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage


@dataclass(frozen=True)
class BoundingBox:
    """Half-open pixel box: covers columns [x, x+w) and rows [y, y+h)."""

    x: int
    y: int
    w: int
    h: int
    score: float = 0.0

    @property
    def area(self) -> int:
        return self.w * self.h

    @property
    def center(self) -> tuple[int, int]:
        return (self.x + self.w // 2, self.y + self.h // 2)

    def order_key(self) -> tuple[int, int, int, int]:
        return (self.y, self.x, self.w, self.h)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection area over union area, in [0, 1]."""
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def detect_boxes(
    edges: np.ndarray, min_size: int = 6, bridge_gaps: int = 0
) -> list[BoundingBox]:
    """Bounding boxes of 8-connected edge components.

    Components whose box is narrower or shorter than ``min_size`` are
    discarded. The score is the fraction of the box outline covered by
    the component's own edge pixels, so closed rectangles score near 1.

    ``bridge_gaps`` dilates the map by that many pixels for connectivity
    only (edge thinning breaks rectangle corners); boxes and scores are
    still measured on the original edge pixels.
    """
    if min_size < 2:
        raise ValueError("min_size must be >= 2")
    support = edges
    if bridge_gaps > 0:
        support = ndimage.binary_dilation(
            edges, structure=np.ones((3, 3), dtype=bool), iterations=bridge_gaps
        )
    labels, count = ndimage.label(support, structure=np.ones((3, 3), dtype=int))
    boxes: list[BoundingBox] = []
    for index in range(1, count + 1):
        component = (labels == index) & edges
        ys, xs = np.nonzero(component)
        if ys.size == 0:
            continue
        x0, x1 = int(xs.min()), int(xs.max())
        y0, y1 = int(ys.min()), int(ys.max())
        w = x1 - x0 + 1
        h = y1 - y0 + 1
        if w < min_size or h < min_size:
            continue
        window = component[y0 : y1 + 1, x0 : x1 + 1]
        outline = np.zeros_like(window)
        outline[0, :] = outline[-1, :] = True
        outline[:, 0] = outline[:, -1] = True
        perimeter = int(outline.sum())
        density = float((window & outline).sum()) / perimeter
        boxes.append(BoundingBox(x0, y0, w, h, score=min(density, 1.0)))
    boxes.sort(key=BoundingBox.order_key)
    return boxes


def nms(boxes: list[BoundingBox], iou_threshold: float = 0.5) -> list[BoundingBox]:
    """Greedy non-maximum suppression.

    Boxes are visited by descending score with (y, x, w, h) as the stable
    tie-break; a box survives iff its IoU with every survivor so far is
    below the threshold.
    """
    if not 0.0 < iou_threshold < 1.0:
        raise ValueError("iou_threshold must be in (0, 1)")
    ordered = sorted(boxes, key=lambda b: (-b.score, *b.order_key()))
    kept: list[BoundingBox] = []
    for box in ordered:
        if all(iou(box, k) < iou_threshold for k in kept):
            kept.append(box)
    return kept


def merge_text_lines(
    boxes: list[BoundingBox], gap_factor: float = 2.0
) -> list[BoundingBox]:
    """Extra candidate boxes formed by chaining boxes along a text line.

    Boxes overlapping vertically by at least half the smaller height and
    separated horizontally by at most ``gap_factor`` times the taller box
    merge into one line box. Only merged boxes (2+ members) are returned;
    the originals stay valid candidates on their own.
    """
    if not boxes:
        return []
    ordered = sorted(boxes, key=lambda b: (b.x, b.y))
    chains: list[list[BoundingBox]] = []
    for box in ordered:
        placed = False
        for chain in chains:
            last = chain[-1]
            v_overlap = min(last.y + last.h, box.y + box.h) - max(last.y, box.y)
            if v_overlap < 0.5 * min(last.h, box.h):
                continue
            gap = box.x - (last.x + last.w)
            if gap <= gap_factor * max(last.h, box.h):
                chain.append(box)
                placed = True
                break
        if not placed:
            chains.append([box])
    merged: list[BoundingBox] = []
    for chain in chains:
        if len(chain) < 2:
            continue
        x0 = min(b.x for b in chain)
        y0 = min(b.y for b in chain)
        x1 = max(b.x + b.w for b in chain)
        y1 = max(b.y + b.h for b in chain)
        merged.append(
            BoundingBox(x0, y0, x1 - x0, y1 - y0, score=max(b.score for b in chain))
        )
    merged.sort(key=BoundingBox.order_key)
    return merged
