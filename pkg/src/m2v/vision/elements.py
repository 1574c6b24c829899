"""Locating and cropping named GUI elements out of manual images."""

from __future__ import annotations

import dataclasses
import logging
import re
from pathlib import Path

from ..errors import M2VError
from ..extraction import ActionRecord
from ..fonts import GlyphAtlas, default_atlas
from ..raster import Raster, crop_array, read_image, write_ppm
from .boxes import BoundingBox, detect_boxes, merge_text_lines, nms
from .edges import canny
from .metrics import cer
from .ocr import ocr

logger = logging.getLogger(__name__)


class NoMatchError(M2VError):
    """No candidate box reads close enough to the target name."""


class OutOfBoundsError(M2VError):
    """Crop box extends outside its source raster."""


def crop(img: Raster, box: BoundingBox) -> Raster:
    """Exact pixel copy of the box region."""
    if (
        box.x < 0
        or box.y < 0
        or box.w < 1
        or box.h < 1
        or box.x + box.w > img.width
        or box.y + box.h > img.height
    ):
        raise OutOfBoundsError(
            f"box ({box.x},{box.y},{box.w},{box.h}) outside {img.width}x{img.height}"
        )
    return crop_array(img, box.x, box.y, box.w, box.h)


def select_target_box(
    img: Raster,
    boxes: list[BoundingBox],
    target_name: str,
    atlas: GlyphAtlas | None = None,
    cer_max: float = 0.5,
) -> BoundingBox:
    """The box whose OCR text is closest to the target name by CER.

    Ties break toward the top-left box; a minimum CER above ``cer_max``
    raises :class:`NoMatchError`.
    """
    if not boxes:
        raise ValueError("boxes must be non-empty")
    atlas = atlas or default_atlas()
    scored = [
        (cer(ocr(crop(img, box), atlas), target_name), *box.order_key(), box)
        for box in boxes
    ]
    scored.sort(key=lambda entry: entry[:-1])
    best_cer = scored[0][0]
    if best_cer > cer_max:
        raise NoMatchError(
            f"no box matches {target_name!r}: best CER {best_cer:.3f} > {cer_max}"
        )
    return scored[0][-1]


def candidate_boxes(
    img: Raster,
    canny_low: float = 50.0,
    canny_high: float = 150.0,
    min_size: int = 4,
    iou_threshold: float = 0.5,
) -> list[BoundingBox]:
    """Widget-and-text-line box proposals for an image."""
    edges = canny(img, canny_low, canny_high)
    boxes = nms(detect_boxes(edges, min_size=min_size), iou_threshold)
    return boxes + merge_text_lines(boxes)


def extract_element(
    img: Raster,
    target_name: str,
    atlas: GlyphAtlas | None = None,
    cer_max: float = 0.5,
    precrop_area_factor: float = 4.0,
    canny_low: float = 50.0,
    canny_high: float = 150.0,
    min_size: int = 4,
    iou_threshold: float = 0.5,
) -> tuple[Raster, BoundingBox | None]:
    """Cut the named element out of a manual image.

    Screenshots are searched via edge boxes + OCR; an image is treated as
    already cropped (returned whole) when no named box is found or when
    its area is within ``precrop_area_factor`` of the best box's area.
    """
    atlas = atlas or default_atlas()
    boxes = candidate_boxes(img, canny_low, canny_high, min_size, iou_threshold)
    if not boxes:
        logger.info("image has no box proposals; treating as pre-cropped element")
        return img, None
    try:
        box = select_target_box(img, boxes, target_name, atlas, cer_max)
    except NoMatchError:
        logger.info(
            "no box reads as %r; treating image as pre-cropped element", target_name
        )
        return img, None
    if img.width * img.height <= precrop_area_factor * box.area:
        return img, box
    return crop(img, box), box


_SLUG_RE = re.compile(r"[^a-z0-9]+")


def slugify(name: str) -> str:
    slug = _SLUG_RE.sub("-", name.lower()).strip("-")
    return slug or "element"


def attach_element_crops(
    records: list[ActionRecord],
    workdir: str | Path,
    atlas: GlyphAtlas | None = None,
    **extract_kwargs,
) -> list[ActionRecord]:
    """Resolve hybrid-manual images into cached element crops.

    Each record that carries a manual image and no path yet gets its
    element cut out and written to ``<workdir>/elements/``; the record's
    target path is set relative to ``workdir``.
    """
    atlas = atlas or default_atlas()
    workdir = Path(workdir)
    cache_dir = workdir / "elements"
    out: list[ActionRecord] = []
    images: dict[str, Raster] = {}
    for index, record in enumerate(records):
        if record.image is None or record.target_path is not None:
            out.append(record)
            continue
        if record.image not in images:
            images[record.image] = read_image(record.image)
        element, _ = extract_element(
            images[record.image], record.target_object, atlas, **extract_kwargs
        )
        cache_dir.mkdir(parents=True, exist_ok=True)
        rel = Path("elements") / f"{index}_{slugify(record.target_object)}.ppm"
        write_ppm(element, workdir / rel)
        out.append(dataclasses.replace(record, target_path=str(rel)))
    return out
