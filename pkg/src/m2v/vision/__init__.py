"""Computer-vision stage: edges, box proposals, OCR and element cropping."""

from .boxes import BoundingBox, detect_boxes, iou, merge_text_lines, nms
from .edges import canny
from .elements import (
    NoMatchError,
    OutOfBoundsError,
    attach_element_crops,
    crop,
    extract_element,
    select_target_box,
)
from .metrics import EmptyTargetError, cer, levenshtein
from .ocr import binarize, ocr, otsu_threshold

__all__ = [
    "BoundingBox",
    "EmptyTargetError",
    "NoMatchError",
    "OutOfBoundsError",
    "attach_element_crops",
    "binarize",
    "canny",
    "cer",
    "crop",
    "detect_boxes",
    "extract_element",
    "iou",
    "levenshtein",
    "merge_text_lines",
    "nms",
    "ocr",
    "otsu_threshold",
    "select_target_box",
]
