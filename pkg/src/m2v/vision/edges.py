"""Canny edge detection over RGB rasters, implemented on numpy.

Pipeline: grayscale, 5x5 Gaussian blur (sigma 1.4), Sobel gradients,
non-maximum suppression along the quantized gradient direction, then
double-threshold hysteresis. Gradient magnitudes are normalized to a
0-255 scale before thresholding, so thresholds are contrast-relative.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..raster import Raster, to_gray

_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.float64)
_SOBEL_Y = np.array([[-1, -2, -1], [0, 0, 0], [1, 2, 1]], dtype=np.float64)


def _gaussian_kernel(size: int = 5, sigma: float = 1.4) -> np.ndarray:
    ax = np.arange(size, dtype=np.float64) - size // 2
    xx, yy = np.meshgrid(ax, ax)
    k = np.exp(-(xx * xx + yy * yy) / (2.0 * sigma * sigma))
    return k / k.sum()

_GAUSSIAN = _gaussian_kernel()


def _shifted(a: np.ndarray, dy: int, dx: int) -> np.ndarray:
    """Array with each value replaced by its (dy, dx) neighbor; zeros at borders."""
    out = np.zeros_like(a)
    h, w = a.shape
    ys = slice(max(dy, 0), h + min(dy, 0))
    xs = slice(max(dx, 0), w + min(dx, 0))
    yd = slice(max(-dy, 0), h + min(-dy, 0))
    xd = slice(max(-dx, 0), w + min(-dx, 0))
    out[yd, xd] = a[ys, xs]
    return out


def canny(img: Raster, low: float = 50.0, high: float = 150.0) -> np.ndarray:
    """Binary edge map of ``img``; thresholds are on the 0-255 gradient scale."""
    if not 0 <= low < high:
        raise ValueError(f"need 0 <= low < high, got low={low} high={high}")
    h, w = img.height, img.width
    edges = np.zeros((h, w), dtype=bool)
    if h < 3 or w < 3:
        return edges

    gray = to_gray(img)
    blurred = ndimage.convolve(gray, _GAUSSIAN, mode="nearest")
    gx = ndimage.convolve(blurred, _SOBEL_X, mode="nearest")
    gy = ndimage.convolve(blurred, _SOBEL_Y, mode="nearest")
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak < 1e-9:  # flat image up to float noise
        return edges
    mag *= 255.0 / peak

    # Non-maximum suppression: quantize the gradient direction into four
    # bins and keep pixels not dominated by either neighbor along it.
    angle = np.rad2deg(np.arctan2(gy, gx)) % 180.0
    bin0 = (angle < 22.5) | (angle >= 157.5)            # horizontal gradient
    bin1 = (angle >= 22.5) & (angle < 67.5)             # diagonal /
    bin2 = (angle >= 67.5) & (angle < 112.5)            # vertical gradient
    bin3 = (angle >= 112.5) & (angle < 157.5)           # diagonal \
    n1 = np.zeros_like(mag)
    n2 = np.zeros_like(mag)
    for mask, (dy1, dx1), (dy2, dx2) in (
        (bin0, (0, -1), (0, 1)),
        (bin1, (-1, 1), (1, -1)),
        (bin2, (-1, 0), (1, 0)),
        (bin3, (-1, -1), (1, 1)),
    ):
        n1[mask] = _shifted(mag, dy1, dx1)[mask]
        n2[mask] = _shifted(mag, dy2, dx2)[mask]
    suppressed = np.where((mag >= n1) & (mag >= n2), mag, 0.0)
    suppressed[0, :] = suppressed[-1, :] = 0.0
    suppressed[:, 0] = suppressed[:, -1] = 0.0

    # Hysteresis: keep weak pixels only in components that contain a
    # strong pixel (8-connectivity).
    strong = suppressed >= high
    weak = suppressed >= low
    if not strong.any():
        return edges
    labels, _ = ndimage.label(weak, structure=np.ones((3, 3), dtype=int))
    keep = np.unique(labels[strong])
    keep = keep[keep > 0]
    return np.isin(labels, keep)
