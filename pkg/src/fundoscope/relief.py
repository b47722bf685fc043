"""GIMP-style raster filters: Gaussian blur, Sobel, bump-map relief, cartoon.

All convolutions use mirror reflection at the borders (half-sample
symmetric, edge sample repeated), matching the wavelet and fractional
modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .raster import GrayPlane

# 3x3 Sobel, applied separably: [1,2,1] smoothing across, [-1,0,1] difference along
SOBEL_SMOOTH = np.array([1.0, 2.0, 1.0])
SOBEL_DIFF = np.array([-1.0, 0.0, 1.0])

SOBEL_MAX_MAGNITUDE = 4.0 * math.sqrt(2.0)  # both gradients peak at 4 for [0,1] inputs

CENTRAL_DIFF = np.array([-0.5, 0.0, 0.5])

DARKNESS_EPS = 1e-4


@dataclass(frozen=True)
class BumpMapParams:
    azimuth: float = 135.0
    elevation: float = 45.0
    depth: float = 3.0

    def __post_init__(self):
        if not (math.isfinite(self.azimuth) and 0.0 <= self.azimuth < 360.0):
            raise ValueError(f"azimuth must be in [0, 360), got {self.azimuth}")
        if not (math.isfinite(self.elevation) and 0.0 < self.elevation <= 90.0):
            raise ValueError(f"elevation must be in (0, 90], got {self.elevation}")
        if not (math.isfinite(self.depth) and self.depth >= 0.0):
            raise ValueError(f"depth must be >= 0, got {self.depth}")


@dataclass(frozen=True)
class CartoonParams:
    mask_radius: float = 7.0
    threshold: float = 0.2
    pct_black: float = 0.2

    def __post_init__(self):
        if not (math.isfinite(self.mask_radius) and self.mask_radius > 0.0):
            raise ValueError(f"mask_radius must be > 0, got {self.mask_radius}")
        if not (math.isfinite(self.threshold) and 0.0 < self.threshold < 1.0):
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")
        if not (math.isfinite(self.pct_black) and 0.0 <= self.pct_black <= 1.0):
            raise ValueError(f"pct_black must be in [0, 1], got {self.pct_black}")


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Discrete Gaussian truncated at radius ceil(3 sigma), renormalized to sum 1."""
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets ** 2) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_blur(plane: GrayPlane, sigma: float) -> GrayPlane:
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise ValueError(f"sigma must be > 0, got {sigma}")
    kernel = gaussian_kernel(sigma)
    out = correlate1d(plane.data, kernel, axis=0, mode="reflect")
    out = correlate1d(out, kernel, axis=1, mode="reflect")
    return GrayPlane(out)


def sobel(plane: GrayPlane) -> GrayPlane:
    """Normalized Sobel gradient magnitude, clamped to [0, 1]."""
    if min(plane.height, plane.width) < 3:
        raise ValueError(
            f"plane {plane.width}x{plane.height} too small for the 3x3 Sobel kernels"
        )
    smoothed_rows = correlate1d(plane.data, SOBEL_SMOOTH, axis=0, mode="reflect")
    gx = correlate1d(smoothed_rows, SOBEL_DIFF, axis=1, mode="reflect")
    smoothed_cols = correlate1d(plane.data, SOBEL_SMOOTH, axis=1, mode="reflect")
    gy = correlate1d(smoothed_cols, SOBEL_DIFF, axis=0, mode="reflect")
    magnitude = np.hypot(gx, gy) / SOBEL_MAX_MAGNITUDE
    return GrayPlane(np.clip(magnitude, 0.0, 1.0))


def bump_map(plane: GrayPlane, height: GrayPlane, params: BumpMapParams) -> GrayPlane:
    """Shade the plane by the height field's slopes under a directional light.

    Surface normal per pixel is (-depth dh/dx, -depth dh/dy, 1) from central
    differences; the shade max(0, N.L) / |N| is divided by sin(elevation) so
    flat regions shade to exactly 1.
    """
    if (height.height, height.width) != (plane.height, plane.width):
        raise ValueError(
            f"height map is {height.width}x{height.height}, "
            f"plane is {plane.width}x{plane.height}"
        )
    hx = correlate1d(height.data, CENTRAL_DIFF, axis=1, mode="reflect")
    hy = correlate1d(height.data, CENTRAL_DIFF, axis=0, mode="reflect")
    nx = -params.depth * hx
    ny = -params.depth * hy
    norm = np.sqrt(nx * nx + ny * ny + 1.0)

    az = math.radians(params.azimuth)
    el = math.radians(params.elevation)
    # row index grows downward, so the light's y component is negated
    lx, ly, lz = math.cos(az) * math.cos(el), -math.sin(az) * math.cos(el), math.sin(el)

    shade = np.maximum(0.0, (nx * lx + ny * ly + lz) / norm) / math.sin(el)
    return GrayPlane(np.clip(plane.data * shade, 0.0, 1.0))


def cartoon(plane: GrayPlane, params: CartoonParams) -> GrayPlane:
    """Darken pixels that are distinctly darker than their blurred neighborhood.

    Relative darkness d = (B - I) / max(B, eps); pixels with d above the
    threshold are scaled down along a linear ramp, everything else passes
    through bit-identical.
    """
    blurred = gaussian_blur(plane, params.mask_radius).data
    darkness = (blurred - plane.data) / np.maximum(blurred, DARKNESS_EPS)
    ramp = np.minimum(1.0, (darkness - params.threshold) / (1.0 - params.threshold))
    factor = np.where(
        darkness > params.threshold, 1.0 - params.pct_black * ramp, 1.0
    )
    return GrayPlane(plane.data * factor)
