"""A trous (starlet) decomposition with per-level multiplicative gains.

Each smoothing pass convolves with the B3-spline kernel (1,4,6,4,1)/16,
separably, with the taps spread apart by 2^(j-1) at level j and mirror
reflection at the borders (half-sample symmetric: the edge sample repeats). Detail plane j is the difference of consecutive
smoothings, so the unit-gain recomposition telescopes back to the source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .raster import GrayPlane

B3_KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0

MAX_LEVELS = 8
MAX_NAMED_LEVELS = 5


@dataclass(frozen=True)
class WaveletStack:
    """Detail planes w1..wJ (finest first) plus the smooth residual cJ."""

    details: tuple[GrayPlane, ...]
    residual: GrayPlane

    def __post_init__(self):
        dims = {(p.height, p.width) for p in (*self.details, self.residual)}
        if len(dims) != 1:
            raise ValueError(f"stack planes disagree on dimensions: {sorted(dims)}")

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def height(self) -> int:
        return self.residual.height

    @property
    def width(self) -> int:
        return self.residual.width


@dataclass(frozen=True)
class WaveletGains:
    """Multiplicative gains for the five named levels plus the residual.

    1 is neutral. `finest` scales w1, `fine` w2, `medium` w3, `coarse` w4,
    `coarsest` w5; `remain` scales the residual.
    """

    finest: float = 1.0
    fine: float = 1.0
    medium: float = 1.0
    coarse: float = 1.0
    coarsest: float = 1.0
    remain: float = 1.0

    def __post_init__(self):
        for name in ("finest", "fine", "medium", "coarse", "coarsest", "remain"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    def level_gains(self, levels: int) -> tuple[float, ...]:
        return (self.finest, self.fine, self.medium, self.coarse, self.coarsest)[:levels]


def _smooth_axis(arr: np.ndarray, step: int, axis: int) -> np.ndarray:
    """One B3 pass along an axis, taps at +-step and +-2*step, mirrored ends.

    Written as x + sum t_i (x_i - x) so constants pass through bit-exact.
    """
    pad = [(0, 0), (0, 0)]
    pad[axis] = (2 * step, 2 * step)
    padded = np.pad(arr, pad, mode="symmetric")

    def shifted(offset: int) -> np.ndarray:
        start = 2 * step + offset
        index = [slice(None), slice(None)]
        index[axis] = slice(start, start + arr.shape[axis])
        return padded[tuple(index)]

    out = arr.copy()
    tmp = np.empty_like(arr)
    for offset, tap in (
        (-2 * step, 1.0 / 16.0),
        (2 * step, 1.0 / 16.0),
        (-step, 4.0 / 16.0),
        (step, 4.0 / 16.0),
    ):
        np.subtract(shifted(offset), arr, out=tmp)
        tmp *= tap
        out += tmp
    return out


def _smooth(arr: np.ndarray, level: int) -> np.ndarray:
    step = 1 << (level - 1)
    return _smooth_axis(_smooth_axis(arr, step, 0), step, 1)


def decompose(plane: GrayPlane, levels: int) -> WaveletStack:
    """Split a plane into `levels` detail planes and a residual."""
    if not 1 <= levels <= MAX_LEVELS:
        raise ValueError(f"levels must be in [1, {MAX_LEVELS}], got {levels}")
    if min(plane.height, plane.width) < (1 << levels):
        raise ValueError(
            f"plane {plane.width}x{plane.height} too small for {levels} levels "
            f"(needs at least {1 << levels} in each dimension)"
        )
    current = plane.data
    details = []
    for j in range(1, levels + 1):
        smoothed = _smooth(current, j)
        details.append(GrayPlane(current - smoothed))
        current = smoothed
    return WaveletStack(details=tuple(details), residual=GrayPlane(current))


def recompose_raw(stack: WaveletStack, gains: WaveletGains) -> np.ndarray:
    """Gain-weighted sum of details and residual, before any clamping."""
    if stack.levels > MAX_NAMED_LEVELS:
        raise ValueError(
            f"stack has {stack.levels} levels but only {MAX_NAMED_LEVELS} are nameable"
        )
    out = gains.remain * stack.residual.data
    for gain, detail in zip(gains.level_gains(stack.levels), stack.details):
        out = out + gain * detail.data
    return out


def recompose(stack: WaveletStack, gains: WaveletGains) -> GrayPlane:
    """Weighted recomposition, clamped to [0, 1]."""
    return GrayPlane(np.clip(recompose_raw(stack, gains), 0.0, 1.0))


def wavelet_enhance(plane: GrayPlane, gains: WaveletGains, levels: int = 5) -> GrayPlane:
    """Decompose, rescale the levels, recompose."""
    if levels > MAX_NAMED_LEVELS:
        raise ValueError(f"levels must be in [1, {MAX_NAMED_LEVELS}], got {levels}")
    return recompose(decompose(plane, levels), gains)
