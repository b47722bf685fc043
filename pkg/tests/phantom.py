"""Synthetic fundus phantom with annotated vessel/background pixel sets.

The phantom is built from library primitives only (scipy blur, numpy RNG) so
it stays independent of the filters under test. Geometry and seed are fixed:
identical arrays on every run.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

SIZE = 256
DISC_VALUE = 0.75
VESSEL_VALUE = 0.35
BLUR_SIGMA = 1.0
NOISE_SIGMA = 0.01
SEED = 7

_CENTER = (128.0, 128.0)
_DISC_RADIUS = 110.0
_VESSEL_HALF_WIDTH = 1.5


def _disc_mask() -> np.ndarray:
    yy, xx = np.mgrid[0:SIZE, 0:SIZE]
    cy, cx = _CENTER
    return (yy - cy) ** 2 + (xx - cx) ** 2 <= _DISC_RADIUS**2


def _vessel_mask() -> np.ndarray:
    """Sinuous branches radiating from an off-center root, ~3 px wide."""
    mask = np.zeros((SIZE, SIZE), dtype=bool)
    root = np.array([128.0, 60.0])  # (y, x), optic-disc-like root
    branches = [
        (0.0, 38.0, 0.05),
        (0.55, 30.0, 0.08),
        (-0.55, 30.0, 0.07),
        (1.15, 22.0, 0.10),
        (-1.15, 22.0, 0.09),
    ]
    t = np.linspace(0.0, 140.0, 1200)
    for angle, wobble_amp, wobble_freq in branches:
        direction = np.array([np.sin(angle), np.cos(angle)])
        normal = np.array([direction[1], -direction[0]])
        wobble = wobble_amp * np.sin(wobble_freq * t)
        points = root[None, :] + t[:, None] * direction[None, :] + wobble[:, None] * normal[None, :]
        for py, px in points:
            y0, y1 = int(py - 2), int(py + 3)
            x0, x1 = int(px - 2), int(px + 3)
            if y0 < 0 or x0 < 0 or y1 > SIZE or x1 > SIZE:
                continue
            yy, xx = np.mgrid[y0:y1, x0:x1]
            mask[y0:y1, x0:x1] |= (yy - py) ** 2 + (xx - px) ** 2 <= _VESSEL_HALF_WIDTH**2
    return mask & _disc_mask()


def make_phantom(seed: int = SEED, noise_sigma: float = NOISE_SIGMA):
    """Return (plane, vessel_set, background_set) as float64/bool arrays.

    The annotation sets are conservative: vessel pixels are the drawn
    centerline disks, background pixels sit inside the disc but at least
    4 px away from any vessel and 6 px inside the disc rim.
    """
    disc = _disc_mask()
    vessels = _vessel_mask()

    plane = np.zeros((SIZE, SIZE))
    plane[disc] = DISC_VALUE
    plane[vessels] = VESSEL_VALUE
    plane = ndimage.gaussian_filter(plane, BLUR_SIGMA, mode="mirror")

    rng = np.random.default_rng(seed)
    plane = np.clip(plane + rng.normal(0.0, noise_sigma, plane.shape), 0.0, 1.0)

    inner_disc = ndimage.binary_erosion(disc, iterations=6)
    near_vessels = ndimage.binary_dilation(vessels, iterations=4)
    background = inner_disc & ~near_vessels
    return plane, vessels, background


def make_phantom_rgb(seed: int = SEED) -> np.ndarray:
    """Fundus-tinted (H, W, 3) version of the phantom for file-based tests."""
    plane, _, _ = make_phantom(seed)
    return np.dstack([plane, plane * 0.62, plane * 0.30])


def michelson(plane: np.ndarray, vessel_set: np.ndarray, background_set: np.ndarray) -> float:
    """|mean_vessel - mean_background| / (mean_vessel + mean_background)."""
    mu_v = float(plane[vessel_set].mean())
    mu_b = float(plane[background_set].mean())
    return abs(mu_v - mu_b) / (mu_v + mu_b)
