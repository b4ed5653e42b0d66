"""Envelope detection, log compression, and image-quality metrics.

FWHM is measured on the linear envelope by default (callers may hand in any
profile, including dB values, when a different convention is wanted); the
half-maximum crossings are located by linear interpolation between pixels.
CNR follows the log-compressed convention: statistics are taken on B-mode
pixels in dB with population standard deviations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import hilbert

from .model import BModeImage, ImageGrid, RFImage, ValidationError

__all__ = [
    "MetricsError",
    "RegionMask",
    "envelope",
    "bmode",
    "bmode_from_rf",
    "fwhm",
    "fwhm_batch",
    "cnr",
    "cyst_masks",
    "detect_point_targets",
    "rmse",
]


class MetricsError(ValueError):
    """A metric is undefined for the given inputs."""


@dataclass(frozen=True)
class RegionMask:
    """Boolean pixel selection with its role in a contrast measurement."""

    mask: np.ndarray
    role: str

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.ndim != 2:
            raise ValidationError("mask must be 2-d")
        if not mask.any():
            raise ValidationError(f"{self.role} mask selects no pixels")
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)


def envelope(image) -> np.ndarray:
    """Magnitude of the per-column analytic signal of an RF image.

    The analytic signal is formed along depth (axis 0) by one-sided spectrum
    doubling, so a real tone of amplitude A maps to a flat envelope A away
    from the column ends.
    """
    values = image.values if isinstance(image, RFImage) else np.asarray(image, dtype=np.float64)
    if values.ndim != 2:
        raise ValidationError("image must be 2-d")
    return np.abs(hilbert(values, axis=0))


def bmode(env: np.ndarray, grid: ImageGrid, dynamic_range_db: float = 60.0) -> BModeImage:
    """Log-compress an envelope to [-dynamic_range_db, 0] dB, peak at 0."""
    env = np.asarray(env, dtype=np.float64)
    if env.ndim != 2:
        raise ValidationError("envelope must be 2-d")
    if np.any(env < 0):
        raise ValidationError("envelope must be non-negative")
    peak = env.max()
    if peak == 0:
        raise MetricsError("cannot log-compress an all-zero envelope")
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(env / peak)
    db = np.clip(db, -float(dynamic_range_db), 0.0)
    return BModeImage(values=db, grid=grid, dynamic_range_db=dynamic_range_db)


def bmode_from_rf(image: RFImage, dynamic_range_db: float = 60.0) -> BModeImage:
    return bmode(envelope(image), image.grid, dynamic_range_db)


def _half_crossing(coords, profile, peak_idx, step, half):
    i = peak_idx
    while 0 <= i + step < profile.size:
        j = i + step
        if profile[j] < half:
            # linear interpolation between samples i and j
            t = (half - profile[i]) / (profile[j] - profile[i])
            return coords[i] + t * (coords[j] - coords[i])
        i = j
    return None


def fwhm(
    values: np.ndarray,
    grid: ImageGrid,
    peak_near: tuple[float, float],
    axis: str,
    search_radius: float = 1.5e-3,
) -> float:
    """Full width at half maximum through a local peak, in millimeters.

    Parameters
    ----------
    values : ndarray
        Image samples, (nz, nx); normally a linear envelope.
    grid : ImageGrid
    peak_near : (x, z)
        Approximate target position in meters; the brightest pixel within
        search_radius is taken as the peak.
    axis : {"axial", "lateral"}
        Direction of the 1-d profile through the peak.

    Raises MetricsError when no peak lies in the neighborhood or the profile
    never falls below half maximum on either side.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.shape != grid.shape:
        raise ValidationError("values shape does not match grid")
    if axis not in ("axial", "lateral"):
        raise ValidationError(f"axis must be axial or lateral, got {axis!r}")
    x0, z0 = peak_near
    near_x = np.abs(grid.x_coords - x0) <= search_radius
    near_z = np.abs(grid.z_coords - z0) <= search_radius
    if not near_x.any() or not near_z.any():
        raise MetricsError("search neighborhood contains no pixels")
    window = values[np.ix_(near_z, near_x)]
    iz_w, ix_w = np.unravel_index(np.argmax(window), window.shape)
    iz = np.nonzero(near_z)[0][iz_w]
    ix = np.nonzero(near_x)[0][ix_w]
    peak_value = values[iz, ix]
    if peak_value <= 0:
        raise MetricsError("no positive peak in the search neighborhood")

    if axis == "lateral":
        profile, coords, peak_idx = values[iz, :], grid.x_coords, ix
    else:
        profile, coords, peak_idx = values[:, ix], grid.z_coords, iz
    half = peak_value / 2.0
    right = _half_crossing(coords, profile, peak_idx, +1, half)
    left = _half_crossing(coords, profile, peak_idx, -1, half)
    if right is None or left is None:
        raise MetricsError("profile does not fall below half maximum on both sides")
    return float(abs(right - left) * 1e3)


def fwhm_batch(
    values: np.ndarray,
    grid: ImageGrid,
    points,
    axis: str,
    search_radius: float = 1.5e-3,
) -> tuple[float, list[float]]:
    """Mean FWHM over several point targets; returns (mean_mm, per-point)."""
    widths = [fwhm(values, grid, (float(p[0]), float(p[1])), axis, search_radius) for p in points]
    if not widths:
        raise MetricsError("no points given")
    return float(np.mean(widths)), widths


def cnr(image: BModeImage, inside: RegionMask, outside: RegionMask) -> float:
    """Contrast-to-noise ratio between two pixel populations, in dB.

    20 log10(|mu_in - mu_out| / sqrt((var_in + var_out) / 2)) on B-mode
    values, population variances.  Raises MetricsError when the statistic is
    undefined (zero spread or identical means).
    """
    if inside.mask.shape != image.values.shape or outside.mask.shape != image.values.shape:
        raise ValidationError("mask shape does not match image")
    if np.any(inside.mask & outside.mask):
        raise ValidationError("inside and outside masks overlap")
    a = image.values[inside.mask]
    b = image.values[outside.mask]
    contrast = abs(float(a.mean() - b.mean()))
    spread = float(np.sqrt((a.var() + b.var()) / 2.0))
    if spread == 0.0:
        raise MetricsError("zero variance in both regions; CNR undefined")
    if contrast == 0.0:
        raise MetricsError("identical region means; CNR is -inf")
    return float(20.0 * np.log10(contrast / spread))


def cyst_masks(
    grid: ImageGrid,
    center: tuple[float, float],
    radius: float,
    inside_fraction: float = 0.8,
    annulus: tuple[float, float] = (1.2, 1.8),
) -> tuple[RegionMask, RegionMask]:
    """Disc-and-annulus masks for an anechoic target.

    The inside disc is shrunk and the background annulus pushed out so pixels
    straddling the boundary contaminate neither statistic.
    """
    cx, cz = center
    dist2 = (grid.x_coords[None, :] - cx) ** 2 + (grid.z_coords[:, None] - cz) ** 2
    inside = dist2 <= (inside_fraction * radius) ** 2
    outside = (dist2 >= (annulus[0] * radius) ** 2) & (dist2 <= (annulus[1] * radius) ** 2)
    return RegionMask(inside, "inside"), RegionMask(outside, "outside")


def detect_point_targets(
    env: np.ndarray,
    grid: ImageGrid,
    threshold_db: float = -20.0,
    min_separation: float = 1.5e-3,
) -> list[tuple[float, float]]:
    """Local envelope maxima above a floor, greedily separated.

    Used when a dataset carries no ground-truth target list.  Returns (x, z)
    positions sorted by brightness, brightest first.
    """
    env = np.asarray(env, dtype=np.float64)
    floor = env.max() * 10.0 ** (threshold_db / 20.0)
    candidates = []
    interior = env[1:-1, 1:-1]
    neighbors = [
        env[:-2, 1:-1], env[2:, 1:-1], env[1:-1, :-2], env[1:-1, 2:],
        env[:-2, :-2], env[:-2, 2:], env[2:, :-2], env[2:, 2:],
    ]
    is_peak = (interior > floor) & np.all([interior >= nb for nb in neighbors], axis=0)
    for iz, ix in zip(*np.nonzero(is_peak)):
        candidates.append((float(env[iz + 1, ix + 1]), float(grid.x_coords[ix + 1]), float(grid.z_coords[iz + 1])))
    candidates.sort(reverse=True)
    accepted: list[tuple[float, float]] = []
    for _, x, z in candidates:
        if all((x - ax) ** 2 + (z - az) ** 2 >= min_separation**2 for ax, az in accepted):
            accepted.append((x, z))
    return accepted


def rmse(a, b) -> float:
    """Root-mean-square difference between two images of equal shape."""
    va = a.values if isinstance(a, (RFImage, BModeImage)) else np.asarray(a, dtype=np.float64)
    vb = b.values if isinstance(b, (RFImage, BModeImage)) else np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise ValidationError("images must share a shape")
    return float(np.sqrt(np.mean((va - vb) ** 2)))
