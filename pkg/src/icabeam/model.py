"""Shared domain types: probe geometry, acquisitions, grids, images.

All quantities are SI (meters, seconds, Hz, radians); decibel fields say so
in their names.  Instances are frozen and their arrays are read-only, so they
can be shared freely between pipeline stages and worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ValidationError",
    "ProbeGeometry",
    "PlaneWaveAcquisition",
    "ImageGrid",
    "DelayedCube",
    "ApodizationProfile",
    "RFImage",
    "BModeImage",
    "validate_dataset",
]


class ValidationError(ValueError):
    """An object violates one of its structural invariants."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _array(value, dtype, ndim: int, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=dtype)
    if arr.ndim != ndim:
        raise ValidationError(f"{name} must be {ndim}-d, got shape {arr.shape}")
    return _freeze(arr)


@dataclass(frozen=True)
class ProbeGeometry:
    """Linear array described by the lateral center of every element.

    Parameters
    ----------
    element_x : array_like
        Element centers along the lateral axis in meters, ascending and
        symmetric about x = 0.
    pitch : float
        Center-to-center element spacing in meters.
    """

    element_x: np.ndarray
    pitch: float

    def __post_init__(self):
        object.__setattr__(self, "element_x", _array(self.element_x, np.float64, 1, "element_x"))
        object.__setattr__(self, "pitch", float(self.pitch))

    @property
    def n_elements(self) -> int:
        return self.element_x.size

    @property
    def aperture_width(self) -> float:
        """Distance between the outermost element centers in meters."""
        return float(self.element_x[-1] - self.element_x[0])

    @classmethod
    def linear(cls, n_elements: int, pitch: float) -> "ProbeGeometry":
        """Evenly pitched array centered on x = 0."""
        offsets = np.arange(n_elements) - (n_elements - 1) / 2.0
        return cls(element_x=offsets * pitch, pitch=pitch)


@dataclass(frozen=True)
class PlaneWaveAcquisition:
    """Raw channel data for one or more plane-wave transmissions.

    channel_data is indexed (angle, element, sample).  start_time holds the
    acquisition time of sample 0 per angle; a scalar is broadcast.
    """

    angles: np.ndarray
    channel_data: np.ndarray
    sampling_rate: float
    sound_speed: float
    start_time: np.ndarray = 0.0

    def __post_init__(self):
        angles = _array(self.angles, np.float64, 1, "angles")
        data = np.asarray(self.channel_data)
        if data.dtype.kind != "f":
            data = data.astype(np.float64)
        if data.ndim != 3:
            raise ValidationError(f"channel_data must be 3-d, got shape {data.shape}")
        if data.shape[0] != angles.size:
            raise ValidationError(
                f"channel_data holds {data.shape[0]} transmissions but {angles.size} angles given"
            )
        if not float(self.sampling_rate) > 0:
            raise ValidationError("sampling_rate must be positive")
        if not float(self.sound_speed) > 0:
            raise ValidationError("sound_speed must be positive")
        t0 = np.asarray(self.start_time, dtype=np.float64)
        if t0.ndim == 0:
            t0 = np.full(angles.size, float(t0))
        if t0.shape != (angles.size,):
            raise ValidationError("start_time must be scalar or one value per angle")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "channel_data", _freeze(data))
        object.__setattr__(self, "sampling_rate", float(self.sampling_rate))
        object.__setattr__(self, "sound_speed", float(self.sound_speed))
        object.__setattr__(self, "start_time", _array(t0, np.float64, 1, "start_time"))

    @property
    def n_angles(self) -> int:
        return self.angles.size

    @property
    def n_elements(self) -> int:
        return self.channel_data.shape[1]

    @property
    def n_samples(self) -> int:
        return self.channel_data.shape[2]

    @property
    def zero_angle_index(self) -> int:
        """Index of the transmission steered closest to broadside."""
        return int(np.argmin(np.abs(self.angles)))

    def sample_times(self, angle_index: int) -> np.ndarray:
        t0 = self.start_time[angle_index]
        return t0 + np.arange(self.n_samples) / self.sampling_rate


def _check_uniform(coords: np.ndarray, name: str) -> None:
    if coords.size < 2:
        raise ValidationError(f"{name} needs at least 2 points")
    steps = np.diff(coords)
    if np.any(steps <= 0):
        bad = int(np.argmax(steps <= 0))
        raise ValidationError(f"{name} must be strictly increasing (violated at index {bad})")
    scale = np.max(np.abs(coords))
    if steps.max() - steps.min() > 1e-12 * scale:
        raise ValidationError(f"{name} spacing is not uniform")


@dataclass(frozen=True)
class ImageGrid:
    """Rectangular pixel grid; x lateral, z depth, both uniformly spaced."""

    x_coords: np.ndarray
    z_coords: np.ndarray

    def __post_init__(self):
        x = _array(self.x_coords, np.float64, 1, "x_coords")
        z = _array(self.z_coords, np.float64, 1, "z_coords")
        _check_uniform(x, "x_coords")
        _check_uniform(z, "z_coords")
        if z[0] <= 0:
            raise ValidationError(f"z_coords must be positive (z[0] = {z[0]:g})")
        object.__setattr__(self, "x_coords", x)
        object.__setattr__(self, "z_coords", z)

    @property
    def nx(self) -> int:
        return self.x_coords.size

    @property
    def nz(self) -> int:
        return self.z_coords.size

    @property
    def dx(self) -> float:
        return float(self.x_coords[1] - self.x_coords[0])

    @property
    def dz(self) -> float:
        return float(self.z_coords[1] - self.z_coords[0])

    @property
    def shape(self) -> tuple[int, int]:
        """(nz, nx), the shape of every image on this grid."""
        return (self.nz, self.nx)

    def nearest_pixel(self, x: float, z: float) -> tuple[int, int]:
        """(iz, ix) of the pixel closest to a physical point."""
        ix = int(np.argmin(np.abs(self.x_coords - x)))
        iz = int(np.argmin(np.abs(self.z_coords - z)))
        return iz, ix


@dataclass(frozen=True)
class DelayedCube:
    """Per-element delayed samples on an image grid.

    values[i, iz, ix] is channel i interpolated at the two-way travel time of
    pixel (ix, iz); samples falling outside the recorded window are zero.
    aperture_mask marks which elements sit inside the depth-dependent
    receive aperture of each pixel.  aperture_center gives the element index
    nearest each image column, aperture_half the half-width in elements of
    the unclamped aperture at each depth; the mask is their clipped product.
    """

    values: np.ndarray
    grid: ImageGrid
    aperture_mask: np.ndarray
    aperture_center: np.ndarray
    aperture_half: np.ndarray

    def __post_init__(self):
        values = _array(self.values, np.float64, 3, "values")
        mask = np.asarray(self.aperture_mask, dtype=bool)
        if values.shape[1:] != self.grid.shape:
            raise ValidationError(
                f"values shape {values.shape} does not match grid {self.grid.shape}"
            )
        if mask.shape != values.shape:
            raise ValidationError("aperture_mask shape must match values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "aperture_mask", _freeze(mask))
        object.__setattr__(self, "aperture_center", _array(self.aperture_center, np.intp, 1, "aperture_center"))
        object.__setattr__(self, "aperture_half", _array(self.aperture_half, np.intp, 1, "aperture_half"))

    @property
    def n_elements(self) -> int:
        return self.values.shape[0]

    @property
    def first_element(self) -> np.ndarray:
        """(nz, nx) index of the first active element per pixel."""
        n = self.n_elements
        return np.clip(self.aperture_center[None, :] - self.aperture_half[:, None], 0, n - 1)

    @property
    def last_element(self) -> np.ndarray:
        n = self.n_elements
        return np.clip(self.aperture_center[None, :] + self.aperture_half[:, None], 0, n - 1)

    @property
    def n_active(self) -> np.ndarray:
        """(nz, nx) count of active elements per pixel."""
        return self.last_element - self.first_element + 1


@dataclass(frozen=True)
class ApodizationProfile:
    """Receive aperture weights, one per element slot.

    normalization is "raw" as constructed or "l1" once canonicalized: unit
    absolute sum with a non-negative weight at the center slot (falling back
    to the largest-magnitude slot when the center weight is zero).
    """

    weights: np.ndarray
    normalization: str = "raw"

    def __post_init__(self):
        w = _array(self.weights, np.float64, 1, "weights")
        if w.size < 1:
            raise ValidationError("weights must not be empty")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite")
        if self.normalization not in ("raw", "l1"):
            raise ValidationError(f"unknown normalization {self.normalization!r}")
        object.__setattr__(self, "weights", w)

    def canonicalized(self) -> "ApodizationProfile":
        w = self.weights
        total = np.abs(w).sum()
        if total == 0:
            raise ValidationError("cannot canonicalize an all-zero profile")
        w = w / total
        center = w[w.size // 2]
        reference = center if abs(center) > 1e-12 * np.abs(w).max() else w[np.argmax(np.abs(w))]
        if reference < 0:
            w = -w
        return ApodizationProfile(weights=w, normalization="l1")


@dataclass(frozen=True)
class RFImage:
    """Beamformed radio-frequency image, indexed (z, x)."""

    values: np.ndarray
    grid: ImageGrid

    def __post_init__(self):
        values = _array(self.values, np.float64, 2, "values")
        if values.shape != self.grid.shape:
            raise ValidationError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class BModeImage:
    """Log-compressed envelope image in dB, normalized so the peak is 0."""

    values: np.ndarray
    grid: ImageGrid
    dynamic_range_db: float = 60.0

    def __post_init__(self):
        values = _array(self.values, np.float64, 2, "values")
        if values.shape != self.grid.shape:
            raise ValidationError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        dr = float(self.dynamic_range_db)
        if dr <= 0:
            raise ValidationError("dynamic_range_db must be positive")
        if values.max() != 0.0:
            raise ValidationError(f"peak must be exactly 0 dB, got {values.max():g}")
        if values.min() < -dr:
            raise ValidationError("values fall below the dynamic-range floor")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dynamic_range_db", dr)


def validate_dataset(
    acquisition: PlaneWaveAcquisition, probe: ProbeGeometry
) -> tuple[PlaneWaveAcquisition, ProbeGeometry]:
    """Check cross-object invariants, returning the pair unchanged.

    Raises ValidationError naming the first violated invariant, with the
    offending index where one exists.
    """
    x = probe.element_x
    if x.size < 2:
        raise ValidationError("probe needs at least 2 elements")
    steps = np.diff(x)
    if np.any(steps <= 0):
        bad = int(np.argmax(steps <= 0))
        raise ValidationError(
            f"element order violated at index {bad}: element_x must be strictly increasing"
        )
    asym = np.abs(x + x[::-1])
    if asym.max() > 1e-9:
        bad = int(np.argmax(asym))
        raise ValidationError(f"element_x must be symmetric about 0 (violated at index {bad})")
    if probe.pitch <= 0:
        raise ValidationError(f"pitch must be positive (got {probe.pitch:g})")
    if not np.isfinite(x).all():
        raise ValidationError("element_x must be finite")

    if acquisition.sampling_rate <= 0:
        raise ValidationError(f"sampling_rate must be positive (got {acquisition.sampling_rate:g})")
    if acquisition.sound_speed <= 0:
        raise ValidationError(f"sound_speed must be positive (got {acquisition.sound_speed:g})")
    if acquisition.n_elements != probe.n_elements:
        raise ValidationError(
            f"channel_data has {acquisition.n_elements} elements, probe has {probe.n_elements}"
        )
    if acquisition.angles.size != acquisition.channel_data.shape[0]:
        raise ValidationError("angles length does not match channel_data")
    if acquisition.start_time.size != acquisition.n_angles:
        raise ValidationError("start_time length does not match angles")
    if not np.isfinite(acquisition.angles).all():
        bad = int(np.argmax(~np.isfinite(acquisition.angles)))
        raise ValidationError(f"angles must be finite (violated at index {bad})")
    return acquisition, probe
