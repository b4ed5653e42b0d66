"""Per-pixel acquisition geometry for steered plane-wave transmissions.

Travel times assume a plane wavefront leaving the array at a steering angle
and a spherical echo returning to a single element, both at a constant sound
speed.  The dynamic receive aperture follows the usual f-number rule: the
aperture grows linearly with depth and is centered under the pixel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ProbeGeometry

__all__ = [
    "propagation_delay",
    "transmit_distance",
    "ApertureSpan",
    "aperture_element_count",
    "active_aperture",
    "nearest_element_index",
    "AmbiguityPoint",
    "ambiguity_locus",
]


def transmit_distance(x, z, angle):
    """Distance from the steered plane wavefront at t = 0 to point (x, z)."""
    return z * np.cos(angle) + x * np.sin(angle)


def propagation_delay(x, z, angle, element_x, sound_speed):
    """Two-way travel time from plane-wave transmit to receive element.

    Parameters
    ----------
    x, z : array_like
        Pixel coordinates in meters; z must be positive.
    angle : array_like
        Steering angle of the transmitted plane wave in radians.
    element_x : array_like
        Lateral position of the receiving element in meters.
    sound_speed : float
        Speed of sound in m/s.

    Returns
    -------
    ndarray or float
        Delay in seconds; finite and positive for valid inputs.  Arguments
        broadcast against each other.
    """
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if np.any(z <= 0):
        raise ValueError("z must be positive")
    if sound_speed <= 0:
        raise ValueError("sound_speed must be positive")
    d_tx = transmit_distance(x, z, np.asarray(angle, dtype=np.float64))
    d_rx = np.hypot(x - np.asarray(element_x, dtype=np.float64), z)
    tau = (d_tx + d_rx) / sound_speed
    if tau.ndim == 0:
        return float(tau)
    return tau


def aperture_element_count(z, f_number: float, pitch: float):
    """Number of elements in the receive aperture at depth z.

    The aperture length z / f_number is converted to an element count by
    ceiling division and then forced odd so the aperture has a center
    element.  Vectorized over z.
    """
    if f_number <= 0:
        raise ValueError("f_number must be positive")
    if pitch <= 0:
        raise ValueError("pitch must be positive")
    z = np.asarray(z, dtype=np.float64)
    if np.any(z <= 0):
        raise ValueError("z must be positive")
    count = np.ceil(z / (f_number * pitch)).astype(np.intp)
    count = np.maximum(count, 1)
    count = count + (1 - count % 2)
    if count.ndim == 0:
        return int(count)
    return count


def nearest_element_index(element_x: np.ndarray, x) -> np.ndarray:
    """Index of the element center closest to each lateral position."""
    element_x = np.asarray(element_x, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    idx = np.searchsorted(element_x, x)
    idx = np.clip(idx, 1, element_x.size - 1)
    left_closer = (x - element_x[idx - 1]) <= (element_x[idx] - x)
    idx = idx - left_closer.astype(np.intp)
    if idx.ndim == 0:
        return int(idx)
    return idx


@dataclass(frozen=True)
class ApertureSpan:
    """Inclusive element index range of an active receive aperture."""

    first_element: int
    last_element: int

    def __post_init__(self):
        if self.first_element > self.last_element:
            raise ValueError("empty aperture span")

    @property
    def length(self) -> int:
        return self.last_element - self.first_element + 1


def active_aperture(z: float, f_number: float, probe: ProbeGeometry, pixel_x: float) -> ApertureSpan:
    """Receive aperture for a pixel, clamped to the physical array.

    The span is centered (to within one element) on the element nearest
    pixel_x and holds aperture_element_count(z) elements where the array
    allows; at the lateral edges it is clipped, never rejected.
    """
    count = aperture_element_count(z, f_number, probe.pitch)
    center = nearest_element_index(probe.element_x, pixel_x)
    half = (count - 1) // 2
    n = probe.n_elements
    first = max(0, center - half)
    last = min(n - 1, center + half)
    return ApertureSpan(first_element=int(first), last_element=int(last))


@dataclass(frozen=True)
class AmbiguityPoint:
    """A point on an equal-delay locus; physical is False when it sits at or
    above the array plane (z <= 0)."""

    x: float
    z: float
    physical: bool


def ambiguity_locus(z_ref: float, element_x: float, x: float) -> AmbiguityPoint:
    """Off-axis point receiving the same broadside two-way delay as (element_x, z_ref).

    For a scatterer directly below a receive element at depth z_ref and a 0
    degree transmission, the returned depth satisfies

        z = z_ref - (x - element_x)**2 / (4 * z_ref)

    so the locus is parabolic in the lateral offset.  Every physical point on
    it produces the identical delay at that element, which is the source of
    the lateral ambiguity a receive window must suppress.
    """
    if z_ref <= 0:
        raise ValueError("z_ref must be positive")
    offset = x - element_x
    z = z_ref - offset * offset / (4.0 * z_ref)
    return AmbiguityPoint(x=float(x), z=float(z), physical=bool(z > 0))
