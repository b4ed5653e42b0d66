"""Delay-and-sum beamforming with fixed or ICA-estimated apodization.

The pipeline stages are kept separable so each can be tested against a
brute-force oracle: per-element delayed cubes, windowed summation with a
depth-dependent aperture, a central-pixel observation matrix for the window
estimate, coherence-factor weighting, and coherent angle compounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fastica import IcaConfig, IcaConvergenceError, IcaResult, ObservationMatrix, estimate_apodization
from .geometry import aperture_element_count, nearest_element_index
from .model import (
    ApodizationProfile,
    DelayedCube,
    ImageGrid,
    PlaneWaveAcquisition,
    ProbeGeometry,
    RFImage,
    ValidationError,
)
from .windows import window_by_name

__all__ = [
    "BeamformConfig",
    "delayed_channel_cube",
    "das",
    "central_crop_region",
    "build_observation_matrix",
    "ica_beamform",
    "ica_beamform_compound",
    "das_compound",
    "coherence_factor_image",
    "cf_das",
    "compound",
    "symmetric_angle_subset",
]


@dataclass(frozen=True)
class BeamformConfig:
    """Settings shared by the beamforming entry points.

    window names the fixed apodization used by plain delay-and-sum
    ("boxcar", "hann", "tukey:0.25", ...).  renormalize keeps the weight sum
    at one inside every aperture so brightness stays depth-fair; it can be
    switched off to reproduce unnormalized summation.  When
    compound_reuse_zero_weights is set, compounded ICA runs estimate the
    window once from the broadside transmission and reuse it at every angle.
    """

    f_number: float = 1.75
    window: str = "tukey:0.25"
    interpolation: str = "linear"
    renormalize: bool = True
    compound_reuse_zero_weights: bool = True

    def __post_init__(self):
        if self.f_number <= 0:
            raise ValidationError("f_number must be positive")
        if self.interpolation not in ("linear", "nearest"):
            raise ValidationError(f"interpolation must be linear or nearest, got {self.interpolation!r}")


def _interpolate_trace(trace: np.ndarray, positions: np.ndarray, mode: str) -> np.ndarray:
    """Sample a trace at fractional indices; zero outside the record."""
    n = trace.size
    if mode == "nearest":
        idx = np.rint(positions).astype(np.intp)
        valid = (idx >= 0) & (idx <= n - 1)
        out = np.where(valid, trace[np.clip(idx, 0, n - 1)], 0.0)
        return out
    idx = np.floor(positions).astype(np.intp)
    frac = positions - idx
    valid = (positions >= 0.0) & (positions <= n - 1)
    i0 = np.clip(idx, 0, n - 1)
    i1 = np.clip(idx + 1, 0, n - 1)
    out = trace[i0] * (1.0 - frac) + trace[i1] * frac
    return np.where(valid, out, 0.0)


def delayed_channel_cube(
    acquisition: PlaneWaveAcquisition,
    angle_index: int,
    grid: ImageGrid,
    probe: ProbeGeometry,
    config: BeamformConfig = BeamformConfig(),
) -> DelayedCube:
    """Interpolate every channel at each pixel's two-way travel time.

    Returns the cube together with the per-pixel aperture bookkeeping used
    by the summation stages.  Cube values are kept for all elements (the
    window estimate needs the full element set); the aperture mask records
    which elements the f-number admits at each pixel.
    """
    if not 0 <= angle_index < acquisition.n_angles:
        raise ValidationError(f"angle_index {angle_index} outside [0, {acquisition.n_angles - 1})")
    angle = acquisition.angles[angle_index]
    c = acquisition.sound_speed
    x = grid.x_coords[None, :]
    z = grid.z_coords[:, None]
    d_tx = z * np.cos(angle) + x * np.sin(angle)

    n_el = probe.n_elements
    values = np.empty((n_el, grid.nz, grid.nx))
    t0 = acquisition.start_time[angle_index]
    fs = acquisition.sampling_rate
    for e in range(n_el):
        tau = (d_tx + np.hypot(x - probe.element_x[e], z)) / c
        positions = (tau - t0) * fs
        values[e] = _interpolate_trace(
            acquisition.channel_data[angle_index, e], positions.ravel(), config.interpolation
        ).reshape(grid.shape)

    center = nearest_element_index(probe.element_x, grid.x_coords)
    count = aperture_element_count(grid.z_coords, config.f_number, probe.pitch)
    half = (count - 1) // 2
    element = np.arange(n_el)[:, None, None]
    offset = element - (center[None, None, :] - half[None, :, None])
    mask = (offset >= 0) & (offset < count[None, :, None])
    return DelayedCube(
        values=values,
        grid=grid,
        aperture_mask=mask,
        aperture_center=center,
        aperture_half=half,
    )


def _resample_window(weights: np.ndarray, length: int) -> np.ndarray:
    """Stretch or shrink a window to a new tap count, preserving its shape."""
    if length == weights.size:
        return weights.copy()
    if length == 1:
        return np.asarray([weights[weights.size // 2]])
    src = np.linspace(0.0, 1.0, weights.size)
    dst = np.linspace(0.0, 1.0, length)
    return np.interp(dst, src, weights)


def _as_weights(window) -> np.ndarray:
    if isinstance(window, ApodizationProfile):
        return window.weights
    if isinstance(window, str):
        return None  # resolved per depth by name
    return np.asarray(window, dtype=np.float64)


def das(cube: DelayedCube, window="boxcar", renormalize: bool = True) -> RFImage:
    """Weighted delay-and-sum over the active aperture of every pixel.

    window may be a name ("boxcar", "hann", "tukey:0.25"), an
    ApodizationProfile, or a bare weight vector.  At each depth the window is
    resampled onto the active element count; at the lateral edges the clipped
    taps are dropped.  With renormalize the surviving weights are rescaled to
    unit sum per pixel.
    """
    n_el, nz, nx = cube.values.shape
    fixed = _as_weights(window)
    center = cube.aperture_center
    half = cube.aperture_half
    element = np.arange(n_el)[:, None]

    out = np.empty((nz, nx))
    for iz in range(nz):
        count = 2 * int(half[iz]) + 1
        if fixed is None:
            taps = window_by_name(window, count).weights
        else:
            taps = _resample_window(fixed, count)
        offset = element - (center[None, :] - half[iz])
        valid = (offset >= 0) & (offset < count)
        w = np.where(valid, taps[np.clip(offset, 0, count - 1)], 0.0)
        if renormalize:
            sums = w.sum(axis=0)
            if np.any(np.abs(sums) < 1e-12 * np.abs(taps).sum()):
                raise ValidationError(
                    "aperture weights sum to zero at depth index "
                    f"{iz}; cannot renormalize this window"
                )
            w = w / sums
        out[iz] = np.einsum("ex,ex->x", w, cube.values[:, iz, :])
    return RFImage(values=out, grid=cube.grid)


def central_crop_region(
    grid: ImageGrid, probe: ProbeGeometry, f_number: float, max_depth: float
) -> tuple[int, int]:
    """Lateral pixel index range (start, stop) with a fully symmetric aperture.

    A column survives when the aperture at max_depth, centered on its nearest
    element, fits inside the array without clipping.  Raises when even the
    central column fails, which means the f-number or depth asks for a wider
    aperture than the probe has.
    """
    count = aperture_element_count(max_depth, f_number, probe.pitch)
    n = probe.n_elements
    if count > n:
        raise ValidationError(
            f"aperture of {count} elements at depth {max_depth:g} m exceeds the "
            f"{n}-element array; reduce f_number or the crop depth"
        )
    half = (count - 1) // 2
    center = nearest_element_index(probe.element_x, grid.x_coords)
    ok = (center >= half) & (center <= n - 1 - half)
    if not ok.any():
        raise ValidationError("no image column has a fully symmetric aperture; widen the grid")
    indices = np.nonzero(ok)[0]
    return int(indices[0]), int(indices[-1]) + 1


def build_observation_matrix(cube: DelayedCube, crop: tuple[int, int]) -> ObservationMatrix:
    """Stack each element's cropped image as one row, in element order.

    Rows are the row-major (depth-major) vectorization of the cube restricted
    to the cropped columns, full depth.
    """
    start, stop = crop
    if not 0 <= start < stop <= cube.grid.nx:
        raise ValidationError(f"crop ({start}, {stop}) outside the grid's {cube.grid.nx} columns")
    n_el = cube.n_elements
    data = cube.values[:, :, start:stop].reshape(n_el, -1)
    return ObservationMatrix(data=data, row_element_map=np.arange(n_el))


def ica_beamform(
    acquisition: PlaneWaveAcquisition,
    grid: ImageGrid,
    probe: ProbeGeometry,
    ica_config: IcaConfig = IcaConfig(),
    config: BeamformConfig = BeamformConfig(),
    angle_index: int | None = None,
    allow_nonconverged: bool = False,
    initial_weights=None,
) -> tuple[RFImage, IcaResult]:
    """Single-transmission image with a window estimated from the data itself.

    The estimate uses the central crop of the delayed cube; the resulting
    per-element window is then applied throughout the image through the same
    f-number aperture rule as any fixed window.  A non-converged estimate
    raises IcaConvergenceError unless allow_nonconverged is set.
    initial_weights warm-starts the fixed point from a previous window.
    """
    if angle_index is None:
        angle_index = acquisition.zero_angle_index
    cube = delayed_channel_cube(acquisition, angle_index, grid, probe, config)
    result = _estimate_from_cube(cube, probe, config, ica_config, initial_weights)
    if not result.converged and not allow_nonconverged:
        raise IcaConvergenceError(
            f"window estimate did not converge in {result.iterations_used} iterations"
        )
    image = das(cube, result.w_aperture, renormalize=config.renormalize)
    return image, result


def _estimate_from_cube(
    cube: DelayedCube,
    probe: ProbeGeometry,
    config: BeamformConfig,
    ica_config: IcaConfig,
    initial_weights=None,
) -> IcaResult:
    crop = central_crop_region(cube.grid, probe, config.f_number, float(cube.grid.z_coords[-1]))
    observations = build_observation_matrix(cube, crop)
    return estimate_apodization(observations, ica_config, initial_weights=initial_weights)


def das_compound(
    acquisition: PlaneWaveAcquisition,
    grid: ImageGrid,
    probe: ProbeGeometry,
    config: BeamformConfig = BeamformConfig(),
    angle_indices=None,
    window=None,
) -> RFImage:
    """Delay-and-sum each selected transmission and average coherently."""
    if angle_indices is None:
        angle_indices = range(acquisition.n_angles)
    window = config.window if window is None else window
    images = [
        das(delayed_channel_cube(acquisition, int(a), grid, probe, config), window,
            renormalize=config.renormalize)
        for a in angle_indices
    ]
    return compound(images)


def ica_beamform_compound(
    acquisition: PlaneWaveAcquisition,
    grid: ImageGrid,
    probe: ProbeGeometry,
    ica_config: IcaConfig = IcaConfig(),
    config: BeamformConfig = BeamformConfig(),
    angle_indices=None,
    allow_nonconverged: bool = False,
    initial_weights=None,
) -> tuple[RFImage, tuple[IcaResult, ...]]:
    """Compound selected transmissions with ICA-estimated apodization.

    With config.compound_reuse_zero_weights (the default) the window is
    estimated once from the broadside transmission and reused for every
    angle, so exactly one IcaResult backs the compounded frame.  Otherwise
    the window is re-estimated per angle and all results are returned.
    initial_weights warm-starts every estimate from a previous window.
    """
    if angle_indices is None:
        angle_indices = range(acquisition.n_angles)
    angle_indices = [int(a) for a in angle_indices]
    cubes = {a: delayed_channel_cube(acquisition, a, grid, probe, config) for a in angle_indices}

    results: list[IcaResult] = []
    if config.compound_reuse_zero_weights:
        reference = acquisition.zero_angle_index
        ref_cube = cubes.get(reference) or delayed_channel_cube(
            acquisition, reference, grid, probe, config
        )
        results.append(_estimate_from_cube(ref_cube, probe, config, ica_config, initial_weights))
        profiles = {a: results[0].w_aperture for a in angle_indices}
    else:
        profiles = {}
        for a in angle_indices:
            result = _estimate_from_cube(cubes[a], probe, config, ica_config, initial_weights)
            results.append(result)
            profiles[a] = result.w_aperture

    if not all(r.converged for r in results) and not allow_nonconverged:
        raise IcaConvergenceError("window estimate did not converge for every requested angle")
    images = [das(cubes[a], profiles[a], renormalize=config.renormalize) for a in angle_indices]
    return compound(images), tuple(results)


def coherence_factor_image(cube: DelayedCube) -> np.ndarray:
    """Coherence factor per pixel over the active aperture.

    The ratio of coherent to incoherent energy, |sum|^2 / (n sum of squares),
    lies in [0, 1]; pixels whose aperture carries no energy map to 0.
    """
    masked = np.where(cube.aperture_mask, cube.values, 0.0)
    coherent = masked.sum(axis=0) ** 2
    incoherent = (masked * masked).sum(axis=0) * cube.n_active
    out = np.zeros(cube.grid.shape)
    np.divide(coherent, incoherent, out=out, where=incoherent > 0)
    return out


def cf_das(cube: DelayedCube) -> RFImage:
    """Boxcar delay-and-sum weighted per pixel by the coherence factor."""
    base = das(cube, "boxcar", renormalize=True)
    return RFImage(values=base.values * coherence_factor_image(cube), grid=cube.grid)


def compound(images) -> RFImage:
    """Pixel-wise mean of coherently aligned per-angle images."""
    images = list(images)
    if not images:
        raise ValidationError("nothing to compound")
    grid = images[0].grid
    for im in images[1:]:
        if im.grid.shape != grid.shape or not (
            np.array_equal(im.grid.x_coords, grid.x_coords)
            and np.array_equal(im.grid.z_coords, grid.z_coords)
        ):
            raise ValidationError("cannot compound images on different grids")
    stack = np.stack([im.values for im in images])
    return RFImage(values=stack.mean(axis=0), grid=grid)


def symmetric_angle_subset(angles: np.ndarray, count: int) -> list[int]:
    """Indices of `count` steering angles centered on the broadside one.

    Angles are taken contiguously in sorted angle order around the entry
    closest to 0, which keeps the subset symmetric for symmetric fans.
    """
    angles = np.asarray(angles, dtype=np.float64)
    if not 1 <= count <= angles.size:
        raise ValidationError(f"count must lie in [1, {angles.size}], got {count}")
    order = np.argsort(angles, kind="stable")
    sorted_angles = angles[order]
    center = int(np.argmin(np.abs(sorted_angles)))
    start = center - (count - 1) // 2
    start = max(0, min(start, angles.size - count))
    return sorted(int(order[i]) for i in range(start, start + count))
