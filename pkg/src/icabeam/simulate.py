"""Linear scattering simulator for steered plane-wave transmissions.

Every channel trace is a superposition of one pulse replica per scatterer,
placed at the exact two-way travel time from geometry.propagation_delay and
scaled by the scatterer amplitude.  The transmit-receive response is folded
into a single Gaussian-modulated cosine, so the forward model stays linear
in the scatterer amplitudes and the arrival times can be checked in closed
form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import gausspulse

from .geometry import propagation_delay
from .model import ImageGrid, PlaneWaveAcquisition, ProbeGeometry, ValidationError, _array

__all__ = [
    "Phantom",
    "PulseModel",
    "SimDefaults",
    "pulse_waveform",
    "synth_channel_data",
    "add_channel_noise",
    "make_point_grid",
    "make_speckle_phantom",
    "make_cyst_phantom",
    "steering_angles",
    "default_probe",
    "default_pulse",
    "default_grid",
    "point_resolution_phantom",
    "cyst_contrast_phantom",
    "wires_in_speckle_phantom",
]


@dataclass(frozen=True)
class Phantom:
    """Point scatterers: positions in meters, signed reflection amplitudes."""

    x: np.ndarray
    z: np.ndarray
    amplitude: np.ndarray
    layout: str = "custom"

    def __post_init__(self):
        x = _array(self.x, np.float64, 1, "x")
        z = _array(self.z, np.float64, 1, "z")
        amp = _array(self.amplitude, np.float64, 1, "amplitude")
        if not (x.size == z.size == amp.size):
            raise ValidationError("x, z and amplitude must have equal length")
        if x.size and z.min() <= 0:
            raise ValidationError("scatterer depths must be positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "amplitude", amp)

    @property
    def n_scatterers(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class PulseModel:
    """Gaussian-modulated cosine standing in for the two-way pulse."""

    center_frequency: float = 5.2e6
    fractional_bandwidth: float = 0.67
    amplitude: float = 1.0

    def __post_init__(self):
        if self.center_frequency <= 0:
            raise ValidationError("center_frequency must be positive")
        if not 0 < self.fractional_bandwidth < 2:
            raise ValidationError("fractional_bandwidth must lie in (0, 2)")

    @property
    def support(self) -> float:
        """Half-width in seconds beyond which the envelope is negligible."""
        return float(
            gausspulse("cutoff", fc=self.center_frequency, bw=self.fractional_bandwidth, tpr=-120)
        )


def pulse_waveform(t, pulse: PulseModel) -> np.ndarray:
    """Evaluate the pulse at times t (seconds), peaking at t = 0."""
    return pulse.amplitude * gausspulse(
        np.asarray(t, dtype=np.float64), fc=pulse.center_frequency, bw=pulse.fractional_bandwidth
    )


def receive_directivity(
    x, z, element_x, element_width: float, wavelength: float
) -> np.ndarray:
    """Far-field element sensitivity toward scatterers at (x, z).

    Soft-baffle model: obliquity cosine times the rigid-piston factor
    sinc(width·sinθ / λ).  Broadcasting follows numpy rules.
    """
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    element_x = np.asarray(element_x, dtype=np.float64)
    r = np.hypot(x - element_x, z)
    sin_theta = np.divide(x - element_x, r, out=np.zeros_like(r), where=r > 0)
    cos_theta = np.divide(z, r, out=np.ones_like(r), where=r > 0)
    return cos_theta * np.sinc(element_width * sin_theta / wavelength)


def synth_channel_data(
    phantom: Phantom,
    probe: ProbeGeometry,
    pulse: PulseModel,
    angles,
    sampling_rate: float,
    sound_speed: float,
    duration: float | None = None,
    start_time: float = 0.0,
    element_width: float | None = None,
) -> PlaneWaveAcquisition:
    """Synthesize channel data for each steering angle.

    duration defaults to the smallest window containing every echo plus the
    pulse support.  Scatterers whose pulse would not fit the requested window
    are dropped with a warning rather than truncated.  Receive directivity
    uses element_width, defaulting to 0.9 pitch; pass 0 for isotropic
    point-like elements.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=np.float64))
    if sampling_rate <= 0:
        raise ValidationError("sampling_rate must be positive")
    if sound_speed <= 0:
        raise ValidationError("sound_speed must be positive")
    if element_width is None:
        element_width = 0.9 * probe.pitch
    if element_width < 0:
        raise ValidationError("element_width must be >= 0")
    wavelength = sound_speed / pulse.center_frequency
    support = pulse.support
    half = int(math.ceil(support * sampling_rate)) + 1

    def delays(angle):
        # (n_scatterers, n_elements), one angle at a time to bound memory
        return propagation_delay(
            phantom.x[:, None], phantom.z[:, None], angle, probe.element_x[None, :], sound_speed
        )

    if duration is None:
        tau_max = 0.0
        for angle in angles:
            if phantom.n_scatterers:
                tau_max = max(tau_max, float(delays(angle).max()))
        duration = tau_max + support + 2.0 / sampling_rate - start_time
    n_samples = int(math.ceil(duration * sampling_rate))
    if n_samples < 2:
        raise ValidationError("duration is too short for the sampling rate")
    t_end = start_time + (n_samples - 1) / sampling_rate

    data = np.zeros((angles.size, probe.n_elements, n_samples))
    offsets = np.arange(-half, half + 1)
    dropped = 0
    for a in range(angles.size):
        if not phantom.n_scatterers:
            continue
        tau = delays(angles[a])
        keep = (tau.min(axis=1) - support >= start_time) & (tau.max(axis=1) + support <= t_end)
        dropped += int((~keep).sum())
        if not keep.any():
            continue
        tau_k = tau[keep]
        amp_k = phantom.amplitude[keep]
        x_k, z_k = phantom.x[keep], phantom.z[keep]
        for e in range(probe.n_elements):
            gain = amp_k
            if element_width > 0:
                gain = amp_k * receive_directivity(
                    x_k, z_k, probe.element_x[e], element_width, wavelength
                )
            centers = np.rint((tau_k[:, e] - start_time) * sampling_rate).astype(np.intp)
            idx = centers[:, None] + offsets[None, :]
            t_samp = start_time + idx / sampling_rate
            vals = gain[:, None] * pulse_waveform(t_samp - tau_k[:, e, None], pulse)
            valid = (idx >= 0) & (idx < n_samples)
            data[a, e] = np.bincount(
                idx[valid].ravel(), weights=vals[valid].ravel(), minlength=n_samples
            )
    if dropped:
        warnings.warn(f"dropped {dropped} scatterer echoes outside the temporal window")

    return PlaneWaveAcquisition(
        angles=angles,
        channel_data=data,
        sampling_rate=sampling_rate,
        sound_speed=sound_speed,
        start_time=start_time,
    )


def add_channel_noise(
    acquisition: PlaneWaveAcquisition, channel_indices, snr_db: float, seed: int
) -> PlaneWaveAcquisition:
    """Add white Gaussian noise to selected channels of every transmission.

    The noise variance per (angle, channel) is the clean trace power scaled
    by 10**(-snr_db / 10).  Streams are keyed by (seed, angle, channel), so a
    channel's noise does not depend on which other channels are noised.
    snr_db = inf returns the acquisition unchanged.
    """
    if math.isinf(snr_db) and snr_db > 0:
        return acquisition
    channels = sorted({int(c) for c in np.atleast_1d(channel_indices)})
    n_el = acquisition.n_elements
    for c in channels:
        if not 0 <= c < n_el:
            raise ValidationError(f"channel index {c} outside [0, {n_el - 1}]")
    data = acquisition.channel_data.copy()
    for a in range(acquisition.n_angles):
        for c in channels:
            power = float(np.mean(data[a, c] ** 2))
            if power == 0.0:
                raise ValidationError(f"channel {c} of angle {a} has zero power; SNR undefined")
            sigma = math.sqrt(power * 10.0 ** (-snr_db / 10.0))
            rng = np.random.default_rng((seed, a, c))
            data[a, c] = data[a, c] + sigma * rng.standard_normal(data.shape[2])
    return PlaneWaveAcquisition(
        angles=acquisition.angles,
        channel_data=data,
        sampling_rate=acquisition.sampling_rate,
        sound_speed=acquisition.sound_speed,
        start_time=acquisition.start_time,
    )


def make_point_grid(x_positions, z_positions, amplitude: float = 1.0) -> Phantom:
    """Lattice of identical point targets at every (x, z) combination."""
    xs = np.asarray(x_positions, dtype=np.float64)
    zs = np.asarray(z_positions, dtype=np.float64)
    xg, zg = np.meshgrid(xs, zs)
    n = xg.size
    return Phantom(
        x=xg.ravel(), z=zg.ravel(), amplitude=np.full(n, amplitude), layout="point_grid"
    )


def _speckle_points(x_span, z_span, density_per_m2: float, rng) -> tuple[np.ndarray, np.ndarray]:
    area = (x_span[1] - x_span[0]) * (z_span[1] - z_span[0])
    if area <= 0:
        raise ValidationError("speckle region must have positive area")
    count = int(round(density_per_m2 * area))
    x = rng.uniform(x_span[0], x_span[1], count)
    z = rng.uniform(z_span[0], z_span[1], count)
    return x, z


def make_speckle_phantom(x_span, z_span, density_per_m2: float, seed: int) -> Phantom:
    """Uniformly scattered diffuse medium with Gaussian reflectivities."""
    rng = np.random.default_rng(seed)
    x, z = _speckle_points(x_span, z_span, density_per_m2, rng)
    return Phantom(x=x, z=z, amplitude=rng.standard_normal(x.size), layout="speckle")


def make_cyst_phantom(x_span, z_span, cysts, density_per_m2: float, seed: int) -> Phantom:
    """Diffuse medium with anechoic discs removed.

    cysts is a sequence of (x, z, radius) in meters.
    """
    rng = np.random.default_rng(seed)
    x, z = _speckle_points(x_span, z_span, density_per_m2, rng)
    amp = rng.standard_normal(x.size)
    keep = np.ones(x.size, dtype=bool)
    for cx, cz, radius in cysts:
        keep &= (x - cx) ** 2 + (z - cz) ** 2 > radius**2
    return Phantom(x=x[keep], z=z[keep], amplitude=amp[keep], layout="cyst")


@dataclass(frozen=True)
class SimDefaults:
    """Desk-scale acquisition defaults used by the bundled phantoms."""

    n_elements: int = 128
    pitch: float = 0.3e-3
    center_frequency: float = 5.2e6
    fractional_bandwidth: float = 0.67
    sampling_rate: float = 20.8e6
    sound_speed: float = 1540.0
    max_angle_deg: float = 16.0


def default_probe(defaults: SimDefaults = SimDefaults()) -> ProbeGeometry:
    return ProbeGeometry.linear(defaults.n_elements, defaults.pitch)


def default_pulse(defaults: SimDefaults = SimDefaults()) -> PulseModel:
    return PulseModel(
        center_frequency=defaults.center_frequency,
        fractional_bandwidth=defaults.fractional_bandwidth,
    )


def steering_angles(n_angles: int, max_angle_deg: float = 16.0) -> np.ndarray:
    """Symmetric fan of steering angles in radians; n = 1 gives broadside."""
    if n_angles < 1:
        raise ValidationError("n_angles must be >= 1")
    if n_angles == 1:
        return np.zeros(1)
    return np.deg2rad(np.linspace(-max_angle_deg, max_angle_deg, n_angles))


def default_grid(
    probe: ProbeGeometry,
    z_span: tuple[float, float],
    sound_speed: float,
    center_frequency: float,
    lateral_margin: float = 0.0,
) -> ImageGrid:
    """Pixel grid at a quarter wavelength axially and a third pitch laterally."""
    wavelength = sound_speed / center_frequency
    dz = wavelength / 4.0
    dx = probe.pitch / 3.0
    x0 = probe.element_x[0] + lateral_margin
    x1 = probe.element_x[-1] - lateral_margin
    nx = int(math.floor((x1 - x0) / dx)) + 1
    nz = int(math.floor((z_span[1] - z_span[0]) / dz)) + 1
    return ImageGrid(
        x_coords=x0 + dx * np.arange(nx),
        z_coords=z_span[0] + dz * np.arange(nz),
    )


def speckle_density(defaults: SimDefaults = SimDefaults(), per_cell: float = 10.0) -> float:
    """Scatterers per square meter giving per_cell per resolution cell.

    The cell is one wavelength axially by one lateral resolution width
    (wavelength times f-number 1.75) laterally.
    """
    wavelength = defaults.sound_speed / defaults.center_frequency
    cell_area = wavelength * (wavelength * 1.75)
    return per_cell / cell_area


RESOLUTION_TARGET_X = (-5e-3, 0.0, 5e-3)
RESOLUTION_TARGET_Z = (16e-3, 24e-3, 32e-3)


def point_resolution_phantom(seed: int = 0, background_level: float = 0.15) -> Phantom:
    """3 x 3 lattice of bright point targets over a faint diffuse background.

    background_level scales the diffuse scatterer amplitudes relative to the
    targets.  A weakly scattering medium, as in gel resolution phantoms, keeps
    the delayed-data covariance well conditioned; set it to 0 for isolated
    targets in a true anechoic background.
    """
    wires = make_point_grid(
        x_positions=np.array(RESOLUTION_TARGET_X),
        z_positions=np.array(RESOLUTION_TARGET_Z),
        amplitude=1.0,
    )
    if background_level <= 0:
        return wires
    background = make_cyst_phantom(
        x_span=(-9.6e-3, 9.6e-3),
        z_span=(11e-3, 37e-3),
        cysts=[(x, z, 1.2e-3) for z in RESOLUTION_TARGET_Z for x in RESOLUTION_TARGET_X],
        density_per_m2=speckle_density(),
        seed=seed,
    )
    return Phantom(
        x=np.concatenate([wires.x, background.x]),
        z=np.concatenate([wires.z, background.z]),
        amplitude=np.concatenate([wires.amplitude, background.amplitude * background_level]),
        layout="point_grid",
    )


CYST_CENTER = (0.0, 24e-3)
CYST_RADIUS = 3e-3
CYST_CENTERS = (
    CYST_CENTER,
    (-9e-3, 17e-3),
    (9e-3, 17e-3),
    (-9e-3, 31e-3),
    (9e-3, 31e-3),
)
PIN_X = (-7e-3, 7e-3, -7e-3, 7e-3, -3e-3, 3e-3, -3e-3, 3e-3)
PIN_Z = (20e-3, 20e-3, 28e-3, 28e-3, 18e-3, 18e-3, 30e-3, 30e-3)
PIN_AMPLITUDE = 120.0


def cyst_contrast_phantom(seed: int) -> Phantom:
    """Multi-purpose contrast phantom: anechoic discs plus bright pins.

    Five 3 mm anechoic discs and eight strong pin reflectors sit in fully
    developed speckle, the usual makeup of a commercial contrast phantom.
    The speckle fills the whole array footprint so no phantom boundary falls
    inside the image or the window-estimation crop.  Contrast is measured on
    the central disc; the pins sit clear of its evaluation annulus.
    """
    speckle = make_cyst_phantom(
        x_span=(-19.2e-3, 19.2e-3),
        z_span=(15e-3, 33e-3),
        cysts=[(x, z, CYST_RADIUS) for x, z in CYST_CENTERS],
        density_per_m2=speckle_density(),
        seed=seed,
    )
    return Phantom(
        x=np.concatenate([speckle.x, PIN_X]),
        z=np.concatenate([speckle.z, PIN_Z]),
        amplitude=np.concatenate([speckle.amplitude, np.full(len(PIN_X), PIN_AMPLITUDE)]),
        layout="cyst_contrast",
    )


WIRE_TARGET_X = (-4e-3, 0.0, 4e-3)
WIRE_TARGET_Z = (21e-3, 27e-3)


def wires_in_speckle_phantom(seed: int) -> Phantom:
    """Bright wire targets over a diffuse background spanning the array."""
    speckle = make_speckle_phantom(
        x_span=(-19.2e-3, 19.2e-3),
        z_span=(17e-3, 31e-3),
        density_per_m2=speckle_density(),
        seed=seed,
    )
    wires = make_point_grid(
        x_positions=np.array(WIRE_TARGET_X),
        z_positions=np.array(WIRE_TARGET_Z),
        amplitude=40.0,
    )
    return Phantom(
        x=np.concatenate([speckle.x, wires.x]),
        z=np.concatenate([speckle.z, wires.z]),
        amplitude=np.concatenate([speckle.amplitude, wires.amplitude]),
        layout="wires_in_speckle",
    )
