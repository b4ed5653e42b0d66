"""Reader for the public plane-wave challenge datasets (HDF5).

The files store everything under US/US_DATASET0000: stacked real (and, for
demodulated variants, imaginary) channel data indexed (angle, element,
sample), the steering angles, sampling frequency, sound speed, per-dataset
start time, and the probe geometry as a 3 x n position matrix.  Only the
radio-frequency variant is accepted here; demodulated files carry a nonzero
modulation frequency and are rejected with guidance.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .io_native import FormatError, NativeDataset
from .model import ImageGrid, PlaneWaveAcquisition, ProbeGeometry, validate_dataset

__all__ = ["read_challenge_dataset", "default_challenge_grid"]

GROUP_PATH = ("US", "US_DATASET0000")


def _require(group, key: str, path: Path):
    if key not in group:
        raise FormatError(f"{path} is missing field {'/'.join(GROUP_PATH)}/{key}")
    return group[key]


def default_challenge_grid(
    probe: ProbeGeometry, acquisition: PlaneWaveAcquisition, depth_span=None
) -> ImageGrid:
    """Grid derived from file metadata alone.

    Laterally: element span at one third of the pitch.  Axially: from 5 mm
    (or the first recorded depth, whichever is larger) to the deepest
    recorded echo, at two per-sample depth steps c / fs, which is a quarter
    wavelength when the data are sampled at four times the center frequency.
    """
    c = acquisition.sound_speed
    fs = acquisition.sampling_rate
    dz = c / fs
    t0 = float(acquisition.start_time.min())
    if depth_span is None:
        z0 = max(5e-3, c * t0 / 2.0)
        z1 = c * (t0 + (acquisition.n_samples - 1) / fs) / 2.0
    else:
        z0, z1 = depth_span
    dx = probe.pitch / 3.0
    nx = int(np.floor((probe.element_x[-1] - probe.element_x[0]) / dx)) + 1
    nz = int(np.floor((z1 - z0) / dz)) + 1
    return ImageGrid(
        x_coords=probe.element_x[0] + dx * np.arange(nx),
        z_coords=z0 + dz * np.arange(nz),
    )


def read_challenge_dataset(path) -> NativeDataset:
    """Load a challenge HDF5 file as a dataset with a derived default grid."""
    import h5py

    path = Path(path)
    if not path.is_file():
        raise FormatError(f"{path} does not exist")
    with h5py.File(path, "r") as handle:
        group = handle
        for key in GROUP_PATH:
            if key not in group:
                raise FormatError(f"{path} is missing group {key!r}")
            group = group[key]

        data_group = _require(group, "data", path)
        real = np.asarray(_require(data_group, "real", path), dtype=np.float32)
        modulation = float(np.asarray(group["modulation_frequency"]).item()) if "modulation_frequency" in group else 0.0
        imag_nonzero = "imag" in data_group and np.any(np.asarray(data_group["imag"]))
        if modulation > 0 or imag_nonzero:
            raise FormatError(
                f"{path} holds demodulated (IQ) data; this pipeline expects the "
                "radio-frequency variant (files named *_rf*)"
            )
        angles = np.asarray(_require(group, "angles", path), dtype=np.float64)
        fs = float(np.asarray(_require(group, "sampling_frequency", path)).item())
        c = float(np.asarray(_require(group, "sound_speed", path)).item())
        t0 = np.asarray(_require(group, "initial_time", path), dtype=np.float64).reshape(-1)
        geometry = np.asarray(_require(group, "probe_geometry", path), dtype=np.float64)

    if real.ndim != 3:
        raise FormatError(f"{path}: channel data must be 3-d, got shape {real.shape}")
    if geometry.ndim != 2 or 3 not in geometry.shape:
        raise FormatError(f"{path}: probe_geometry must be 3 x n, got shape {geometry.shape}")
    element_x = geometry[0] if geometry.shape[0] == 3 else geometry[:, 0]
    pitch = float(np.median(np.diff(element_x)))
    probe = ProbeGeometry(element_x=element_x, pitch=pitch)
    start_time = np.full(angles.size, t0[0]) if t0.size == 1 else t0
    acquisition = PlaneWaveAcquisition(
        angles=angles,
        channel_data=real,
        sampling_rate=fs,
        sound_speed=c,
        start_time=start_time,
    )
    validate_dataset(acquisition, probe)
    return NativeDataset(
        acquisition=acquisition,
        probe=probe,
        grid=default_challenge_grid(probe, acquisition),
        ground_truth={},
        source="challenge",
        meta={"path": str(path), "modulation_frequency": modulation},
    )
