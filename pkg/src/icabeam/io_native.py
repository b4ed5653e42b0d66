"""On-disk dataset format: a JSON metadata document plus a raw trace blob.

A dataset is a directory holding meta.json and channel_data.f32.  The blob
is little-endian float32, channel-major: angle, then element, then sample,
C order.  All metadata quantities are SI; the units block says so
explicitly.  Floats survive the JSON round trip bit for bit (shortest-repr
encoding), and the grid is stored as linspace triplets so it regenerates
exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import ImageGrid, PlaneWaveAcquisition, ProbeGeometry, validate_dataset

__all__ = ["FormatError", "NativeDataset", "write_native", "read_native", "load_dataset"]

META_NAME = "meta.json"
BLOB_NAME = "channel_data.f32"
FORMAT_TAG = "icabeam-native"


class FormatError(ValueError):
    """A dataset file is malformed or inconsistent with its metadata."""


@dataclass(frozen=True)
class NativeDataset:
    """A loaded dataset: acquisition, probe, optional grid and ground truth.

    ground_truth may hold "points" ([[x, z], ...]), "cysts"
    ([[x, z, radius], ...]) and "speckle_region" ([x0, x1, z0, z1]), all in
    meters.  meta carries the raw metadata document.
    """

    acquisition: PlaneWaveAcquisition
    probe: ProbeGeometry
    grid: ImageGrid | None = None
    ground_truth: dict = field(default_factory=dict)
    source: str = "native"
    meta: dict = field(default_factory=dict)


def _grid_triplets(grid: ImageGrid) -> dict:
    return {
        "x": {"start": float(grid.x_coords[0]), "step": grid.dx, "num": grid.nx},
        "z": {"start": float(grid.z_coords[0]), "step": grid.dz, "num": grid.nz},
    }


def _grid_from_triplets(spec: dict) -> ImageGrid:
    def axis(d):
        return d["start"] + d["step"] * np.arange(int(d["num"]))

    return ImageGrid(x_coords=axis(spec["x"]), z_coords=axis(spec["z"]))


def write_native(
    path,
    acquisition: PlaneWaveAcquisition,
    probe: ProbeGeometry,
    grid: ImageGrid | None = None,
    ground_truth: dict | None = None,
    provenance: dict | None = None,
) -> Path:
    """Write a dataset directory; returns its path.

    Channel data is stored as little-endian float32.  Callers who need a
    bit-exact round trip should hand in float32 traces.
    """
    validate_dataset(acquisition, probe)
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    meta = {
        "format": FORMAT_TAG,
        "version": 1,
        "units": {"length": "m", "time": "s", "frequency": "Hz", "angle": "rad"},
        "probe": {
            "element_x": [float(v) for v in probe.element_x],
            "pitch": probe.pitch,
        },
        "acquisition": {
            "angles": [float(v) for v in acquisition.angles],
            "sampling_rate": acquisition.sampling_rate,
            "sound_speed": acquisition.sound_speed,
            "start_time": [float(v) for v in acquisition.start_time],
            "n_samples": acquisition.n_samples,
            "dtype": "float32",
        },
    }
    if grid is not None:
        meta["grid"] = _grid_triplets(grid)
    if ground_truth:
        meta["ground_truth"] = ground_truth
    if provenance:
        meta["provenance"] = provenance
    (path / META_NAME).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    blob = np.ascontiguousarray(acquisition.channel_data, dtype="<f4")
    (path / BLOB_NAME).write_bytes(blob.tobytes())
    return path


def read_native(path) -> NativeDataset:
    """Load a dataset directory written by write_native."""
    path = Path(path)
    meta_path = path / META_NAME
    blob_path = path / BLOB_NAME
    if not meta_path.is_file():
        raise FormatError(f"{meta_path} is missing")
    if not blob_path.is_file():
        raise FormatError(f"{blob_path} is missing")
    try:
        meta = json.loads(meta_path.read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{meta_path} is not valid JSON: {exc}") from exc
    if meta.get("format") != FORMAT_TAG:
        raise FormatError(f"{meta_path} does not declare format {FORMAT_TAG!r}")
    try:
        probe = ProbeGeometry(
            element_x=np.asarray(meta["probe"]["element_x"], dtype=np.float64),
            pitch=meta["probe"]["pitch"],
        )
        acq_meta = meta["acquisition"]
        angles = np.asarray(acq_meta["angles"], dtype=np.float64)
        n_samples = int(acq_meta["n_samples"])
    except KeyError as exc:
        raise FormatError(f"{meta_path} is missing required field {exc}") from exc

    expected = angles.size * probe.n_elements * n_samples * 4
    raw = blob_path.read_bytes()
    if len(raw) != expected:
        raise FormatError(
            f"{blob_path} holds {len(raw)} bytes, expected {expected} "
            f"({angles.size} angles x {probe.n_elements} elements x {n_samples} samples x 4)"
        )
    data = np.frombuffer(raw, dtype="<f4").reshape(angles.size, probe.n_elements, n_samples)
    acquisition = PlaneWaveAcquisition(
        angles=angles,
        channel_data=data,
        sampling_rate=acq_meta["sampling_rate"],
        sound_speed=acq_meta["sound_speed"],
        start_time=np.asarray(acq_meta["start_time"], dtype=np.float64),
    )
    validate_dataset(acquisition, probe)
    grid = _grid_from_triplets(meta["grid"]) if "grid" in meta else None
    return NativeDataset(
        acquisition=acquisition,
        probe=probe,
        grid=grid,
        ground_truth=meta.get("ground_truth", {}),
        source="native",
        meta=meta,
    )


def load_dataset(path) -> NativeDataset:
    """Open either a native dataset directory or an HDF5 challenge file."""
    path = Path(path)
    if path.is_dir():
        return read_native(path)
    if path.suffix.lower() in (".hdf5", ".h5"):
        from .io_picmus import read_challenge_dataset

        return read_challenge_dataset(path)
    raise FormatError(f"{path} is neither a dataset directory nor an .hdf5 file")
