"""Deterministic file outputs: grayscale images, delimited reports, provenance.

Identical inputs produce byte-identical files; nothing here embeds a
timestamp.  B-mode pixels map linearly from [-dynamic_range, 0] dB to
[0, 255], black at the floor, with depth increasing down the rows.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .model import BModeImage, ValidationError

__all__ = ["write_image", "read_image_csv", "write_report", "write_provenance"]

IMAGE_FORMATS = ("pgm", "png", "csv")


def _to_8bit(image: BModeImage) -> np.ndarray:
    dr = image.dynamic_range_db
    scaled = np.rint((image.values + dr) / dr * 255.0)
    return np.clip(scaled, 0, 255).astype(np.uint8)


def write_image(image: BModeImage, path, image_format: str | None = None) -> Path:
    """Write a B-mode image as pgm, png or csv (format from the suffix).

    The csv variant stores the dB values themselves, one image row per line,
    at full working precision; the raster formats store the 8-bit mapping.
    """
    path = Path(path)
    fmt = (image_format or path.suffix.lstrip(".")).lower()
    if fmt not in IMAGE_FORMATS:
        raise ValidationError(f"image format must be one of {IMAGE_FORMATS}, got {fmt!r}")
    if fmt == "csv":
        lines = [",".join(format(v, ".9g") for v in row) for row in image.values]
        path.write_text("\n".join(lines) + "\n")
        return path
    pixels = _to_8bit(image)
    if fmt == "pgm":
        header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii")
        path.write_bytes(header + pixels.tobytes())
        return path
    from PIL import Image

    Image.fromarray(pixels, mode="L").save(path, format="PNG")
    return path


def read_image_csv(path) -> np.ndarray:
    """Read back a csv image written by write_image."""
    path = Path(path)
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"{path} is not a csv image: {exc}") from exc


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".6g")
    return str(value)


def write_report(path, header, rows) -> Path:
    """Write a delimited report with a fixed header and %.6g floats."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValidationError(f"row has {len(row)} cells, header has {len(header)}")
        lines.append(",".join(_format_cell(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _jsonable(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def write_provenance(path, record: dict) -> Path:
    """Write the run record (config, seeds, convergence flags) next to an output."""
    path = Path(path)
    path.write_text(json.dumps(_jsonable(record), indent=2, sort_keys=True) + "\n")
    return path
