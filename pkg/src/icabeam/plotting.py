"""Matplotlib figure rendering for CLI reports.

Every report-producing command drops a figure next to its delimited output;
these helpers keep the styling in one place.  The Agg backend is forced so
rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .model import BModeImage

__all__ = [
    "save_bmode_figure",
    "save_bmode_grid_figure",
    "save_window_figure",
    "save_noise_sweep_figure",
]

_DPI = 150


def _imshow_bmode(ax, image: BModeImage, title: str | None = None):
    grid = image.grid
    extent = [
        grid.x_coords[0] * 1e3,
        grid.x_coords[-1] * 1e3,
        grid.z_coords[-1] * 1e3,
        grid.z_coords[0] * 1e3,
    ]
    handle = ax.imshow(
        image.values,
        cmap="gray",
        vmin=-image.dynamic_range_db,
        vmax=0.0,
        extent=extent,
        aspect="equal",
        interpolation="nearest",
    )
    ax.set_xlabel("x [mm]")
    ax.set_ylabel("z [mm]")
    if title:
        ax.set_title(title)
    return handle


def save_bmode_figure(image: BModeImage, path, title: str | None = None, overlays=None) -> Path:
    """Render one B-mode frame with mm axes and a dB colorbar.

    overlays, when given, is a list of (x, z, marker) tuples in meters.
    """
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    handle = _imshow_bmode(ax, image, title)
    for x, z, marker in overlays or []:
        ax.plot(x * 1e3, z * 1e3, marker, markersize=10, markerfacecolor="none")
    fig.colorbar(handle, ax=ax, label="dB", shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)


def save_bmode_grid_figure(images: dict, path, suptitle: str | None = None) -> Path:
    """Render a labeled panel grid of B-mode frames.

    images maps (row_label, column_label) to BModeImage; rows and columns
    are laid out in first-seen order.
    """
    rows = list(dict.fromkeys(k[0] for k in images))
    cols = list(dict.fromkeys(k[1] for k in images))
    fig, axes = plt.subplots(
        len(rows), len(cols), figsize=(3.2 * len(cols), 3.4 * len(rows)), squeeze=False
    )
    for i, row in enumerate(rows):
        for j, col in enumerate(cols):
            ax = axes[i][j]
            image = images.get((row, col))
            if image is None:
                ax.set_axis_off()
                continue
            _imshow_bmode(ax, image, f"{row} / {col}")
    if suptitle:
        fig.suptitle(suptitle)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)


def save_window_figure(element_x: np.ndarray, profiles: dict, spectra: dict, path) -> Path:
    """Window shapes (peak-normalized) beside their spectra in dB.

    profiles maps label -> weight vector; spectra maps label -> WindowSpectrum.
    """
    fig, (ax_w, ax_s) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for label, weights in profiles.items():
        peak = np.abs(weights).max()
        ax_w.plot(element_x * 1e3, weights / (peak if peak else 1.0), label=label)
    ax_w.set_xlabel("element position [mm]")
    ax_w.set_ylabel("weight (peak = 1)")
    ax_w.legend()
    ax_w.grid(True, alpha=0.3)
    for label, spectrum in spectra.items():
        ax_s.plot(spectrum.frequencies, spectrum.magnitude_db, label=label)
    ax_s.set_xlabel("frequency [cycles/element]")
    ax_s.set_ylabel("magnitude [dB]")
    ax_s.set_ylim(-100, 3)
    ax_s.legend()
    ax_s.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)


def save_noise_sweep_figure(rows: list[dict], path) -> Path:
    """Image error against noisy-channel count, one line per method and SNR."""
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    series: dict[tuple, list] = {}
    for row in rows:
        series.setdefault((row["method"], row["snr_db"]), []).append(
            (row["n_channels"], row["rmse_db"])
        )
    for (method, snr), points in sorted(series.items()):
        points.sort()
        ax.plot(
            [p[0] for p in points],
            [p[1] for p in points],
            marker="o",
            label=f"{method}, {snr:g} dB SNR",
        )
    ax.set_xlabel("noisy channels")
    ax.set_ylabel("image RMSE vs clean [dB units]")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return Path(path)
