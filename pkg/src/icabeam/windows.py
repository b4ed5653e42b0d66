"""Aperture window construction and spectral descriptors.

Windows are built with scipy.signal.windows and re-peaked to exactly 1.
The spectrum descriptors (main-lobe width, relative side-lobe level,
leakage fraction) follow the usual window-analysis conventions: everything
between the first spectral nulls around the peak counts as main lobe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import windows as _windows

from .model import ApodizationProfile, ValidationError

__all__ = [
    "boxcar",
    "hann",
    "tukey",
    "window_by_name",
    "WindowSpectrum",
    "window_spectrum",
]


def _profile(values: np.ndarray) -> ApodizationProfile:
    peak = values.max()
    if peak <= 0:
        raise ValidationError("window degenerates to zeros at this length")
    return ApodizationProfile(weights=values / peak, normalization="raw")


def boxcar(length: int) -> ApodizationProfile:
    """Uniform window of the given length."""
    if length < 1:
        raise ValidationError("length must be >= 1")
    return _profile(np.ones(length))


def hann(length: int) -> ApodizationProfile:
    if length < 1:
        raise ValidationError("length must be >= 1")
    return _profile(_windows.hann(length, sym=True))


def tukey(length: int, taper: float = 0.25) -> ApodizationProfile:
    """Tapered-cosine window; taper is the total cosine fraction.

    taper = 0 reduces to boxcar, taper = 1 to Hann.
    """
    if length < 1:
        raise ValidationError("length must be >= 1")
    if not 0.0 <= taper <= 1.0:
        raise ValidationError(f"taper must lie in [0, 1], got {taper:g}")
    return _profile(_windows.tukey(length, alpha=taper, sym=True))


def window_by_name(name: str, length: int) -> ApodizationProfile:
    """Build a window from a CLI-style descriptor: boxcar, hann, tukey:0.25."""
    kind, _, arg = name.partition(":")
    kind = kind.strip().lower()
    if kind == "boxcar":
        return boxcar(length)
    if kind == "hann":
        return hann(length)
    if kind == "tukey":
        taper = float(arg) if arg else 0.25
        return tukey(length, taper)
    raise ValidationError(f"unknown window {name!r}")


@dataclass(frozen=True)
class WindowSpectrum:
    """Spectral summary of an aperture window.

    frequencies are in cycles per element over [-0.5, 0.5); magnitude_db is
    peak-normalized.  mainlobe_width_cycles is the full -3 dB width,
    sidelobe_level_db the highest peak outside the first nulls (<= 0), and
    leakage_fraction the share of spectral energy outside the main lobe.
    """

    frequencies: np.ndarray
    magnitude_db: np.ndarray
    mainlobe_width_cycles: float
    sidelobe_level_db: float
    leakage_fraction: float


def _cross_below(freqs, db, start, stop, step, level):
    """Interpolated frequency where db first drops below level, walking from start."""
    i = start
    while i != stop:
        j = i + step
        if db[j] < level:
            f0, f1 = freqs[i], freqs[j]
            d0, d1 = db[i], db[j]
            return f0 + (level - d0) * (f1 - f0) / (d1 - d0)
        i = j
    return None


def _first_null(db, start, stop, step):
    """Index of the first local minimum walking from start (exclusive)."""
    i = start + step
    while i != stop:
        prev, nxt = db[i - step], db[i + step] if i + step != stop else -np.inf
        if db[i] <= prev and db[i] < nxt:
            return i
        i += step
    return None


def window_spectrum(profile, n_fft: int) -> WindowSpectrum:
    """Evaluate the window's normalized spectrum and its lobe descriptors.

    Parameters
    ----------
    profile : ApodizationProfile or array_like
        Window weights; descriptors are invariant to scaling.
    n_fft : int
        Zero-padded transform length, at least 4x the window length.
    """
    w = profile.weights if isinstance(profile, ApodizationProfile) else np.asarray(profile, dtype=np.float64)
    if w.ndim != 1 or w.size < 2:
        raise ValidationError("profile must be a 1-d window of length >= 2")
    if n_fft < 4 * w.size:
        raise ValidationError(f"n_fft must be >= 4 * length ({4 * w.size}), got {n_fft}")
    spectrum = np.fft.fftshift(np.fft.fft(w, n_fft))
    freqs = np.fft.fftshift(np.fft.fftfreq(n_fft))
    mag = np.abs(spectrum)
    peak = int(np.argmax(mag))
    if mag[peak] == 0:
        raise ValidationError("window transform is identically zero")
    power = mag * mag
    with np.errstate(divide="ignore"):
        db = 20.0 * np.log10(mag / mag[peak])
    db = np.maximum(db, -300.0)

    right = _cross_below(freqs, db, peak, n_fft - 1, +1, -3.0)
    left = _cross_below(freqs, db, peak, 0, -1, -3.0)
    if right is None or left is None:
        raise ValidationError("-3 dB point not found; increase n_fft")
    width = right - left

    null_r = _first_null(db, peak, n_fft - 1, +1)
    null_l = _first_null(db, peak, 0, -1)
    if null_r is None or null_l is None:
        raise ValidationError("spectral null not found; increase n_fft")
    outside = np.concatenate([db[:null_l], db[null_r + 1:]])
    sidelobe = float(outside.max()) if outside.size else -300.0
    main_energy = power[null_l : null_r + 1].sum()
    leakage = float(1.0 - main_energy / power.sum())

    return WindowSpectrum(
        frequencies=freqs,
        magnitude_db=db,
        mainlobe_width_cycles=float(width),
        sidelobe_level_db=sidelobe,
        leakage_fraction=leakage,
    )
