"""Plane-wave ultrasound beamforming with data-estimated aperture windows.

The package delays and sums plane-wave channel data on a pixel grid, and can
replace the fixed receive window with one estimated from the delayed data
itself by independent component analysis.  A small simulator, image quality
metrics, dataset readers and a CLI round out the workflow.
"""

from .beamform import (
    BeamformConfig,
    build_observation_matrix,
    central_crop_region,
    cf_das,
    coherence_factor_image,
    compound,
    das,
    das_compound,
    delayed_channel_cube,
    ica_beamform,
    ica_beamform_compound,
    symmetric_angle_subset,
)
from .fastica import (
    IcaConfig,
    IcaConvergenceError,
    IcaResult,
    ObservationMatrix,
    RankDeficientCovarianceError,
    WhiteningModel,
    center,
    estimate_apodization,
    fastica_one_unit,
    whiten,
)
from .geometry import (
    ApertureSpan,
    active_aperture,
    ambiguity_locus,
    aperture_element_count,
    nearest_element_index,
    propagation_delay,
    transmit_distance,
)
from .io_native import NativeDataset, load_dataset, read_native, write_native
from .io_picmus import default_challenge_grid, read_challenge_dataset
from .metrics import (
    MetricsError,
    bmode,
    bmode_from_rf,
    cnr,
    cyst_masks,
    detect_point_targets,
    envelope,
    fwhm,
    fwhm_batch,
    rmse,
)
from .model import (
    ApodizationProfile,
    BModeImage,
    DelayedCube,
    ImageGrid,
    PlaneWaveAcquisition,
    ProbeGeometry,
    RFImage,
    ValidationError,
    validate_dataset,
)
from .simulate import (
    Phantom,
    PulseModel,
    SimDefaults,
    add_channel_noise,
    default_grid,
    default_probe,
    default_pulse,
    make_cyst_phantom,
    make_point_grid,
    make_speckle_phantom,
    receive_directivity,
    steering_angles,
    synth_channel_data,
)
from .windows import WindowSpectrum, boxcar, hann, tukey, window_by_name, window_spectrum

__version__ = "0.1.0"

__all__ = [
    "ApertureSpan",
    "ApodizationProfile",
    "BModeImage",
    "BeamformConfig",
    "DelayedCube",
    "IcaConfig",
    "IcaConvergenceError",
    "IcaResult",
    "ImageGrid",
    "MetricsError",
    "NativeDataset",
    "ObservationMatrix",
    "Phantom",
    "PlaneWaveAcquisition",
    "ProbeGeometry",
    "PulseModel",
    "RFImage",
    "RankDeficientCovarianceError",
    "SimDefaults",
    "ValidationError",
    "WhiteningModel",
    "WindowSpectrum",
    "active_aperture",
    "add_channel_noise",
    "ambiguity_locus",
    "aperture_element_count",
    "bmode",
    "bmode_from_rf",
    "boxcar",
    "build_observation_matrix",
    "center",
    "central_crop_region",
    "cf_das",
    "cnr",
    "coherence_factor_image",
    "compound",
    "cyst_masks",
    "das",
    "das_compound",
    "default_challenge_grid",
    "default_grid",
    "default_probe",
    "default_pulse",
    "delayed_channel_cube",
    "detect_point_targets",
    "envelope",
    "estimate_apodization",
    "fastica_one_unit",
    "fwhm",
    "fwhm_batch",
    "hann",
    "ica_beamform",
    "ica_beamform_compound",
    "load_dataset",
    "make_cyst_phantom",
    "make_point_grid",
    "make_speckle_phantom",
    "nearest_element_index",
    "propagation_delay",
    "read_challenge_dataset",
    "receive_directivity",
    "read_native",
    "rmse",
    "steering_angles",
    "symmetric_angle_subset",
    "synth_channel_data",
    "transmit_distance",
    "tukey",
    "validate_dataset",
    "whiten",
    "window_by_name",
    "window_spectrum",
    "write_native",
]
