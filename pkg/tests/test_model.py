import numpy as np
import pytest

from icabeam.model import (
    ApodizationProfile,
    BModeImage,
    ImageGrid,
    PlaneWaveAcquisition,
    ProbeGeometry,
    ValidationError,
)


def test_linear_probe_centered_and_pitched():
    probe = ProbeGeometry.linear(128, 0.3e-3)
    assert probe.n_elements == 128
    np.testing.assert_allclose(probe.element_x.sum(), 0.0, atol=1e-15)
    np.testing.assert_allclose(np.diff(probe.element_x), 0.3e-3)
    np.testing.assert_allclose(probe.aperture_width, 127 * 0.3e-3)


def test_linear_probe_odd_count_has_center_element():
    probe = ProbeGeometry.linear(5, 1e-3)
    assert probe.element_x[2] == 0.0


def test_grid_rejects_nonuniform_spacing():
    with pytest.raises(ValidationError):
        ImageGrid(x_coords=[0.0, 1e-3, 3e-3], z_coords=[1e-3, 2e-3])


def test_grid_rejects_nonpositive_depth():
    with pytest.raises(ValidationError):
        ImageGrid(x_coords=[0.0, 1e-3], z_coords=[0.0, 1e-3])


def test_grid_nearest_pixel():
    grid = ImageGrid(x_coords=np.linspace(-1e-3, 1e-3, 21), z_coords=np.linspace(1e-3, 2e-3, 11))
    iz, ix = grid.nearest_pixel(0.21e-3, 1.52e-3)
    assert (iz, ix) == (5, 12)
    assert grid.shape == (11, 21)


class TestApodizationProfile:
    def test_canonicalized_unit_absolute_sum(self):
        prof = ApodizationProfile(weights=[1.0, -2.0, 3.0]).canonicalized()
        assert prof.normalization == "l1"
        np.testing.assert_allclose(np.abs(prof.weights).sum(), 1.0, rtol=1e-15)

    def test_canonicalized_center_weight_nonnegative(self):
        prof = ApodizationProfile(weights=[0.5, -1.0, 0.5]).canonicalized()
        assert prof.weights[1] > 0
        # flipped input lands on the same canonical form
        flipped = ApodizationProfile(weights=[-0.5, 1.0, -0.5]).canonicalized()
        np.testing.assert_array_equal(prof.weights, flipped.weights)

    def test_zero_center_falls_back_to_largest_magnitude(self):
        prof = ApodizationProfile(weights=[-3.0, 0.0, 1.0]).canonicalized()
        assert prof.weights[np.argmax(np.abs(prof.weights))] > 0

    def test_all_zero_rejected(self):
        with pytest.raises(ValidationError):
            ApodizationProfile(weights=[0.0, 0.0]).canonicalized()

    def test_nonfinite_rejected(self):
        with pytest.raises(ValidationError):
            ApodizationProfile(weights=[1.0, np.nan])


def test_acquisition_shape_consistency():
    with pytest.raises(ValidationError):
        PlaneWaveAcquisition(
            angles=np.zeros(2),
            channel_data=np.zeros((3, 4, 16)),
            sampling_rate=20e6,
            sound_speed=1540.0,
            start_time=0.0,
        )


def test_acquisition_zero_angle_index():
    acq = PlaneWaveAcquisition(
        angles=np.deg2rad([-8.0, 0.0, 8.0]),
        channel_data=np.zeros((3, 4, 16)),
        sampling_rate=20e6,
        sound_speed=1540.0,
        start_time=0.0,
    )
    assert acq.zero_angle_index == 1
    assert acq.n_elements == 4
    assert acq.n_samples == 16


def test_bmode_requires_nonpositive_values():
    grid = ImageGrid(x_coords=[0.0, 1e-3], z_coords=[1e-3, 2e-3])
    with pytest.raises(ValidationError):
        BModeImage(values=np.full((2, 2), 1.0), grid=grid)
