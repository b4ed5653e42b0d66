import numpy as np
import pytest
from scipy.signal import hilbert

from icabeam import simulate as sim
from icabeam.geometry import propagation_delay
from icabeam.model import ProbeGeometry, ValidationError


@pytest.fixture(scope="module")
def small_probe():
    return ProbeGeometry.linear(8, 0.3e-3)


def test_echo_arrival_times_match_geometry(small_probe, pulse):
    fs, c = 104e6, 1540.0
    rng = np.random.default_rng(5)
    for _ in range(20):
        x0 = float(rng.uniform(-2e-3, 2e-3))
        z0 = float(rng.uniform(6e-3, 14e-3))
        angle = float(rng.uniform(-0.25, 0.25))
        phantom = sim.Phantom(x=[x0], z=[z0], amplitude=[1.0])
        acq = sim.synth_channel_data(phantom, small_probe, pulse, [angle], fs, c,
                                     element_width=0.0)
        env = np.abs(hilbert(acq.channel_data[0], axis=1))
        for e in range(small_probe.n_elements):
            tau = propagation_delay(x0, z0, angle, float(small_probe.element_x[e]), c)
            t_peak = acq.start_time[0] + np.argmax(env[e]) / fs
            assert abs(t_peak - tau) <= 0.75 / fs


def test_echo_amplitude_scales_with_reflectivity(small_probe, pulse):
    fs, c = 104e6, 1540.0
    phantom = sim.Phantom(x=[0.0], z=[10e-3], amplitude=[0.7])
    acq = sim.synth_channel_data(phantom, small_probe, pulse, [0.0], fs, c, element_width=0.0)
    env = np.abs(hilbert(acq.channel_data[0], axis=1))
    np.testing.assert_allclose(env.max(axis=1), 0.7, rtol=0.02)


def test_superposition_of_scatterers(small_probe, pulse):
    fs, c = 20.8e6, 1540.0
    a = sim.Phantom(x=[-1e-3], z=[9e-3], amplitude=[1.0])
    b = sim.Phantom(x=[1.5e-3], z=[12e-3], amplitude=[-0.4])
    both = sim.Phantom(x=[-1e-3, 1.5e-3], z=[9e-3, 12e-3], amplitude=[1.0, -0.4])
    kwargs = dict(duration=25e-6, element_width=0.0)
    acq_a = sim.synth_channel_data(a, small_probe, pulse, [0.1], fs, c, **kwargs)
    acq_b = sim.synth_channel_data(b, small_probe, pulse, [0.1], fs, c, **kwargs)
    acq_both = sim.synth_channel_data(both, small_probe, pulse, [0.1], fs, c, **kwargs)
    np.testing.assert_allclose(
        acq_both.channel_data, acq_a.channel_data + acq_b.channel_data, atol=1e-12
    )


def test_synthesis_is_deterministic(small_probe, pulse):
    phantom = sim.wires_in_speckle_phantom(seed=2)
    args = (phantom, small_probe, pulse, [0.0], 20.8e6, 1540.0)
    first = sim.synth_channel_data(*args)
    second = sim.synth_channel_data(*args)
    np.testing.assert_array_equal(first.channel_data, second.channel_data)


def test_out_of_window_scatterer_dropped_with_warning(small_probe, pulse):
    phantom = sim.Phantom(x=[0.0, 0.0], z=[8e-3, 60e-3], amplitude=[1.0, 1.0])
    with pytest.warns(UserWarning, match="dropped 1"):
        acq = sim.synth_channel_data(
            phantom, small_probe, pulse, [0.0], 20.8e6, 1540.0, duration=20e-6
        )
    tail = acq.channel_data[0, :, -8:]
    assert np.all(tail == 0.0)


class TestDirectivity:
    def test_broadside_unity(self):
        assert sim.receive_directivity(0.0, 10e-3, 0.0, 0.27e-3, 0.296e-3) == pytest.approx(1.0)

    def test_null_at_sinc_zero(self):
        wavelength = 0.296e-3
        width = 2.0 * wavelength
        x = 10e-3 * np.tan(np.arcsin(0.5))
        d = sim.receive_directivity(x, 10e-3, 0.0, width, wavelength)
        assert abs(d) < 1e-12

    def test_symmetric_and_decreasing(self):
        wavelength = 0.296e-3
        x = np.linspace(0.0, 8e-3, 30)
        d_pos = sim.receive_directivity(x, 10e-3, 0.0, 0.27e-3, wavelength)
        d_neg = sim.receive_directivity(-x, 10e-3, 0.0, 0.27e-3, wavelength)
        np.testing.assert_allclose(d_pos, d_neg, rtol=1e-12)
        assert np.all(np.diff(d_pos) < 0)

    def test_width_zero_is_isotropic_in_pattern(self):
        x = np.linspace(-5e-3, 5e-3, 11)
        d = sim.receive_directivity(x, 10e-3, 0.0, 0.0, 0.296e-3)
        np.testing.assert_allclose(d, 10e-3 / np.hypot(x, 10e-3), rtol=1e-12)


class TestPhantoms:
    def test_speckle_count_matches_density(self):
        phantom = sim.make_speckle_phantom((-5e-3, 5e-3), (10e-3, 20e-3), 2e7, seed=0)
        assert phantom.n_scatterers == round(2e7 * 10e-3 * 10e-3)

    def test_speckle_density_gives_ten_per_cell(self, defaults):
        wavelength = defaults.sound_speed / defaults.center_frequency
        cell = wavelength * (1.75 * wavelength)
        assert sim.speckle_density(defaults) * cell == pytest.approx(10.0)

    def test_cyst_phantom_carves_discs(self):
        cysts = [(0.0, 15e-3, 2e-3), (3e-3, 18e-3, 1e-3)]
        phantom = sim.make_cyst_phantom((-5e-3, 5e-3), (12e-3, 20e-3), cysts, 3e7, seed=1)
        for cx, cz, r in cysts:
            assert np.all((phantom.x - cx) ** 2 + (phantom.z - cz) ** 2 > r**2)

    def test_resolution_preset_layout(self):
        phantom = sim.point_resolution_phantom(seed=3)
        targets = [(x, z) for z in sim.RESOLUTION_TARGET_Z for x in sim.RESOLUTION_TARGET_X]
        assert phantom.n_scatterers > 9
        np.testing.assert_array_equal(phantom.amplitude[:9], 1.0)
        bg_x, bg_z = phantom.x[9:], phantom.z[9:]
        assert bg_x.min() >= -9.6e-3 and bg_x.max() <= 9.6e-3
        assert bg_z.min() >= 11e-3 and bg_z.max() <= 37e-3
        for tx, tz in targets:
            assert np.all((bg_x - tx) ** 2 + (bg_z - tz) ** 2 > (1.2e-3) ** 2)
        assert np.abs(phantom.amplitude[9:]).max() < 1.0
        assert np.std(phantom.amplitude[9:]) == pytest.approx(0.15, rel=0.1)

    def test_resolution_preset_without_background(self):
        phantom = sim.point_resolution_phantom(seed=0, background_level=0.0)
        assert phantom.n_scatterers == 9

    def test_contrast_preset_layout(self):
        phantom = sim.cyst_contrast_phantom(seed=1)
        n_pins = len(sim.PIN_X)
        np.testing.assert_array_equal(phantom.x[-n_pins:], sim.PIN_X)
        np.testing.assert_array_equal(phantom.z[-n_pins:], sim.PIN_Z)
        np.testing.assert_array_equal(phantom.amplitude[-n_pins:], sim.PIN_AMPLITUDE)
        speck_x, speck_z = phantom.x[:-n_pins], phantom.z[:-n_pins]
        for cx, cz in sim.CYST_CENTERS:
            assert np.all((speck_x - cx) ** 2 + (speck_z - cz) ** 2 > sim.CYST_RADIUS**2)
        assert speck_x.min() >= -19.2e-3 and speck_x.max() <= 19.2e-3

    def test_wires_preset_layout(self):
        phantom = sim.wires_in_speckle_phantom(seed=0)
        assert np.sum(phantom.amplitude == 40.0) == 6
        wire_x = phantom.x[phantom.amplitude == 40.0]
        assert set(np.round(wire_x * 1e3, 6)) == {-4.0, 0.0, 4.0}

    def test_phantom_validation(self):
        with pytest.raises(ValidationError):
            sim.Phantom(x=[0.0], z=[-1e-3], amplitude=[1.0])
        with pytest.raises(ValidationError):
            sim.Phantom(x=[0.0, 1e-3], z=[1e-3], amplitude=[1.0])


@pytest.fixture(scope="module")
def clean(small_probe, pulse):
    phantom = sim.make_speckle_phantom((-2e-3, 2e-3), (8e-3, 14e-3), 5e7, seed=4)
    return sim.synth_channel_data(phantom, small_probe, pulse, [0.0, 0.1], 20.8e6, 1540.0)


class TestChannelNoise:
    def test_realized_snr(self, clean):
        noisy = sim.add_channel_noise(clean, [2], snr_db=20.0, seed=0)
        diff = noisy.channel_data[:, 2] - clean.channel_data[:, 2]
        for a in range(2):
            signal = np.mean(clean.channel_data[a, 2] ** 2)
            noise = np.mean(diff[a] ** 2)
            assert 10.0 * np.log10(signal / noise) == pytest.approx(20.0, abs=0.75)

    def test_untouched_channels_identical(self, clean):
        noisy = sim.add_channel_noise(clean, [2], snr_db=10.0, seed=0)
        mask = np.ones(8, dtype=bool)
        mask[2] = False
        np.testing.assert_array_equal(noisy.channel_data[:, mask], clean.channel_data[:, mask])

    def test_streams_keyed_per_channel(self, clean):
        one = sim.add_channel_noise(clean, [3], snr_db=10.0, seed=9)
        many = sim.add_channel_noise(clean, [1, 3, 5], snr_db=10.0, seed=9)
        np.testing.assert_array_equal(one.channel_data[:, 3], many.channel_data[:, 3])

    def test_infinite_snr_is_identity(self, clean):
        assert sim.add_channel_noise(clean, [0], snr_db=np.inf, seed=0) is clean

    def test_bad_channel_rejected(self, clean):
        with pytest.raises(ValidationError):
            sim.add_channel_noise(clean, [8], snr_db=10.0, seed=0)

    def test_zero_power_channel_rejected(self, small_probe, pulse):
        silent = sim.synth_channel_data(
            sim.Phantom(x=[], z=[], amplitude=[]), small_probe, pulse, [0.0],
            20.8e6, 1540.0, duration=10e-6,
        )
        with pytest.raises(ValidationError, match="zero power"):
            sim.add_channel_noise(silent, [0], snr_db=10.0, seed=0)


class TestSteeringAngles:
    def test_single_is_broadside(self):
        np.testing.assert_array_equal(sim.steering_angles(1), [0.0])

    def test_symmetric_fan(self):
        fan = sim.steering_angles(11, 16.0)
        assert fan[0] == pytest.approx(np.deg2rad(-16.0))
        assert fan[-1] == pytest.approx(np.deg2rad(16.0))
        assert fan[5] == 0.0
        np.testing.assert_allclose(fan, -fan[::-1], atol=1e-18)

    def test_count_validated(self):
        with pytest.raises(ValidationError):
            sim.steering_angles(0)


def test_default_grid_spacings(probe, defaults):
    grid = sim.default_grid(probe, (20e-3, 28e-3), defaults.sound_speed, defaults.center_frequency)
    wavelength = defaults.sound_speed / defaults.center_frequency
    assert grid.dx == pytest.approx(probe.pitch / 3.0)
    assert grid.dz == pytest.approx(wavelength / 4.0)
    assert grid.x_coords[0] == pytest.approx(probe.element_x[0])
    assert grid.z_coords[0] == 20e-3
