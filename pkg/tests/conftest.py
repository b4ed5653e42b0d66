"""Shared fixtures: a desk-scale probe and one tiny acquisition.

The heavy phantom datasets used by the acceptance criteria live in
test_acceptance.py as module fixtures; everything here must stay cheap
enough to run on every test file.
"""

import numpy as np
import pytest

import icabeam as ib
from icabeam import simulate as sim


@pytest.fixture(scope="session")
def defaults():
    return sim.SimDefaults()


@pytest.fixture(scope="session")
def probe(defaults):
    return sim.default_probe(defaults)


@pytest.fixture(scope="session")
def pulse(defaults):
    return sim.default_pulse(defaults)


@pytest.fixture(scope="session")
def small_grid(probe, defaults):
    return sim.default_grid(probe, (20e-3, 28e-3), defaults.sound_speed, defaults.center_frequency)


@pytest.fixture(scope="session")
def two_target_acq(probe, pulse, defaults):
    """Three steered transmissions over two isolated point targets."""
    phantom = sim.Phantom(
        x=np.array([-3e-3, 2.5e-3]),
        z=np.array([22e-3, 26e-3]),
        amplitude=np.array([1.0, 0.7]),
        layout="two_targets",
    )
    angles = sim.steering_angles(3, 8.0)
    return sim.synth_channel_data(
        phantom, probe, pulse, angles, defaults.sampling_rate, defaults.sound_speed
    )


@pytest.fixture(scope="session")
def two_target_cube(two_target_acq, small_grid, probe):
    return ib.delayed_channel_cube(two_target_acq, 1, small_grid, probe)
