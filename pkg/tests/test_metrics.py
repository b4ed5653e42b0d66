import numpy as np
import pytest

import icabeam as ib
from icabeam.metrics import MetricsError, RegionMask
from icabeam.model import BModeImage, ImageGrid, RFImage, ValidationError

FWHM_PER_SIGMA = 2.0 * np.sqrt(2.0 * np.log(2.0))


@pytest.fixture(scope="module")
def fine_grid():
    return ImageGrid(
        x_coords=np.arange(-5e-3, 5e-3 + 1e-8, 0.05e-3),
        z_coords=np.arange(20e-3, 30e-3 + 1e-8, 0.05e-3),
    )


def gaussian_blob(grid, x0, z0, sigma_x, sigma_z, amplitude=1.0):
    dx = (grid.x_coords[None, :] - x0) / sigma_x
    dz = (grid.z_coords[:, None] - z0) / sigma_z
    return amplitude * np.exp(-0.5 * (dx * dx + dz * dz))


class TestFwhm:
    def test_gaussian_width_both_axes(self, fine_grid):
        sigma_x, sigma_z = 0.4e-3, 0.25e-3
        env = gaussian_blob(fine_grid, 1e-3, 24e-3, sigma_x, sigma_z)
        lat = ib.fwhm(env, fine_grid, (1e-3, 24e-3), "lateral")
        ax = ib.fwhm(env, fine_grid, (1e-3, 24e-3), "axial")
        assert lat == pytest.approx(FWHM_PER_SIGMA * sigma_x * 1e3, rel=0.01)
        assert ax == pytest.approx(FWHM_PER_SIGMA * sigma_z * 1e3, rel=0.01)

    def test_matches_oversampled_brute_force(self, fine_grid):
        x0, z0 = -2e-3, 26e-3
        skewed = gaussian_blob(fine_grid, x0, z0, 0.6e-3, 0.3e-3)
        skewed *= 1.0 + 0.3 * np.tanh((fine_grid.x_coords[None, :] - x0) / 1e-3)
        measured = ib.fwhm(skewed, fine_grid, (x0, z0), "lateral")

        x_fine = np.linspace(fine_grid.x_coords[0], fine_grid.x_coords[-1], 100 * fine_grid.nx)
        iz = np.argmin(np.abs(fine_grid.z_coords - z0))
        profile = np.interp(x_fine, fine_grid.x_coords, skewed[iz])
        above = profile >= profile.max() / 2.0
        brute = (x_fine[above][-1] - x_fine[above][0]) * 1e3
        assert measured == pytest.approx(brute, abs=0.5 * fine_grid.dx * 1e3)

    def test_peak_search_is_local(self, fine_grid):
        env = gaussian_blob(fine_grid, -3e-3, 22e-3, 0.3e-3, 0.3e-3, amplitude=5.0)
        env += gaussian_blob(fine_grid, 3e-3, 27e-3, 0.5e-3, 0.5e-3, amplitude=1.0)
        width = ib.fwhm(env, fine_grid, (3e-3, 27e-3), "lateral")
        assert width == pytest.approx(FWHM_PER_SIGMA * 0.5, rel=0.02)

    def test_batch_returns_mean_and_parts(self, fine_grid):
        env = gaussian_blob(fine_grid, -2e-3, 23e-3, 0.3e-3, 0.3e-3)
        env += gaussian_blob(fine_grid, 2e-3, 27e-3, 0.5e-3, 0.5e-3)
        mean, widths = ib.fwhm_batch(env, fine_grid, [(-2e-3, 23e-3), (2e-3, 27e-3)], "lateral")
        assert len(widths) == 2
        assert mean == pytest.approx(np.mean(widths))
        assert widths[0] < widths[1]

    def test_no_peak_raises(self, fine_grid):
        with pytest.raises(MetricsError):
            ib.fwhm(np.zeros(fine_grid.shape), fine_grid, (0.0, 25e-3), "lateral")

    def test_profile_without_crossing_raises(self, fine_grid):
        with pytest.raises(MetricsError):
            ib.fwhm(np.ones(fine_grid.shape), fine_grid, (0.0, 25e-3), "lateral")

    def test_axis_name_checked(self, fine_grid):
        with pytest.raises(ValidationError):
            ib.fwhm(np.ones(fine_grid.shape), fine_grid, (0.0, 25e-3), "elevational")


def tiny_bmode(values):
    values = np.asarray(values, dtype=np.float64)
    nz, nx = values.shape
    grid = ImageGrid(
        x_coords=np.arange(nx) * 1e-4, z_coords=1e-3 + np.arange(nz) * 1e-4
    )
    return BModeImage(values=values, grid=grid, dynamic_range_db=60.0)


class TestCnr:
    def test_hand_computed_value(self):
        image = tiny_bmode([
            [-10.0, -10.0, -14.0, -14.0],
            [-2.0, -2.0, -6.0, -6.0],
            [0.0, -20.0, -20.0, -20.0],
        ])
        inside = RegionMask(np.array([[True] * 4, [False] * 4, [False] * 4]), "inside")
        outside = RegionMask(np.array([[False] * 4, [True] * 4, [False] * 4]), "outside")
        # means -12 and -4, population variances both 4
        assert ib.cnr(image, inside, outside) == pytest.approx(20.0 * np.log10(4.0), abs=1e-9)

    def test_overlap_rejected(self):
        image = tiny_bmode(np.zeros((2, 4)))
        both = RegionMask(np.ones((2, 4), dtype=bool), "inside")
        with pytest.raises(ValidationError):
            ib.cnr(image, both, RegionMask(np.eye(2, 4, dtype=bool), "outside"))

    def test_zero_spread_rejected(self):
        image = tiny_bmode([[0.0, 0.0], [-5.0, -5.0]])
        inside = RegionMask(np.array([[True, True], [False, False]]), "inside")
        outside = RegionMask(np.array([[False, False], [True, True]]), "outside")
        with pytest.raises(MetricsError):
            ib.cnr(image, inside, outside)

    def test_empty_mask_rejected(self):
        with pytest.raises(ValidationError):
            RegionMask(np.zeros((2, 2), dtype=bool), "inside")


class TestEnvelope:
    def test_tone_amplitude(self):
        t = np.arange(512) / 512.0
        rf = np.cos(2 * np.pi * 32 * t)[:, None] * np.array([1.0, 0.5])[None, :]
        env = ib.envelope(rf)
        np.testing.assert_allclose(env[64:-64, 0], 1.0, atol=2e-3)
        np.testing.assert_allclose(env[64:-64, 1], 0.5, atol=1e-3)

    def test_accepts_rf_image(self, fine_grid):
        values = np.random.default_rng(0).standard_normal(fine_grid.shape)
        wrapped = ib.envelope(RFImage(values=values, grid=fine_grid))
        np.testing.assert_array_equal(wrapped, ib.envelope(values))

    def test_rejects_1d(self):
        with pytest.raises(ValidationError):
            ib.envelope(np.ones(16))


class TestBmode:
    def test_peak_is_zero_db_and_floor_clips(self, fine_grid):
        env = gaussian_blob(fine_grid, 0.0, 25e-3, 0.3e-3, 0.3e-3)
        image = ib.bmode(env, fine_grid, dynamic_range_db=40.0)
        assert image.values.max() == 0.0
        assert image.values.min() == -40.0
        iz, ix = fine_grid.nearest_pixel(0.0, 25e-3)
        assert image.values[iz, ix] == 0.0

    def test_known_ratio(self, fine_grid):
        env = np.full(fine_grid.shape, 0.1)
        env[10, 10] = 1.0
        image = ib.bmode(env, fine_grid)
        assert image.values[0, 0] == pytest.approx(-20.0, abs=1e-12)

    def test_all_zero_rejected(self, fine_grid):
        with pytest.raises(MetricsError):
            ib.bmode(np.zeros(fine_grid.shape), fine_grid)

    def test_negative_envelope_rejected(self, fine_grid):
        with pytest.raises(ValidationError):
            ib.bmode(np.full(fine_grid.shape, -1.0), fine_grid)


class TestCystMasks:
    def test_geometry(self, fine_grid):
        center, radius = (1e-3, 25e-3), 2e-3
        inside, outside = ib.cyst_masks(fine_grid, center, radius)
        dist = np.sqrt(
            (fine_grid.x_coords[None, :] - center[0]) ** 2
            + (fine_grid.z_coords[:, None] - center[1]) ** 2
        )
        assert dist[inside.mask].max() <= 0.8 * radius + 1e-12
        assert dist[outside.mask].min() >= 1.2 * radius - 1e-12
        assert dist[outside.mask].max() <= 1.8 * radius + 1e-12
        assert not np.any(inside.mask & outside.mask)
        assert inside.role == "inside" and outside.role == "outside"


class TestDetectPointTargets:
    def test_finds_planted_blobs_brightest_first(self, fine_grid):
        spots = [(-3e-3, 22e-3, 1.0), (2e-3, 25e-3, 0.8), (0e-3, 28e-3, 0.6)]
        env = sum(gaussian_blob(fine_grid, x, z, 0.25e-3, 0.25e-3, a) for x, z, a in spots)
        found = ib.detect_point_targets(env, fine_grid, threshold_db=-20.0)
        assert len(found) == 3
        for (fx, fz), (x, z, _) in zip(found, spots):
            assert abs(fx - x) <= fine_grid.dx
            assert abs(fz - z) <= fine_grid.dz

    def test_threshold_drops_faint_targets(self, fine_grid):
        env = gaussian_blob(fine_grid, 0.0, 24e-3, 0.25e-3, 0.25e-3, 1.0)
        env += gaussian_blob(fine_grid, 3e-3, 27e-3, 0.25e-3, 0.25e-3, 0.01)
        assert len(ib.detect_point_targets(env, fine_grid, threshold_db=-20.0)) == 1


class TestRmse:
    def test_hand_value(self):
        assert ib.rmse(np.zeros((1, 2)), np.array([[3.0, 4.0]])) == pytest.approx(np.sqrt(12.5))

    def test_accepts_images(self, fine_grid):
        a = RFImage(values=np.zeros(fine_grid.shape), grid=fine_grid)
        b = RFImage(values=np.ones(fine_grid.shape), grid=fine_grid)
        assert ib.rmse(a, b) == 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ValidationError):
            ib.rmse(np.zeros((2, 2)), np.zeros((2, 3)))
