import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icabeam.fastica import (
    IcaConfig,
    ObservationMatrix,
    RankDeficientCovarianceError,
    center,
    contrast_g,
    estimate_apodization,
    fastica_one_unit,
    whiten,
)
from icabeam.model import ValidationError


def make_mixture(seed, n_samples=50_000):
    """Two unit-variance non-Gaussian sources through a fixed 2x2 mixing."""
    rng = np.random.default_rng(seed)
    sources = np.vstack([
        rng.uniform(-np.sqrt(3.0), np.sqrt(3.0), n_samples),
        rng.laplace(0.0, 1.0 / np.sqrt(2.0), n_samples),
    ])
    mixing = np.array([[1.4, 0.6], [0.5, 1.1]])
    return mixing @ sources, sources


def test_center_removes_row_means():
    rng = np.random.default_rng(0)
    x = rng.normal(3.0, 1.0, (4, 200))
    xc, means = center(x)
    np.testing.assert_allclose(xc.mean(axis=1), 0.0, atol=1e-14)
    np.testing.assert_allclose(means, x.mean(axis=1), rtol=1e-15)


@given(seed=st.integers(0, 10_000), n=st.integers(2, 24))
@settings(max_examples=60, deadline=None)
def test_whitening_gives_identity_covariance(seed, n):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 50 * n)) * rng.uniform(0.5, 3.0, (n, 1))
    xc, _ = center(x)
    z, _ = whiten(xc)
    np.testing.assert_allclose(np.cov(z), np.eye(n), atol=1e-10)


def test_whitening_round_trips_through_dewhitener():
    rng = np.random.default_rng(7)
    x = rng.standard_normal((5, 400))
    xc, _ = center(x)
    z, model = whiten(xc)
    np.testing.assert_allclose(model.dewhitener @ z, xc, atol=1e-10)
    np.testing.assert_allclose(model.whitener @ model.dewhitener, np.eye(5), atol=1e-10)


def test_whitening_rejects_rank_deficiency():
    x = np.vstack([np.arange(100.0), 2.0 * np.arange(100.0), np.random.default_rng(0).standard_normal(100)])
    xc, _ = center(x)
    with pytest.raises(RankDeficientCovarianceError):
        whiten(xc)


def test_whitening_requires_centered_input():
    with pytest.raises(ValidationError):
        whiten(np.full((3, 50), 2.0) + np.random.default_rng(0).standard_normal((3, 50)))


class TestContrasts:
    def test_logcosh_values(self):
        g, gp = contrast_g(np.array([0.0, 1.0]), "logcosh", 1.0)
        np.testing.assert_allclose(g, [0.0, np.tanh(1.0)], rtol=1e-15)
        np.testing.assert_allclose(gp, [1.0, 1.0 - np.tanh(1.0) ** 2], rtol=1e-14)

    def test_gauss_values(self):
        g, gp = contrast_g(np.array([0.0, 2.0]), "gauss")
        np.testing.assert_allclose(g, [0.0, 2.0 * np.exp(-2.0)], rtol=1e-15)
        np.testing.assert_allclose(gp, [1.0, -3.0 * np.exp(-2.0)], rtol=1e-15)

    @pytest.mark.parametrize("contrast,a1", [("logcosh", 1.0), ("logcosh", 1.7), ("gauss", 1.0)])
    def test_derivative_matches_finite_difference(self, contrast, a1):
        u = np.linspace(-5.0, 5.0, 401)
        h = 1e-5
        g_plus, _ = contrast_g(u + h, contrast, a1)
        g_minus, _ = contrast_g(u - h, contrast, a1)
        _, gp = contrast_g(u, contrast, a1)
        np.testing.assert_allclose(gp, (g_plus - g_minus) / (2 * h), atol=1e-6)

    def test_a1_range_enforced(self):
        with pytest.raises(ValidationError):
            contrast_g(np.zeros(3), "logcosh", 0.5)

    def test_unknown_contrast(self):
        with pytest.raises(ValidationError):
            contrast_g(np.zeros(3), "kurtosis")


class TestOneUnit:
    def test_recovers_a_source(self):
        x, sources = make_mixture(123)
        res = estimate_apodization(x, IcaConfig(seed=0))
        assert res.converged
        y = res.w_aperture.weights @ x
        y = (y - y.mean()) / y.std()
        corr = max(abs(float(np.corrcoef(y, s)[0, 1])) for s in sources)
        assert corr >= 0.99

    def test_same_seed_bit_identical(self):
        x, _ = make_mixture(9)
        a = estimate_apodization(x, IcaConfig(seed=4))
        b = estimate_apodization(x, IcaConfig(seed=4))
        np.testing.assert_array_equal(a.w_aperture.weights, b.w_aperture.weights)
        assert a.iterations_used == b.iterations_used

    def test_unit_norm_direction(self):
        x, _ = make_mixture(5)
        res = estimate_apodization(x, IcaConfig(seed=1))
        np.testing.assert_allclose(np.linalg.norm(res.w_whitened), 1.0, rtol=1e-12)

    def test_canonical_window(self):
        x, _ = make_mixture(2)
        res = estimate_apodization(x, IcaConfig(seed=0))
        w = res.w_aperture.weights
        np.testing.assert_allclose(np.abs(w).sum(), 1.0, rtol=1e-12)
        assert res.w_aperture.normalization == "l1"

    def test_iteration_budget_respected(self):
        x, _ = make_mixture(3)
        res = estimate_apodization(x, IcaConfig(seed=0, max_iterations=1))
        assert not res.converged
        assert res.iterations_used == 1
        assert res.convergence_trace.size == 1

    def test_warm_start_at_solution_converges_immediately(self):
        x, _ = make_mixture(11)
        cold = estimate_apodization(x, IcaConfig(seed=0))
        warm = estimate_apodization(x, IcaConfig(seed=99), initial_weights=cold.w_aperture.weights)
        assert warm.converged
        assert warm.iterations_used <= 3
        np.testing.assert_allclose(
            np.abs(warm.w_aperture.weights), np.abs(cold.w_aperture.weights), atol=1e-4
        )

    def test_initial_weights_shape_checked(self):
        x, _ = make_mixture(1)
        with pytest.raises(ValidationError):
            estimate_apodization(x, IcaConfig(), initial_weights=np.ones(3))

    def test_whitened_entry_point_accepts_explicit_initial(self):
        rng = np.random.default_rng(0)
        z = rng.standard_normal((4, 2000))
        res = fastica_one_unit(z, IcaConfig(seed=0), initial=np.array([1.0, 0.0, 0.0, 0.0]))
        assert res.convergence_trace.size >= 1


def test_observation_matrix_row_map_must_cover_rows():
    with pytest.raises(ValidationError):
        ObservationMatrix(data=np.ones((3, 12)), row_element_map=np.array([0, 1]))


def test_config_validation():
    with pytest.raises(ValidationError):
        IcaConfig(max_iterations=0)
    with pytest.raises(ValidationError):
        IcaConfig(epsilon=0.0)
    with pytest.raises(ValidationError):
        IcaConfig(contrast="cubic")
