"""One-unit FastICA for estimating a receive aperture window.

Each row of the observation matrix is one element's delayed samples over a
patch of image pixels.  After centering and whitening, a single fixed-point
iteration seeks the direction of maximal negentropy; mapped back through the
whitener, that direction is a per-element weight vector usable as an
apodization window.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .model import ApodizationProfile, ValidationError, _array, _freeze

__all__ = [
    "ObservationMatrix",
    "WhiteningModel",
    "IcaConfig",
    "IcaResult",
    "RankDeficientCovarianceError",
    "IcaConvergenceError",
    "center",
    "whiten",
    "contrast_g",
    "fastica_one_unit",
    "estimate_apodization",
    "apodization_seed_spread",
]

log = logging.getLogger(__name__)

CONTRASTS = ("logcosh", "gauss")


class RankDeficientCovarianceError(ValueError):
    """Observation covariance is numerically rank deficient."""


class IcaConvergenceError(RuntimeError):
    """The fixed-point iteration exhausted its budget without stabilizing."""


@dataclass(frozen=True)
class ObservationMatrix:
    """Element-by-pixel observations, rows ordered by element index."""

    data: np.ndarray
    row_element_map: np.ndarray

    def __post_init__(self):
        data = _array(self.data, np.float64, 2, "data")
        rows = _array(self.row_element_map, np.intp, 1, "row_element_map")
        n, m = data.shape
        if n < 2:
            raise ValidationError(f"need at least 2 rows, got {n}")
        if m < n:
            raise ValidationError(f"need at least as many columns as rows ({n}), got {m}")
        if rows.size != n:
            raise ValidationError("row_element_map length must match row count")
        zero_rows = ~np.any(data != 0.0, axis=1)
        if zero_rows.any():
            raise ValidationError(f"row {int(np.argmax(zero_rows))} is identically zero")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "row_element_map", rows)

    @property
    def n_rows(self) -> int:
        return self.data.shape[0]

    @property
    def n_columns(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class WhiteningModel:
    """Affine decorrelating transform fitted to an observation matrix.

    whitener maps centered observations to unit-covariance coordinates;
    dewhitener is its exact inverse.  eigenvalues are those of the sample
    covariance, ascending.
    """

    mean: np.ndarray
    whitener: np.ndarray
    dewhitener: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        for name in ("mean", "eigenvalues"):
            object.__setattr__(self, name, _array(getattr(self, name), np.float64, 1, name))
        for name in ("whitener", "dewhitener"):
            object.__setattr__(self, name, _array(getattr(self, name), np.float64, 2, name))


@dataclass(frozen=True)
class IcaConfig:
    """Fixed-point iteration settings.

    contrast selects the negentropy surrogate: "logcosh" with slope a1 in
    [1, 2], or "gauss".  Convergence is declared when the update direction
    moves by less than epsilon, measured as 1 - |<w_new, w>|.
    """

    max_iterations: int = 100
    epsilon: float = 1e-6
    contrast: str = "logcosh"
    a1: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be positive")
        if self.contrast not in CONTRASTS:
            raise ValidationError(f"contrast must be one of {CONTRASTS}, got {self.contrast!r}")
        if self.contrast == "logcosh" and not 1.0 <= self.a1 <= 2.0:
            raise ValidationError(f"a1 must lie in [1, 2], got {self.a1:g}")


@dataclass(frozen=True)
class IcaResult:
    """Outcome of one apodization estimate.

    w_whitened is the unit-norm separating direction in whitened coordinates.
    w_aperture is that direction pulled back through the whitener, reordered
    to element order and canonicalized; it is None when the estimate was run
    on bare whitened data without a whitening model.  mixing_column is the
    corresponding column of the mixing model (dewhitener @ w_whitened),
    exposed for inspection.  convergence_trace holds |<w_new, w>| per
    iteration.
    """

    w_whitened: np.ndarray
    w_aperture: ApodizationProfile | None
    mixing_column: np.ndarray | None
    iterations_used: int
    converged: bool
    convergence_trace: np.ndarray
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "w_whitened", _array(self.w_whitened, np.float64, 1, "w_whitened"))
        object.__setattr__(
            self, "convergence_trace", _array(self.convergence_trace, np.float64, 1, "convergence_trace")
        )
        if self.mixing_column is not None:
            object.__setattr__(
                self, "mixing_column", _array(self.mixing_column, np.float64, 1, "mixing_column")
            )


def center(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Remove each row's mean; returns (centered, means)."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValidationError("x must be 2-d")
    means = x.mean(axis=1)
    return x - means[:, None], means


def whiten(
    x_centered: np.ndarray, condition_limit: float = 1e12
) -> tuple[np.ndarray, WhiteningModel]:
    """Decorrelate centered rows to unit sample covariance.

    Uses the eigendecomposition of the sample covariance (n - 1 denominator).
    Raises RankDeficientCovarianceError when the eigenvalue spread exceeds
    condition_limit, naming the offending eigenvalue.
    """
    x = np.asarray(x_centered, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] <= x.shape[0]:
        raise ValidationError("x must be 2-d with more columns than rows")
    scale = np.abs(x).max()
    if scale > 0 and np.abs(x.mean(axis=1)).max() > 1e-6 * scale:
        raise ValidationError("rows are not centered; call center() first")
    cov = np.cov(x)
    evals, evecs = np.linalg.eigh(cov)
    if evals[0] <= 0 or evals[-1] / evals[0] > condition_limit:
        raise RankDeficientCovarianceError(
            f"covariance is rank deficient: eigenvalue {evals[0]:.3e} at index 0 "
            f"against largest {evals[-1]:.3e}"
        )
    roots = np.sqrt(evals)
    whitener = evecs.T / roots[:, None]
    dewhitener = evecs * roots[None, :]
    model = WhiteningModel(
        mean=np.zeros(x.shape[0]),
        whitener=whitener,
        dewhitener=dewhitener,
        eigenvalues=evals,
    )
    return whitener @ x, model


def contrast_g(u, contrast: str = "logcosh", a1: float = 1.0):
    """Contrast derivative pair (g, g') evaluated elementwise.

    logcosh: g(u) = tanh(a1 u), g'(u) = a1 (1 - tanh^2(a1 u)).
    gauss:   g(u) = u exp(-u^2 / 2), g'(u) = (1 - u^2) exp(-u^2 / 2).
    """
    u = np.asarray(u, dtype=np.float64)
    if contrast == "logcosh":
        if not 1.0 <= a1 <= 2.0:
            raise ValidationError(f"a1 must lie in [1, 2], got {a1:g}")
        th = np.tanh(a1 * u)
        return th, a1 * (1.0 - th * th)
    if contrast == "gauss":
        e = np.exp(-0.5 * u * u)
        return u * e, (1.0 - u * u) * e
    raise ValidationError(f"contrast must be one of {CONTRASTS}, got {contrast!r}")


def fastica_one_unit(
    z: np.ndarray, config: IcaConfig = IcaConfig(), initial: np.ndarray | None = None
) -> IcaResult:
    """Run the one-unit fixed-point iteration on whitened data.

    Starting from a seeded isotropic Gaussian direction, each step computes
    w_new = E{z g(w.z)} - E{g'(w.z)} w, renormalizes, and stops once the
    direction is stable to config.epsilon or the iteration budget runs out.
    Identical config and data reproduce the result bit for bit.  An explicit
    initial direction (whitened coordinates) overrides the seeded draw, which
    warm-starts re-estimation on perturbed data.
    """
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 2:
        raise ValidationError("z must be 2-d")
    n, m = z.shape
    if initial is None:
        rng = np.random.default_rng(config.seed)
        w = rng.standard_normal(n)
    else:
        w = np.asarray(initial, dtype=np.float64).copy()
        if w.shape != (n,):
            raise ValidationError(f"initial must have shape ({n},), got {w.shape}")
        if not np.linalg.norm(w) > 0:
            raise ValidationError("initial direction must be nonzero")
    w /= np.linalg.norm(w)

    trace = []
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        u = w @ z
        g, g_prime = contrast_g(u, config.contrast, config.a1)
        w_new = z @ g / m - g_prime.mean() * w
        norm = np.linalg.norm(w_new)
        if not np.isfinite(norm) or norm == 0.0:
            log.warning("fixed point degenerated at iteration %d", iterations)
            trace.append(0.0)
            break
        w_new /= norm
        alignment = abs(float(w_new @ w))
        trace.append(alignment)
        w = w_new
        if 1.0 - alignment < config.epsilon:
            converged = True
            break

    return IcaResult(
        w_whitened=w,
        w_aperture=None,
        mixing_column=None,
        iterations_used=iterations,
        converged=converged,
        convergence_trace=np.asarray(trace),
        seed=config.seed,
    )


def _to_element_order(vector: np.ndarray, row_map: np.ndarray) -> np.ndarray:
    out = np.zeros_like(vector)
    out[row_map] = vector
    return out


def estimate_apodization(
    observations,
    config: IcaConfig = IcaConfig(),
    initial_weights: np.ndarray | None = None,
) -> IcaResult:
    """Estimate an aperture window from element observations.

    Parameters
    ----------
    observations : ObservationMatrix or array_like
        Rows are elements, columns are pixel samples.
    config : IcaConfig
        Iteration settings; config.seed fixes the random initialization.
    initial_weights : ndarray, optional
        Aperture-domain warm start (element order), e.g. a previous estimate
        when re-running on perturbed data.  Mapped into the new whitened
        space before iterating; overrides the seeded initialization.

    Returns
    -------
    IcaResult
        With w_aperture populated: the separating direction mapped through
        the whitener into element order and canonicalized (unit absolute sum,
        non-negative center weight).
    """
    if isinstance(observations, ObservationMatrix):
        data = observations.data
        row_map = observations.row_element_map
    else:
        data = np.asarray(observations, dtype=np.float64)
        row_map = np.arange(data.shape[0])
        data = ObservationMatrix(data=data, row_element_map=row_map).data

    x_centered, means = center(data)
    z, model = whiten(x_centered)
    model = replace(model, mean=_freeze(means))
    initial = None
    if initial_weights is not None:
        w_el = np.asarray(initial_weights, dtype=np.float64)
        if w_el.shape != (data.shape[0],):
            raise ValidationError(
                f"initial_weights must have shape ({data.shape[0]},), got {w_el.shape}"
            )
        # y = w.x and x = dewhitener.z give the whitened-space direction.
        initial = model.dewhitener.T @ w_el[row_map]
    result = fastica_one_unit(z, config, initial=initial)

    w_elements = _to_element_order(result.w_whitened @ model.whitener, row_map)
    mixing = _to_element_order(model.dewhitener @ result.w_whitened, row_map)
    profile = ApodizationProfile(weights=w_elements).canonicalized()
    return replace(result, w_aperture=profile, mixing_column=mixing)


def apodization_seed_spread(observations, config: IcaConfig, seeds) -> float:
    """Largest pairwise difference between converged estimates across seeds.

    Returns the max-norm spread of canonicalized aperture weights; a spread
    above 1e-3 is logged as a multi-extremum case so it is visible rather
    than silently averaged away.
    """
    profiles = []
    for seed in seeds:
        result = estimate_apodization(observations, replace(config, seed=int(seed)))
        if result.converged:
            profiles.append(result.w_aperture.weights)
    if len(profiles) < 2:
        return 0.0
    spread = 0.0
    for i in range(len(profiles)):
        for j in range(i + 1, len(profiles)):
            spread = max(spread, float(np.abs(profiles[i] - profiles[j]).max()))
    if spread > 1e-3:
        log.warning(
            "apodization estimate depends on the seed (max spread %.3g); "
            "multiple negentropy extrema are present", spread,
        )
    return spread
