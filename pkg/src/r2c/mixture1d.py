"""Univariate Gaussian finite mixtures: EM fitting, BIC selection, memberships."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError, FitFailed, NonFiniteInput, TooFewObservations

LOG_2PI = float(np.log(2.0 * np.pi))
EMPTY_COMPONENT_FRACTION = 1e-10


@dataclass(frozen=True)
class UnivariateGaussianMixture:
    """Weights, means and variances of a K-component normal mixture on one margin.

    Components are kept sorted by mean (then variance) so that two fits of the
    same data compare equal regardless of how EM labelled its components.
    """

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, ndmin=1)
        mu = np.array(self.means, dtype=np.float64, ndmin=1)
        var = np.array(self.variances, dtype=np.float64, ndmin=1)
        if not (w.ndim == mu.ndim == var.ndim == 1 and w.shape == mu.shape == var.shape):
            raise ValueError("weights, means and variances must be 1-D of equal length")
        if w.size == 0:
            raise ValueError("a mixture needs at least one component")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(mu)) and np.all(np.isfinite(var))):
            raise NonFiniteInput("mixture parameters must be finite")
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must be positive and sum to 1 (sum={w.sum()!r})")
        if np.any(var <= 0):
            raise ValueError("variances must be positive")
        order = np.lexsort((var, mu))
        for name, arr in (("weights", w), ("means", mu), ("variances", var)):
            arr = arr[order]
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def k(self):
        return int(self.weights.size)

    def __eq__(self, other):
        if not isinstance(other, UnivariateGaussianMixture):
            return NotImplemented
        return (
            np.array_equal(self.weights, other.weights)
            and np.array_equal(self.means, other.means)
            and np.array_equal(self.variances, other.variances)
        )

    __hash__ = None


@dataclass(frozen=True)
class FitConfig:
    k_max: int = 6
    restarts: int = 8
    tol: float = 1e-8
    max_iter: int = 1000
    variance_floor_factor: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.k_max < 1:
            raise ConfigError("k_max must be >= 1")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")
        if not self.variance_floor_factor > 0:
            raise ConfigError("variance_floor_factor must be > 0")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class FitResult:
    model: UnivariateGaussianMixture
    loglik: float
    bic: float
    n: int
    trace: np.ndarray = field(repr=False, compare=False, default=None)


def bic_score(loglik, k, n):
    """BIC of a univariate K-component normal mixture (3K - 1 free parameters)."""
    return -2.0 * loglik + (3 * k - 1) * np.log(n)


def _as_margin(data):
    x = np.asarray(data, dtype=np.float64).ravel()
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("data contains NaN or infinite values")
    return x


def _variance_floor(x, config):
    var = float(x.var())
    if var > 0:
        return config.variance_floor_factor * var
    # constant margin: scale the floor by the magnitude of the data instead
    return config.variance_floor_factor * max(1.0, float(np.mean(x * x)))


def _initial_params(x, k, restart, rng, floor):
    if restart == 0:
        levels = (np.arange(k) + 0.5) / k
    else:
        levels = (np.arange(k) + rng.uniform(size=k)) / k
    sd = float(x.std())
    means = np.quantile(x, levels) + rng.normal(0.0, 1e-3 * sd, size=k)
    variances = np.full(k, max(float(x.var()), floor))
    weights = np.full(k, 1.0 / k)
    return weights, means, variances


class _RestartFailed(Exception):
    pass


def _run_em(x, weights, means, variances, floor, config):
    n = x.shape[0]
    k = weights.shape[0]
    empty_mass = EMPTY_COMPONENT_FRACTION * n
    rescued = set()
    budget = config.max_iter
    while True:
        ll, trace, status = kernels.em_1d(
            x, weights, means, variances, floor, config.tol, budget, empty_mass
        )
        if status < 0:
            return ll, trace
        if status in rescued:
            raise _RestartFailed
        rescued.add(status)
        budget = max(1, budget - len(trace))
        # move the empty component onto the worst-explained observation
        dens = _component_logpdf(x, weights, means, variances)
        worst = int(np.argmin(_logsumexp_rows(dens)))
        means[status] = x[worst]
        variances[status] = max(float(x.var()), floor)
        weights[status] = max(weights[status], 1.0 / k)
        weights /= weights.sum()


def em_fit(data, k, config=None):
    """Fit a ``k``-component univariate Gaussian mixture by maximum likelihood.

    Runs ``config.restarts`` EM initializations (the first from evenly spaced
    quantiles, the rest from randomly jittered quantiles) and keeps the one
    with the highest log-likelihood.

    Raises
    ------
    TooFewObservations
        If ``len(data) < k``.
    NonFiniteInput
        If ``data`` has NaN or infinite entries.
    FitFailed
        If every restart lost a component twice.
    """
    config = config or FitConfig()
    x = _as_margin(data)
    n = x.shape[0]
    if k < 1:
        raise ConfigError("k must be >= 1")
    if n < k:
        raise TooFewObservations(f"{n} observations cannot support {k} components")
    floor = _variance_floor(x, config)
    rng = np.random.default_rng([config.seed, k])
    # a single component has one fixed point; extra restarts would repeat it
    restarts = 1 if k == 1 else config.restarts
    best = None
    for r in range(restarts):
        weights, means, variances = _initial_params(x, k, r, rng, floor)
        try:
            ll, trace = _run_em(x, weights, means, variances, floor, config)
        except _RestartFailed:
            continue
        if best is None or ll > best[0]:
            best = (ll, trace, weights / weights.sum(), means, variances)
    if best is None:
        raise FitFailed(f"all {restarts} EM restarts failed for k={k}")
    ll, trace, weights, means, variances = best
    model = UnivariateGaussianMixture(weights, means, variances)
    return FitResult(model=model, loglik=float(ll), bic=float(bic_score(ll, k, n)), n=n, trace=trace)


def select_k(data, config=None):
    """Fit k = 1..k_max components and return the BIC-minimizing fit.

    Ties go to the smaller k. A k whose every restart failed is skipped.
    """
    config = config or FitConfig()
    x = _as_margin(data)
    if x.shape[0] < 2:
        raise TooFewObservations("model selection needs at least 2 observations")
    best = None
    for k in range(1, min(config.k_max, x.shape[0]) + 1):
        try:
            res = em_fit(x, k, config)
        except FitFailed:
            continue
        if best is None or res.bic < best.bic:
            best = res
    return best


def _component_logpdf(x, weights, means, variances):
    dx = x[:, None] - means[None, :]
    return np.log(weights) - 0.5 * (LOG_2PI + np.log(variances)) - 0.5 * dx * dx / variances


def _logsumexp_rows(a):
    m = a.max(axis=1)
    return m + np.log(np.exp(a - m[:, None]).sum(axis=1))


def log_density(model, x):
    """Log of the mixture density at ``x`` (scalar or array), via log-sum-exp."""
    arr = _as_margin(x)
    out = _logsumexp_rows(_component_logpdf(arr, model.weights, model.means, model.variances))
    if np.ndim(x) == 0:
        return float(out[0])
    return out.reshape(np.shape(x))


def posterior_memberships(model, data):
    """Posterior probability that each observation came from each component.

    Returns an ``(n, k)`` array whose rows sum to one; column order follows the
    model's (sorted) component order.
    """
    x = _as_margin(data)
    lp = _component_logpdf(x, model.weights, model.means, model.variances)
    lp -= lp.max(axis=1, keepdims=True)
    z = np.exp(lp)
    z /= z.sum(axis=1, keepdims=True)
    return z


def marginal_labels(model, data):
    """Hard marginal clustering: index of the most probable component."""
    return np.argmax(posterior_memberships(model, data), axis=1)
