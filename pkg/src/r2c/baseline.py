"""Joint full-covariance Gaussian mixture with BIC selection: the comparator
that models all margins with a single number of components."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import FitFailed, NonFiniteInput, SingularCovariance, TooFewObservations
from .mixture1d import FitConfig

LOG_2PI = float(np.log(2.0 * np.pi))
CHOLESKY_RETRIES = 3


@dataclass(frozen=True)
class JointGaussianMixture:
    weights: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    @property
    def k(self):
        return int(self.weights.size)

    @property
    def d(self):
        return int(self.means.shape[1])


@dataclass(frozen=True)
class JointFit:
    model: JointGaussianMixture
    loglik: float
    bic: float
    trace: np.ndarray = field(repr=False, compare=False, default=None)


def n_parameters(k, d):
    return (k - 1) + k * d + k * d * (d + 1) // 2


def _robust_cholesky(cov, ridge):
    for attempt in range(CHOLESKY_RETRIES + 1):
        try:
            return np.linalg.cholesky(cov if attempt == 0 else cov + ridge * 10 ** (attempt - 1) * np.eye(len(cov)))
        except np.linalg.LinAlgError:
            continue
    raise SingularCovariance("covariance not positive definite after ridge retries")


def _log_resp(x, weights, means, chols):
    n, d = x.shape
    out = np.empty((n, weights.size))
    for k in range(weights.size):
        z = solve_triangular(chols[k], (x - means[k]).T, lower=True)
        logdet = 2.0 * np.log(np.diag(chols[k])).sum()
        out[:, k] = np.log(weights[k]) - 0.5 * (d * LOG_2PI + logdet + (z * z).sum(axis=0))
    return out


def _floor_eigenvalues(cov, floor):
    vals, vecs = np.linalg.eigh(cov)
    if vals.min() >= floor:
        return cov
    return (vecs * np.maximum(vals, floor)) @ vecs.T


def _kmeanspp(x, k, rng):
    n = x.shape[0]
    centers = [x[rng.integers(n)]]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = d2.sum()
        idx = rng.integers(n) if total <= 0 else rng.choice(n, p=d2 / total)
        centers.append(x[idx])
        d2 = np.minimum(d2, ((x - x[idx]) ** 2).sum(axis=1))
    return np.array(centers)


def _em(x, means, config, floor, ridge):
    n, d = x.shape
    k = means.shape[0]
    weights = np.full(k, 1.0 / k)
    covs = np.repeat(np.cov(x, rowvar=False, bias=True).reshape(1, d, d), k, axis=0)
    covs = np.array([_floor_eigenvalues(c, floor) for c in covs])
    trace = []
    ll_prev = -np.inf
    for it in range(config.max_iter + 1):
        chols = [_robust_cholesky(c, ridge) for c in covs]
        lr = _log_resp(x, weights, means, chols)
        m = lr.max(axis=1, keepdims=True)
        e = np.exp(lr - m)
        s = e.sum(axis=1, keepdims=True)
        ll = float((m[:, 0] + np.log(s[:, 0])).sum())
        trace.append(ll)
        if it > 0 and ll - ll_prev <= config.tol * abs(ll):
            break
        if it == config.max_iter:
            break
        resp = e / s
        nk = resp.sum(axis=0)
        if np.any(nk < 1e-10 * n):
            raise FitFailed("empty component")
        weights = nk / n
        means = (resp.T @ x) / nk[:, None]
        for j in range(k):
            diff = x - means[j]
            covs[j] = _floor_eigenvalues((resp[:, j, None] * diff).T @ diff / nk[j], floor)
        ll_prev = ll
    return JointGaussianMixture(weights=weights, means=means, covariances=covs), ll, np.asarray(trace)


def em_fit_joint(data, k, config=None):
    """Best of ``config.restarts`` full-covariance EM runs with ``k`` components."""
    config = config or FitConfig()
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("data must be an (n, d) matrix")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("data contains NaN or infinite values")
    n, d = x.shape
    if n <= d + 1 or n < k:
        raise TooFewObservations(f"{n} observations are too few for a {d}-dimensional fit with k={k}")
    avg_var = float(np.mean(x.var(axis=0)))
    avg_var = avg_var if avg_var > 0 else 1.0
    floor = config.variance_floor_factor * avg_var
    ridge = 1e-6 * avg_var
    rng = np.random.default_rng([config.seed, k, d])
    restarts = 1 if k == 1 else config.restarts
    best = None
    last_error = None
    for _ in range(restarts):
        init = x.mean(axis=0, keepdims=True) if k == 1 else _kmeanspp(x, k, rng)
        try:
            model, ll, trace = _em(x, init, config, floor, ridge)
        except FitFailed as exc:
            last_error = exc
            continue
        if best is None or ll > best[1]:
            best = (model, ll, trace)
    if best is None:
        raise last_error
    model, ll, trace = best
    bic = -2.0 * ll + n_parameters(k, d) * np.log(n)
    return JointFit(model=model, loglik=float(ll), bic=float(bic), trace=trace)


def predict(model, data):
    """Most probable component of every row."""
    x = np.asarray(data, dtype=np.float64)
    chols = [np.linalg.cholesky(c) for c in model.covariances]
    return np.argmax(_log_resp(x, model.weights, model.means, chols), axis=1)


def fit_gmm_joint(data, k_max=None, config=None):
    """Select k in 1..k_max by BIC (ties: smaller k).

    Returns ``(model, labels, bic)`` where ``labels`` are the argmax
    responsibilities under the selected model.
    """
    config = config or FitConfig()
    k_max = config.k_max if k_max is None else k_max
    x = np.asarray(data, dtype=np.float64)
    best = None
    for k in range(1, k_max + 1):
        try:
            fit = em_fit_joint(x, k, config)
        except (FitFailed, TooFewObservations):
            if k == 1:
                raise
            continue
        if best is None or fit.bic < best.bic:
            best = fit
    return best.model, predict(best.model, x), best.bic
