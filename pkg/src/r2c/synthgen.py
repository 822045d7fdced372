"""Seeded generators for the three simulation scenarios.

S1  equal-weight mixture of three bivariate normals; 3 clusters on the first
    margin, 2 on the second.
S2  three Clayton-copula components with normal margins; 2 clusters on X,
    3 on Y.
S3  K = round(sqrt(d + 1)) spherical normals in d dimensions whose means are
    sparse (component k is shifted by d / sqrt(2) along axis k only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .errors import InvalidSpec, InvalidTheta
from .mixture1d import UnivariateGaussianMixture

VARIANTS = ("s1", "s2", "s3")

S1_MEANS = np.array([[-3.0, 3.0], [3.0, 3.0], [0.0, -3.0]])
S1_COVS = np.array(
    [
        [[1.0, 0.5], [0.5, 1.0]],
        [[1.0, -0.5], [-0.5, 1.0]],
        [[1.0, 0.0], [0.0, 1.0]],
    ]
)

# S2: Y margin has three unit-variance components; X margin is -5 / 3 with weights 1/3, 2/3
S2_X_MEANS = np.array([-5.0, 3.0, 3.0])
S2_X_SD = 4.0
S2_Y_MEANS = np.array([-5.0, 2.5, 5.0])
S2_Y_SD = 1.0
S2_NOTE = (
    "scenario s2: X-margin weights are (1/3, 2/3) at means (-5, 3), not the intended (1/2, 1/2); "
    "three equal-weight components cannot produce that X margin together with the Y margin"
)

_UNIT_LO = 2.0**-54
_UNIT_HI = 1.0 - 2.0**-53


@dataclass(frozen=True)
class ScenarioSpec:
    variant: str
    n: int | None = None
    d: int | None = None
    theta: float = 2.0
    seed: int = 0

    def __post_init__(self):
        variant = str(self.variant).lower()
        if variant not in VARIANTS:
            raise InvalidSpec(f"unknown scenario {self.variant!r}; expected one of {VARIANTS}")
        object.__setattr__(self, "variant", variant)
        if variant == "s3":
            if self.d is None or self.d < 2:
                raise InvalidSpec("scenario s3 needs d >= 2")
        else:
            if self.n is None or self.n < 1:
                raise InvalidSpec(f"scenario {variant} needs n >= 1")
            if self.d not in (None, 2):
                raise InvalidSpec(f"scenario {variant} is bivariate")
        if variant == "s2" and not (math.isfinite(self.theta) and self.theta > 0):
            raise InvalidTheta(f"Clayton theta must be > 0, got {self.theta}")
        if self.seed < 0:
            raise InvalidSpec("seed must be nonnegative")

    @property
    def dim(self):
        return self.d if self.variant == "s3" else 2

    @property
    def size(self):
        """Sample size; for S3 it is floor(10 d^{3/2})."""
        if self.variant == "s3":
            return s3_sample_size(self.d)
        return self.n

    @property
    def n_components(self):
        return s3_components(self.d) if self.variant == "s3" else 3


@dataclass(frozen=True)
class LabeledSample:
    points: np.ndarray
    labels: np.ndarray
    notes: tuple = field(default=())


def s3_components(d):
    return int(math.floor(math.sqrt(d + 1) + 0.5))


def s3_sample_size(d):
    # floor(10 * d**1.5) computed exactly: 10 * d * sqrt(d) = sqrt(100 d^3)
    return math.isqrt(100 * d**3)


def s3_means(d):
    k = s3_components(d)
    means = np.zeros((k, d))
    means[np.arange(k), np.arange(k)] = d / math.sqrt(2.0)
    return means


def _gaussian_components(spec):
    if spec.variant == "s1":
        return np.full(3, 1.0 / 3.0), S1_MEANS, S1_COVS
    k = s3_components(spec.d)
    return np.full(k, 1.0 / k), s3_means(spec.d), np.broadcast_to(np.eye(spec.d), (k, spec.d, spec.d))


def _unit_interval(rng, size):
    return np.clip(rng.random(size), _UNIT_LO, _UNIT_HI)


def clayton_conditional_inverse(u, w, theta):
    """Second coordinate ``v`` with ``P(V <= v | U = u) = w`` under Clayton(theta)."""
    return (u ** (-theta) * (w ** (-theta / (theta + 1.0)) - 1.0) + 1.0) ** (-1.0 / theta)


def sample_clayton(theta, count, seed=None):
    """Draw ``count`` pairs from the Clayton copula by conditional inversion.

    ``seed`` may be an int or a ``numpy.random.Generator``. Returns an array
    of shape ``(count, 2)`` with entries in the open unit interval.
    """
    if not (math.isfinite(theta) and theta > 0):
        raise InvalidTheta(f"Clayton theta must be > 0, got {theta}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = _unit_interval(rng, count)
    w = _unit_interval(rng, count)
    v = np.clip(clayton_conditional_inverse(u, w, theta), _UNIT_LO, _UNIT_HI)
    return np.column_stack([u, v])


def generate_scenario(spec):
    """Labeled sample for ``spec``; identical specs give identical samples."""
    rng = np.random.default_rng(spec.seed)
    n = spec.size
    k = spec.n_components
    labels = rng.choice(k, size=n, p=np.full(k, 1.0 / k))
    notes = ()
    if spec.variant == "s2":
        uv = sample_clayton(spec.theta, n, rng)
        x = S2_X_MEANS[labels] + S2_X_SD * ndtri(uv[:, 0])
        y = S2_Y_MEANS[labels] + S2_Y_SD * ndtri(uv[:, 1])
        points = np.column_stack([x, y])
        notes = (S2_NOTE,)
    else:
        _, means, covs = _gaussian_components(spec)
        z = rng.standard_normal((n, spec.dim))
        points = np.empty_like(z)
        for c in range(k):
            rows = labels == c
            chol = np.linalg.cholesky(covs[c])
            points[rows] = means[c] + z[rows] @ chol.T
    return LabeledSample(points=points, labels=labels.astype(np.intp), notes=notes)


def _merge(weights, means, variances):
    merged = {}
    for w, m, v in zip(weights, means, variances):
        key = (float(m), float(v))
        merged[key] = merged.get(key, 0.0) + float(w)
    keys = sorted(merged)
    return UnivariateGaussianMixture(
        weights=[merged[k] for k in keys],
        means=[k[0] for k in keys],
        variances=[k[1] for k in keys],
    )


def merge_coincident(model):
    """Merge components with identical mean and variance."""
    return _merge(model.weights, model.means, model.variances)


def true_marginal_mixture(spec, j):
    """Analytic margin ``j`` (0-based) of the generating distribution, with
    coincident components merged."""
    if not 0 <= j < spec.dim:
        raise InvalidSpec(f"margin {j} out of range for dimension {spec.dim}")
    k = spec.n_components
    weights = np.full(k, 1.0 / k)
    if spec.variant == "s2":
        if j == 0:
            return _merge(weights, S2_X_MEANS, np.full(k, S2_X_SD**2))
        return _merge(weights, S2_Y_MEANS, np.full(k, S2_Y_SD**2))
    weights, means, covs = _gaussian_components(spec)
    return _merge(weights, means[:, j], covs[:, j, j])
