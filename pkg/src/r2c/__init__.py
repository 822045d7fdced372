"""Reign-and-Conquer clustering (R2C).

Each margin gets its own univariate Gaussian mixture; the Cartesian grid of
marginal cluster means partitions the sample space into protoclusters, and
protoclusters holding too little mass are conquered by their heavier
neighbours through a nearest-center encoder.
"""

from .conquer import (
    ConquerFunction,
    ConquerResult,
    Edge,
    Fixed,
    Plateau,
    R2CReport,
    conquering_function,
    encode,
    encode_all,
    parse_policy,
    r2c_cluster,
    select_sieve,
    surviving_centers,
)
from .kernels import backend
from .metrics import agreement_metrics, confusion_matrix, pair_counts
from .mixture1d import (
    FitConfig,
    FitResult,
    UnivariateGaussianMixture,
    em_fit,
    log_density,
    posterior_memberships,
    select_k,
)
from .reign import MassTable, ProtoGrid, assign_cell, assign_cells, build_grid, estimate_masses, posterior_masses

__version__ = "0.1.0"

__all__ = [
    "ConquerFunction",
    "ConquerResult",
    "Edge",
    "FitConfig",
    "FitResult",
    "Fixed",
    "MassTable",
    "Plateau",
    "ProtoGrid",
    "R2CReport",
    "UnivariateGaussianMixture",
    "agreement_metrics",
    "assign_cell",
    "assign_cells",
    "backend",
    "build_grid",
    "confusion_matrix",
    "conquering_function",
    "em_fit",
    "encode",
    "encode_all",
    "estimate_masses",
    "log_density",
    "pair_counts",
    "parse_policy",
    "posterior_masses",
    "posterior_memberships",
    "r2c_cluster",
    "select_k",
    "select_sieve",
    "surviving_centers",
]
