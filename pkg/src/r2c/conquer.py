"""Conquering step: the survivor-count step function C(u), sieve selection,
surviving protocluster centers and the nearest-survivor encoder.

A cell is conquered at sieve size ``u`` when its empirical mass is ``<= u``;
``C(u)`` counts the cells that are not, so unoccupied cells are conquered at
every ``u >= 0``. Masses are the correctly rounded floats ``count / n``, so a
decimal sieve such as 0.3 conquers a cell holding 3 of 10 observations.
"""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import ConfigError, DegenerateMassesWarning, DimensionMismatch, TooFewObservations
from .mixture1d import FitConfig, posterior_memberships, select_k
from .reign import build_grid, estimate_masses


@dataclass(frozen=True)
class ConquerFunction:
    """Step function ``C(u) = #{cells with mass > u}``.

    ``level_counts`` are the distinct positive cell counts in increasing order
    and ``jump_counts[i]`` the number of cells holding ``level_counts[i]``
    observations; ``C`` drops by ``jump_counts[i]`` at ``u = level_counts[i] / n``.
    """

    level_counts: tuple
    jump_counts: tuple
    n: int
    total_cells: int

    @property
    def levels(self):
        return np.asarray(self.level_counts, dtype=np.float64) / self.n

    @property
    def nonempty_cells(self):
        return int(sum(self.jump_counts))

    @property
    def _survivors_from(self):
        # survivors_from[i] = C on [level_{i-1}, level_i); last entry is 0
        jumps = np.asarray(self.jump_counts, dtype=np.int64)
        return np.concatenate([np.cumsum(jumps[::-1])[::-1], [0]])

    def __call__(self, u):
        """Evaluate ``C`` at a scalar or array of sieve sizes."""
        idx = np.searchsorted(self.levels, u, side="right")
        out = self._survivors_from[idx]
        return int(out) if np.ndim(u) == 0 else out

    def conquered_count(self, u):
        """``|D_u|``: cells (occupied or not) with mass ``<= u``."""
        return self.total_cells - self(u)

    def integral(self):
        """Exact ``int_0^1 C(u) du`` as a Fraction (one for any mass table)."""
        return sum(Fraction(c * j, self.n) for c, j in zip(self.level_counts, self.jump_counts))

    def rows(self):
        """``(level, jump, C(level))`` rows, starting with the empty cells at level 0."""
        out = [(0.0, self.total_cells - self.nonempty_cells, self(0.0))]
        for level, jump in zip(self.levels, self.jump_counts):
            out.append((float(level), int(jump), self(level)))
        return out


def conquering_function(table, total_cells=None):
    total = table.total_cells if total_cells is None else int(total_cells)
    if total < table.nonempty_cells:
        raise ValueError("total_cells is smaller than the number of occupied cells")
    counts, jumps = np.unique(np.fromiter(table.counts.values(), dtype=np.int64), return_counts=True)
    return ConquerFunction(
        level_counts=tuple(int(c) for c in counts),
        jump_counts=tuple(int(j) for j in jumps),
        n=table.n,
        total_cells=total,
    )


@dataclass(frozen=True)
class Fixed:
    u: float

    def __post_init__(self):
        if not 0.0 <= self.u <= 1.0:
            raise ConfigError(f"sieve size must lie in [0, 1], got {self.u}")

    name = "fixed"


@dataclass(frozen=True)
class Plateau:
    name = "plateau"


@dataclass(frozen=True)
class Edge:
    name = "edge"


def parse_policy(name, u=0.1):
    name = name.lower()
    if name == "fixed":
        return Fixed(float(u))
    if name == "plateau":
        return Plateau()
    if name == "edge":
        return Edge()
    raise ConfigError(f"unknown sieve policy {name!r}")


def _select_sieve(cf, policy):
    if isinstance(policy, Fixed):
        return float(policy.u), False
    if not cf.level_counts:
        raise ValueError("conquering function has no positive level")
    if cf.nonempty_cells == 1:
        return 0.0, True
    counts = np.asarray(cf.level_counts, dtype=np.int64)
    if isinstance(policy, Plateau):
        # constant pieces [0, m_1), [m_1, m_2), ..., [m_{r-1}, m_r); lengths compared
        # as integer count differences, first (smallest u) wins ties
        lengths = np.diff(np.concatenate([[0], counts]))
        end = float(counts[int(np.argmax(lengths))]) / cf.n
        # stay inside the plateau: the right endpoint itself already conquers
        return float(np.nextafter(end, 0.0)), False
    if isinstance(policy, Edge):
        if counts.size == 1:
            return 0.0, True
        jumps = np.asarray(cf.jump_counts[:-1])
        return float(counts[int(np.argmax(jumps))]) / cf.n, False
    raise ConfigError(f"unknown sieve policy {policy!r}")


def select_sieve(cf, policy):
    """Sieve size for ``policy``.

    ``Fixed(u)`` returns ``u``. ``Plateau`` returns the largest ``u`` still on
    the longest constant piece of ``C`` below the maximum mass. ``Edge``
    returns the mass level with the largest drop of ``C`` (excluding the
    maximum). When no admissible level exists (a single occupied cell, or for
    ``Edge`` all cells of equal mass) a ``DegenerateMassesWarning`` is issued
    and 0 is returned.
    """
    u, degenerate = _select_sieve(cf, policy)
    if degenerate:
        warnings.warn("degenerate cell masses; sieve size set to 0", DegenerateMassesWarning, stacklevel=2)
    return u


@dataclass(frozen=True)
class ConquerResult:
    u_selected: float
    conquered: frozenset
    survivors: tuple
    fallback: bool = False

    @property
    def final_k(self):
        return len(self.survivors)

    @property
    def survivor_cells(self):
        return [cell for cell, _ in self.survivors]

    @property
    def centers(self):
        return np.array([c for _, c in self.survivors], dtype=np.float64)


def surviving_centers(table, grid, u):
    """Split occupied cells into conquered (mass ``<= u``) and survivors.

    Survivors are ordered by cell index. If every cell is conquered, the
    heaviest cell (smallest index among equals) is kept and ``fallback`` set.
    """
    if not 0.0 <= u <= 1.0:
        raise ConfigError(f"sieve size must lie in [0, 1], got {u}")
    masses = table.masses
    keep = sorted(cell for cell, m in masses.items() if m > u)
    fallback = False
    if not keep:
        top = max(table.counts.values())
        keep = [min(cell for cell, c in table.counts.items() if c == top)]
        fallback = True
    kept = set(keep)
    conquered = frozenset(cell for cell in table.counts if cell not in kept)
    survivors = tuple((cell, grid.center(cell)) for cell in keep)
    return ConquerResult(u_selected=float(u), conquered=conquered, survivors=survivors, fallback=fallback)


def encode_all(data, result, threads=1):
    """Label of the nearest survivor center for every row (ties: lowest label)."""
    centers = result.centers
    x = np.asarray(data, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != centers.shape[1]:
        raise DimensionMismatch(f"expected rows of dimension {centers.shape[1]}")
    if threads <= 1 or x.shape[0] < 2 * threads:
        return kernels.nearest_center(x, centers)
    chunks = np.array_split(x, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: kernels.nearest_center(c, centers), chunks))
    return np.concatenate(parts)


def encode(point, result):
    x = np.asarray(point, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("encode takes a single point")
    return int(encode_all(x[None, :], result)[0])


@dataclass
class R2CReport:
    margin_fits: list
    grid: object
    table: object
    conquer_function: ConquerFunction
    policy: object
    u_selected: float
    result: ConquerResult
    marginal_labels: np.ndarray = field(repr=False)
    memberships: list = field(repr=False)
    warnings: list
    runtime: float

    @property
    def k_per_margin(self):
        return [f.model.k for f in self.margin_fits]

    @property
    def final_k(self):
        return self.result.final_k


def _fit_margin(column, config, j):
    return select_k(column, replace(config, seed=config.seed ^ j))


def r2c_cluster(data, fit_config=None, policy=None, threads=1):
    """Reign-and-Conquer clustering of an ``(n, d)`` array.

    1. fit a univariate mixture to each margin (BIC over 1..k_max components);
    2. count observations per protocluster of the grid of marginal means;
    3. choose the sieve size, drop conquered cells and label every row by its
       nearest surviving center.

    Margin ``j`` is fitted with seed ``fit_config.seed ^ j``, so results do not
    depend on ``threads``.

    Returns
    -------
    labels : ndarray of int, shape (n,)
    report : R2CReport
    """
    fit_config = fit_config or FitConfig()
    policy = policy or Fixed(0.1)
    start = time.perf_counter()
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[1] < 1:
        raise DimensionMismatch("data must be an (n, d) matrix with d >= 1")
    if x.shape[0] < 2:
        raise TooFewObservations("r2c_cluster needs at least 2 observations")
    n, d = x.shape
    columns = [np.ascontiguousarray(x[:, j]) for j in range(d)]

    if threads > 1 and d > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fits = list(pool.map(_fit_margin, columns, [fit_config] * d, range(d)))
    else:
        fits = [_fit_margin(col, fit_config, j) for j, col in enumerate(columns)]
    models = [f.model for f in fits]

    grid = build_grid(models)
    table = estimate_masses(x, grid)
    cf = conquering_function(table)
    notes = []
    u, degenerate = _select_sieve(cf, policy)
    if degenerate:
        notes.append("degenerate cell masses: no admissible sieve level, u set to 0")
    result = surviving_centers(table, grid, u)
    if result.fallback:
        notes.append("sieve conquered every cell: kept the heaviest protocluster only")
    labels = encode_all(x, result, threads=threads)

    memberships = [posterior_memberships(m, col) for m, col in zip(models, columns)]
    marg = np.column_stack([np.argmax(z, axis=1) for z in memberships])
    report = R2CReport(
        margin_fits=fits,
        grid=grid,
        table=table,
        conquer_function=cf,
        policy=policy,
        u_selected=u,
        result=result,
        marginal_labels=marg,
        memberships=memberships,
        warnings=notes,
        runtime=time.perf_counter() - start,
    )
    return labels, report
