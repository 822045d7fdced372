"""Protocluster grid: Cartesian product of marginal cluster means, cell assignment
and empirical cell masses.

Cells are addressed by 0-based multi-indices ``(i_1, ..., i_d)`` stored as
tuples of ints. Only occupied cells are stored; every other cell of the grid
has mass zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    EmptyMargins,
    LengthMismatch,
    NonFiniteInput,
    NonPositivePrior,
    TooFewObservations,
)


@dataclass(frozen=True)
class ProtoGrid:
    centers_per_margin: tuple

    def __post_init__(self):
        margins = []
        for j, c in enumerate(self.centers_per_margin):
            arr = np.array(c, dtype=np.float64, ndmin=1)
            if arr.ndim != 1 or arr.size == 0:
                raise ValueError(f"margin {j} needs a non-empty 1-D array of centers")
            if not np.all(np.isfinite(arr)):
                raise NonFiniteInput(f"margin {j} has non-finite centers")
            if np.any(np.diff(arr) <= 0):
                raise ValueError(f"centers of margin {j} must be strictly increasing")
            arr.setflags(write=False)
            margins.append(arr)
        if not margins:
            raise EmptyMargins("a grid needs at least one margin")
        object.__setattr__(self, "centers_per_margin", tuple(margins))

    @property
    def d(self):
        return len(self.centers_per_margin)

    @property
    def shape(self):
        return tuple(c.size for c in self.centers_per_margin)

    @property
    def index_set_size(self):
        return int(np.prod(self.shape, dtype=object))

    def center(self, cell):
        return np.array([c[i] for c, i in zip(self.centers_per_margin, cell)])

    def centers(self, cells):
        """Stack the centers of an iterable of cells into an ``(m, d)`` array."""
        cells = list(cells)
        out = np.empty((len(cells), self.d))
        for row, cell in enumerate(cells):
            out[row] = self.center(cell)
        return out


def build_grid(margins):
    """Grid whose margin ``j`` holds the component means of ``margins[j]``.

    Components sharing an identical mean give a single center.
    """
    margins = list(margins)
    if not margins:
        raise EmptyMargins("build_grid needs at least one fitted margin")
    return ProtoGrid(tuple(np.unique(m.means) for m in margins))


def _as_points(data, d):
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != d:
        raise DimensionMismatch(f"expected points of dimension {d}, got shape {np.shape(data)}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("points contain NaN or infinite values")
    return x


def assign_cells(data, grid):
    """Cell multi-index of every row of ``data`` as an ``(n, d)`` int array.

    The nearest grid site under squared Euclidean distance is found one
    coordinate at a time: for a Cartesian product of sites the total distance
    separates into per-margin terms. Ties go to the smaller index per margin.
    """
    x = _as_points(data, grid.d)
    out = np.empty(x.shape, dtype=np.intp)
    for j, centers in enumerate(grid.centers_per_margin):
        out[:, j] = kernels.nearest_1d(x[:, j], centers)
    return out


def assign_cell(point, grid):
    x = np.asarray(point, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch("assign_cell takes a single point")
    return tuple(int(i) for i in assign_cells(x, grid)[0])


@dataclass(frozen=True)
class MassTable:
    """Occupied-cell counts; ``counts`` maps cell tuples to positive ints."""

    counts: dict
    n: int
    shape: tuple

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(k) for k in self.shape))
        if sum(self.counts.values()) != self.n:
            raise ValueError("cell counts must sum to n")
        if any(c <= 0 for c in self.counts.values()):
            raise ValueError("only occupied cells are stored")

    @property
    def total_cells(self):
        return int(np.prod(self.shape, dtype=object))

    @property
    def cells(self):
        return sorted(self.counts)

    @property
    def nonempty_cells(self):
        return len(self.counts)

    @property
    def masses(self):
        return {cell: c / self.n for cell, c in self.counts.items()}

    def fractions(self):
        return {cell: Fraction(c, self.n) for cell, c in self.counts.items()}

    def mass(self, cell):
        return self.counts.get(tuple(cell), 0) / self.n


def estimate_masses(data, grid):
    """Count observations per protocluster; the masses ``count / n`` are the
    multinomial MLE of the cell probabilities."""
    cells = assign_cells(data, grid)
    if cells.shape[0] < 1:
        raise TooFewObservations("estimate_masses needs at least one observation")
    uniq, counts = np.unique(cells, axis=0, return_counts=True)
    table = {tuple(int(i) for i in row): int(c) for row, c in zip(uniq, counts)}
    return MassTable(counts=table, n=int(cells.shape[0]), shape=grid.shape)


def count_vector(table):
    """Dense counts over every cell of the grid, in row-major cell order."""
    dense = np.zeros(table.total_cells, dtype=np.int64)
    for cell, c in table.counts.items():
        dense[np.ravel_multi_index(cell, table.shape)] = c
    return dense


def posterior_masses(table, prior):
    """Dirichlet posterior parameters ``prior + counts`` over all cells.

    ``prior`` is indexed like ``count_vector``: the row-major flattening of
    the grid's cells.
    """
    a = np.asarray(prior, dtype=np.float64).ravel()
    if a.size != table.total_cells:
        raise LengthMismatch(f"prior has {a.size} entries, grid has {table.total_cells} cells")
    if not np.all(a > 0):
        raise NonPositivePrior("Dirichlet prior parameters must be > 0")
    return a + count_vector(table)
