"""Pair-counting agreement between two partitions, and confusion matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt, sqrt

import numpy as np

from .errors import LengthMismatch, TooFewObservations


@dataclass(frozen=True)
class PairCounts:
    """Unordered pairs of observations classified by the two partitions.

    ``a``: together in both; ``b``: together in the first only; ``c``: together
    in the second only; ``d_``: together in neither.
    """

    a: int
    b: int
    c: int
    d_: int

    @property
    def total(self):
        return self.a + self.b + self.c + self.d_


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray
    row_labels: np.ndarray
    col_labels: np.ndarray

    @property
    def row_totals(self):
        return self.counts.sum(axis=1)

    @property
    def col_totals(self):
        return self.counts.sum(axis=0)

    @property
    def n(self):
        return int(self.counts.sum())


@dataclass(frozen=True)
class Agreement:
    ri: float
    ari: float
    ji: float
    fmi: float

    def as_dict(self):
        return {"ri": self.ri, "ari": self.ari, "ji": self.ji, "fmi": self.fmi}


def _check_pair(labels_a, labels_b, min_n=0):
    a = np.asarray(labels_a).ravel()
    b = np.asarray(labels_b).ravel()
    if a.shape != b.shape:
        raise LengthMismatch(f"labelings have lengths {a.size} and {b.size}")
    if a.size < min_n:
        raise TooFewObservations(f"need at least {min_n} observations")
    return a, b


def confusion_matrix(labels, truth):
    """``counts[i, j]`` = number of observations with label ``row_labels[i]`` and
    true class ``col_labels[j]``."""
    a, b = _check_pair(labels, truth)
    rows, ai = np.unique(a, return_inverse=True)
    cols, bi = np.unique(b, return_inverse=True)
    counts = np.zeros((rows.size, cols.size), dtype=np.int64)
    np.add.at(counts, (ai, bi), 1)
    return ContingencyTable(counts=counts, row_labels=rows, col_labels=cols)


def _pairs(x):
    return sum(comb(int(v), 2) for v in np.ravel(x))


def pair_counts(labels_a, labels_b):
    """Pair counts from the contingency table, in exact integer arithmetic."""
    a, b = _check_pair(labels_a, labels_b, min_n=2)
    table = confusion_matrix(a, b)
    both = _pairs(table.counts)
    in_a = _pairs(table.row_totals)
    in_b = _pairs(table.col_totals)
    total = comb(a.size, 2)
    return PairCounts(a=both, b=in_a - both, c=in_b - both, d_=total - in_a - in_b + both)


def agreement_metrics(labels_a, labels_b, exact=False):
    """Rand, adjusted Rand (Hubert-Arabie), Jaccard and Fowlkes-Mallows indices.

    With ``exact=True`` RI, ARI and JI are returned as Fractions (FMI too when
    it is rational); otherwise all four are floats.

    When no pair is together in either partition (both all-singletons) the
    labelings agree on every pair, so Jaccard and Fowlkes-Mallows are 1; if
    only one side is all-singletons Fowlkes-Mallows is 0. ARI is 1 when the
    expected index equals its maximum.
    """
    pc = pair_counts(labels_a, labels_b)
    a, b, c, total = pc.a, pc.b, pc.c, pc.total
    ri = Fraction(a + pc.d_, total)
    ji = Fraction(a, a + b + c) if a + b + c else Fraction(1)
    prod = (a + b) * (a + c)
    if a + b + c == 0:
        fmi = Fraction(1)
    elif prod == 0:
        fmi = Fraction(0)
    else:
        root = isqrt(prod)
        fmi = Fraction(a, root) if root * root == prod else a / sqrt(prod)
    expected = Fraction(prod, total)
    maximum = Fraction((a + b) + (a + c), 2)
    ari = Fraction(1) if maximum == expected else (a - expected) / (maximum - expected)
    if exact:
        return Agreement(ri=ri, ari=ari, ji=ji, fmi=fmi)
    return Agreement(ri=float(ri), ari=float(ari), ji=float(ji), fmi=float(fmi))
