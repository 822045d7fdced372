from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn import metrics as skm

from oracles import brute_force_pairs
from r2c.errors import LengthMismatch, TooFewObservations
from r2c.metrics import agreement_metrics, confusion_matrix, pair_counts

A = [1, 1, 2, 2]
B = [1, 2, 1, 2]


def test_worked_example():
    pc = pair_counts(A, B)
    assert (pc.a, pc.b, pc.c, pc.d_) == (0, 2, 2, 2)
    m = agreement_metrics(A, B)
    assert m.ri == 1 / 3 and m.ari == -0.5
    exact = agreement_metrics(A, B, exact=True)
    assert (exact.ri, exact.ari, exact.ji, exact.fmi) == (Fraction(1, 3), Fraction(-1, 2), 0, 0)
    assert m.ji == 0 and m.fmi == 0


def test_identical_labelings():
    for labels in ([0, 0, 1, 1], [3, 1, 2, 0], [7, 7, 7, 7]):
        pc = pair_counts(labels, labels)
        assert pc.b == pc.c == 0
        m = agreement_metrics(labels, labels)
        assert (m.ri, m.ari, m.ji, m.fmi) == (1.0, 1.0, 1.0, 1.0)


def test_singletons_against_singletons():
    pc = pair_counts(range(6), range(10, 16))
    assert pc.a == 0 and pc.d_ == 15


def test_one_side_singletons():
    m = agreement_metrics([0, 0, 0, 1], [0, 1, 2, 3])
    assert m.fmi == 0 and m.ji == 0


def test_label_values_are_irrelevant():
    m1 = agreement_metrics(["x", "x", "y"], [5, 5, 9])
    assert m1.ari == 1.0


def test_errors():
    with pytest.raises(LengthMismatch):
        pair_counts([1, 2], [1, 2, 3])
    with pytest.raises(TooFewObservations):
        pair_counts([1], [1])


def test_confusion_matrix():
    truth = np.repeat(["a", "b"], 100)
    cm = confusion_matrix(np.repeat([0, 1], 100), truth)
    np.testing.assert_array_equal(cm.counts, [[100, 0], [0, 100]])
    const = confusion_matrix(np.zeros(6, int), [1, 1, 2, 3, 3, 3])
    np.testing.assert_array_equal(const.counts, [[2, 1, 3]])
    assert const.n == 6


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 12).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 4), min_size=n, max_size=n),
    st.lists(st.integers(0, 4), min_size=n, max_size=n))))
def test_pair_counts_match_enumeration(pair):
    a, b = pair
    pc = pair_counts(a, b)
    assert (pc.a, pc.b, pc.c, pc.d_) == brute_force_pairs(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 60).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 5), min_size=n, max_size=n),
    st.lists(st.integers(0, 5), min_size=n, max_size=n))))
def test_agrees_with_scikit_learn(pair):
    a, b = pair
    m = agreement_metrics(a, b)
    assert m.ri == pytest.approx(skm.rand_score(a, b), abs=1e-12)
    assert m.ari == pytest.approx(skm.adjusted_rand_score(a, b), abs=1e-12)
    if pair_counts(a, b).a + pair_counts(a, b).b + pair_counts(a, b).c:
        assert m.fmi == pytest.approx(skm.fowlkes_mallows_score(a, b), abs=1e-12)
    assert -1 <= m.ari <= 1 and 0 <= m.ri <= 1 and 0 <= m.ji <= 1
