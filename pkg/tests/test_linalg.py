from fractions import Fraction as F

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from mzvcomplex.linalg import (
    Echelon,
    Quotient,
    SparseMatrix,
    in_span,
    modular_rank,
    nullspace_basis,
    quotient_dim,
    rank,
)

small = st.integers(-4, 4)
dense = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=0, max_size=7)
    .map(lambda rows: (rows, c)))


def test_rank_of_known_matrix():
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    assert modular_rank(m) == 2


def test_fraction_entries_survive():
    m = SparseMatrix.from_dense([[F(1, 3), F(2, 3)], [F(1, 2), F(1, 1)]])
    assert rank(m) == 1
    (v,) = nullspace_basis(m)
    assert m.apply(v) == {}


def test_empty_and_zero_matrices():
    assert rank(SparseMatrix([], 4)) == 0
    assert rank(SparseMatrix([{}, {}], 3)) == 0
    assert quotient_dim(5, SparseMatrix([], 5)) == 5


@settings(max_examples=60, deadline=None)
@given(dense)
def test_rank_matches_float_rank(data):
    rows, c = data
    m = SparseMatrix.from_dense(rows, c)
    expect = np.linalg.matrix_rank(np.array(rows, dtype=float)) if rows else 0
    assert rank(m) == expect
    assert rank(m.transpose()) == expect


@settings(max_examples=60, deadline=None)
@given(dense)
def test_rank_nullity(data):
    rows, c = data
    m = SparseMatrix.from_dense(rows, c)
    ns = nullspace_basis(m)
    assert rank(m) + len(ns) == c
    for v in ns:
        assert m.apply(v) == {}


@settings(max_examples=40, deadline=None)
@given(dense, st.lists(small, min_size=7, max_size=7))
def test_span_membership(data, coeffs):
    rows, c = data
    m = SparseMatrix.from_dense(rows, c)
    combo = {}
    for a, row in zip(coeffs, m.rows):
        for j, x in row.items():
            combo[j] = combo.get(j, 0) + a * x
    assert in_span(combo, m)


def test_echelon_normal_form_and_order():
    e = Echelon(3, order=[2, 1, 0])
    assert e.add({0: 1, 2: 1})
    assert not e.add({0: 2, 2: 2})
    assert e.pivot_columns == [2]
    assert e.normal_form({2: 1}) == {0: -1}
    assert e.contains({0: 5, 2: 5})


def test_quotient_coordinates():
    q = Quotient.build(3, [{0: 1, 1: -1}])
    assert q.dim == 2
    assert q.coords({0: 1}) == q.coords({1: 1})
