from fractions import Fraction
from itertools import product

import pytest

from mzvcomplex import dihedral as d
from mzvcomplex.linalg import Echelon, rank
from mzvcomplex.words import NWord, extract_coefficients


def test_closed_forms_small_weights():
    for m, top in ((1, 9), (2, 12), (3, 11)):
        for w in range(m, top + 1):
            assert d.dimension(1, w, m) == d.dimension_formula(w, m), (w, m)


@pytest.mark.parametrize("N,table", [
    (2, [[2, 0, 1, 0, 1, 0], [0, 0, 0, 1, 0, 2], [0, 0, 0, 0, 1, 0]]),
    (3, [[2, 1, 1, 1, 1, 1], [0, 0, 1, 1, 3, 2], [0, 0, 0, 1, 2, 4]]),
    (5, [[3, 2, 2, 2, 2, 2], [0, 0, 4, 4, 8, 8], [0, 0, 0, 6, 12, 22]]),
])
def test_frozen_dimensions(N, table):
    got = [[d.dimension(N, w, m) for w in range(1, 7)] for m in (1, 2, 3)]
    assert got == table


def test_weight_one_at_N2_keeps_both_generators():
    assert d.dimension(2, 1, 1) == 2


def test_weight_eight_relation_rank():
    assert rank(d.relation_matrix(1, 8, 2)) == len(d.generators(1, 8, 2)) - 1


def test_canonicalize_is_orbit_invariant():
    x = d.frame(5, (1, 2, 4))
    base, _ = d.canonicalize(x)
    for k in range(4):
        for y in (d.rotate(x, k), d.reflect(d.rotate(x, k))):
            c, _ = d.canonicalize(y)
            assert c.g == base.g
            assert d.canonicalize(c)[0] == c


def test_dihedral_word_validation():
    with pytest.raises(ValueError):
        d.DihedralWord(3, (1,), (0,))
    with pytest.raises(ValueError):
        d.DihedralWord(3, (1, 2), (1,))
    assert str(d.DihedralWord(3, (4, 1), (2, 1))) == "{1,1}_{2,1}"


def test_cobracket_weight_eight():
    (b,) = d.space(1, 8, 2).basis
    assert d.cobracket(1, {b: 1}) == {((3, 1, 0), (5, 1, 0)): Fraction(-2)}


def test_raw_tensor_is_symmetric_not_antisymmetric():
    # tensor-level cutting is symmetric under the flip; the image in Lambda^2 is what is used
    (b,) = d.space(1, 8, 2).basis
    defect = d.cobracket_symmetry_defect(1, {b: 1})
    assert defect[((3, 1, 0), (5, 1, 0))] == defect[((5, 1, 0), (3, 1, 0))] == -6


@pytest.mark.parametrize("N", [1, 2, 3])
def test_coalgebra_axioms(N):
    for m in (1, 2, 3):
        for w in range(m, 7):
            assert d.relation_kill_residual(N, w, m) == 0
            assert d.co_antisymmetry_residual(N, w, m) == 0
            assert d.co_jacobi_residual(N, w, m) == 0


@pytest.mark.parametrize("w,chi", [(4, -1), (6, -1), (8, -1), (10, -1), (12, -2), (14, -1), (16, -2)])
def test_euler_oracle(w, chi):
    assert d.euler_oracle(w) == chi
    assert d.euler_characteristic(1, w, 2) == chi


def test_frozen_cohomology():
    assert d.complex_dims(1, 11, 3) == [1, 2, 1]
    assert d.cohomology_dims(1, 11, 3) == [0, 0, 0]
    assert d.cohomology_dims(1, 4, 2) == [0, 1]
    assert d.complex_dims(1, 12, 2) == [1, 3]


def test_parity_vanishing():
    for m in (1, 2, 3):
        for w in range(m, 14):
            if (w + m) % 2:
                assert d.dimension(1, w, m) == 0



def _negative_distribution_rows(N, w, m, k):
    # distribution at l = -k: {x^l | s} = sum over y^l = x^l of {y | l s}
    l, step = -k, N // k
    index = d.generator_index(N, w, m)
    rows = []
    for a in product(range(N), repeat=m):
        x = d.frame(N, a)
        ident = [(1, NWord(N, tuple(l * g for g in x.g), x.s))]
        scaled = tuple(tuple(l * c for c in f) for f in x.s)
        for ks in product(range(k), repeat=m):
            b = tuple(ai + j * step for ai, j in zip(a, ks))
            ident.append((-1, NWord(N, (-sum(b),) + b, scaled)))
        rows += extract_coefficients(ident, w, m, index)
    return rows


@pytest.mark.parametrize("N,k", [(2, 1), (4, 2), (6, 2), (6, 3)])
def test_composite_negative_distribution_is_implied(N, k):
    for m in (1, 2):
        for w in range(max(m, 2), 5):
            rel = d.relation_matrix(N, w, m)
            ech = Echelon(rel.ncols).extend(rel.rows)
            for row in _negative_distribution_rows(N, w, m, k):
                assert ech.contains(row), (N, k, w, m)
