from collections import Counter
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mzvcomplex.words import (
    HWord,
    NWord,
    compositions,
    monomials,
    quasi_shuffle,
    shuffle_product,
    shuffles,
    to_homogeneous,
    to_nonhomogeneous,
)


@pytest.mark.parametrize("w,m", [(1, 1), (5, 2), (7, 3), (10, 4), (3, 5)])
def test_composition_count(w, m):
    cs = compositions(w, m)
    assert len(cs) == (comb(w - 1, m - 1) if w >= m else 0)
    assert all(sum(c) == w and min(c) >= 1 for c in cs)
    assert list(cs) == sorted(cs)


def test_shuffles_keep_relative_order():
    for sigma in shuffles(2, 3):
        first = [i for i in sigma if i < 2]
        second = [i for i in sigma if i >= 2]
        assert first == [0, 1] and second == [2, 3, 4]
    assert len(shuffles(2, 3)) == comb(5, 2)


def test_stuffle_of_two_letters():
    # [a][b] = [a,b] + [b,a] + [ab]
    out = quasi_shuffle([(2, 1)], [(3, 2)])
    assert out == Counter({((2, 1), (3, 2)): 1, ((3, 2), (2, 1)): 1, ((6, 3),): 1})


def _delannoy(k, l):
    return sum(comb(k, i) * comb(l, i) * 2 ** i for i in range(min(k, l) + 1))


@given(st.integers(0, 4), st.integers(0, 4))
def test_stuffle_term_count(k, l):
    u = [(1, i + 1) for i in range(k)]
    v = [(1, 10 + i) for i in range(l)]
    assert sum(quasi_shuffle(u, v).values()) == _delannoy(k, l)
    assert sum(shuffle_product(u, v).values()) == comb(k + l, k)


def test_monomials_degree():
    ms = monomials(3, 2)
    assert len(ms) == 6 and all(sum(e) == 2 for e in ms)


def test_homogeneous_round_trip():
    x = NWord(5, (1, 2, 2), ((0, 0), (1, 0), (0, 1)))
    h = to_homogeneous(x)
    assert sum(map(sum, zip(*h.t))) == 0
    y = to_nonhomogeneous(h)
    # the round trip is the cyclic shift by one, up to translating the forms
    xs = x.s[1:] + x.s[:1]
    assert y.g == x.g[1:] + x.g[:1]
    shift = tuple(a - b for a, b in zip(y.s[0], xs[0]))
    assert all(tuple(a - b for a, b in zip(p, q)) == shift for p, q in zip(y.s, xs))


def test_word_validation():
    with pytest.raises(ValueError):
        NWord(3, (1, 1), ((0,), (1,)))
    with pytest.raises(ValueError):
        HWord(3, (0, 1), ((1,), (1,)))
