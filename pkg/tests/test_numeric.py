from fractions import Fraction as F

import mpmath
import pytest

from mzvcomplex import numeric as nu

W = nu.PolylogWord
TOL = 1e-20


@pytest.fixture(autouse=True)
def _mp_prec():
    with mpmath.workprec(128):
        yield


def _close(a, b, tol=TOL):
    return abs(mpmath.mpc(a) - mpmath.mpc(b)) < tol


def test_depth_one_against_mpmath():
    for n, x in ((1, F(1, 2)), (2, F(-9, 10)), (3, F(3, 4)), (4, F(1, 3))):
        v = nu.li(W((n,), (x,)))
        assert _close(v.value, mpmath.polylog(n, mpmath.mpf(x.numerator) / x.denominator))
        assert v.method == "geometric" and v.error < 1e-30


def test_li2_half_closed_form():
    v = nu.li(W((2,), (F(1, 2),))).value
    assert _close(v, mpmath.pi ** 2 / 12 - mpmath.log(2) ** 2 / 2)


def test_roots_of_unity():
    z = nu.root_of_unity(1, 4)
    assert _close(z, 1j)
    assert _close(nu.root_of_unity(3, 3), 1)


def test_word_classification():
    assert W((2,), (1,)).convergent
    assert not W((1,), (1,)).convergent
    assert W((2, 1, 1), (1, 1, 1)).trailing_divergent() == 2
    assert W((2, 1), (1, F(1, 2))).trailing_divergent() == 0
    with pytest.raises(nu.DivergentWordError):
        nu.li(W((1,), (1,)))
    with pytest.raises(ValueError):
        W((1, 2), (1,))


def test_value_record():
    d = nu.li(W((2,), (F(1, 2),))).to_dict()
    assert set(d) == {"re", "im", "tail", "rounding", "terms", "method", "prec"}


def test_zeta_two():
    v = nu.zeta(2, eps_tail=F(1, 10 ** 6))
    assert abs(v.value - mpmath.zeta(2)) < 1e-6
    assert abs(v.value - mpmath.zeta(2)) <= 2 * v.error


def test_tolerance_error_carries_best_value():
    with pytest.raises(nu.ToleranceError) as info:
        nu.li(W((2,), (1,)), F(1, 10 ** 25), max_terms=2 ** 14)
    assert info.value.best is not None


def test_more_terms_shrink_the_change():
    # doubling the cutoff moves the value by less than the reported tail
    word = W((2, 1), (F(9, 10), F(-7, 10)))
    a = nu.li(word, F(1, 10 ** 20))
    b = nu.li(word, terms=2 * a.terms)
    assert abs(a.value - b.value) < a.tail + 1e-30


@pytest.mark.parametrize("u,v", [
    (W((2,), (F(9, 10),)), W((1,), (F(-9, 10),))),
    (W((1, 2), (F(1, 2), F(-9, 10))), W((3,), (F(4, 5),))),
    (W((1, 1), (F(9, 10), F(9, 10))), W((2, 1), (F(-1, 3), F(9, 10)))),
])
def test_stuffle(u, v):
    assert nu.stuffle_check(u, v) < TOL


@pytest.mark.parametrize("word,l", [
    (W((2,), (F(4, 5),)), 2),
    (W((1, 2), (F(-4, 5), F(1, 2))), 2),
    (W((2, 1), (F(4, 5), F(-4, 5))), 3),
])
def test_distribution(word, l):
    assert nu.distribution_check(word, l) < TOL


def test_shuffle_of_iterated_integrals():
    assert nu.shuffle_check([2], [-2]) < TOL
    assert nu.shuffle_check([2, -2], [2j]) < TOL


def test_all_ones_stuffle_near_one():
    # Li_{1,1}(x, x) = (Li_1(x)^2 - Li_2(x^2)) / 2
    x = F(99, 100)
    lhs = nu.li(W((1, 1), (x, x))).value
    l1 = nu.li(W((1,), (x,))).value
    l2 = nu.li(W((2,), (x * x,))).value
    assert _close(lhs, (l1 ** 2 - l2) / 2)


def test_closed_form():
    assert _close(nu.all_ones_closed_form(2, F(1, 100)), mpmath.log(100) ** 2 / 2)


def test_deform_routes():
    w = W((1, 1), (1, 1))
    assert nu.deform(w, F(1, 10), "series").args == (F(9, 10), F(9, 10))
    assert nu.deform(w, F(1, 10), "trailing").args == (1, F(9, 10))
    with pytest.raises(ValueError):
        nu.deform(W((2,), (1,)), F(1, 10), "series")
    with pytest.raises(ValueError):
        nu.deform(w, F(1, 10), "sideways")


def test_regularize_rejects_bad_grids():
    w = W((1,), (1,))
    with pytest.raises(ValueError):
        nu.regularize(w, [F(1, 10)])
    with pytest.raises(ValueError):
        nu.regularize(w, [F(1, 10), F(2)])
    with pytest.raises(ValueError):
        nu.regularize(w, [F(1, 10), F(101, 1000)])


def test_regularize_depth_one():
    grid = [F(1, 10 ** k) for k in range(3, 6)]
    fit = nu.regularize(W((1,), (1,)), grid, eps_tail=F(1, 10 ** 10))
    for c, r in zip(fit.coeffs, fit.reference):
        assert abs(c - r) < 1e-4


def test_regularize_convergent_prefix():
    # Li_{2,1}(1/2, 1 - eps) has a single log(eps) term
    fit = nu.regularize(W((2, 1), (F(1, 2), 1)), [F(1, 10 ** 3), F(1, 10 ** 4), F(1, 10 ** 5)],
                        eps_tail=F(1, 10 ** 10))
    assert fit.degree == 1 and fit.reference is None
    assert abs(fit.coeffs[1] + nu.li(W((2,), (F(1, 2),))).value) < 1e-3


@pytest.mark.slow
def test_series_route_depth_two():
    # deforming every trailing argument shifts the constant to -zeta(2)/2;
    # the fit carries O(eps log^2 eps) contamination, hence the small-eps grid
    grid = [F(1, 10 ** k) for k in (5, 6, 7)]
    fit = nu.regularize(W((1, 1), (1, 1)), grid, route="series", eps_tail=F(1, 10 ** 10))
    assert abs(fit.coeffs[2] - mpmath.mpf(1) / 2) < 1e-4
    assert abs(fit.coeffs[1]) < 1e-3
    assert abs(fit.coeffs[0] + mpmath.zeta(2) / 2) < 5e-3
