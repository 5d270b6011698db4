"""Multiple polylogarithms by nested summation.

    Li_{n_1..n_m}(x_1..x_m) = sum_{0<k_1<...<k_m} x_1^k_1 ... x_m^k_m / (k_1^n_1 ... k_m^n_m)

The nested sum is a running dynamic program: T_j(k) = T_j(k-1) +
x_j^k k^-n_j T_(j-1)(k-1), so K terms cost O(K m).  Small cutoffs run in
mpmath at the requested precision; large ones (arguments on or near the unit
circle) run in chunked numpy long double, whose rounding is estimated and
added to the reported error.

Every call builds its own mpmath context, so nothing here touches global
precision state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import mpmath
import numpy as np
from mpmath.ctx_mp import MPContext

from .words import quasi_shuffle, shuffles

MP_TERMS = 2 ** 17
MAX_TERMS = 2 ** 29
CHUNK = 2 ** 20
MIN_PREC = 64


class DivergentWordError(ValueError):
    pass


class ToleranceError(ArithmeticError):
    """The requested tail size cannot be met within the term/precision budget."""

    def __init__(self, msg: str, best: "Value | None" = None):
        super().__init__(msg)
        self.best = best


def _ctx(prec: int) -> MPContext:
    if prec < MIN_PREC:
        raise ValueError(f"precision must be at least {MIN_PREC} bits")
    ctx = MPContext()
    ctx.prec = prec
    return ctx


def _to_mp(ctx: MPContext, x):
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if hasattr(x, "_mpc_"):
        re, im = x._mpc_
        return ctx.make_mpc((re, im)) if im != mpmath.libmp.fzero else ctx.make_mpf(re)
    if hasattr(x, "_mpf_"):
        return ctx.make_mpf(x._mpf_)
    if isinstance(x, complex):
        return ctx.mpc(x) if x.imag else ctx.mpf(x.real)
    return ctx.mpf(x)


def root_of_unity(k: int, N: int, prec: int = 128):
    """exp(2 pi i k / N), exactly 1 when N divides k."""
    ctx = _ctx(prec)
    k %= N
    if k == 0:
        return ctx.mpf(1)
    if 2 * k == N:
        return ctx.mpf(-1)
    return ctx.expjpi(ctx.mpf(2 * k) / N)


@dataclass(frozen=True)
class PolylogWord:
    exps: tuple
    args: tuple

    def __post_init__(self):
        if len(self.exps) != len(self.args):
            raise ValueError("exponents and arguments differ in length")
        if any(int(n) != n or n < 1 for n in self.exps):
            raise ValueError("exponents must be positive integers")
        object.__setattr__(self, "exps", tuple(int(n) for n in self.exps))
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def weight(self) -> int:
        return sum(self.exps)

    @property
    def depth(self) -> int:
        return len(self.exps)

    @property
    def convergent(self) -> bool:
        return not self.exps or not (self.exps[-1] == 1 and self.args[-1] == 1)

    def trailing_divergent(self) -> int:
        """Number of trailing letters with n = 1 and x = 1."""
        d = 0
        for n, x in zip(reversed(self.exps), reversed(self.args)):
            if n == 1 and x == 1:
                d += 1
            else:
                break
        return d


@dataclass(frozen=True)
class Value:
    value: object  # mpc
    tail: object  # mpf, estimated truncation error
    rounding: object  # mpf, estimated accumulated rounding
    terms: int
    method: str  # "geometric", "doubling" or "exact"
    prec: int

    @property
    def error(self):
        return self.tail + self.rounding

    def to_dict(self, digits: int = 30) -> dict:
        v = self.value
        return {"re": mpmath.nstr(mpmath.re(v), digits), "im": mpmath.nstr(mpmath.im(v), digits),
                "tail": mpmath.nstr(self.tail, 5), "rounding": mpmath.nstr(self.rounding, 5),
                "terms": self.terms, "method": self.method, "prec": self.prec}


# ---------------------------------------------------------------- summation kernels

def _mp_sum(ctx, exps, xs, K, checkpoints=()):
    """Nested sum to K terms; also returns the values at the checkpoints."""
    m = len(exps)
    T = [ctx.mpf(1)] + [ctx.mpf(0)] * m
    p = [ctx.mpf(1)] * m
    seen = {}
    cps = set(checkpoints)
    for k in range(1, K + 1):
        for j in range(m):
            p[j] *= xs[j]
        for j in range(m, 0, -1):
            T[j] += p[j - 1] * T[j - 1] / k ** exps[j - 1]
        if k in cps:
            seen[k] = T[m]
    return T[m], seen


_LD_TINY = mpmath.mpf(str(np.finfo(np.longdouble).tiny))


def _np_scalar(x, dtype):
    if abs(x) < _LD_TINY:  # below long double range; a power x^k far down a sum
        return dtype(0)
    if dtype == np.clongdouble:
        return np.clongdouble(np.longdouble(mpmath.nstr(mpmath.re(x), 25))
                              + 1j * np.longdouble(mpmath.nstr(mpmath.im(x), 25)))
    return np.longdouble(mpmath.nstr(x, 25))


def _np_sum(ctx, exps, xs, K, checkpoints=()):
    """Chunked long-double version of _mp_sum.

    A generator: yields ``(k, value, rounding)`` at every checkpoint and at K,
    so callers can stop early.  The rounding estimate is k m 4 eps max|T|.
    """
    m = len(exps)
    cplx = any(mpmath.im(x) != 0 for x in xs)
    dtype = np.clongdouble if cplx else np.longdouble
    eps = float(np.finfo(np.longdouble).eps)
    xs_np = [_np_scalar(x, dtype) for x in xs]
    if cplx:
        def to_mp(z):
            return ctx.mpc(ctx.mpf(str(np.real(z))), ctx.mpf(str(np.imag(z))))
    else:
        def to_mp(z):
            return ctx.mpf(str(z))
    last = [dtype(1)] + [dtype(0)] * m
    stops = sorted(set(c for c in checkpoints if c <= K) | {K})
    lo, peak = 1, 1.0
    for stop in stops:
        while lo <= stop:
            hi = min(stop, lo + CHUNK - 1)
            k = np.arange(lo, hi + 1, dtype=np.longdouble)
            prev = None
            new = [dtype(1)]
            for j in range(1, m + 1):
                x = xs_np[j - 1]
                if x == 1:
                    t = 1 / k ** exps[j - 1]
                else:
                    ratio = np.full(len(k), x, dtype=dtype)
                    ratio[0] = _np_scalar(ctx.power(xs[j - 1], lo), dtype)
                    t = np.cumprod(ratio) / k ** exps[j - 1]
                if j == 1:
                    cur = last[1] + np.cumsum(t)
                else:
                    sh = np.empty(len(k), dtype=dtype)
                    sh[0] = last[j - 1]
                    sh[1:] = prev[:-1]
                    cur = last[j] + np.cumsum(t * sh)
                peak = max(peak, float(np.max(np.abs(cur))))
                new.append(cur[-1])
                prev = cur
            last = new
            lo = hi + 1
        yield stop, to_mp(last[m]), ctx.mpf(stop * m * 4 * eps * peak)


def _np_total(ctx, exps, xs, K, checkpoints=()):
    seen, out = {}, None
    for k, v, rnd in _np_sum(ctx, exps, xs, K, checkpoints):
        seen[k] = v
        out = (v, rnd)
    return out[0], seen, out[1]


def _geometric_bound_at(ctx, r, n_last, m, K):
    """Tail bound past K outer terms when |x_m| = r < 1.

    Terms with k_m = k are at most r^k (1 + log k)^(m-1) / ((m-1)! k^n),
    decreasing once k > e^m, so the tail is below f(K+1) r^(K+1) / (1 - r).
    """
    k = K + 1
    if k <= math.e ** m:
        return ctx.inf
    f = (1 + ctx.log(k)) ** (m - 1) / ctx.factorial(m - 1) / ctx.mpf(k) ** n_last
    return f * r ** k / (1 - r)


def _geometric_terms(ctx, r, n_last: int, m: int, eps_tail) -> tuple[int, object]:
    """Smallest K with the tail bound below eps_tail (see _geometric_bound_at)."""
    lo = max(16, int(math.e ** m) + 1)
    if _geometric_bound_at(ctx, r, n_last, m, lo) <= eps_tail:
        return lo, _geometric_bound_at(ctx, r, n_last, m, lo)
    hi = lo
    while _geometric_bound_at(ctx, r, n_last, m, hi) > eps_tail:
        lo, hi = hi, hi * 2
        if hi > 4 * MAX_TERMS:
            return hi, _geometric_bound_at(ctx, r, n_last, m, hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _geometric_bound_at(ctx, r, n_last, m, mid) > eps_tail:
            lo = mid
        else:
            hi = mid
    return hi, _geometric_bound_at(ctx, r, n_last, m, hi)


# ---------------------------------------------------------------- evaluation

def li(word: PolylogWord, eps_tail=Fraction(1, 10 ** 30), prec: int = 128,
       terms: int | None = None, max_terms: int = MAX_TERMS) -> Value:
    """Evaluate a convergent word with |x_i| <= 1.

    With ``terms`` given, sum exactly that many outer terms and report the
    tail bound (or the K/2 -> K change at |x_m| = 1).
    """
    ctx = _ctx(prec)
    if not word.convergent:
        raise DivergentWordError(f"Li_{word.exps} diverges: last letter is (1, 1)")
    m = word.depth
    if m == 0:
        return Value(ctx.mpc(1), ctx.mpf(0), ctx.mpf(0), 0, "exact", prec)
    xs = [_to_mp(ctx, x) for x in word.args]
    slack = ctx.ldexp(1, -prec + 8)
    mods = [abs(x) for x in xs]
    if any(r > 1 + slack for r in mods):
        raise ValueError("arguments must satisfy |x| <= 1")
    eps_tail = _to_mp(ctx, eps_tail)
    r = mods[-1]
    fast_floor = ctx.mpf(10) ** -17

    if r < 1 - slack:
        if terms is None:
            K, tail = _geometric_terms(ctx, r, word.exps[-1], m, eps_tail)
        else:
            K = terms
            tail = _geometric_bound_at(ctx, r, word.exps[-1], m, K)
        if K > max_terms:
            raise ToleranceError(f"tail {mpmath.nstr(eps_tail, 3)} needs {K} terms (> {max_terms})")
        if K <= MP_TERMS:
            v, _ = _mp_sum(ctx, word.exps, xs, K)
            return Value(ctx.mpc(v), tail, ctx.mpf(0), K, "geometric", prec)
        if eps_tail < fast_floor and terms is None:
            raise ToleranceError(f"tail {mpmath.nstr(eps_tail, 3)} needs {K} terms, beyond the "
                                 f"{MP_TERMS}-term budget at {prec} bits")
        v, _, rnd = _np_total(ctx, word.exps, xs, K)
        return Value(ctx.mpc(v), tail, rnd, K, "geometric", prec)

    # |x_m| = 1: stabilization under doubling; the estimate is twice the
    # last change, which dominates a tail decaying like 1/K or faster
    if terms is not None:
        cps = [terms // 2, terms]
        if terms <= MP_TERMS:
            v, seen = _mp_sum(ctx, word.exps, xs, terms, cps)
            rnd = ctx.mpf(0)
        else:
            v, seen, rnd = _np_total(ctx, word.exps, xs, terms, cps)
        return Value(ctx.mpc(v), 2 * abs(seen[terms] - seen[terms // 2]), rnd, terms, "doubling", prec)
    top = MP_TERMS if eps_tail < fast_floor else 2 ** 12
    cps = [2 ** a for a in range(8, top.bit_length())]
    v, seen = _mp_sum(ctx, word.exps, xs, top, cps)
    best = None
    for a, b in zip(cps, cps[1:]):
        est = 2 * abs(seen[b] - seen[a])
        best = Value(ctx.mpc(seen[b]), est, ctx.mpf(0), b, "doubling", prec)
        if est <= eps_tail:
            return best
    if eps_tail < fast_floor:
        raise ToleranceError(f"tail {mpmath.nstr(eps_tail, 3)} not reached by {top} terms "
                             f"at |x_m| = 1", best)
    cps = [2 ** a for a in range(8, max_terms.bit_length())]
    prev = None
    for k, v, rnd in _np_sum(ctx, word.exps, xs, cps[-1], cps):
        if prev is not None:
            est = 2 * abs(v - prev)
            best = Value(ctx.mpc(v), est, rnd, k, "doubling", prec)
            if est + rnd <= eps_tail:
                return best
        prev = v
    raise ToleranceError(f"tail {mpmath.nstr(eps_tail, 3)} not reached by {cps[-1]} terms", best)


def zeta(*s: int, eps_tail=Fraction(1, 10 ** 6), prec: int = 128) -> Value:
    """Multiple zeta value in the usual ordering
    zeta(s_1, ..., s_m) = sum_{k_1 > ... > k_m > 0} k_1^-s_1 ... k_m^-s_m,
    which is Li_{s_m, ..., s_1}(1, ..., 1) here."""
    if not s or s[0] < 2:
        raise DivergentWordError("zeta needs s_1 >= 2")
    return li(PolylogWord(tuple(reversed(s)), (1,) * len(s)), eps_tail, prec)


def eval_iterated(n: Sequence[int], a: Sequence, eps_tail=Fraction(1, 10 ** 30),
                  prec: int = 128) -> Value:
    """I_{n_1..n_m}(a_1 : ... : a_m : a_m+1) through Li with x_i = a_(i+1) / a_i."""
    if len(a) != len(n) + 1:
        raise ValueError("need one more point than exponents")
    ctx = _ctx(prec)
    pts = [_to_mp(ctx, x) for x in a]
    if any(p == 0 for p in pts[:-1]):
        raise ValueError("a_1..a_m must be nonzero")
    xs = tuple(pts[i + 1] / pts[i] for i in range(len(n)))
    return li(PolylogWord(tuple(n), xs), eps_tail, prec)


# ---------------------------------------------------------------- relation checks

def stuffle_check(u: PolylogWord, v: PolylogWord, eps_tail=Fraction(1, 10 ** 35),
                  prec: int = 128):
    """|Li(u) Li(v) - sum over the quasi-shuffle of u and v|."""
    ctx = _ctx(prec)
    args = [_to_mp(ctx, x) for x in u.args + v.args]
    letters_u = [((i,), n) for i, n in enumerate(u.exps)]
    letters_v = [((len(u.exps) + i,), n) for i, n in enumerate(v.exps)]
    merge = lambda a, b: (a[0] + b[0], a[1] + b[1])  # noqa: E731
    total = ctx.mpc(0)
    for w, c in quasi_shuffle(letters_u, letters_v, merge).items():
        xs = tuple(_prod(ctx, (args[i] for i in idx)) for idx, _ in w)
        word = PolylogWord(tuple(n for _, n in w), xs)
        if not word.convergent:
            raise DivergentWordError(f"quasi-shuffle term {word.exps} diverges")
        total += c * li(word, eps_tail, prec).value
    lhs = li(u, eps_tail, prec).value * li(v, eps_tail, prec).value
    return abs(lhs - total)


def _prod(ctx, xs):
    out = ctx.mpf(1)
    for x in xs:
        out *= x
    return out


def shuffle_check(left: Sequence, right: Sequence, eps_tail=Fraction(1, 10 ** 35),
                  prec: int = 128):
    """Iterated-integral shuffle in weight = depth:
    |I(a_1:..:a_k:1) I(a_k+1:..:a_n:1) - sum over shuffles I(a_sigma:1)|,
    all exponents 1."""
    ctx = _ctx(prec)
    a = [_to_mp(ctx, x) for x in list(left) + list(right)]
    k, l = len(left), len(right)

    def I(pts):
        return eval_iterated((1,) * len(pts), list(pts) + [1], eps_tail, prec).value

    total = ctx.mpc(0)
    for sigma in shuffles(k, l):
        total += I([a[i] for i in sigma])
    return abs(I(a[:k]) * I(a[k:]) - total)


def distribution_check(word: PolylogWord, l: int, eps_tail=Fraction(1, 10 ** 35),
                       prec: int = 128):
    """|Li_n(x) - l^(w-m) sum_{y_i^l = x_i} Li_n(y)| for a positive integer l."""
    if l < 1:
        raise ValueError("l must be a positive integer")
    ctx = _ctx(prec)
    xs = [_to_mp(ctx, x) for x in word.args]
    roots = []
    for x in xs:
        base = ctx.root(ctx.mpc(x), l)
        roots.append([base * ctx.expjpi(ctx.mpf(2 * j) / l) for j in range(l)])
    total = ctx.mpc(0)
    for ys in product(*roots):
        total += li(PolylogWord(word.exps, tuple(ys)), eps_tail, prec).value
    scale = ctx.mpf(l) ** (word.weight - word.depth)
    return abs(li(word, eps_tail, prec).value - scale * total)


# ---------------------------------------------------------------- regularization

@dataclass(frozen=True)
class LogPolynomial:
    """c_0 + c_1 L + ... + c_d L^d in L = log(eps)."""

    coeffs: tuple
    fit_residual: object = None
    reference: tuple | None = field(default=None)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, L):
        return sum(c * L ** i for i, c in enumerate(self.coeffs))


def all_ones_closed_form(m: int, eps, prec: int = 128):
    """(-log eps)^m / m!, the value of I_{1..1}(1:...:1:1-eps)."""
    ctx = _ctx(prec)
    return (-ctx.log(_to_mp(ctx, eps))) ** m / ctx.factorial(m)


def deform(word: PolylogWord, eps, route: str) -> PolylogWord:
    """Replace divergent trailing arguments by 1 - eps: all of them
    (``series``) or only the last one (``trailing``, the iterated-integral
    deformation)."""
    d = word.trailing_divergent()
    if d == 0:
        raise ValueError("word has no divergent trailing letters")
    x = 1 - eps
    args = list(word.args)
    if route == "series":
        for i in range(len(args) - d, len(args)):
            args[i] = x
    elif route == "trailing":
        args[-1] = x
    else:
        raise ValueError(f"unknown route {route!r}")
    return PolylogWord(word.exps, tuple(args))


def regularize(word: PolylogWord, eps_grid: Sequence, route: str = "trailing",
               eps_tail=Fraction(1, 10 ** 12), prec: int = 128) -> LogPolynomial:
    """Least-squares fit of the deformed word on the grid by a polynomial in
    log(eps) of degree equal to the number of divergent trailing letters."""
    ctx = _ctx(prec)
    d = word.trailing_divergent()
    grid = [_to_mp(ctx, e) for e in eps_grid]
    Ls = [ctx.log(e) for e in grid]
    if any(not 0 < e < 1 for e in grid):
        raise ValueError("grid values must lie in (0, 1)")
    if len(grid) < d + 1:
        raise ValueError(f"need at least {d + 1} grid points")
    if min(abs(a - b) for i, a in enumerate(Ls) for b in Ls[i + 1:]) < ctx.mpf("0.1"):
        raise ValueError("ill-conditioned grid: epsilon values too close")
    ys = []
    for e in eps_grid:
        e = e if isinstance(e, Fraction) else Fraction(e)
        ys.append(li(deform(word, e, route), eps_tail, prec).value)
    cplx = any(ctx.im(y) != 0 for y in ys)
    A = ctx.matrix([[L ** j for j in range(d + 1)] for L in Ls])
    b = ctx.matrix([y if cplx else ctx.re(y) for y in ys])
    if cplx:
        xr, res_r = ctx.qr_solve(A, ctx.matrix([ctx.re(y) for y in ys]))
        xi, res_i = ctx.qr_solve(A, ctx.matrix([ctx.im(y) for y in ys]))
        coeffs = tuple(ctx.mpc(xr[i], xi[i]) for i in range(d + 1))
        res = ctx.sqrt(res_r ** 2 + res_i ** 2)
    else:
        x, res = ctx.qr_solve(A, b)
        coeffs = tuple(x[i] for i in range(d + 1))
    ref = None
    m = word.depth
    if d == m and all(n == 1 for n in word.exps):
        ref = tuple(ctx.mpf(0) if j < m else ctx.mpf(-1) ** m / ctx.factorial(m) for j in range(m + 1))
    return LogPolynomial(coeffs, res, ref)
