"""Compositions, shuffles, quasi-shuffles and the t-polynomial algebra.

Group elements of mu_N are written additively as residues mod N.  A linear
form in the generating variables is a tuple of integer coefficients, one per
variable; a polynomial is a dict from exponent tuples to coefficients.

A nonhomogeneous word ``{g_0,...,g_m | s_0:...:s_m}`` stands for the
generating function

    sum_n {g_1,...,g_m}_n * prod_k (s_k - s_0)^(n_k - 1)

so the gauge s_0 = 0 is built in and only differences of forms matter.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Callable, Hashable, Iterable, Sequence

Form = tuple  # tuple[int, ...]
Poly = dict  # dict[tuple[int, ...], int]


@lru_cache(maxsize=None)
def compositions(w: int, m: int) -> tuple[tuple[int, ...], ...]:
    """All compositions of ``w`` into ``m`` positive parts, lexicographic."""
    if m < 1 or w < m:
        return ()
    if m == 1:
        return ((w,),)
    return tuple((a,) + rest for a in range(1, w - m + 2)
                 for rest in compositions(w - a, m - 1))


@lru_cache(maxsize=None)
def shuffles(k: int, l: int) -> tuple[tuple[int, ...], ...]:
    """Interleavings of (0..k-1) with (k..k+l-1) keeping both orders.

    Each result is the sequence sigma(1..k+l) written 0-based, so the word
    ``[v_sigma(1), ..., v_sigma(k+l)]`` is ``[v[i] for i in sigma]``.
    """
    n = k + l
    out = []
    for first in combinations(range(n), k):
        sigma = [0] * n
        a, b = iter(range(k)), iter(range(k, n))
        fs = set(first)
        for pos in range(n):
            sigma[pos] = next(a) if pos in fs else next(b)
        out.append(tuple(sigma))
    return tuple(out)


def _mul_letters(a, b):
    return (a[0] * b[0], a[1] + b[1])


def quasi_shuffle(u: Sequence, v: Sequence,
                  merge: Callable = _mul_letters) -> Counter:
    """Quasi-shuffle (stuffle) product of two words of (argument, exponent)
    letters, ordered by increasing summation index.

    Coincident indices merge letters with ``merge``; the default multiplies
    arguments and adds exponents.
    """
    u, v = tuple(u), tuple(v)

    @lru_cache(maxsize=None)
    def go(i: int, j: int) -> tuple:
        if i == len(u):
            return ((v[j:], 1),)
        if j == len(v):
            return ((u[i:], 1),)
        out = Counter()
        for w, c in go(i + 1, j):
            out[(u[i],) + w] += c
        for w, c in go(i, j + 1):
            out[(v[j],) + w] += c
        m = merge(u[i], v[j])
        for w, c in go(i + 1, j + 1):
            out[(m,) + w] += c
        return tuple(out.items())

    return Counter(dict(go(0, 0)))


def shuffle_product(u: Sequence, v: Sequence) -> Counter:
    """Plain shuffle of two words (no merge terms)."""
    u, v = tuple(u), tuple(v)
    out = Counter()
    for sigma in shuffles(len(u), len(v)):
        out[tuple((u + v)[i] for i in sigma)] += 1
    return out


# ---------------------------------------------------------------- polynomials

def poly_add(p: Poly, q: Poly, c: int = 1) -> Poly:
    out = dict(p)
    for e, x in q.items():
        y = out.get(e, 0) + c * x
        if y:
            out[e] = y
        else:
            out.pop(e, None)
    return out


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: dict = defaultdict(int)
    for e1, x in p.items():
        for e2, y in q.items():
            out[tuple(a + b for a, b in zip(e1, e2))] += x * y
    return {e: x for e, x in out.items() if x}


@lru_cache(maxsize=None)
def _linear_power(form: Form, e: int) -> tuple:
    n = len(form)
    if e == 0:
        return (((0,) * n, 1),)
    support = [i for i, a in enumerate(form) if a]
    out = {}

    def rec(idx: int, left: int, expo: list, coef: int):
        if idx == len(support) - 1:
            i = support[idx]
            expo[i] = left
            out[tuple(expo)] = coef * form[i] ** left
            expo[i] = 0
            return
        i = support[idx]
        for k in range(left + 1):
            expo[i] = k
            rec(idx + 1, left - k, expo, coef * comb(left, k) * form[i] ** k)
        expo[i] = 0

    if support:
        rec(0, e, [0] * n, 1)
    return tuple((x, c) for x, c in out.items() if c)


def linear_power(form: Form, e: int) -> Poly:
    """Expansion of ``(sum_i form[i] t_i)^e``."""
    return dict(_linear_power(tuple(form), e))


def form_sub(a: Form, b: Form) -> Form:
    return tuple(x - y for x, y in zip(a, b))


def form_add(a: Form, b: Form) -> Form:
    return tuple(x + y for x, y in zip(a, b))


def unit_form(i: int, n: int) -> Form:
    return tuple(int(j == i) for j in range(n))


def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total degree ``degree``, lexicographic."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    if nvars == 1:
        return ((degree,),)
    return tuple((a,) + rest for a in range(degree, -1, -1)
                 for rest in monomials(nvars - 1, degree - a))


def divided_power_substitute(a: tuple[int, ...], rows: Sequence[Sequence[int]]) -> dict:
    """Coordinates, in the divided-power basis t^[b] = t^b/b!, of
    ``prod_i (sum_j rows[i][j] t_j)^[a_i]``.  All coefficients are integers."""
    n = len(a)
    out: Poly = {(0,) * n: 1}
    den = 1
    for i, ai in enumerate(a):
        if ai:
            out = poly_mul(out, linear_power(tuple(rows[i]), ai))
            den *= factorial(ai)
    res = {}
    for e, x in out.items():
        for k in e:
            x *= factorial(k)
        q, r = divmod(x, den)
        assert r == 0
        res[e] = q
    return res


# ---------------------------------------------------------------- dihedral words

@dataclass(frozen=True)
class NWord:
    """Nonhomogeneous word {g_0,...,g_m | s_0:...:s_m} with sum g_i = 0 mod N."""

    N: int
    g: tuple
    s: tuple

    def __post_init__(self):
        if len(self.g) != len(self.s):
            raise ValueError("residues and forms differ in length")
        if sum(self.g) % self.N:
            raise ValueError("product of group elements is not 1")
        object.__setattr__(self, "g", tuple(x % self.N for x in self.g))
        object.__setattr__(self, "s", tuple(tuple(f) for f in self.s))

    @property
    def depth(self) -> int:
        return len(self.g) - 1


@dataclass(frozen=True)
class HWord:
    """Homogeneous word {g_0:...:g_m | t_0,...,t_m} with sum t_i = 0."""

    N: int
    g: tuple
    t: tuple

    def __post_init__(self):
        if len(self.g) != len(self.t):
            raise ValueError("residues and forms differ in length")
        total = tuple(sum(c) for c in zip(*self.t))
        if any(total):
            raise ValueError("forms do not sum to zero")
        object.__setattr__(self, "g", tuple(x % self.N for x in self.g))
        object.__setattr__(self, "t", tuple(tuple(f) for f in self.t))

    @property
    def depth(self) -> int:
        return len(self.g) - 1


def to_nonhomogeneous(h: HWord) -> NWord:
    """{g_0:...:g_m | t_0,...,t_m} -> {g_0^-1 g_1, ..., g_m^-1 g_0 | t_0 : t_0+t_1 : ... }."""
    m1 = len(h.g)
    g = tuple(h.g[(i + 1) % m1] - h.g[i] for i in range(m1))
    s, acc = [], tuple(0 for _ in h.t[0])
    for f in h.t:
        acc = form_add(acc, f)
        s.append(acc)
    return NWord(h.N, g, tuple(s))


def to_homogeneous(x: NWord) -> HWord:
    """{g_0,...,g_m | s_0:...:s_m} -> {g_0 : g_0g_1 : ... | s_1-s_0, ..., s_0-s_m}."""
    m1 = len(x.g)
    g, acc = [], 0
    for a in x.g:
        acc += a
        g.append(acc)
    t = tuple(form_sub(x.s[(i + 1) % m1], x.s[i]) for i in range(m1))
    return HWord(x.N, tuple(g), t)


@lru_cache(maxsize=None)
def _expand_diffs(diffs: tuple, degree: int) -> tuple:
    """For forms d_1..d_m: monomial -> {n: coef} for sum_n prod d_k^(n_k-1)."""
    m = len(diffs)
    out: dict = defaultdict(dict)
    for n in compositions(degree + m, m):
        p = {(0,) * len(diffs[0]): 1}
        for d, nk in zip(diffs, n):
            if nk > 1:
                p = poly_mul(p, linear_power(d, nk - 1))
        for e, c in p.items():
            out[e][n] = out[e].get(n, 0) + c
    return tuple((e, tuple(v.items())) for e, v in out.items())


def expand(word: NWord, degree: int) -> dict:
    """Degree-``degree`` part of the generating function of ``word``:
    ``{monomial: {(alphas, n): coefficient}}`` with alphas = (g_1..g_m)."""
    diffs = tuple(form_sub(f, word.s[0]) for f in word.s[1:])
    alphas = word.g[1:]
    return {e: {(alphas, n): c for n, c in v} for e, v in _expand_diffs(diffs, degree)}


def extract_coefficients(identity: Iterable[tuple[int, NWord]], w: int, m: int,
                         index: Callable[[Hashable], int] | dict) -> list[dict]:
    """Turn ``sum coef * word == 0`` into one linear relation per monomial.

    ``index`` maps a generator key ``(alphas, n)`` to a column.  Returns the
    nonzero rows only.
    """
    degree = w - m
    if degree < 0:
        raise ValueError("weight below depth")
    get = index.__getitem__ if isinstance(index, dict) else index
    acc: dict = defaultdict(lambda: defaultdict(int))
    for coef, word in identity:
        if word.depth != m:
            raise ValueError("word depth differs from m")
        for e, terms in expand(word, degree).items():
            if sum(e) != degree:
                raise ValueError("degree overflow")
            row = acc[e]
            for key, c in terms.items():
                row[get(key)] += coef * c
    rows = []
    for e in sorted(acc):
        r = {c: x for c, x in acc[e].items() if x}
        if r:
            rows.append(r)
    return rows
