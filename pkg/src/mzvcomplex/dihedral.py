"""The bigraded dihedral Lie coalgebra D_{w,m}(mu_N).

Generators are ``(alphas, n)`` with ``alphas`` in (Z/N)^m and ``n`` a
composition of w into m parts; the implicit alpha_0 is ``-sum(alphas)``.
Every relation is written as an identity between generating functions of
nonhomogeneous words in the variables t_1..t_m (t_0 = 0) and turned into
rows by coefficient extraction.  Dihedral symmetry is imposed by explicit
rows rather than by choosing orbit representatives, so its consistency with
the shuffle rows is part of what the rank computation checks.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .linalg import Quotient, SparseMatrix, rank
from .words import (HWord, NWord, compositions, expand, extract_coefficients,
                    form_add, poly_mul, shuffles, to_nonhomogeneous, unit_form)

FAMILIES = ("shuffle", "hshuffle", "cyclic", "reflection", "distribution", "inversion")


@dataclass(frozen=True, order=True)
class DihedralWord:
    """A generator {zeta^a_1, ..., zeta^a_m}_{n_1,...,n_m}."""

    N: int
    alphas: tuple
    exps: tuple

    def __post_init__(self):
        if len(self.alphas) != len(self.exps) or not self.exps:
            raise ValueError("depth mismatch")
        if any(n < 1 for n in self.exps):
            raise ValueError("exponents must be positive")
        object.__setattr__(self, "alphas", tuple(a % self.N for a in self.alphas))

    @property
    def weight(self) -> int:
        return sum(self.exps)

    @property
    def depth(self) -> int:
        return len(self.exps)

    @property
    def key(self) -> tuple:
        return (self.alphas, self.exps)

    def frame(self) -> NWord:
        """The generating-function word this generator is a coefficient of."""
        return frame(self.N, self.alphas)

    def __str__(self) -> str:
        a = ",".join(map(str, self.alphas))
        n = ",".join(map(str, self.exps))
        return f"{{{a}}}_{{{n}}}"


def frame(N: int, alphas: Sequence[int]) -> NWord:
    """{alpha_0, alpha_1, ..., alpha_m | 0 : t_1 : ... : t_m}."""
    m = len(alphas)
    forms = ((0,) * m,) + tuple(unit_form(i, m) for i in range(m))
    return NWord(N, (-sum(alphas),) + tuple(alphas), forms)


def rotate(x: NWord, k: int = 1) -> NWord:
    n = len(x.g)
    return NWord(x.N, tuple(x.g[(i + k) % n] for i in range(n)),
                 tuple(x.s[(i + k) % n] for i in range(n)))


def reflect(x: NWord) -> NWord:
    return NWord(x.N, x.g[::-1], x.s[::-1])


def canonicalize(x: NWord) -> tuple[NWord, int]:
    """Minimum of the dihedral orbit of a generating-function word.

    Images are compared by residues, ties broken by the positions the
    entries came from, so the untouched word wins among equal residues.  The
    sign is the character value, (-1)^(m+1) on reflections.
    """
    m = x.depth
    n = m + 1
    best = None
    for refl in (False, True):
        order = list(range(n))[::-1] if refl else list(range(n))
        for k in range(n):
            idx = tuple(order[(i + k) % n] for i in range(n))
            key = (tuple(x.g[i] for i in idx), idx)
            if best is None or key < best[0]:
                best = (key, refl)
    idx, refl = best[0][1], best[1]
    word = NWord(x.N, tuple(x.g[i] for i in idx), tuple(x.s[i] for i in idx))
    return word, (-1) ** (m + 1) if refl else 1


@lru_cache(maxsize=None)
def generators(N: int, w: int, m: int) -> tuple:
    return tuple((a, n) for a in product(range(N), repeat=m)
                 for n in compositions(w, m))


@lru_cache(maxsize=None)
def generator_index(N: int, w: int, m: int) -> dict:
    return {k: i for i, k in enumerate(generators(N, w, m))}


def _divisors(N: int) -> list[int]:
    return [l for l in range(2, N + 1) if N % l == 0]


def relation_identities(N: int, m: int, families: Iterable[str] = FAMILIES,
                        w: int | None = None):
    """Yield ``(family, identity)`` with identity a list of (coef, NWord).

    ``w`` is needed only for the exception in the distribution family.
    """
    families = set(families)
    e = [unit_form(i, m) for i in range(m)]
    zero = (0,) * m
    tuples = list(product(range(N), repeat=m))
    if "shuffle" in families:
        for k in range(1, m):
            for a in tuples:
                ident = []
                for sig in shuffles(k, m - k):
                    g = tuple(a[i] for i in sig)
                    ident.append((1, NWord(N, (-sum(g),) + g, (zero,) + tuple(e[i] for i in sig))))
                yield "shuffle", ident
    if "hshuffle" in families:
        t0 = tuple(-1 for _ in range(m))
        for k in range(1, m):
            for h in tuples:
                ident = []
                for sig in shuffles(k, m - k):
                    hw = HWord(N, (0,) + tuple(h[i] for i in sig), (t0,) + tuple(e[i] for i in sig))
                    ident.append((1, to_nonhomogeneous(hw)))
                yield "hshuffle", ident
    for a in tuples:
        x = frame(N, a)
        if "cyclic" in families:
            yield "cyclic", [(1, x), (-1, rotate(x))]
        if "reflection" in families:
            yield "reflection", [(1, x), (-((-1) ** (m + 1)), reflect(x))]
        if "inversion" in families:
            neg = NWord(N, tuple(-g for g in x.g), x.s)
            yield "inversion", [(1, neg), (-1, NWord(N, x.g, tuple(tuple(-c for c in f) for f in x.s)))]
    if "distribution" in families:
        for l in _divisors(N):
            step = N // l
            lifts = list(product(range(l), repeat=m))
            for a in tuples:
                if m == 1 and w == 1 and (l * a[0]) % N == 0:
                    continue  # {1}_1 = sum {y}_1 is not imposed
                x = frame(N, a)
                ident = [(1, NWord(N, tuple(l * g for g in x.g), x.s))]
                scaled = tuple(tuple(l * c for c in f) for f in x.s)
                for ks in lifts:
                    b = tuple(ai + k * step for ai, k in zip(a, ks))
                    ident.append((-1, NWord(N, (-sum(b),) + b, scaled)))
                yield "distribution", ident


def relation_rows(N: int, w: int, m: int, families: Iterable[str] = FAMILIES):
    index = generator_index(N, w, m)
    for fam, ident in relation_identities(N, m, families, w):
        for row in extract_coefficients(ident, w, m, index):
            yield fam, row


def relation_matrix(N: int, w: int, m: int, families: Iterable[str] = FAMILIES) -> SparseMatrix:
    rows = [r for _, r in relation_rows(N, w, m, families)]
    return SparseMatrix(rows, len(generators(N, w, m)))


def dimension_formula(w: int, m: int) -> int | None:
    """Closed-form dimension of D_{w,m}(mu_1) in depths 1, 2, 3."""
    if (w + m) % 2:
        return 0
    if m == 1:
        return 1
    if m == 2:
        return (w - 2) // 6
    if m == 3:
        # the quoted floor gives -1 at w=3; the space is zero there
        return max(0, ((w - 3) ** 2 - 1) // 48)
    return None


# ---------------------------------------------------------------- quotient spaces

class DihedralSpace:
    """D_{w,m}(mu_N) as generators modulo relations, with projections."""

    def __init__(self, N: int, w: int, m: int, quotient: Quotient | None = None):
        self.N, self.w, self.m = N, w, m
        self.gens = generators(N, w, m)
        self.index = generator_index(N, w, m)
        if quotient is None:
            quotient = Quotient.build(len(self.gens), (r for _, r in relation_rows(N, w, m)))
        self.quotient = quotient
        self.basis = [self.gens[c] for c in quotient.basis]
        self._proj: dict = {}

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def rank(self) -> int:
        return len(self.gens) - self.dim

    def project(self, key) -> dict:
        """Quotient coordinates of a single generator."""
        p = self._proj.get(key)
        if p is None:
            p = self.quotient.coords({self.index[key]: 1})
            self._proj[key] = p
        return p

    def project_vector(self, v: dict) -> dict:
        return self.quotient.coords({self.index[k]: c for k, c in v.items()})


_SPACE_CACHE: dict = {}


def space(N: int, w: int, m: int) -> DihedralSpace:
    key = (N, w, m)
    sp = _SPACE_CACHE.get(key)
    if sp is None:
        from . import cache
        q = cache.load_quotient(N, w, m)
        sp = DihedralSpace(N, w, m, q)
        if q is None:
            cache.store_quotient(N, w, m, sp.quotient)
        _SPACE_CACHE[key] = sp
    return sp


def dimension(N: int, w: int, m: int) -> int:
    if w < m or m < 1:
        return 0
    return space(N, w, m).dim


# ---------------------------------------------------------------- cobracket

def _weight(key) -> int:
    return sum(key[1])


def _cut(x: NWord, i: int, j: int) -> tuple[NWord, NWord]:
    """The (i, j) term of the cobracket: cut the circle at arc j and point j+i."""
    m1 = len(x.g)
    m = m1 - 1
    ga = tuple(x.g[(j + i + 1 + r) % m1] for r in range(m - i))
    sa = tuple(x.s[(j + i + 1 + r) % m1] for r in range(m - i + 1))
    gb = tuple(x.g[(j + 1 + r) % m1] for r in range(i))
    sb = tuple(x.s[(j + r) % m1] for r in range(i + 1))
    a = NWord(x.N, ga + (-sum(ga),), sa)
    b = NWord(x.N, (-sum(gb),) + gb, sb)
    return a, b


def cobracket_frame(x: NWord, degree: int) -> dict:
    """Degree-``degree`` part of delta(x) as an unsymmetrized tensor:
    ``{monomial: {(keyA, keyB): coef}}`` with A the first wedge factor."""
    m = x.depth
    out: dict = defaultdict(lambda: defaultdict(int))
    for i in range(1, m):
        for j in range(m + 1):
            a, b = _cut(x, i, j)
            for da in range(degree + 1):
                ea, eb = expand(a, da), expand(b, degree - da)
                for ma, ta in ea.items():
                    for mb, tb in eb.items():
                        mono = tuple(p + q for p, q in zip(ma, mb))
                        slot = out[mono]
                        for ka, ca in ta.items():
                            for kb, cb in tb.items():
                                slot[(ka, kb)] += ca * cb
    return out


@lru_cache(maxsize=None)
def _cobracket_alphas(N: int, w: int, alphas: tuple) -> dict:
    m = len(alphas)
    full = cobracket_frame(frame(N, alphas), w - m)
    return {tuple(c + 1 for c in mono): {k: v for k, v in t.items() if v}
            for mono, t in full.items()}


def cobracket_tensor(N: int, key) -> dict:
    """delta of a generator as ``{(keyA, keyB): coef}`` (tensor order)."""
    alphas, n = key
    return _cobracket_alphas(N, sum(n), tuple(alphas)).get(tuple(n), {})


def wedge_sort(items: Sequence) -> tuple[int, tuple]:
    """Sort wedge factors, returning (sign, sorted); sign 0 on a repeat."""
    items = list(items)
    sign = 1
    for i in range(1, len(items)):  # insertion sort, counting swaps
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b:
            return 0, tuple(items)
    return sign, tuple(items)


def _slot(N: int, key) -> dict:
    """Quotient coordinates of a generator tagged by its bidegree."""
    w, m = _weight(key), len(key[0])
    sp = space(N, w, m)
    return {(w, m, i): c for i, c in sp.project(key).items()}


def wedge_vectors(vectors: Sequence[dict]) -> dict:
    """Wedge product of vectors over slot labels, in sorted-tuple coordinates."""
    out: dict = {(): Fraction(1)}
    for v in vectors:
        nxt: dict = defaultdict(Fraction)
        for t, c in out.items():
            for s, x in v.items():
                if s in t:
                    continue
                nxt[t + (s,)] += c * x
        out = nxt
    res: dict = defaultdict(Fraction)
    for t, c in out.items():
        sgn, st = wedge_sort(t)
        if sgn:
            res[st] += sgn * c
    return {t: c for t, c in res.items() if c}


def cobracket(N: int, element: dict) -> dict:
    """delta of a combination ``{key: coef}`` of generators, projected to
    Lambda^2 of the quotient; keys of the result are sorted slot pairs."""
    out: dict = defaultdict(Fraction)
    for key, c in element.items():
        for (ka, kb), x in cobracket_tensor(N, key).items():
            for t, y in wedge_vectors([_slot(N, ka), _slot(N, kb)]).items():
                out[t] += c * x * y
    return {t: c for t, c in out.items() if c}


def cobracket_symmetry_defect(N: int, element: dict) -> dict:
    """delta + tau(delta) in (quotient)^(x)2 for the unsymmetrized tensor."""
    out: dict = defaultdict(Fraction)
    for key, c in element.items():
        for (ka, kb), x in cobracket_tensor(N, key).items():
            pa, pb = _slot(N, ka), _slot(N, kb)
            for sa, ya in pa.items():
                for sb, yb in pb.items():
                    out[(sa, sb)] += c * x * ya * yb
                    out[(sb, sa)] += c * x * ya * yb
    return {t: c for t, c in out.items() if c}


# ---------------------------------------------------------------- Lambda* complex

def _bidegrees(w: int, m: int, k: int, N: int) -> list:
    """Sorted k-tuples of bidegrees (w_i, m_i) with nonzero spaces summing to (w, m)."""
    if k == 0:
        return [()] if (w, m) == (0, 0) else []
    out = []
    for mm in range(1, m - k + 2):
        for ww in range(mm, w - (k - 1) + 1):
            if space(N, ww, mm).dim == 0:
                continue
            for rest in _bidegrees(w - ww, m - mm, k - 1, N):
                if not rest or (ww, mm) <= rest[0]:
                    out.append(((ww, mm),) + rest)
    return out


@lru_cache(maxsize=None)
def wedge_basis(N: int, w: int, m: int, k: int) -> tuple:
    """Basis of (Lambda^k D)_{w,m}: strictly increasing tuples of slots."""
    basis = []
    for degs in _bidegrees(w, m, k, N):
        pools = [[(a, b, i) for i in range(space(N, a, b).dim)] for a, b in degs]

        def rec(idx, prev, acc):
            if idx == len(pools):
                basis.append(tuple(acc))
                return
            for s in pools[idx]:
                if prev is None or s > prev:
                    rec(idx + 1, s, acc + [s])

        rec(0, None, [])
    return tuple(sorted(set(basis)))


@lru_cache(maxsize=None)
def _delta_slot(N: int, w: int, m: int, i: int) -> dict:
    """delta of the i-th quotient basis element of D_{w,m}."""
    sp = space(N, w, m)
    return cobracket(N, {sp.basis[i]: 1})


def _d_image(N: int, t: tuple) -> dict:
    out: dict = defaultdict(Fraction)
    for pos, s in enumerate(t):
        sign = -1 if pos % 2 else 1
        for pair, c in _delta_slot(N, *s).items():
            sgn, st = wedge_sort(t[:pos] + pair + t[pos + 1:])
            if sgn:
                out[st] += sign * sgn * c
    return {k: v for k, v in out.items() if v}


def cochain_complex(N: int, w: int, m: int) -> list[SparseMatrix]:
    """Differentials d_k : (Lambda^k D)_{w,m} -> (Lambda^(k+1) D)_{w,m},
    k = 1..m; row i of d_k is the image of the i-th basis element."""
    mats = []
    for k in range(1, m + 1):
        src = wedge_basis(N, w, m, k)
        tgt = wedge_basis(N, w, m, k + 1)
        pos = {t: i for i, t in enumerate(tgt)}
        rows = [{pos[s]: c for s, c in _d_image(N, t).items()} for t in src]
        mats.append(SparseMatrix(rows, len(tgt)))
    return mats


def compose(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Row-image convention: apply ``a`` then ``b``."""
    rows = []
    for r in a.rows:
        out: dict = defaultdict(Fraction)
        for j, x in r.items():
            for k, y in b.rows[j].items():
                out[k] += x * y
        rows.append(out)
    return SparseMatrix(rows, b.ncols)


def complex_dims(N: int, w: int, m: int) -> list[int]:
    return [len(wedge_basis(N, w, m, k)) for k in range(1, m + 1)]


def cohomology_dims(N: int, w: int, m: int) -> list[int]:
    mats = cochain_complex(N, w, m)
    dims = complex_dims(N, w, m)
    ranks = [rank(M) for M in mats]
    return [dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(m)]


def euler_characteristic(N: int, w: int, m: int) -> int:
    return sum((-1) ** k * d for k, d in enumerate(complex_dims(N, w, m)))


def euler_oracle(w: int) -> int:
    """Minus the t^w coefficient of 1/((1-t^4)(1-t^6)) - 1."""
    if w == 0:
        return 0
    return -sum(1 for a in range(0, w + 1, 4) if (w - a) % 6 == 0)


# ---------------------------------------------------------------- Lie coalgebra axioms

def relation_kill_residual(N: int, w: int, m: int) -> int:
    """Relation rows whose cobracket is nonzero (0: delta is well defined)."""
    gens = generators(N, w, m)
    bad = 0
    for _, row in relation_rows(N, w, m):
        if cobracket(N, {gens[c]: x for c, x in row.items()}):
            bad += 1
    return bad


def co_antisymmetry_residual(N: int, w: int, m: int) -> int:
    """Basis elements whose cobracket, embedded in the tensor square by
    a ^ b -> a (x) b - b (x) a, is not negated by the flip."""
    sp = space(N, w, m)
    bad = 0
    for i in range(sp.dim):
        t: dict = defaultdict(Fraction)
        for (a, b), c in _delta_slot(N, w, m, i).items():
            t[(a, b)] += c
            t[(b, a)] -= c
        if any(t[(a, b)] + t.get((b, a), 0) for (a, b) in list(t)):
            bad += 1
    return bad


def co_jacobi_residual(N: int, w: int, m: int) -> int:
    """Basis elements x of D_{w,m} with (delta (x) 1 - 1 (x) delta) delta x
    nonzero in Lambda^3, i.e. nonzero rows of d_2 d_1."""
    mats = cochain_complex(N, w, m)
    if len(mats) < 2:
        return 0
    return sum(1 for r in compose(mats[0], mats[1]).rows if r)
