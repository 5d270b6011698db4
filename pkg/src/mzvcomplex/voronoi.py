"""Voronoi cells of type A_m as oriented symbols, and the maps psi2 / psi3
from the rank-2 and rank-3 modular complexes.

A cell phi(l_1, ..., l_n) is recorded by its vertex list.  Vertices are
primitive vectors taken up to sign (first nonzero entry positive) and the
orientation is the parity of the permutation sorting the list.  All cells
met here are simplices, so the boundary is the alternating sum of facets.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import SparseMatrix, rank
from .modular import (BlockWedge, _parity, det, differential, notation_convert,
                      shuffle_rows, substitute, vadd, vneg, vsum)

Vector = tuple


# ---------------------------------------------------------------- quadratic forms

@dataclass(frozen=True)
class QuadForm:
    """Symmetric matrix of a quadratic form x -> x^T G x."""

    gram: tuple

    def __init__(self, gram: Sequence[Sequence[object]]):
        g = tuple(tuple(Fraction(x) for x in row) for row in gram)
        n = len(g)
        if any(len(r) != n for r in g) or any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be square and symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __call__(self, x: Sequence[int]) -> Fraction:
        g = self.gram
        return sum((g[i][j] * x[i] * x[j] for i in range(self.dim) for j in range(self.dim)), Fraction(0))

    def pivots(self) -> list[Fraction]:
        """Pivots of symmetric Gaussian elimination (all > 0 iff positive definite)."""
        a = [list(r) for r in self.gram]
        n = self.dim
        out = []
        for c in range(n):
            p = a[c][c]
            out.append(p)
            if p == 0:
                break
            for r in range(c + 1, n):
                f = a[r][c] / p
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
        return out

    def is_positive_definite(self) -> bool:
        p = self.pivots()
        return len(p) == self.dim and all(x > 0 for x in p)

    def inverse_diagonal(self) -> list[Fraction]:
        n = self.dim
        a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.gram)]
        for c in range(n):
            p = next(r for r in range(c, n) if a[r][c])
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [x / piv for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return [a[i][n + i] for i in range(n)]


def root_form(m: int) -> QuadForm:
    """Gram matrix of the A_m root lattice in a basis of simple roots."""
    return QuadForm([[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(m)]
                     for i in range(m)])


def minimal_vectors(q: QuadForm, bound: int) -> set[Vector]:
    """Nonzero lattice vectors attaining the minimum of ``q``.

    The search box is ``|x_i| <= bound``.  Once a candidate minimum mu is
    found, every vector with q(x) <= mu satisfies x_i^2 <= mu (G^-1)_ii; if
    the box is smaller than that the shell may be incomplete and we raise.
    """
    if not q.is_positive_definite():
        raise ValueError("form is not positive definite")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    n = q.dim
    best, found = None, set()
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(x):
            continue
        v = q(x)
        if best is None or v < best:
            best, found = v, {x}
        elif v == best:
            found.add(x)
    for i, gi in enumerate(q.inverse_diagonal()):
        need = best * gi
        r = isqrt(need.numerator // need.denominator)
        while (r + 1) ** 2 <= need:
            r += 1
        if r > bound:
            raise ValueError(f"bound {bound} too small: coordinate {i} may reach {r}")
    return found


def perfect_form(vertices: Sequence[Vector]) -> QuadForm:
    """The form F with F(l) = 1 on every vertex; needs m(m+1)/2 vertices
    whose squares are independent."""
    m = len(vertices[0])
    pairs = [(i, j) for i in range(m) for j in range(i, m)]
    if len(vertices) != len(pairs):
        raise ValueError("need exactly m(m+1)/2 vertices")
    a = [[Fraction(l[i] * l[j] * (1 if i == j else 2)) for i, j in pairs] + [Fraction(1)]
         for l in vertices]
    n = len(pairs)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ValueError("vertex squares are dependent")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    sol = {pq: a[k][n] for k, pq in enumerate(pairs)}
    return QuadForm([[sol[(min(i, j), max(i, j))] for j in range(m)] for i in range(m)])


# ---------------------------------------------------------------- cells

def normalize_vector(v: Sequence[int]) -> Vector:
    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"{v} is not primitive")
    for x in v:
        if x:
            return v if x > 0 else vneg(v)
    raise ValueError("zero vector")


@dataclass(frozen=True)
class VCell:
    """Oriented cell phi(order[0], ..., order[-1])."""

    order: tuple

    def __init__(self, vectors: Iterable[Sequence[int]]):
        order = tuple(normalize_vector(v) for v in vectors)
        if len(set(order)) != len(order):
            raise ValueError("repeated vertex")
        object.__setattr__(self, "order", order)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.order)

    @property
    def dim(self) -> int:
        return len(self.order) - 1

    def normalized(self) -> tuple[tuple, int]:
        """(sorted vertex tuple, orientation sign)."""
        perm = sorted(range(len(self.order)), key=lambda i: self.order[i])
        return tuple(self.order[i] for i in perm), _parity(perm)

    def rank(self) -> int:
        return _rank(self.order)

    def is_simplicial(self) -> bool:
        """The rank-one forms phi(l) are linearly independent."""
        m = len(self.order[0])
        pairs = [(i, j) for i in range(m) for j in range(i, m)]
        rows = ({k: l[i] * l[j] for k, (i, j) in enumerate(pairs)} for l in self.order)
        return rank(SparseMatrix(rows, len(pairs))) == len(self.order)


Chain = dict  # sorted vertex tuple -> int


def chain(terms: Iterable[tuple[int, Iterable[Sequence[int]]]]) -> Chain:
    """Formal sum of oriented cells ``[(coef, vectors), ...]``."""
    out: dict = defaultdict(int)
    for c, vs in terms:
        key, s = VCell(vs).normalized()
        out[key] += c * s
    return {k: v for k, v in out.items() if v}


def chain_add(a: Mapping, b: Mapping, c: int = 1) -> Chain:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _rank(vs: tuple) -> int:
    m = len(vs[0])
    return rank(SparseMatrix(({i: x for i, x in enumerate(v)} for v in vs), m))


@lru_cache(maxsize=None)
def _simplicial(key: tuple) -> bool:
    return VCell(key).is_simplicial()


def boundary(c: Mapping) -> Chain:
    """Alternating sum of facets, dropping those of rank below m (they lie
    at infinity and are not cells).  Keys stay sorted after deleting a vertex."""
    out: dict = defaultdict(int)
    for key, x in c.items():
        if not _simplicial(key):
            raise ValueError(f"non-simplicial cell {key}")
        m = len(key[0])
        for i in range(len(key)):
            f = key[:i] + key[i + 1:]
            if _rank(f) == m:
                out[f] += (-1) ** i * x
    return {k: v for k, v in out.items() if v}


def am_vertices(basis: Sequence[Vector]) -> list[Vector]:
    """Cyclic interval sums v_i + ... + v_j of (v_1, ..., v_m, v_m+1 = -sum),
    excluding the full circle, up to sign: m(m+1)/2 vectors.

    Ordered as v_1..v_m+1 followed by longer intervals starting at v_1, v_2, ...
    (for m = 3: v1, v2, v3, v4, v12, v23).
    """
    m = len(basis)
    v = [tuple(b) for b in basis] + [vneg(vsum(basis, m))]
    out, seen = [], set()
    for length in range(1, m + 1):
        for i in range(m + 1):
            s = vsum((v[(i + k) % (m + 1)] for k in range(length)), m)
            n = normalize_vector(s)
            if n not in seen:
                seen.add(n)
                out.append(s)
    return out


def am_cell(basis: Sequence[Vector]) -> VCell:
    if abs(det(basis)) != 1:
        raise ValueError("not a lattice basis")
    return VCell(am_vertices(basis))


# ---------------------------------------------------------------- psi maps

def _minus_sum(*vs: Vector) -> Vector:
    return vneg(vsum(vs, len(vs[0])))


def psi(g: BlockWedge) -> Chain:
    """psi2 (m = 2) or psi3 (m = 3) of a block wedge, extended by the
    antisymmetry of the wedge for blocks out of the displayed order."""
    m = len(g.vectors)
    if m != len(g.vectors[0]) or m not in (2, 3):
        raise ValueError("psi is defined for rank 2 and 3 only")
    sizes = g.sizes
    s = g.sign
    if sorted(sizes) == [1] * m:
        return chain([(s, g.vectors)])
    if sizes == (m,):
        (b,) = g.blocks
        if m == 2:
            return chain([(s, (b[0], b[1], _minus_sum(*b)))])
        v1, v2, v3 = b
        v4 = _minus_sum(v1, v2, v3)
        return chain([(s, (v1, v2, v3, v4, vadd(v1, v2))),
                       (-s, (v1, v2, v3, v4, vadd(v2, v3)))])
    if sorted(sizes) == [1, 2]:
        if sizes == (1, 2):
            s = -s
            (c,), (a, b) = g.blocks
        else:
            (a, b), (c,) = g.blocks
        return chain([(s, (a, b, _minus_sum(a, b), c))])
    raise ValueError(f"unsupported block shape {sizes}")


def psi2(g: BlockWedge) -> Chain:
    if len(g.vectors) != 2:
        raise ValueError("psi2 needs rank 2")
    return psi(g)


def psi3(g: BlockWedge) -> Chain:
    if len(g.vectors) != 3:
        raise ValueError("psi3 needs rank 3")
    return psi(g)


def psi_of(terms: Mapping) -> Chain:
    """psi of a formal sum ``{blocks: coef}`` as returned by ``differential``."""
    out: Chain = {}
    for blocks, c in terms.items():
        out = chain_add(out, psi(BlockWedge(blocks)), c)
    return out


def first_shuffle_image(basis: Sequence[Vector]) -> Chain:
    """psi3 of s(v_1 | v_2, v_3) = [v1,v2,v3] + [v2,v1,v3] + [v2,v3,v1]."""
    v1, v2, v3 = basis
    out: Chain = {}
    for b in ((v1, v2, v3), (v2, v1, v3), (v2, v3, v1)):
        out = chain_add(out, psi3(BlockWedge([b])))
    return out


def second_shuffle_image(u: Sequence[Vector]) -> Chain:
    """psi3 of s(u_1 | u_2 : u_3) = [u1:u2:u3] + [u2:u1:u3] + [u2:u3:u1]."""
    u1, u2, u3 = u
    out: Chain = {}
    for b in ((u1, u2, u3), (u2, u1, u3), (u2, u3, u1)):
        out = chain_add(out, psi3(BlockWedge([notation_convert("colon", b)])))
    return out


def second_shuffle_simplex(u: Sequence[Vector]) -> Chain:
    """The 5-simplex phi(v1, v2, v3, v4, v12, v23) for v1 = u2 - u1,
    v2 = u3 - u2, v3 = -u3."""
    return chain([(1, am_vertices(notation_convert("colon", u)))])


# ---------------------------------------------------------------- enumeration

def bases(m: int, bound: int) -> list[tuple]:
    """All ordered lattice bases of Z^m with entries in [-bound, bound]."""
    r = np.arange(-bound, bound + 1)
    vecs = np.array([v for v in itertools.product(r, repeat=m) if any(v)], dtype=np.int64)
    n = len(vecs)
    if m == 2:
        d = vecs[:, None, 0] * vecs[None, :, 1] - vecs[:, None, 1] * vecs[None, :, 0]
    elif m == 3:
        cr = np.cross(vecs[:, None, :], vecs[None, :, :])  # (n, n, 3)
        d = np.einsum("il,jkl->ijk", vecs, cr)
    else:
        raise ValueError("only m = 2, 3 are enumerated")
    idx = np.argwhere(np.abs(d) == 1)
    vt = [tuple(int(x) for x in v) for v in vecs]
    assert n == len(vt)
    return [tuple(vt[i] for i in row) for row in idx]


def _det3(a, b, c) -> int:
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _signed_zero_sum(vs: Sequence[Vector]) -> bool:
    m = len(vs[0])
    return any(not any(vsum((v if e > 0 else vneg(v) for v, e in zip(vs, es)), m))
               for es in itertools.product((1, -1), repeat=len(vs)))


def classify_face(vs: Sequence[Vector]) -> str:
    """Type of a 3-cell phi(l1, l2, l3, l4) in rank 3.

    ``generic``: every triple is a basis (then the l's sum to zero up to
    signs, as for v1, v2, v3, v4).  ``special``: exactly one triple is
    dependent, it sums to zero up to signs and the remaining vector completes
    a pair from it to a basis (as for v1, v2, -v12, v3).
    """
    triples = list(itertools.combinations(range(4), 3))
    dets = {t: _det3(*(vs[i] for i in t)) for t in triples}
    if all(abs(d) == 1 for d in dets.values()):
        return "generic" if _signed_zero_sum(vs) else "other"
    bad = [t for t, d in dets.items() if d == 0]
    if len(bad) == 1:
        t = bad[0]
        (rest,) = set(range(4)) - set(t)
        if _signed_zero_sum([vs[i] for i in t]) and \
                all(abs(dets[tuple(sorted((i, j, rest)))]) == 1 for i, j in itertools.combinations(t, 2)):
            return "special"
    return "other"


def _vset(vs: Iterable[Sequence[int]]) -> frozenset:
    return frozenset(normalize_vector(v) for v in vs)


def generic_faces(simplex: Iterable[Vector]) -> list[frozenset]:
    return [frozenset(f) for f in itertools.combinations(sorted(simplex), 4)
            if classify_face(f) == "generic"]


def containing_simplices(cell: Sequence[Vector]) -> list[frozenset]:
    """The 5-simplices through a generic 3-cell, one per dihedral order of its
    four vectors (signed so that they sum to zero)."""
    vs = [tuple(v) for v in cell]
    for es in itertools.product((1, -1), repeat=3):
        w = [v if e > 0 else vneg(v) for v, e in zip(vs[:3], es)] + [vs[3]]
        if not any(vsum(w, 3)):
            break
    else:
        raise ValueError("not a generic 3-cell")
    a, b, c, d = w
    orders = [(a, b, c, d), (b, a, c, d), (b, c, a, d)]
    return [_vset(am_vertices(o[:3])) for o in orders]


def coker_observations(bound: int) -> dict:
    """Incidences between generic 3-cells and 5-simplices of type A_3 over
    every basis with entries in [-bound, bound].

    A generic cell is counted when all its vertices lie in the box; the
    simplices through it are then all generated by boxed bases, so the
    incidence count is complete.
    """
    bs = bases(3, bound)
    simplices = {_vset(am_vertices(b)) for b in bs}
    per_simplex: dict = defaultdict(int)
    face_types: dict = defaultdict(int)
    incidence: dict = defaultdict(int)
    for s in simplices:
        n = 0
        for f in itertools.combinations(sorted(s), 4):
            t = classify_face(f)
            face_types[t] += 1
            if t == "generic":
                n += 1
                key = frozenset(f)
                if all(abs(x) <= bound for v in key for x in v):
                    incidence[key] += 1
        per_simplex[n] += 1
    per_cell: dict = defaultdict(int)
    for k in incidence.values():
        per_cell[k] += 1
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    std = (e1, e2, e3, _minus_sum(e1, e2, e3))
    v = dict(zip(("v1", "v2", "v3", "v4"), std))
    v12, v23, v13 = vadd(e1, e2), vadd(e2, e3), vadd(e1, e3)
    paper_simplices = {_vset(std + (v12, v23)), _vset(std + (v12, v13)), _vset(std + (v23, v13))}
    paper_generic = {_vset(std), _vset((v12, v["v4"], v23, vneg(e2))),
                     _vset((v12, e3, vneg(v23), vneg(e1)))}
    std_simplex = _vset(am_vertices((e1, e2, e3)))
    return {
        "bound": bound,
        "bases": len(bs),
        "simplices": len(simplices),
        "face_types": dict(sorted(face_types.items())),
        "generic_per_simplex": dict(sorted(per_simplex.items())),
        "simplices_per_generic_cell": dict(sorted(per_cell.items())),
        "standard_cell_simplices_match": set(containing_simplices(std)) == paper_simplices
        and all(s in simplices for s in paper_simplices),
        "standard_simplex_generic_match": set(generic_faces(std_simplex)) == paper_generic,
        "special_example": classify_face((e1, e2, vneg(v12), e3)),
    }


# ---------------------------------------------------------------- identities

def as_simplex_boundary(c: Mapping) -> tuple[int, tuple] | None:
    """If ``c`` is +-d of one simplex, return (sign, sorted vertices)."""
    if not c:
        return None
    verts = tuple(sorted(set().union(*c)))
    d = boundary({verts: 1})
    for s in (1, -1):
        if {k: s * x for k, x in d.items()} == dict(c):
            return s, verts
    return None


def standard_blocks(basis: Sequence[Vector], sizes: Sequence[int]) -> BlockWedge:
    out, p = [], 0
    for k in sizes:
        out.append(basis[p:p + k])
        p += k
    return BlockWedge(out)


def chain_signs(m: int, bound: int) -> dict[int, set]:
    """For each degree l = 1..m-1, the set of sigma with
    psi(d g) = sigma * d psi(g) over all boxed bases and the shape
    (m-l+1, 1, ..., 1); a single value means the identity holds."""
    out: dict = defaultdict(set)
    for b in bases(m, bound):
        for l in range(1, m):
            g = standard_blocks(b, (m - l + 1,) + (1,) * (l - 1))
            lhs = psi_of(differential(g))
            rhs = boundary(psi(g))
            if lhs == rhs:
                out[l].add(1)
            elif lhs == {k: -x for k, x in rhs.items()}:
                out[l].add(-1)
            else:
                out[l].add(0)
    return dict(out)


def relation_images(basis: Sequence[Vector]) -> list[tuple[str, int, Chain]]:
    """psi of the shuffle relations written on ``basis``: the top-degree ones
    and, for rank 3, those of the 2-block in [a, b] ^ [c]."""
    m = len(basis)
    out = []
    for label, k, terms in shuffle_rows(m):
        img: Chain = {}
        for t in terms:
            img = chain_add(img, psi(BlockWedge([substitute(basis, t)])))
        out.append((label, k, img))
    if m == 3:
        sub = basis[:2]
        for label, k, terms in shuffle_rows(2):
            img = {}
            for t in terms:
                blk = tuple(vsum((tuple(c * x for x in sub[i]) for i, c in enumerate(col) if c), 3)
                            for col in t)
                img = chain_add(img, psi(BlockWedge([blk, (basis[2],)])))
            out.append((label + "-block", k, img))
    return out


# frozen from the standard basis: the second shuffle goes to minus the
# alternating facet sum of phi(v1, v2, v3, v4, v12, v23) in that vertex order
SECOND_SHUFFLE_SIGN = -1


def shuffle_identities(bound: int) -> dict:
    """Check both rank-3 shuffle identities over all boxed bases."""
    first_bad = second_bad = 0
    bs = bases(3, bound)
    for b in bs:
        if first_shuffle_image(b):
            first_bad += 1
        img = second_shuffle_image(b)
        target = boundary(second_shuffle_simplex(b))
        if img != {k: SECOND_SHUFFLE_SIGN * x for k, x in target.items()}:
            second_bad += 1
    return {"bound": bound, "bases": len(bs), "first_nonzero": first_bad,
            "second_mismatch": second_bad}
