"""The rank-m modular complex and the map mu(N) to the dihedral complex.

Lattice vectors are integer tuples in the standard coordinates of Z^m; a
basis is a tuple of such vectors (the columns of a unimodular matrix).

The coefficient-bearing complex MC^l(Gamma_1(N; m), S^{w-m}) is realized on
the free module with basis ``(beta, a, kappa)``: a coset ``beta`` of
Gamma_1(N; m)\\GL_m(Z), a divided-power monomial ``t^[a]`` of degree w-m and a block
shape ``kappa`` (sizes in ascending order) standing for the standard basis
split into blocks.  A generator written on an arbitrary basis g is moved to
the standard one by ``(beta, P) (x) g[e] = (beta g, P.g) (x) [e]``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import gcd
from typing import Iterable, Sequence

from . import dihedral
from .linalg import Echelon, SparseMatrix, rank
from .words import divided_power_substitute, monomials, shuffles

Vector = tuple
Basis = tuple

# Leibniz sign exponent offset: the m=3 display fixes (-1)^(i-1)
LEIBNIZ_OFFSET = 1
# mu^l carries (-1)^(l-1) so that mu.d = delta.mu with both differentials literal
MU_SIGN = -1


# ---------------------------------------------------------------- lattice helpers

def unit(i: int, m: int) -> Vector:
    return tuple(int(j == i) for j in range(m))


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vneg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def vsum(vs: Iterable[Vector], m: int) -> Vector:
    out = (0,) * m
    for v in vs:
        out = vadd(out, v)
    return out


def det(cols: Sequence[Vector]) -> int:
    n = len(cols)
    a = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return int(d)


def is_basis(cols: Sequence[Vector]) -> bool:
    return len(cols) == len(cols[0]) and abs(det(cols)) == 1


@lru_cache(maxsize=None)
def inverse(cols: Basis) -> tuple:
    """Inverse of the unimodular matrix with these columns, as a tuple of rows."""
    n = len(cols)
    a = [[Fraction(cols[j][i]) for j in range(n)] + [Fraction(int(i == k)) for k in range(n)]
         for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c])
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    inv = tuple(tuple(int(x) for x in row[n:]) for row in a)
    if any(Fraction(x) != y for row, orig in zip(inv, a) for x, y in zip(row, orig[n:])):
        raise ValueError("matrix is not unimodular")
    return inv


# ---------------------------------------------------------------- notations

def notation_convert(kind: str, vectors: Sequence[Vector]) -> Basis:
    """Rewrite a generator in basis notation ``[u_1, ..., u_m]``.

    ``kind`` is ``"basis"`` for [v_1,...,v_m], ``"angle"`` for
    <v_0,...,v_m> with the v's summing to zero, ``"colon"`` for [v_1:...:v_m].
    """
    vectors = tuple(tuple(v) for v in vectors)
    if kind == "angle":
        m = len(vectors) - 1
        if any(vsum(vectors, m)):
            raise ValueError("angle notation needs vectors summing to zero")
        out = vectors[1:]
    elif kind == "colon":
        m = len(vectors)
        out = tuple(vadd(vectors[i + 1], vneg(vectors[i])) for i in range(m - 1)) + (vneg(vectors[-1]),)
    elif kind == "basis":
        out = vectors
    else:
        raise ValueError(f"unknown notation {kind!r}")
    if not is_basis(out):
        raise ValueError("not a lattice basis")
    return out


def colon_from_basis(u: Sequence[Vector]) -> tuple:
    """Inverse of the colon conversion: [u] = [v_1:...:v_m] with v_k = -(u_k+...+u_m)."""
    m = len(u)
    out, acc = [], (0,) * len(u[0])
    for k in range(m - 1, -1, -1):
        acc = vadd(acc, u[k])
        out.append(vneg(acc))
    return tuple(reversed(out))


@lru_cache(maxsize=None)
def shuffle_rows(m: int) -> tuple:
    """Formal shuffle relations on the standard basis of Z^m.

    Returns ``(label, k, terms)`` with ``terms`` a tuple of bases (one per
    shuffle, all with coefficient +1): label ``"comma"`` for
    s(v_1..v_k | v_k+1..v_m) and ``"colon"`` for s(v_1:..:v_k | ..:v_m).
    """
    e = [unit(i, m) for i in range(m)]
    out = []
    for k in range(1, m):
        sig = shuffles(k, m - k)
        out.append(("comma", k, tuple(tuple(e[i] for i in s) for s in sig)))
        out.append(("colon", k, tuple(notation_convert("colon", [e[i] for i in s]) for s in sig)))
    return tuple(out)


def substitute(basis: Basis, cols: Basis) -> Basis:
    """Express arrangement ``cols`` (coordinates w.r.t. ``basis``) in Z^m."""
    m = len(basis[0])
    return tuple(vsum((tuple(c * x for x in basis[i]) for i, c in enumerate(col) if c), m)
                 for col in cols)


# ---------------------------------------------------------------- block wedges

class BlockWedge:
    """A wedge of blocks [A_1] ^ ... ^ [A_l] of lattice vectors with a sign."""

    __slots__ = ("blocks", "sign")

    def __init__(self, blocks: Iterable[Iterable[Vector]], sign: int = 1):
        self.blocks = tuple(tuple(tuple(v) for v in b) for b in blocks)
        self.sign = sign

    @property
    def sizes(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    @property
    def vectors(self) -> Basis:
        return tuple(v for b in self.blocks for v in b)

    def normalized(self) -> "BlockWedge":
        """Blocks sorted by (length, entries); the sign tracks the parity."""
        order = sorted(range(len(self.blocks)), key=lambda i: (len(self.blocks[i]), self.blocks[i]))
        return BlockWedge([self.blocks[i] for i in order], self.sign * _parity(order))

    def key(self) -> tuple:
        return self.blocks

    def __eq__(self, other):
        return isinstance(other, BlockWedge) and (self.blocks, self.sign) == (other.blocks, other.sign)

    def __hash__(self):
        return hash((self.blocks, self.sign))

    def __repr__(self):
        inner = " ^ ".join("[" + ", ".join(map(str, b)) + "]" for b in self.blocks)
        return f"{'-' if self.sign < 0 else ''}{inner}"


def _parity(perm: Sequence[int]) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def block_boundary(block: Sequence[Vector]) -> list[tuple[int, tuple, tuple]]:
    """d[u_1..u_k] = -Cycle(sum_s [w_1..w_s] ^ [w_s+1..w_k]) on <u_0,...,u_k>."""
    k = len(block)
    if k < 2:
        return []
    m = len(block[0])
    c = (vneg(vsum(block, m)),) + tuple(block)
    out = []
    for r in range(k + 1):
        rot = c[r:] + c[:r]
        rest = rot[1:]
        for s in range(1, k):
            out.append((-1, rest[:s], rest[s:]))
    return out


def differential(g: BlockWedge) -> dict:
    """Boundary of a block wedge as ``{normalized blocks: coefficient}``."""
    out: dict = defaultdict(int)
    for i, b in enumerate(g.blocks):
        eps = (-1) ** (i + LEIBNIZ_OFFSET)
        for c, left, right in block_boundary(b):
            bw = BlockWedge(g.blocks[:i] + (left, right) + g.blocks[i + 1:], g.sign * eps * c)
            nb = bw.normalized()
            out[nb.blocks] += nb.sign
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------- coefficient complex

def cosets(N: int, m: int) -> list[tuple]:
    """(Z/N)^m vectors with gcd(alpha, N) = 1: the cosets Gamma_1(N;m)\\GL_m(Z)."""
    out = []
    for a in product(range(N), repeat=m):
        g = N
        for x in a:
            g = gcd(g, x)
        if g == 1:
            out.append(a)
    return out


def shapes(m: int, l: int) -> list[tuple]:
    """Ascending compositions of m into l parts (canonical block shapes)."""
    def rec(left, parts, lo):
        if parts == 0:
            return [()] if left == 0 else []
        return [(k,) + r for k in range(lo, left + 1) for r in rec(left - k, parts - 1, k)]
    return rec(m, l, 1)


def _standard_blocks(kappa: Sequence[int], m: int) -> tuple:
    e = [unit(i, m) for i in range(m)]
    out, p = [], 0
    for k in kappa:
        out.append(tuple(e[p:p + k]))
        p += k
    return tuple(out)


def act_coset(beta: Sequence[int], cols: Basis, N: int) -> tuple:
    """beta . g for the row vector beta and the matrix with columns ``cols``."""
    return tuple(sum(b * c for b, c in zip(beta, col)) % N for col in cols)


def act_poly(a: tuple, cols: Basis, literal: bool = False) -> dict:
    """t^[a] . g in divided-power coordinates.

    Default: t_i . g = sum_j (g^-1)_ji t_j, the convention that makes mu
    well defined here.  ``literal=True`` uses (g^-1)_ij instead.
    """
    inv = inverse(tuple(cols))
    m = len(a)
    rows = inv if literal else tuple(tuple(inv[j][i] for j in range(m)) for i in range(m))
    return divided_power_substitute(a, rows)


def to_mc(N: int, beta: tuple, a: tuple, blocks: Sequence[Sequence[Vector]],
          literal: bool = False) -> dict:
    """Coordinates of (beta, t^[a]) (x) blocks in the free module."""
    order = sorted(range(len(blocks)), key=lambda i: len(blocks[i]))
    sign = _parity(order)
    blocks = [blocks[i] for i in order]
    cols = tuple(v for b in blocks for v in b)
    kappa = tuple(len(b) for b in blocks)
    b2 = act_coset(beta, cols, N)
    return {(b2, e, kappa): sign * c for e, c in act_poly(a, cols, literal).items()}


class MCSpace:
    """Free module on (beta, a, kappa) for MC^l(Gamma_1(N;m), S^(w-m))."""

    def __init__(self, N: int, w: int, m: int, l: int):
        if not 1 <= l <= m:
            raise ValueError("degree out of range")
        self.N, self.w, self.m, self.l = N, w, m, l
        self.keys = [(b, a, k) for k in shapes(m, l) for b in cosets(N, m)
                     for a in monomials(m, w - m)]
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self):
        return len(self.keys)

    def vector(self, coords: dict) -> dict:
        out: dict = defaultdict(int)
        for k, c in coords.items():
            out[self.index[k]] += c
        return {i: c for i, c in out.items() if c}

    def relation_rows(self, literal: bool = False):
        """Block shuffles, [v] = [-v] and anticommutation of equal blocks."""
        N, m = self.N, self.m
        for kappa in shapes(m, self.l):
            std = _standard_blocks(kappa, m)
            for beta in cosets(N, m):
                for a in monomials(m, self.w - m):
                    for bi, blk in enumerate(std):
                        k = len(blk)
                        if k == 1:
                            alt = std[:bi] + ((vneg(blk[0]),),) + std[bi + 1:]
                            yield self._row([(1, std), (-1, alt)], beta, a, literal)
                            continue
                        for _, _, terms in shuffle_rows(k):
                            yield self._row([(1, std[:bi] + (substitute(blk, t),) + std[bi + 1:])
                                             for t in terms], beta, a, literal)
                    for bi in range(len(std) - 1):
                        if len(std[bi]) == len(std[bi + 1]):
                            swapped = std[:bi] + (std[bi + 1], std[bi]) + std[bi + 2:]
                            yield self._row([(1, std), (1, swapped)], beta, a, literal)

    def _row(self, terms, beta, a, literal):
        out: dict = defaultdict(int)
        for c, blocks in terms:
            for key, x in to_mc(self.N, beta, a, blocks, literal).items():
                out[self.index[key]] += c * x
        return {i: x for i, x in out.items() if x}

    def relation_echelon(self) -> Echelon:
        ech = self.__dict__.get("_ech")
        if ech is None:
            ech = Echelon(len(self.keys)).extend(self.relation_rows())
            self.__dict__["_ech"] = ech
        return ech

    @property
    def quotient_dim(self) -> int:
        return len(self.keys) - self.relation_echelon().rank


@lru_cache(maxsize=None)
def mc_space(N: int, w: int, m: int, l: int) -> MCSpace:
    return MCSpace(N, w, m, l)


def mc_differential(N: int, w: int, m: int, l: int) -> SparseMatrix:
    """Free-module matrix of d: MC^l -> MC^(l+1) (rows are images)."""
    src, tgt = mc_space(N, w, m, l), mc_space(N, w, m, l + 1)
    rows = []
    for beta, a, kappa in src.keys:
        img = differential(BlockWedge(_standard_blocks(kappa, m)))
        out: dict = defaultdict(int)
        for blocks, c in img.items():
            for key, x in to_mc(N, beta, a, blocks).items():
                out[tgt.index[key]] += c * x
        rows.append({i: x for i, x in out.items() if x})
    return SparseMatrix(rows, len(tgt))


def mc_complex(N: int, w: int, m: int) -> list[SparseMatrix]:
    if m not in (1, 2, 3):
        raise ValueError("full complexes are built for m <= 3 only")
    if w < m:
        raise ValueError("weight below depth")
    return [mc_differential(N, w, m, l) for l in range(1, m)]


def square_zero_residual(N: int, w: int, m: int) -> list[int]:
    """For each l, the number of rows of d.d : MC^l -> MC^(l+2) that are not
    in the relation span of MC^(l+2) (zero means d^2 = 0 on the quotient)."""
    mats = mc_complex(N, w, m)
    out = []
    for l in range(1, m - 1):
        dd = dihedral.compose(mats[l - 1], mats[l])
        ech = mc_space(N, w, m, l + 2).relation_echelon()
        out.append(sum(1 for r in dd.rows if r and not ech.contains(r)))
    return out


def descends(N: int, w: int, m: int, l: int) -> bool:
    """d maps the relation span of MC^l into that of MC^(l+1)."""
    d = mc_differential(N, w, m, l)
    ech = mc_space(N, w, m, l + 1).relation_echelon()
    for r in mc_space(N, w, m, l).relation_rows():
        img: dict = defaultdict(Fraction)
        for i, c in r.items():
            for j, x in d.rows[i].items():
                img[j] += c * x
        if not ech.contains({j: x for j, x in img.items() if x}):
            return False
    return True


# ---------------------------------------------------------------- mu(N)

def mu_image(N: int, key: tuple) -> dict:
    """mu of a free generator: the wedge of {beta_B}_{a_B + 1} over the blocks,
    times MU_SIGN^(l-1) in degree l."""
    beta, a, kappa = key
    vecs, p = [], 0
    for k in kappa:
        gen = (tuple(beta[p:p + k]), tuple(x + 1 for x in a[p:p + k]))
        vecs.append(dihedral._slot(N, gen))
        p += k
    img = dihedral.wedge_vectors(vecs)
    if MU_SIGN == -1 and len(kappa) % 2 == 0:
        img = {t: -c for t, c in img.items()}
    return img


def mu_map(N: int, w: int, m: int) -> list[SparseMatrix]:
    """Matrices of mu^l, l = 1..m, from the free MC^l to (Lambda^l D)_{w,m}."""
    mats = []
    for l in range(1, m + 1):
        tgt = dihedral.wedge_basis(N, w, m, l)
        pos = {t: i for i, t in enumerate(tgt)}
        rows = [{pos[t]: c for t, c in mu_image(N, k).items()} for k in mc_space(N, w, m, l).keys]
        mats.append(SparseMatrix(rows, len(tgt)))
    return mats


def mu_kills_relations(N: int, w: int, m: int, literal: bool = False) -> bool:
    """mu vanishes on every relation row, in each degree."""
    for l in range(1, m + 1):
        sp = mc_space(N, w, m, l)
        for r in sp.relation_rows(literal):
            acc: dict = defaultdict(Fraction)
            for i, c in r.items():
                for t, x in mu_image(N, sp.keys[i]).items():
                    acc[t] += c * x
            if any(acc.values()):
                return False
    return True


def chain_map_residual(N: int, w: int, m: int) -> list[int]:
    """Nonzero rows of mu^(l+1).d - delta.mu^l for l = 1..m-1."""
    mus = mu_map(N, w, m)
    ds = mc_complex(N, w, m)
    deltas = dihedral.cochain_complex(N, w, m)
    out = []
    for l in range(1, m):
        lhs = dihedral.compose(ds[l - 1], mus[l])
        rhs = dihedral.compose(mus[l - 1], deltas[l - 1])
        bad = 0
        for r1, r2 in zip(lhs.rows, rhs.rows):
            diff = dict(r1)
            for j, x in r2.items():
                diff[j] = diff.get(j, 0) - x
            if any(diff.values()):
                bad += 1
        out.append(bad)
    return out


def mu_ranks(N: int, w: int, m: int) -> list[tuple[int, int]]:
    """(rank of mu^l, dim of the target) for each degree."""
    return [(rank(M), M.ncols) for M in mu_map(N, w, m)]


# ---------------------------------------------------------------- symmetries from shuffles

def _points(m: int) -> list[Vector]:
    """P_j = v_0 + ... + v_(j-1) for j = 0..m (v_0 = -sum of the others);
    every difference P_b - P_a is a root of A_m."""
    e = [unit(i, m) for i in range(m)]
    v = [vneg(vsum(e, m))] + e
    pts, acc = [], (0,) * m
    for j in range(m + 1):
        pts.append(acc)
        acc = vadd(acc, v[j]) if j < m else acc
    return pts


def _frames(m: int) -> tuple[list[Basis], list[Basis]]:
    """Bases carrying the emitted shuffle instances.

    Comma instances sit on every ordering of the edge set of a directed
    Hamiltonian path through the points; colon instances on the star bases
    +-(P_a1 - P_a0, ..., P_am - P_a0).  Both families then only produce
    symbols on path bases, so the symbol space is finite and closed.
    """
    pts = _points(m)
    comma, colon = set(), set()
    for b in permutations(range(m + 1)):
        edges = [vadd(pts[b[i + 1]], vneg(pts[b[i]])) for i in range(m)]
        for p in permutations(edges):
            comma.add(p)
        star = tuple(vadd(pts[b[i]], vneg(pts[b[0]])) for i in range(1, m + 1))
        colon.add(star)
        colon.add(tuple(vneg(x) for x in star))
    return sorted(comma), sorted(colon)


def dihedral_from_shuffle_check(m: int, bound: int = 1) -> dict:
    """Check that the dihedral symmetries lie in the span of the formal
    shuffle relations on arrangement symbols.

    Instances are emitted on the frames of :func:`_frames` whose entries are
    at most ``bound`` in absolute value (all of them for bound >= 1).
    Returns ``{symmetry: bool}`` plus the sizes of the formal system.
    """
    if m not in (2, 3, 4):
        raise ValueError("m must be 2, 3 or 4")
    cols: dict = {}

    def col(basis):
        return cols.setdefault(tuple(basis), len(cols))

    def small(base):
        return max(abs(x) for vv in base for x in vv) <= bound

    comma, colon = _frames(m)
    rows = []
    for label, frames in (("comma", comma), ("colon", colon)):
        for base in frames:
            if not small(base):
                continue
            for lab, _, terms in shuffle_rows(m):
                if lab != label:
                    continue
                row: dict = defaultdict(int)
                for t in terms:
                    row[col(substitute(base, t))] += 1
                rows.append({c: x for c, x in row.items() if x})
    e = [unit(i, m) for i in range(m)]
    v0 = vneg(vsum(e, m))
    angle = (v0,) + tuple(e)
    targets = {
        "cyclic": [(1, tuple(e)), (-1, angle[2:] + (v0,))],
        "reflection": [(1, tuple(e)), (-((-1) ** (m + 1)), tuple(reversed(angle))[1:])],
        "negation": [(1, tuple(vneg(x) for x in e)), (-1, tuple(e))],
    }
    tvecs = {}
    for name, terms in targets.items():
        vec: dict = defaultdict(int)
        for c, b in terms:
            vec[col(b)] += c
        tvecs[name] = {k: x for k, x in vec.items() if x}
    ech = Echelon(len(cols)).extend(rows)
    out = {name: ech.contains(v) for name, v in tvecs.items()}
    out["symbols"], out["rows"] = len(cols), len(rows)
    return out
