from math import prod

import pytest

from mzvcomplex import modular as M
from mzvcomplex.linalg import rank


def _jordan(N, m):
    ps = {p for p in range(2, N + 1) if N % p == 0 and all(p % q for q in range(2, p))}
    return round(N ** m * prod(1 - p ** -m for p in ps))


@pytest.mark.parametrize("N,m", [(1, 2), (5, 2), (6, 2), (4, 3), (3, 3), (7, 1)])
def test_coset_count(N, m):
    assert len(M.cosets(N, m)) == _jordan(N, m)


def test_five_by_two_cosets():
    assert len(M.cosets(5, 2)) == 24


def test_shapes():
    assert M.shapes(3, 1) == [(3,)]
    assert M.shapes(4, 2) == [(1, 3), (2, 2)]
    assert M.shapes(3, 3) == [(1, 1, 1)]


def test_basis_helpers():
    cols = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    assert M.det(cols) == 1 and M.is_basis(cols)
    assert not M.is_basis(((1, 1), (2, 2)))
    inv_cols = tuple(zip(*M.inverse(cols)))  # inverse() returns rows
    assert M.substitute(cols, inv_cols) == tuple(M.unit(i, 3) for i in range(3))


def test_block_differential_example():
    e1, e2, e3 = (M.unit(i, 3) for i in range(3))
    g = M.BlockWedge(((e1,), (e2, e3)), 1)
    out = M.differential(g)
    assert sum(abs(c) for c in out.values()) == 3
    assert all(len(blocks) == 3 for blocks in out)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_square_zero(N):
    top = 8 if N < 5 else 7
    for w in range(3, top + 1):
        assert not any(M.square_zero_residual(N, w, 3))
    for w in range(2, 9):
        assert not any(M.square_zero_residual(N, w, 2))


@pytest.mark.slow
def test_square_zero_n5_weight8():
    assert not any(M.square_zero_residual(5, 8, 3))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_dihedral_symmetries_from_shuffles(m):
    r = M.dihedral_from_shuffle_check(m)
    assert r["cyclic"] and r["reflection"] and r["negation"]


def test_d3_frame_sizes_frozen():
    r = M.dihedral_from_shuffle_check(3)
    assert (r["symbols"], r["rows"]) == (144, 384)


def test_descends_and_relations():
    assert M.descends(2, 4, 2, 1)
    assert M.mu_kills_relations(2, 4, 2)
    with pytest.raises(ValueError):
        M.mc_space(2, 4, 2, 3)


def _mu_case(N, w, m):
    mus = M.mu_map(N, w, m)
    qd = [M.mc_space(N, w, m, l).quotient_dim for l in range(1, m + 1)]
    return qd, [rank(x) for x in mus], [x.ncols for x in mus]


@pytest.mark.parametrize("w,m", [(w, 2) for w in range(2, 9)] + [(w, 3) for w in range(3, 7)])
def test_mu_bijective_at_N1(w, m):
    assert not any(M.chain_map_residual(1, w, m))
    qd, rk, tg = _mu_case(1, w, m)
    assert qd == rk == tg


@pytest.mark.parametrize("N,w,m,frozen", [
    (2, 2, 2, ([0, 1], [0, 1])), (3, 2, 2, ([0, 1], [0, 1])), (5, 2, 2, ([0, 3], [0, 3])),
    (2, 3, 3, ([0, 0, 0], [0, 0, 0])), (2, 4, 2, ([1, 3], [1, 2])), (3, 4, 2, ([1, 3], [1, 2])),
    (2, 5, 3, ([1, 2, 2], [1, 2, 1])), (3, 5, 3, ([2, 3, 2], [2, 3, 1])),
])
def test_mu_surjective(N, w, m, frozen):
    assert not any(M.chain_map_residual(N, w, m))
    qd, rk, tg = _mu_case(N, w, m)
    assert rk == tg
    assert (qd, tg) == frozen
    if w == m:
        assert qd[0] == tg[0]


def test_mu_sign_convention():
    assert M.MU_SIGN == -1 and M.LEIBNIZ_OFFSET == 1


def test_notation_round_trips():
    u = ((1, 0, 0), (1, 1, 0), (0, 1, 1))
    assert M.notation_convert("colon", M.colon_from_basis(u)) == u
    v0 = tuple(-sum(c) for c in zip(*u))
    assert M.notation_convert("angle", (v0,) + u) == u
    with pytest.raises(ValueError):
        M.notation_convert("angle", ((1, 0), (0, 1), (0, 0)))
    with pytest.raises(ValueError):
        M.notation_convert("basis", ((1, 0), (1, 0)))
