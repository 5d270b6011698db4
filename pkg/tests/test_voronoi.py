from fractions import Fraction as F

import pytest

from mzvcomplex import modular as M
from mzvcomplex import voronoi as V

STD3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_minimal_vectors_of_small_forms():
    assert len(V.minimal_vectors(V.QuadForm([[2, 1], [1, 2]]), 2)) == 6
    assert len(V.minimal_vectors(V.QuadForm([[1, 0], [0, 1]]), 2)) == 4
    assert len(V.minimal_vectors(V.root_form(3), 2)) == 12


def test_minimal_vectors_rejects_bad_input():
    with pytest.raises(ValueError):
        V.minimal_vectors(V.QuadForm([[1, 2], [2, 1]]), 2)
    with pytest.raises(ValueError):
        V.minimal_vectors(V.QuadForm([[1, 0], [0, 1]]), 0)
    # the box of entries <= 1 misses part of the shortest shell
    with pytest.raises(ValueError):
        V.minimal_vectors(V.QuadForm([[1, 10], [10, 101]]), 1)


def test_perfect_form_of_the_am_cell():
    verts = V.am_vertices(STD3)
    q = V.perfect_form(verts)
    assert q.gram == ((1, F(-1, 2), 0), (F(-1, 2), 1, F(-1, 2)), (0, F(-1, 2), 1))
    assert q.is_positive_definite()
    mins = V.minimal_vectors(q, 2)
    assert mins == {v for u in verts for v in (u, tuple(-x for x in u))}


def test_am_vertex_order():
    assert V.am_vertices(STD3) == [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1),
                                   (1, 1, 0), (0, 1, 1)]


def test_cells_normalize_signs():
    a = V.VCell([(1, 0), (0, -1)])
    b = V.VCell([(0, 1), (-1, 0)])
    (ka, sa), (kb, sb) = a.normalized(), b.normalized()
    assert ka == kb and sa == -sb
    assert a.rank() == 2 and a.is_simplicial()
    with pytest.raises(ValueError):
        V.VCell([(1, 0), (-1, 0)])


def test_boundary_squares_to_zero():
    cell = V.chain([(1, V.am_vertices(STD3))])
    assert V.boundary(V.boundary(cell)) == {}


def test_psi2_chain_map():
    assert V.chain_signs(2, 2) == {1: {1}}


@pytest.mark.slow
def test_psi3_chain_map():
    assert V.chain_signs(3, 1) == {1: {1}, 2: {1}}


def test_psi_on_block_wedges():
    e1, e2 = M.unit(0, 2), M.unit(1, 2)
    whole = V.psi(M.BlockWedge(((e1, e2),), 1))
    assert len(whole) == 1
    split = V.psi(M.BlockWedge(((e1,), (e2,)), 1))
    assert list(split.values()) in ([1], [-1])


def test_shuffle_identities_bound_one():
    r = V.shuffle_identities(1)
    assert r == {"bound": 1, "bases": 6960, "first_nonzero": 0, "second_mismatch": 0}
    assert V.SECOND_SHUFFLE_SIGN == -1


def test_first_shuffle_is_zero_on_standard_basis():
    assert V.first_shuffle_image(STD3) == {}


def test_coker_observations_bound_one():
    c = V.coker_observations(1)
    assert c["simplices"] == 796
    assert c["face_types"] == {"generic": 2388, "special": 9552}
    assert c["generic_per_simplex"] == {3: 796}
    assert c["simplices_per_generic_cell"] == {3: 52}
    assert c["standard_cell_simplices_match"] and c["standard_simplex_generic_match"]
    assert c["special_example"] == "special"


def test_face_classes():
    v1, v2, v3 = STD3
    v4 = (-1, -1, -1)
    assert V.classify_face([v1, v2, v3, v4]) == "generic"
    assert V.classify_face([v1, v2, (-1, -1, 0), v3]) == "special"
    assert V.classify_face([v1, (2, 0, 0), v2, v3]) == "other"


def test_unimodular_enumeration_counts():
    assert len(V.bases(2, 1)) == 40
    assert len(V.bases(3, 1)) == 6960
