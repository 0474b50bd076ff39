"""Simplicial homology: known complexes, torsion, Smith normal form."""

import pytest

from brownlevi import homology as hm
from brownlevi.errors import TooLargeComplex


def close_faces(top_cells):
    import itertools

    out = set()
    for c in top_cells:
        for r in range(1, len(c) + 1):
            out.update(itertools.combinations(c, r))
    return out


def test_isolated_points():
    prof = hm.homology_of_simplices([(0,), (1,), (2,), (3,), (4,), (5,)])
    assert prof.betti == [6]
    assert prof.reduced_betti == [5]


def test_empty_complex():
    prof = hm.homology_of_simplices([])
    assert prof.betti == [] and prof.euler_characteristic() == 0


def test_cone_is_acyclic():
    # cone over a 4-cycle
    cells = close_faces([(0, 1, 4), (1, 2, 4), (2, 3, 4), (0, 3, 4)])
    prof = hm.homology_of_simplices(cells)
    assert prof.betti == [1, 0, 0]
    assert all(not t for t in prof.torsion)


def test_circle():
    cells = close_faces([(0, 1), (1, 2), (0, 2)])
    prof = hm.homology_of_simplices(cells)
    assert prof.betti == [1, 1]


def test_two_spheres_wedge_like():
    # boundary of a tetrahedron: S^2
    cells = close_faces([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    prof = hm.homology_of_simplices(cells)
    assert prof.betti == [1, 0, 1]


def test_projective_plane_torsion():
    # 10 triangles on 6 vertices, every edge in exactly two: a closed surface
    # with chi = 6 - 15 + 10 = 1, hence RP^2 and H_1 = Z/2
    tris = [
        (0, 1, 2),
        (0, 1, 3),
        (0, 2, 4),
        (0, 3, 5),
        (0, 4, 5),
        (1, 2, 5),
        (1, 3, 4),
        (1, 4, 5),
        (2, 3, 4),
        (2, 3, 5),
    ]
    prof = hm.homology_of_simplices(close_faces(tris))
    assert prof.betti == [1, 0, 0]
    assert prof.torsion[1] == [2]
    assert prof.euler_characteristic() == 1


def test_snf_invariant_factors():
    assert hm.invariant_factors([4, 6]) == [2, 12]
    assert hm.invariant_factors([1, 1, 3]) == [1, 1, 3]
    assert hm.snf_diagonal([(0, 0, 2), (1, 1, 3)]) == [1, 6]
    assert hm.snf_diagonal([(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]) == [1]


def test_size_guard():
    with pytest.raises(TooLargeComplex):
        hm.homology_of_simplices([(i,) for i in range(100)], max_simplices=10)


def test_rank_mod_p():
    entries = [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]  # rank 1
    assert hm.rank_mod_p(entries, 2, 2) == 1
