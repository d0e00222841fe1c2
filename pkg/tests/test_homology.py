import itertools
import random
from dataclasses import replace

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import betti_oracle, sympy_invariants
from protoshape.errors import InvalidInput, NotAChainMap, NotAComplex
from protoshape.generators import all_open_covers, discrete, four_point_circle, sphere
from protoshape.homology import HomologyGroups, homology, homology_map, simplicial_homology
from protoshape.hypercover import cech_hypercover, hypercover_morphism, mccord_hypercover
from protoshape.simplicial import (
    ChainComplex,
    SimplicialMap,
    cech_nerve,
    identity_simplicial_map,
    nerve_refinement_map,
    normalized_chains,
    order_complex,
)
from protoshape.smith import IntegerMatrix, invariant_factors, smith_normal_form, verify_smith_form
from protoshape.space import Preorder, minimal_cover, space_from_preorder, specialization_preorder

# 6-vertex real projective plane
RP2_TRIANGLES = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
    (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
]


def face_poset_preorder(facets):
    faces = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            faces.update(tuple(sorted(c)) for c in itertools.combinations(f, r))
    faces = sorted(faces, key=lambda f: (len(f), f))
    names = ["".join(map(str, f)) for f in faces]
    pairs = [(names[i], names[j]) for i, a in enumerate(faces) for j, b in enumerate(faces)
             if i != j and set(a) <= set(b)]
    return Preorder.from_pairs(names, pairs)


def K(space, depth):
    return order_complex(specialization_preorder(space), depth)


def det(rows):
    return int(sympy.Matrix(rows).det()) if rows else 1


# -- Smith normal form ---------------------------------------------------------------------------


def test_two_by_two_example():
    s = smith_normal_form([[2, 4], [6, 8]])
    assert s.diagonal == (2, 4)
    assert abs(det([[2, 4], [6, 8]])) == 8 == s.diagonal[0] * s.diagonal[1]


def test_zero_and_identity():
    assert smith_normal_form([[0, 0, 0], [0, 0, 0]]).diagonal == (0, 0)
    assert smith_normal_form(IntegerMatrix.identity(4)).diagonal == (1, 1, 1, 1)


def test_transforms_are_unimodular():
    m = [[3, 1, 4], [1, 5, 9], [2, 6, 5], [3, 5, 8]]
    s = smith_normal_form(m)
    assert abs(det(s.left.tolist())) == 1
    assert abs(det(s.right.tolist())) == 1
    assert (s.left @ IntegerMatrix.from_rows(m) @ s.right) == s.diagonal_matrix()


def test_verify_rejects_tampered_form():
    s = smith_normal_form([[2, 4], [6, 8]])
    with pytest.raises(AssertionError):
        verify_smith_form(replace(s, diagonal=(2, 8)))


def test_empty_matrices():
    assert smith_normal_form(IntegerMatrix(0, 3)).diagonal == ()
    assert invariant_factors(IntegerMatrix(3, 0)) == ()


@pytest.mark.parametrize("entries, expect", [
    ((2, 3), (1, 6)),
    ((4, 6), (2, 12)),
    ((6, 10, 15), (1, 30, 30)),
    ((0, 5, 3), (1, 15, 0)),
])
def test_diagonal_is_repaired_into_a_divisibility_chain(entries, expect):
    n = len(entries)
    m = IntegerMatrix(n, n, {(i, i): v for i, v in enumerate(entries) if v})
    s = smith_normal_form(m)
    assert s.diagonal == expect
    assert s.left @ s.left_inverse == IntegerMatrix.identity(n)
    assert s.right @ s.right_inverse == IntegerMatrix.identity(n)
    assert s.left @ m @ s.right == s.diagonal_matrix()


def test_large_entries_stay_exact():
    big = 10 ** 30
    s = smith_normal_form([[big, 0], [0, big * 6]])
    assert s.diagonal == (big, 6 * big)


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_smith_agrees_with_sympy(rows):
    s = smith_normal_form(rows)
    nonzero = [d for d in s.diagonal if d]
    assert nonzero == sympy_invariants(rows)
    assert list(invariant_factors(IntegerMatrix.from_rows(rows))) == nonzero
    assert abs(det(s.left.tolist())) == 1 and abs(det(s.right.tolist())) == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=1, max_size=5))
def test_invariant_factors_of_diagonal(entries):
    m = IntegerMatrix(len(entries), len(entries), {(i, i): v for i, v in enumerate(entries)})
    got = invariant_factors(m)
    assert all(b % a == 0 for a, b in zip(got, got[1:]))
    assert list(got) == sympy_invariants(m.tolist())


# -- homology ----------------------------------------------------------------------------------------


def test_circle_homology():
    h = simplicial_homology(K(four_point_circle(), 3), 2)
    assert h.betti == (1, 1, 0) and h.torsion == ((), (), ())


def test_finest_nerve_is_a_point():
    h = simplicial_homology(cech_nerve(minimal_cover(four_point_circle()), 3), 2)
    assert h.betti == (1, 0, 0)


def test_two_sphere_model():
    h = simplicial_homology(K(sphere(2), 3), 2)
    assert h.betti == (1, 0, 1)


def test_projective_plane_has_two_torsion():
    space = space_from_preorder(face_poset_preorder(RP2_TRIANGLES))
    h = simplicial_homology(K(space, 3), 2)
    assert h.betti == (1, 0, 0)
    assert h.torsion == ((), (2,), ())
    assert str(h) == "H0=Z, H1=Z/2, H2=0"


def test_torsion_in_degree_zero():
    c = ChainComplex((1, 1), (IntegerMatrix(0, 1), IntegerMatrix.from_rows([[2]])))
    h = homology(c, 0)
    assert h.betti == (0,) and h.torsion == ((2,),)


def test_homology_needs_one_extra_degree():
    c = normalized_chains(K(four_point_circle(), 3), 2)
    with pytest.raises(InvalidInput):
        homology(c, 3)


def test_not_a_complex():
    with pytest.raises(NotAComplex):
        ChainComplex((1, 1, 1), (IntegerMatrix(0, 1), IntegerMatrix.from_rows([[1]]), IntegerMatrix.from_rows([[1]])))


def test_groups_validate_torsion():
    with pytest.raises(InvalidInput):
        HomologyGroups((1,), ((3, 2),))
    with pytest.raises(InvalidInput):
        HomologyGroups((1,), ((1,),))
    assert HomologyGroups((2, 0), ((), (2, 4))).as_table()[1] == {"degree": 1, "betti": 0, "torsion": [2, 4]}


def _random_complex(rng):
    n = rng.randint(3, 6)
    facets = set()
    for _ in range(rng.randint(2, 7)):
        size = rng.randint(1, min(4, n))
        facets.add(tuple(sorted(rng.sample(range(n), size))))
    used = {v for f in facets for v in f}
    facets |= {(v,) for v in range(n) if v not in used}
    return face_poset_preorder(sorted(facets))


def test_betti_agrees_with_rational_rank_on_random_complexes():
    rng = random.Random(20261019)
    for _ in range(25):
        pre = _random_complex(rng)
        c = normalized_chains(order_complex(pre, 4), 3)
        assert list(homology(c, 3).betti) == betti_oracle(c.ranks, [b.tolist() for b in c.boundaries])


def test_euler_characteristic_on_random_complexes():
    rng = random.Random(7)
    for _ in range(15):
        pre = _random_complex(rng)
        k = order_complex(pre, 5)
        h = simplicial_homology(k, 4)
        if any(h.torsion):
            continue
        # face posets of complexes of dimension <= 3 have chains of length <= 4
        chi = sum((-1) ** n * len(k.nondegenerate(n)) for n in range(5))
        assert chi == sum((-1) ** n * b for n, b in enumerate(h.betti))


# -- induced maps ---------------------------------------------------------------------------------------


def test_identity_map_gives_identity_matrices():
    k = K(four_point_circle(), 3)
    for d in homology_map(identity_simplicial_map(k), 2):
        size = d.source[1]
        assert d.matrix == tuple(tuple(int(i == j) for j in range(size)) for i in range(size))
        assert d.isomorphism


def test_constant_map_to_a_point():
    k = K(four_point_circle(), 3)
    point = K(discrete(1), 3)
    const = SimplicialMap(k, point, tuple(np.zeros(s, dtype=np.int64) for s in k.sizes))
    maps = homology_map(const, 2)
    assert maps[0].matrix == ((1,),)
    assert maps[1].matrix == () and maps[1].source == ((), 1)
    assert not maps[1].isomorphism
    assert maps[2].isomorphism


def test_mccord_to_cech_is_an_isomorphism():
    space = four_point_circle()
    m = hypercover_morphism(mccord_hypercover(space, 3), cech_hypercover(minimal_cover(space), 3))
    maps = homology_map(m.induced, 2)
    assert maps[0].isomorphism and maps[1].isomorphism


def test_torsion_identity_is_an_isomorphism():
    space = space_from_preorder(face_poset_preorder(RP2_TRIANGLES))
    maps = homology_map(identity_simplicial_map(K(space, 3)), 1)
    assert maps[1].source == ((2,), 0)
    assert maps[1].matrix == ((1,),)
    assert maps[1].isomorphism


def test_torsion_collapse_is_not_an_isomorphism():
    space = space_from_preorder(face_poset_preorder(RP2_TRIANGLES))
    k = K(space, 3)
    point = K(discrete(1), 3)
    const = SimplicialMap(k, point, tuple(np.zeros(s, dtype=np.int64) for s in k.sizes))
    maps = homology_map(const, 1)
    assert maps[0].isomorphism and not maps[1].isomorphism


def test_non_chain_map_rejected():
    k = K(four_point_circle(), 3)
    maps = [np.arange(s, dtype=np.int64) for s in k.sizes]
    maps[1] = np.zeros(k.sizes[1], dtype=np.int64)
    with pytest.raises(NotAChainMap):
        homology_map(SimplicialMap(k, k, tuple(maps)), 1)


def test_refinement_map_homology_on_all_circle_covers():
    space = four_point_circle()
    finest = minimal_cover(space)
    for cover in all_open_covers(space):
        maps = homology_map(nerve_refinement_map(finest, cover, 3), 2)
        # both nerves are contractible here, so the map is an isomorphism
        assert all(d.isomorphism for d in maps)
