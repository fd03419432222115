import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

import oracles
from cocat import intlinalg as il
from cocat.abelian import AbelianGroup, Z, cyclic_group, make_hom, zero_group
from cocat.doldkan import (complexes_equal, concentrated, eilenberg_mac_lane, free_on_nerve,
                           gamma, gamma_n_iso, good_truncation, homology, homotopy_groups,
                           make_chain_complex, make_simplicial, normalize, random_complex,
                           surjections, trimmed)
from cocat.errors import BoundaryNotNilpotent, NotFunctorial
from cocat.groupoid import delooping
from cocat.groups import cyclic


@pytest.mark.parametrize("n", range(6))
def test_surjection_counts(n):
    for k in range(n + 1):
        assert len(surjections(n, k)) == oracles.monotone_surjections(n, k)


@pytest.mark.parametrize("ranks", [(1,), (1, 1), (2, 0, 1), (1, 2, 1)])
def test_gamma_level_ranks(ranks):
    groups = [Z(r) for r in ranks]
    diffs = [make_hom(groups[k], groups[k - 1], il.zeros(ranks[k - 1], ranks[k]))
             for k in range(1, len(ranks))]
    g = gamma(make_chain_complex(groups, diffs), levels=4)
    for n in range(5):
        assert g.levels[n].ngens == oracles.gamma_rank(ranks, n)


@pytest.mark.parametrize("n", range(5))
def test_k_c2_1_levels(n):
    k = eilenberg_mac_lane(cyclic_group(2), 1, top=4)
    # level n is C2^(n choose 1)
    assert k.levels[n].size() == 2 ** n


def test_k_z_2_normalizes_to_z_in_degree_2():
    k = eilenberg_mac_lane(Z(), 2, top=4)
    assert complexes_equal(normalize(k).complex, concentrated(Z(), 2))
    pi = homotopy_groups(k)
    assert [str(pi[i]) for i in sorted(pi)] == ["0", "0", "Z", "0", "0"]


def test_free_nerve_of_bc2_has_group_homology():
    # H_*(BC2; Z) = Z, C2, 0, C2 in degrees 0..3
    s = free_on_nerve(delooping(cyclic(2)), 4)
    pi = homotopy_groups(s)
    assert [str(pi[i]) for i in range(4)] == ["Z", "C2", "0", "C2"]
    gamma_n_iso(s)


def test_gamma_n_iso_on_emls():
    for a, n in [(cyclic_group(3), 1), (Z(), 2), (AbelianGroup((2, 0)), 0)]:
        gamma_n_iso(eilenberg_mac_lane(a, n, top=3))


def test_non_nilpotent_boundary_is_rejected():
    z = Z()
    one = make_hom(z, z, [[1]])
    with pytest.raises(BoundaryNotNilpotent):
        make_chain_complex([z, z, z], [one, one])


def test_broken_face_is_rejected():
    s = gamma(concentrated(Z(), 1), levels=3)
    faces = [list(f) for f in s.faces]
    faces[2][0] = make_hom(s.levels[2], s.levels[1], il.zeros(s.levels[1].ngens,
                                                              s.levels[2].ngens))
    with pytest.raises(NotFunctorial):
        make_simplicial(s.levels, faces, s.degens)


def test_good_truncation_of_multiplication_by_two():
    z = Z()
    c = make_chain_complex([z, z], [make_hom(z, z, [[2]])])
    h = homology(c)
    assert str(h[0]) == "C2" and str(h[1]) == "0"
    t = good_truncation(c, 1)
    assert t.start == 1 and trimmed(t).groups == (zero_group(),)
    assert complexes_equal(good_truncation(c, 0), c)


def test_good_truncation_keeps_upper_homology():
    z = Z()
    # Z --0--> Z --2--> Z: truncating at 1 keeps H_1 = C2 and H_2 = Z
    c = make_chain_complex([z, z, z], [make_hom(z, z, [[2]]), make_hom(z, z, [[0]])])
    t = good_truncation(c, 1)
    h = homology(t)
    assert str(h[1]) == "0" and str(h[2]) == "Z"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_n_gamma_is_the_identity(seed):
    c = random_complex(random.Random(seed))
    assert complexes_equal(normalize(gamma(c)).complex, c)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_gamma_n_is_the_identity(seed):
    s = gamma(random_complex(random.Random(seed), max_len=3, max_rank=2))
    gamma_n_iso(s)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_homology_of_free_complexes_matches_sympy(seed):
    c = random_complex(random.Random(seed), torsion=(), coeff=3)
    want = oracles.free_complex_homology([g.ngens for g in c.groups],
                                         [d.matrix for d in c.diffs])
    got = homology(c)
    for k, (r, tors) in want.items():
        assert (got[k].rank, got[k].torsion) == (r, tors)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_form_matches_sympy(rows):
    d = il.invariant_factors(rows)
    s = smith_normal_form(Matrix(rows), domain=ZZ)
    want = [abs(int(s[i, i])) for i in range(min(s.shape)) if s[i, i] != 0]
    assert sorted(d) == sorted(want)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=4))
def test_smith_transforms_are_unimodular(rows):
    d, u, v = il.smith(rows)
    uav = il.matmul(il.matmul(u, rows), v)
    for i, r in enumerate(uav):
        for j, x in enumerate(r):
            assert x == (d[i] if i == j else 0)
    assert abs(Matrix(u).det()) == 1 and abs(Matrix(v).det()) == 1
