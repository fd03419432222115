import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cocat import corpus
from cocat.errors import (AssociativityFailure, InterchangeFailure, NoInverse, NotAFunctor,
                          NotAFibration, NonAssociative, CocatError)
from cocat.groupoid import (build_groupoid, cech_groupoid, collapse, compose_maps, delooping,
                            discrete, disjoint_union, factorize, functors, homotopy_invariants,
                            identity_map, indiscrete, is_fibration, is_weak_equivalence,
                            make_map, point, product, product_map, pullback_along_fibration,
                            translation_groupoid, is_isomorphism)
from cocat.groups import build_group, cyclic, symmetric, small_groups, dihedral, quaternion
from cocat.twogroupoid import make_two_groupoid, two_homotopy_invariants


# -- groups -------------------------------------------------------------------

def test_c2_table_builds_group_of_order_two():
    g = build_group(["e", "a"], [[0, 1], [1, 0]])
    assert len(g) == 2 and g.is_abelian


def test_s3_is_nonabelian_by_exhaustive_scan():
    g = symmetric(3)
    assert len(g) == 6
    assert g.is_abelian is oracles.is_abelian(oracles.table_of(g)) is False


def test_idempotent_non_identity_has_no_inverse():
    # a*a = a with a != e
    with pytest.raises(NoInverse):
        build_group(["e", "a"], [[0, 1], [1, 1]])


def test_non_associative_table_is_rejected():
    # a Latin square with identity 0 that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NonAssociative):
        build_group(list("eabcd"), t)


@pytest.mark.parametrize("order", range(1, 13))
def test_small_group_catalogue_orders(order):
    for g in small_groups(order):
        t = oracles.table_of(g)
        assert len(t) == order
        n = len(t)
        assert all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n)
                   for c in range(n))


def test_catalogue_counts_match_known_numbers():
    # numbers of groups of order 1..12
    assert [len(small_groups(n)) for n in range(1, 13)] == [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5]


# -- groupoids ----------------------------------------------------------------

def test_delooping_has_one_object_and_group_arrows():
    g = delooping(cyclic(2))
    assert g.n_objects == 1 and g.n_morphisms == 2


def test_indiscrete_on_two_objects_has_four_arrows():
    g = indiscrete(2)
    assert g.n_morphisms == 4
    inv = homotopy_invariants(g)
    assert len(inv.pi0) == 1 and len(inv.pi1[0]) == 1


def test_missing_composite_is_rejected():
    with pytest.raises(CocatError):
        build_groupoid(["x"], [("1", "x", "x"), ("a", "x", "x")],
                       [["1", "1", "1"], ["a", "1", "a"], ["1", "a", "a"]])


def test_broken_interchange_is_named():
    # one 0-cell and one 1-cell; vertical law C2xC2, horizontal law C4
    v4 = {(a, b): a ^ b for a in range(4) for b in range(4)}
    c4 = {(a, b): (a + b) % 4 for a in range(4) for b in range(4)}
    with pytest.raises(InterchangeFailure) as err:
        make_two_groupoid(["*"], ["1"], [0], [0], ["u", "x", "y", "z"], [0] * 4, [0] * 4,
                          {(0, 0): 0}, v4, c4, (0,), (0,))
    assert len(err.value.witness) == 4


def test_two_groupoid_associativity_is_checked():
    c4 = {(a, b): (a + b) % 4 for a in range(4) for b in range(4)}
    bad = dict(c4)
    bad[(1, 1)] = 3
    with pytest.raises((AssociativityFailure, CocatError)):
        make_two_groupoid(["*"], ["1"], [0], [0], ["u", "x", "y", "z"], [0] * 4, [0] * 4,
                          {(0, 0): 0}, c4, bad, (0,), (0,))


def test_identity_maps_are_weak_equivalences():
    for g in (point(), delooping(symmetric(3)), indiscrete(3)):
        assert is_weak_equivalence(identity_map(g))


def test_point_into_indiscrete_is_weq():
    i2 = indiscrete(2)
    f = make_map(point(), i2, [0], [i2.identities[0]])
    assert is_weak_equivalence(f)


def test_collapse_of_bc2_fails_on_pi1():
    c = is_weak_equivalence(collapse(delooping(cyclic(2))))
    assert not c
    assert c.failure == "pi1"
    assert (c.witness["source_order"], c.witness["target_order"]) == (2, 1)


def test_non_functor_is_rejected():
    bc2 = delooping(cyclic(2))
    with pytest.raises(NotAFunctor):
        make_map(bc2, bc2, [0], [1, 1])


# -- Cech groupoids -----------------------------------------------------------

def test_cech_groupoid_of_two_points_over_one():
    # a surjection {0,1} -> * gives the indiscrete groupoid with four arrows
    g = cech_groupoid(["*", "*"])
    assert g.n_objects == 2 and g.n_morphisms == 4
    assert len(g.components) == 1


def test_cech_groupoid_of_identity_is_discrete():
    g = cech_groupoid([0, 1, 2])
    assert g.n_morphisms == 3 and len(g.components) == 3


def test_cech_groupoid_counts_pairs_with_equal_image():
    f = ["x", "x", "y"]
    g = cech_groupoid(f)
    pairs = sum(1 for a, b in itertools.product(range(3), repeat=2) if f[a] == f[b])
    assert g.n_morphisms == pairs == 5
    assert len(g.components) == len(set(f)) == 2


# -- fibrations ---------------------------------------------------------------

def test_maps_onto_discrete_groupoids_are_fibrations():
    d = discrete(["a", "b"])
    for f in functors(indiscrete(1), d):
        assert is_fibration(f)


def test_eg_to_bg_is_a_fibration():
    c2 = cyclic(2)
    act = [list(r) for r in c2.table]
    eg = translation_groupoid(c2, act)
    bc2 = delooping(c2)
    # arrow k of the translation groupoid is (g, x) with g = k mod |G|
    p = make_map(eg, bc2, [0, 0], [k % 2 for k in range(eg.n_morphisms)])
    assert is_fibration(p)


def test_inclusion_of_a_component_is_a_fibration():
    u, maps = disjoint_union([point(), delooping(cyclic(2))])
    assert is_fibration(maps[0])


def test_endpoint_inclusion_into_free_isomorphism_is_not_a_fibration():
    i = indiscrete(2)
    f = make_map(point(), i, [0], [i.identities[0]])
    assert is_weak_equivalence(f)
    assert not is_fibration(f)


def test_factorize_point_into_bc2():
    bc2 = delooping(cyclic(2))
    f = make_map(point(), bc2, [0], [0])
    fac = factorize(f)
    assert fac.middle.n_objects == 2
    assert is_weak_equivalence(collapse(fac.middle))
    assert is_fibration(fac.p) and is_weak_equivalence(fac.j)
    assert compose_maps(fac.p, fac.j) == f


def test_factorize_identity():
    g = delooping(symmetric(3))
    fac = factorize(identity_map(g))
    assert is_weak_equivalence(fac.j) and is_weak_equivalence(fac.p)


def test_factorize_collapse_of_bc2():
    fac = factorize(collapse(delooping(cyclic(2))))
    assert is_fibration(fac.p) and is_weak_equivalence(fac.j)


def test_pullback_of_eg_along_basepoint_is_discrete():
    c2 = cyclic(2)
    eg = translation_groupoid(c2, [list(r) for r in c2.table])
    bc2 = delooping(c2)
    p = make_map(eg, bc2, [0, 0], [k % 2 for k in range(eg.n_morphisms)])
    alpha = make_map(point(), bc2, [0], [0])
    pb = pullback_along_fibration(p, alpha).groupoid
    assert pb.n_objects == 2 and pb.n_morphisms == 2


def test_pullback_along_identity_is_a_copy():
    bc2 = delooping(cyclic(2))
    fac = factorize(make_map(point(), bc2, [0], [0]))
    pb = pullback_along_fibration(fac.p, identity_map(bc2))
    assert is_isomorphism(pb.to_fibred)


def test_pullback_along_isomorphism_is_a_copy():
    bc3 = delooping(cyclic(3))
    fac = factorize(make_map(point(), bc3, [0], [0]))
    inv = make_map(bc3, bc3, [0], [cyclic(3).inv(m) for m in range(3)])
    pb = pullback_along_fibration(fac.p, inv)
    assert is_isomorphism(pb.to_fibred)


def test_pullback_refuses_non_fibrations():
    i = indiscrete(2)
    f = make_map(point(), i, [0], [i.identities[0]])
    with pytest.raises(NotAFibration):
        pullback_along_fibration(f, identity_map(i))


# -- properties on random groupoids -------------------------------------------

seeds = st.integers(min_value=0, max_value=10 ** 6)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_functor_enumeration_matches_brute_force(seed):
    rng = corpus.make_rng(seed)
    # the brute force is exponential in arrows of x, so keep x small
    x, _ = corpus.random_groupoid(rng, max_components=2, max_size=1)
    y, _ = corpus.random_groupoid(rng, max_components=2, max_size=2)
    ours = {(f.obj, f.mor) for f in functors(x, y)}
    assert ours == set(oracles.functors_brute(x, y))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_factorization_postconditions(seed):
    rng = corpus.make_rng(seed)
    x, _ = corpus.random_groupoid(rng)
    y, _ = corpus.random_groupoid(rng)
    f = corpus.random_map(rng, x, y)
    fac = factorize(f)
    assert len(set(fac.j.obj)) == x.n_objects
    assert is_weak_equivalence(fac.j) and is_fibration(fac.p)
    assert compose_maps(fac.p, fac.j) == f
    assert compose_maps(fac.retraction, fac.j) == identity_map(x)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_weak_equivalences_satisfy_two_of_three(seed):
    rng = corpus.make_rng(seed)
    y, sy = corpus.random_groupoid(rng)
    x = corpus.groupoid_of_shape(corpus.reshaped(rng, sy))
    z, _ = corpus.random_groupoid(rng)
    f = corpus.random_map(rng, x, y, want_weq=True)
    g = corpus.random_map(rng, y, z)
    if g is None:
        return
    assert bool(is_weak_equivalence(g)) == bool(is_weak_equivalence(compose_maps(g, f)))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_weak_equivalences_are_stable_under_products(seed):
    rng = corpus.make_rng(seed)
    y, sy = corpus.random_groupoid(rng)
    x = corpus.groupoid_of_shape(corpus.reshaped(rng, sy))
    w, _ = corpus.random_groupoid(rng, max_components=1)
    f = corpus.random_map(rng, x, y, want_weq=True)
    assert is_weak_equivalence(product_map(f, identity_map(w)))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_right_properness(seed):
    rng = corpus.make_rng(seed)
    x, _ = corpus.random_groupoid(rng)
    y, sy = corpus.random_groupoid(rng)
    p = factorize(corpus.random_map(rng, x, y)).p
    alpha = corpus.random_weq_into(rng, y, sy)
    pb = pullback_along_fibration(p, alpha)
    assert is_weak_equivalence(pb.to_fibred)


def test_two_groupoid_invariants_of_a_group():
    from cocat.twogroupoid import group_as_two_groupoid
    inv = two_homotopy_invariants(group_as_two_groupoid(dihedral(4)))
    assert len(inv.pi0) == 1 and len(inv.pi1[0]) == 8 and len(inv.pi2[0]) == 1


def test_product_and_union_sizes():
    a, b = delooping(cyclic(2)), indiscrete(3)
    p, _, _ = product(a, b)
    assert (p.n_objects, p.n_morphisms) == (3, 18)
    u, _ = disjoint_union([a, b, delooping(quaternion())])
    assert (u.n_objects, u.n_morphisms) == (5, 2 + 9 + 8)
