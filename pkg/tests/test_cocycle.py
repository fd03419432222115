import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cocat import corpus
from cocat.cocycle import (BoundedCocycleCategory, Cocycle, canonical_zigzag, check_bijection,
                           class_of, class_to_cocycle, cylinder_zigzag, enumerate_cocycles,
                           homotopy_classes, phi_class, transport_cocycle)
from cocat.errors import BoundTooSmall, NotWeakEquivalence
from cocat.groupoid import (collapse, compose_maps, delooping, functors, identity_map,
                            indiscrete, make_map, map_from_homomorphism, natural_isomorphism,
                            point)
from cocat.groups import cyclic, dihedral, quaternion, symmetric, trivial_group


def bg(g):
    return delooping(g)


@pytest.mark.parametrize("g", [trivial_group(), cyclic(2), cyclic(3), symmetric(3), quaternion()],
                         ids=lambda g: g.name)
def test_point_into_bg_has_one_class(g):
    assert len(homotopy_classes(point(), bg(g))) == 1 == \
        oracles.homs_mod_conjugation([[0]], oracles.table_of(g))


@pytest.mark.parametrize("a,b,want", [(cyclic(2), cyclic(2), 2), (cyclic(3), symmetric(3), 2),
                                      (cyclic(2), symmetric(3), 2), (cyclic(4), dihedral(4), None)])
def test_classes_between_deloopings(a, b, want):
    n = len(homotopy_classes(bg(a), bg(b)))
    assert n == oracles.homs_mod_conjugation(oracles.table_of(a), oracles.table_of(b))
    if want is not None:
        assert n == want


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_homotopy_classes_match_brute_force(seed):
    rng = corpus.make_rng(seed)
    x, _ = corpus.random_groupoid(rng, max_components=2, max_size=1)
    y, _ = corpus.random_groupoid(rng, max_components=2, max_size=2)
    assert len(homotopy_classes(x, y)) == oracles.homotopy_class_count(x, y)


def test_identity_goes_to_identity_span():
    x = bg(cyclic(3))
    c = class_to_cocycle(identity_map(x))
    assert c.f == identity_map(x) and c.g == identity_map(x)


def test_trivial_endomap_gives_bc2_middle():
    x = bg(cyclic(2))
    triv = make_map(x, x, [0], [0, 0])
    assert class_to_cocycle(triv).middle == x


def test_left_homotopic_maps_meet_in_one_component():
    # the two embeddings C3 -> S3 are conjugate, hence left homotopic
    x, y = bg(cyclic(3)), bg(symmetric(3))
    embeddings = [f for f in functors(x, y) if len(set(f.mor)) == 3]
    f, g = embeddings[0], embeddings[1]
    assert natural_isomorphism(f, g) is not None
    zig = cylinder_zigzag(f, g)
    assert zig[0].target == zig[1].target
    assert is_weq_leg(zig[0].target)
    cat = BoundedCocycleCategory(x, y, 2)
    assert cat.component(class_to_cocycle(f)) == cat.component(zig[0].target) == \
        cat.component(class_to_cocycle(g))


def is_weq_leg(c):
    from cocat.groupoid import is_weak_equivalence
    return bool(is_weak_equivalence(c.f))


def test_bounded_point_into_bc2():
    cat = enumerate_cocycles(point(), bg(cyclic(2)), 2)
    # Z = * with one map, Z = indiscrete(2) with two
    assert cat.n_objects == 3 and cat.n_components == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_bounded_point_into_point(n):
    cat = enumerate_cocycles(point(), point(), n)
    assert cat.n_objects == n and cat.n_components == 1


def test_bounded_bc2_endomaps():
    cat = enumerate_cocycles(bg(cyclic(2)), bg(cyclic(2)), 1)
    assert cat.n_objects == 2 and cat.n_components == 2


def test_bound_below_object_count_is_refused():
    with pytest.raises(BoundTooSmall):
        enumerate_cocycles(indiscrete(3), point(), 2)


def test_left_leg_must_be_a_weak_equivalence():
    x = bg(cyclic(2))
    with pytest.raises(NotWeakEquivalence):
        Cocycle(collapse(x), identity_map(x))


def test_phi_of_identity_span_is_class_of_g():
    x, y = bg(cyclic(2)), bg(symmetric(3))
    for g in functors(x, y):
        assert phi_class(Cocycle(identity_map(x), g)).class_id == class_of(g).class_id


def test_phi_of_indiscrete_span_into_bc2():
    i2, bc2 = indiscrete(2), bg(cyclic(2))
    left = collapse(i2)
    right = next(g for g in functors(i2, bc2) if g.mor[1] == 1)
    assert phi_class(Cocycle(left, right)).class_id == 0
    assert len(homotopy_classes(point(), bc2)) == 1


def test_phi_is_constant_along_morphisms():
    cat = BoundedCocycleCategory(bg(cyclic(2)), bg(cyclic(2)), 2)
    for m in cat.iter_morphisms():
        assert phi_class(m.source).class_id == phi_class(m.target).class_id


def test_zigzag_of_canonical_cocycle_is_empty():
    x = bg(cyclic(2))
    assert canonical_zigzag(Cocycle(identity_map(x), identity_map(x))) == []


def test_zigzag_from_indiscrete_span():
    i2, bc2 = indiscrete(2), bg(cyclic(2))
    c = Cocycle(collapse(i2), next(g for g in functors(i2, bc2) if g.mor[1] == 1))
    zig = canonical_zigzag(c)
    assert len(zig) == 2
    assert zig[0].source == c and zig[1].target == zig[0].target
    end = zig[1].source
    assert end.f == identity_map(point())


def test_zigzag_endpoint_class_over_full_enumeration():
    cat = enumerate_cocycles(bg(cyclic(2)), bg(cyclic(3)), 3)
    for c in cat.objects():
        zig = canonical_zigzag(c)
        end = zig[1].source if zig else c
        assert class_of(end.g).class_id == phi_class(c).class_id


def test_transport_along_identities_keeps_component():
    x, y = bg(cyclic(2)), bg(cyclic(2))
    # transport multiplies |Ob| of the middle by 4, so start from 1-object middles
    cat = BoundedCocycleCategory(x, y, 4)
    for c in [c for c in cat.objects() if c.middle.n_objects == 1]:
        t = transport_cocycle(identity_map(x), identity_map(y), c)
        assert cat.component(c) == cat.component(t.pushed)
        assert phi_class(t.cocycle).class_id == phi_class(c).class_id


def test_transport_along_point_into_indiscrete():
    i2, bc2 = indiscrete(2), bg(cyclic(2))
    alpha = make_map(point(), i2, [0], [i2.identities[0]])
    for g in functors(i2, bc2):
        t = transport_cocycle(alpha, identity_map(bc2), class_to_cocycle(g))
        assert t.cocycle.x == point()
        assert phi_class(t.cocycle).class_id == class_of(compose_maps(g, alpha)).class_id


def test_transport_along_an_automorphism_conjugates_the_class():
    c3 = cyclic(3)
    x = bg(c3)
    inv = map_from_homomorphism(x, x, [c3.inv(a) for a in range(3)])
    c = class_to_cocycle(identity_map(x))
    t = transport_cocycle(identity_map(x), inv, c)
    # beta^-1 o id = inversion, a different class from the identity
    assert phi_class(t.cocycle).class_id == class_of(inv).class_id
    assert class_of(inv).class_id != class_of(identity_map(x)).class_id


@pytest.mark.parametrize("xn", ["*", "BC2", "I2"])
@pytest.mark.parametrize("yn", ["BC2", "BC3"])
def test_bijection_against_brute_force_counts(xn, yn):
    x, y = corpus.named_groupoid(xn), corpus.named_groupoid(yn)
    r = check_bijection(x, y, x.n_objects + 2)
    assert r.bijection and r.phi_constant and r.psi_section
    assert r.classes == r.components == oracles.homotopy_class_count(x, y)
