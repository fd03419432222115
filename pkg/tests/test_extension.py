import pytest

import oracles
from cocat.errors import BoundTooSmall, IllFormedTwoFunctor, NotExact, NotLocallyConnected, \
    NotSurjective
from cocat.extension import (ExtensionSeq, PointedCocycle, all_extensions_up_to,
                             are_equivalent, aut_two_groupoid, build_extension_group,
                             check_pointed_cocycle, classify_extensions, compare_with_oracle,
                             component_of_extension, relabel_kernel,
                             extension_from_quotient, extension_to_cocycle, gerbe_cocycle,
                             pi_is_weak_equivalence, roundtrip, schreier_oracle,
                             surjection_two_groupoid)
from cocat.groupoid import delooping, discrete, indiscrete
from cocat.groups import (cyclic, dihedral, direct_product, find_isomorphism, quaternion,
                          symmetric, trivial_group)
from cocat.site import circle_site, constant_presheaf, point_site
from cocat.twogroupoid import pi1_at, pi2_at


def _sign(s3):
    # parity of a permutation label: even iff a product of 3-cycles or identity
    return tuple(0 if lab == "e" or len(lab) == 5 else 1 for lab in s3.elements)


@pytest.mark.parametrize("k", [cyclic(2), cyclic(3), cyclic(4), symmetric(3), quaternion()],
                         ids=lambda g: g.name)
def test_aut_two_groupoid_cell_counts(k):
    t = oracles.table_of(k)
    auts, cells = oracles.aut_two_cells(t)
    tg = aut_two_groupoid(k).two_groupoid
    assert len(tg.one) == len(auts)
    assert len(tg.two) == len(cells) == len(auts) * len(k)
    # pi1 = Out(K), pi2 = Z(K)
    inner = {oracles.inner(t, x) for x in range(len(t))}
    assert len(pi1_at(tg, 0)) == len(auts) // len(inner)
    assert len(pi2_at(tg, 0)) == len(oracles.center(t))


@pytest.mark.parametrize("k,ones,twos", [(cyclic(2), 1, 2), (cyclic(3), 2, 6),
                                         (symmetric(3), 6, 36)], ids=["C2", "C3", "S3"])
def test_aut_two_groupoid_known_sizes(k, ones, twos):
    tg = aut_two_groupoid(k).two_groupoid
    assert (len(tg.one), len(tg.two)) == (ones, twos)


def test_surjection_groupoid_of_c4_onto_c2():
    c4, c2 = cyclic(4), cyclic(2)
    s = surjection_two_groupoid(c4, c2, (0, 1, 0, 1))
    assert (len(s.two_groupoid.one), len(s.two_groupoid.two)) == (4, 8)
    assert pi_is_weak_equivalence(s)


def test_surjection_groupoid_of_sign_map():
    s3 = symmetric(3)
    s = surjection_two_groupoid(s3, cyclic(2), _sign(s3))
    assert (len(s.two_groupoid.one), len(s.two_groupoid.two)) == (6, 18)
    assert pi_is_weak_equivalence(s)


def test_non_surjective_map_is_refused():
    with pytest.raises(NotSurjective):
        surjection_two_groupoid(cyclic(2), cyclic(2), (0, 0))


def test_inexact_sequence_is_refused():
    c2, c4 = cyclic(2), cyclic(4)
    with pytest.raises(NotExact):
        ExtensionSeq(c2, c4, c2, (0, 1), (0, 1, 0, 1))  # 1 is not in the kernel


def test_cocycle_of_c4_over_c2():
    x = extension_from_quotient(cyclic(4), (0, 2))
    c = extension_to_cocycle(x)
    assert check_pointed_cocycle(c)
    # conjugation is trivial in an abelian group
    ident = tuple(range(len(x.k)))
    assert all(f == ident for f in c.f1)
    assert are_equivalent(build_extension_group(c), x)


def test_cocycle_of_s3_over_c2_acts_by_inversion():
    s3 = symmetric(3)
    rot = tuple(i for i, lab in enumerate(s3.elements) if lab == "e" or len(lab) == 5)
    x = extension_from_quotient(s3, rot)
    c = extension_to_cocycle(x)
    odd = [g for g in range(6) if x.p[g] != x.h.identity]
    for g in odd:
        assert c.f1[g] == tuple(x.k.inv(a) for a in range(3))


def test_broken_two_cell_values_are_rejected():
    x = extension_from_quotient(cyclic(4), (0, 2))
    c = extension_to_cocycle(x)
    f2 = list(c.f2)
    f2[c.surjection.pair_index[(0, 0)]] = 1  # identity 2-cell must go to the identity
    with pytest.raises(IllFormedTwoFunctor):
        check_pointed_cocycle(PointedCocycle(c.surjection, c.aut, c.f1, tuple(f2)))


def test_round_trip_on_every_extension_up_to_order_8():
    xs = all_extensions_up_to(8)
    assert xs
    for x in xs:
        _, ok = roundtrip(x)
        assert ok


@pytest.mark.parametrize("nh,nk", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 2),
                                   (2, 5)])
def test_cyclic_classes_against_the_h2_count(nh, nk):
    h, k = cyclic(nh), cyclic(nk)
    r = classify_extensions(h, k)
    assert len(r.classes) == oracles.cyclic_h2_count(nh, nk)


@pytest.mark.parametrize("h,k", [(cyclic(2), cyclic(2)), (cyclic(2), cyclic(3)),
                                 (cyclic(2), cyclic(4)), (direct_product(cyclic(2), cyclic(2)),
                                                          cyclic(2))],
                         ids=["C2,C2", "C2,C3", "C2,C4", "V4,C2"])
def test_classes_match_the_table_enumeration(h, k):
    r = compare_with_oracle(h, k)
    assert r.matched and r.classes == r.oracle


def test_trivial_kernel_has_one_class():
    r = classify_extensions(cyclic(2), trivial_group())
    assert len(r.classes) == 1


def test_centreless_kernel_with_trivial_outer_group_has_one_class():
    # Z(S3) = Out(S3) = 1, so every extension of C2 by S3 is the product
    r = classify_extensions(cyclic(2), symmetric(3))
    assert len(r.classes) == 1
    assert len(schreier_oracle(cyclic(2), symmetric(3))) == 1


def test_c2_by_c2_classes_are_c4_and_klein():
    r = classify_extensions(cyclic(2), cyclic(2))
    abelian_cyclic = sorted(any(e.e.element_order(g) == 4 for g in range(4)) for e in r.classes)
    assert abelian_cyclic == [False, True]


def test_bound_below_quotient_order_is_refused():
    with pytest.raises(BoundTooSmall):
        classify_extensions(cyclic(3), cyclic(2), bound=2)


def test_every_order_8_extension_lands_in_a_class():
    h, k = cyclic(2), cyclic(4)
    r = classify_extensions(h, k)
    hit = set()
    for e in (cyclic(8), dihedral(4), quaternion(), direct_product(cyclic(4), cyclic(2))):
        for normal in e.normal_subgroups():
            sub, _ = e.subgroup(normal)
            if len(normal) != 4 or find_isomorphism(sub, k) is None:
                continue
            x = relabel_kernel(extension_from_quotient(e, normal, h), k)
            n = component_of_extension(x, r)
            assert n is not None
            hit.add(n)
    assert hit == set(range(len(r.classes)))


def test_gerbe_of_constant_delooping():
    p = constant_presheaf(point_site(), "groupoid", delooping(symmetric(3)))
    c = gerbe_cocycle(p)
    f = c.to_aut(0, 0)
    assert len(f.one) == 6


def test_gerbe_on_circle_with_indiscrete_values():
    p = constant_presheaf(circle_site(), "groupoid", indiscrete(2))
    c = gerbe_cocycle(p)
    assert all(len(g) == 1 for auts in c.aut for g in auts)


def test_disconnected_values_are_not_a_gerbe():
    p = constant_presheaf(point_site(), "groupoid", discrete(["p", "q"]))
    with pytest.raises(NotLocallyConnected):
        gerbe_cocycle(p)
