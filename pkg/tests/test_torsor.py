import pytest

import oracles
from cocat.errors import NotTorsor
from cocat.groupoid import collapse, is_weak_equivalence
from cocat.groups import cyclic, symmetric
from cocat.site import (circle_site, cover_cech_groupoid, delooping_presheaf, make_presheaf,
                        point_site, terminal_presheaf)
from cocat.torsor import (PresheafCocycle, borel, bounded_cocycle_components, cech_h1,
                          check_torsor, classify_torsors, cocycle_from_torsor, comparison_map,
                          constant_group_sheaf, find_torsor_isomorphism, make_action,
                          presheaf_maps, regular_action, torsor_from_cocycle, trivial_action)

PAIRS = ("U12", "U13", "U23")


def _circle_c2():
    s = circle_site()
    return s, constant_group_sheaf(s, cyclic(2))


def _transitions(leg, site):
    # image of the arrow first arc -> second arc over each pairwise overlap
    return tuple(leg.components[site.objects.index(v)].mor[1] for v in PAIRS)


def _cech_cocycle(site, gs, transitions):
    t = site.terminal
    mid = cover_cech_groupoid(site, t, site.covers[t][0])
    leg = next(m for m in presheaf_maps(mid, delooping_presheaf(gs))
               if _transitions(m, site) == transitions)
    return PresheafCocycle(mid, leg, gs)


def _mobius(site, gs):
    """The twisted C2-torsor on the three-arc circle written out by hand: two
    sheets over every nonempty open, no global section, and one sheet swap
    when restricting from U3 to U23."""
    objs = site.objects
    values = []
    for o in objs:
        if o == "T":
            values.append(())
        elif o == "0":
            values.append(("*",))
        else:
            values.append(("+", "-"))
    restrict = []
    for h in range(len(site.arrows)):
        src, tgt = objs[site.src[h]], objs[site.tgt[h]]
        if tgt == "T":
            restrict.append(())
        elif src == "0":
            restrict.append((0,) * len(values[site.tgt[h]]))
        elif (src, tgt) == ("U23", "U3"):
            restrict.append((1, 0))
        else:
            restrict.append((0, 1))
    space = make_presheaf(site, "set", values, restrict)
    act = []
    for o, name in enumerate(objs):
        n = len(gs.values[o])
        if name == "T":
            act.append([()] * n)
        elif name == "0":
            act.append([(0,)] * n)
        else:
            act.append([(0, 1), (1, 0)])
    return make_action(gs, space, act)


def test_regular_action_on_point_is_a_torsor():
    gs = constant_group_sheaf(point_site(), cyclic(3))
    cert = check_torsor(regular_action(gs))
    assert cert and cert.free and cert.borel_route


def test_trivial_action_is_not_free():
    gs = constant_group_sheaf(point_site(), cyclic(2))
    cert = check_torsor(trivial_action(gs))
    assert not cert and cert.reason == "not free" and not cert.borel_route
    with pytest.raises(NotTorsor):
        cocycle_from_torsor(trivial_action(gs))


def test_hand_built_mobius_is_a_torsor_without_global_sections():
    s, gs = _circle_c2()
    m = _mobius(s, gs)
    assert check_torsor(m)
    assert m.space.size(s.terminal) == 0
    assert find_torsor_isomorphism(m, regular_action(gs)) is None


def test_borel_of_regular_action_is_contractible():
    gs = constant_group_sheaf(point_site(), cyclic(2))
    b = borel(regular_action(gs)).values[0]
    assert b.n_objects == 2 and is_weak_equivalence(collapse(b))


def test_borel_of_trivial_action_is_the_delooping():
    gs = constant_group_sheaf(point_site(), cyclic(2))
    b = borel(trivial_action(gs)).values[0]
    assert (b.n_objects, b.n_morphisms) == (1, 2)


def test_borel_of_free_action_with_two_orbits():
    s = point_site()
    gs = constant_group_sheaf(s, cyclic(2))
    space = make_presheaf(s, "set", [("p", "q", "r", "t")], [(0, 1, 2, 3)])
    a = make_action(gs, space, [[(0, 1, 2, 3), (1, 0, 3, 2)]])
    b = borel(a).values[0]
    assert len(b.components) == 2
    # two copies of indiscrete(2): every vertex group is trivial
    assert (b.n_objects, b.n_morphisms) == (4, 8)


def test_point_cocycle_gives_trivial_torsor():
    s = point_site()
    gs = constant_group_sheaf(s, symmetric(3))
    pt = terminal_presheaf(s, "groupoid")
    legs = presheaf_maps(pt, delooping_presheaf(gs))
    assert len(legs) == 1
    x = torsor_from_cocycle(PresheafCocycle(pt, legs[0], gs))
    assert find_torsor_isomorphism(x, regular_action(gs)) is not None


def test_twisted_and_untwisted_transitions_give_different_torsors():
    s, gs = _circle_c2()
    a = 1  # the non-identity element; the identity sits at index 0
    flat = torsor_from_cocycle(_cech_cocycle(s, gs, (0, 0, 0)))
    twisted = torsor_from_cocycle(_cech_cocycle(s, gs, (0, 0, a)))
    assert check_torsor(flat) and check_torsor(twisted)
    assert find_torsor_isomorphism(flat, twisted) is None
    assert find_torsor_isomorphism(flat, regular_action(gs)) is not None
    assert find_torsor_isomorphism(twisted, _mobius(s, gs)) is not None


def test_mobius_cocycle_sits_in_the_twisted_component():
    s, gs = _circle_c2()
    twisted = _cech_cocycle(s, gs, (0, 0, 1))
    alpha, x = comparison_map(twisted)
    assert alpha.source == twisted.middle
    assert find_torsor_isomorphism(x, _mobius(s, gs)) is not None


def test_trivial_torsor_cocycle_has_contractible_middle():
    gs = constant_group_sheaf(circle_site(), cyclic(3))
    c = cocycle_from_torsor(regular_action(gs))
    for g in c.middle.values:
        assert len(g.components) <= 1
        if g.n_objects:
            assert is_weak_equivalence(collapse(g))


@pytest.mark.parametrize("group", [cyclic(2), cyclic(3)], ids=lambda g: g.name)
def test_round_trip_on_every_classified_torsor(group):
    s = circle_site()
    gs = constant_group_sheaf(s, group)
    for x in classify_torsors(s, gs).representatives:
        y = torsor_from_cocycle(cocycle_from_torsor(x))
        assert find_torsor_isomorphism(x, y) is not None


@pytest.mark.parametrize("group", [cyclic(2), symmetric(3)], ids=lambda g: g.name)
def test_torsors_on_a_point(group):
    gs = constant_group_sheaf(point_site(), group)
    assert len(classify_torsors(point_site(), gs).representatives) == 1
    assert cech_h1(point_site(), gs)[0] == 1


@pytest.mark.parametrize("group", [cyclic(2), cyclic(3), symmetric(3)], ids=lambda g: g.name)
def test_circle_torsors_match_conjugacy_classes(group):
    s = circle_site()
    gs = constant_group_sheaf(s, group)
    t = oracles.table_of(group)
    want = oracles.conjugacy_classes(t)
    cls = classify_torsors(s, gs)
    assert len(cls.representatives) == want and cls.all_isomorphisms
    count, data, _ = cech_h1(s, gs)
    assert count == want == oracles.triangle_h1_orbits(t)[0]
    assert len(data) == count


def test_cocycle_components_on_circle_c2():
    s, gs = _circle_c2()
    comps = bounded_cocycle_components(s, gs)
    assert comps.n_components == 2
    torsors = [comparison_map(c)[1] for c in comps.representatives]
    assert find_torsor_isomorphism(torsors[0], torsors[1]) is None
