import pytest

from cocat.errors import CoverageViolation, NonFunctorialDiagram
from cocat.groupoid import (GroupoidMap, collapse, delooping, discrete, identity_map, indiscrete,
                            is_isomorphism, is_weak_equivalence, point)
from cocat.groups import cyclic, symmetric
from cocat.site import (GroupoidDiagram, PresheafMap, action_diagram, circle_site,
                        constant_presheaf, cover_cech_groupoid, grothendieck_hocolim, is_iso_map,
                        is_sheaf, local_weak_equivalence, make_presheaf, map_to_terminal,
                        point_site, poset_site, sheafify)

CIRCLE_LEQ = [("0", "U12"), ("0", "U13"), ("0", "U23"), ("U12", "U1"), ("U12", "U2"),
              ("U13", "U1"), ("U13", "U3"), ("U23", "U2"), ("U23", "U3"),
              ("U1", "T"), ("U2", "T"), ("U3", "T")]


def _closure(elements, leq):
    rel = {(a, a) for a in elements} | set(leq)
    while True:
        more = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not more:
            return rel
        rel |= more


def test_point_site_is_valid():
    s = point_site()
    assert len(s.objects) == 1 and len(s.arrows) == 1


def test_circle_site_has_one_arrow_per_order_relation():
    s = circle_site()
    assert len(s.arrows) == len(_closure(s.objects, CIRCLE_LEQ)) == 27
    assert s.objects[s.terminal] == "T"


def test_cover_not_stable_under_pullback_is_rejected():
    # B <= T is not below A, so the pullback of {A -> T} to B is empty
    with pytest.raises(CoverageViolation) as err:
        poset_site(["A", "B", "T"], [("A", "T"), ("B", "T")], [("T", ["A"])])
    assert err.value.witness["along"]


def test_constant_group_on_point_is_already_a_sheaf():
    p = constant_presheaf(point_site(), "group", cyclic(2))
    sh = sheafify(p)
    assert is_sheaf(p)[0]
    assert is_iso_map(sh.unit)


def test_sheafification_forces_a_point_over_the_empty_object():
    s = circle_site()
    sh = sheafify(constant_presheaf(s, "group", cyclic(2))).sheaf
    empty = s.objects.index("0")
    # the empty family has exactly one matching family
    assert sh.size(empty) == 1
    assert all(sh.size(o) == 2 for o in range(len(s.objects)) if o != empty)


def _gluing_failure():
    s = circle_site()
    values = []
    for o in s.objects:
        values.append(("*",) if o in ("T", "0") else ("a", "b"))
    restrict = []
    for a in range(len(s.arrows)):
        src, tgt = s.objects[s.src[a]], s.objects[s.tgt[a]]
        if src == "0":
            restrict.append((0,) * len(values[s.tgt[a]]))
        elif tgt == "T":
            restrict.append((0,))
        else:
            restrict.append((0, 1))
    return s, make_presheaf(s, "set", values, restrict)


def test_mismatched_sections_fail_gluing_at_the_top():
    s, p = _gluing_failure()
    ok, wit = is_sheaf(p)
    assert not ok and wit["object"] == "T" and wit["failure"] == "gluing"
    unit = sheafify(p).unit
    t = s.objects.index("T")
    assert len(unit.components[t]) == 1 and unit.target.size(t) == 2


def test_identity_cover_gives_terminal_groupoids():
    s = circle_site()
    t = s.terminal
    c = cover_cech_groupoid(s, t, [s.identities[t]])
    for g in c.values:
        assert is_weak_equivalence(collapse(g))


def test_arc_cover_cech_groupoid_components():
    s = circle_site()
    t = s.terminal
    fam = list(s.covers[t][0])
    c = cover_cech_groupoid(s, t, fam)
    for v, g in enumerate(c.values):
        # objects: arcs containing V; one component when V lies in some arc
        arcs = sum(1 for f in fam if s.hom(v, s.src[f]))
        assert g.n_objects == arcs
        assert len(g.components) == (1 if arcs else 0)


def test_point_site_cech_groupoids_are_contractible():
    s = point_site()
    c = cover_cech_groupoid(s, 0, [0, 0])
    assert is_weak_equivalence(collapse(c.values[0]))


def test_identity_is_a_local_weak_equivalence():
    p = constant_presheaf(circle_site(), "groupoid", delooping(cyclic(2)))
    ident = PresheafMap(p, p, tuple(identity_map(g) for g in p.values))
    assert local_weak_equivalence(ident)


def test_arc_cech_groupoid_is_locally_contractible():
    s = circle_site()
    t = s.terminal
    c = cover_cech_groupoid(s, t, s.covers[t][0])
    assert local_weak_equivalence(map_to_terminal(c))


def test_constant_bc2_is_not_locally_trivial():
    p = constant_presheaf(circle_site(), "groupoid", delooping(cyclic(2)))
    cert = local_weak_equivalence(map_to_terminal(p))
    assert not cert and cert.failure == "automorphisms"


def test_hocolim_of_regular_action_is_contractible():
    c2 = cyclic(2)
    h = grothendieck_hocolim(action_diagram(c2, [list(r) for r in c2.table]))
    assert h.n_objects == 2 and h.n_morphisms == 4
    assert is_weak_equivalence(collapse(h))


def test_hocolim_of_point_is_the_base():
    c2 = cyclic(2)
    h = grothendieck_hocolim(action_diagram(c2, [[0], [0]]))
    assert (h.n_objects, h.n_morphisms) == (1, 2)


def test_hocolim_over_discrete_base_is_disjoint_union():
    base = discrete(["x", "y"])
    fibres = (delooping(symmetric(3)), indiscrete(2))
    d = GroupoidDiagram(base, fibres, (identity_map(fibres[0]), identity_map(fibres[1])))
    h = grothendieck_hocolim(d)
    assert h.n_objects == 3 and h.n_morphisms == 6 + 4
    assert len(h.components) == 2


def test_non_functorial_diagram_is_rejected():
    c2 = cyclic(2)
    bg = delooping(c2)
    fib = discrete(["p", "q"])
    swap = GroupoidMap(fib, fib, (1, 0), (1, 0))
    d = GroupoidDiagram(bg, (fib,), (swap, swap))  # the identity arrow must act trivially
    with pytest.raises(NonFunctorialDiagram):
        grothendieck_hocolim(d)
