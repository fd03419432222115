"""Cocycle categories H(X, Y) between finite groupoids.

A cocycle is a span ``X <-f- Z -g-> Y`` with f a weak equivalence; a morphism
is a functor between middles commuting strictly with both legs.  The category
is infinite, so it is enumerated with middles of at most ``bound`` objects,
taken up to isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import BoundTooSmall, InputError, NotWeakEquivalence
from .groupoid import (GroupoidMap, compose_maps, conjugate_functor, disjoint_union,
                       factorize, functors, homotopy_on_cylinder, identity_map, indiscrete,
                       is_isomorphism, is_weak_equivalence, natural_isomorphism, pairing,
                       product, product_map, pullback_along_fibration)
from .groups import find_isomorphism
from .unionfind import UnionFind


@dataclass(frozen=True)
class Cocycle:
    f: GroupoidMap
    g: GroupoidMap

    def __post_init__(self):
        if self.f.source != self.g.source:
            raise InputError("cocycle legs have different sources")
        if not is_weak_equivalence(self.f):
            raise NotWeakEquivalence("left leg of a cocycle must be a weak equivalence",
                                     witness=is_weak_equivalence(self.f).witness)

    @property
    def middle(self):
        return self.f.source

    @property
    def x(self):
        return self.f.target

    @property
    def y(self):
        return self.g.target


@dataclass(frozen=True)
class CocycleMorphism:
    source: Cocycle
    target: Cocycle
    alpha: GroupoidMap

    def __post_init__(self):
        if compose_maps(self.target.f, self.alpha) != self.source.f:
            raise InputError("cocycle morphism does not commute with the left legs")
        if compose_maps(self.target.g, self.alpha) != self.source.g:
            raise InputError("cocycle morphism does not commute with the right legs")


@dataclass(frozen=True)
class HomotopyClass:
    representative: GroupoidMap
    class_id: int


# -- homotopy classes ------------------------------------------------------

class _Classes:
    """All functors x -> y, partitioned by natural isomorphism."""

    def __init__(self, x, y):
        self.x, self.y = x, y
        self.functors = functors(x, y)
        index = {f.key: i for i, f in enumerate(self.functors)}
        uf = UnionFind(len(self.functors))
        for i, f in enumerate(self.functors):
            # changing eta at one object at a time generates natural isomorphism
            for o in range(x.n_objects):
                for u in y.out_arrows[f.obj[o]]:
                    if u == y.identities[f.obj[o]]:
                        continue
                    eta = [y.identities[f.obj[p]] for p in range(x.n_objects)]
                    eta[o] = u
                    uf.union(i, index[conjugate_functor(f, eta).key])
        labels = uf.labels()
        self.index = index
        self.label = labels
        reps = {}
        for i, c in enumerate(labels):
            reps.setdefault(c, i)
        self.classes = [HomotopyClass(self.functors[reps[c]], c) for c in sorted(reps)]

    def class_id(self, f):
        try:
            return self.label[self.index[f.key]]
        except KeyError:
            raise InputError("map is not a functor between the classified groupoids") from None


@lru_cache(maxsize=64)
def _classes(x, y):
    return _Classes(x, y)


def homotopy_classes(x, y):
    """[X, Y]: functors modulo natural isomorphism, ordered by first representative."""
    return list(_classes(x, y).classes)


def class_of(k):
    c = _classes(k.source, k.target)
    cid = c.class_id(k)
    return c.classes[cid]


def class_to_cocycle(k):
    """``k -> (1_X, k)``."""
    return Cocycle(identity_map(k.source), k)


def quasi_inverse(f, pick=min):
    """A functor ``f': X -> Z`` with ``f f' ~= 1``; ``pick`` chooses among preimages."""
    z_, x_ = f.source, f.target
    comp_z = {}
    for z in range(z_.n_objects):
        comp_z.setdefault(x_.component_of[f.obj[z]], []).append(z)
    pre, eps = [], []
    for x in range(x_.n_objects):
        cands = comp_z.get(x_.component_of[x])
        if not cands:
            raise NotWeakEquivalence("left leg is not essentially surjective")
        z = pick(cands)
        pre.append(z)
        eps.append(pick(x_.homset(f.obj[z], x)))
    lookup = {}
    for n in range(z_.n_morphisms):
        lookup[(z_.src[n], z_.tgt[n], f.mor[n])] = n
    mor = []
    for m in range(x_.n_morphisms):
        a, b = x_.src[m], x_.tgt[m]
        want = x_.comp[(x_.inverses[eps[b]], x_.comp[(m, eps[a])])]
        mor.append(lookup[(pre[a], pre[b], want)])
    return GroupoidMap(x_, z_, tuple(pre), tuple(mor)), tuple(eps)


def phi_class(c):
    """Class of ``g o f^-1``, computed through two different quasi-inverses."""
    q1, _ = quasi_inverse(c.f, min)
    q2, _ = quasi_inverse(c.f, max)
    k1 = class_of(compose_maps(c.g, q1))
    k2 = class_of(compose_maps(c.g, q2))
    if k1.class_id != k2.class_id:
        raise AssertionError("phi depends on the chosen quasi-inverse")
    return k1


def cylinder_zigzag(f, g):
    """Morphisms ``(1, f) -> (s, h) <- (1, g)`` for naturally isomorphic f, g."""
    eta = natural_isomorphism(f, g)
    if eta is None:
        return None
    cyl, d0, d1, s, h = homotopy_on_cylinder(f, g, eta)
    mid = Cocycle(s, h)
    return [CocycleMorphism(class_to_cocycle(f), mid, d0),
            CocycleMorphism(class_to_cocycle(g), mid, d1)]


# -- canonical zig-zag -----------------------------------------------------

def _section(p):
    """A section of a trivial fibration (lowest-index choices)."""
    v, x = p.source, p.target
    pre = []
    for o in range(x.n_objects):
        cands = [w for w in range(v.n_objects) if p.obj[w] == o]
        if not cands:
            raise NotWeakEquivalence("p is not surjective on objects")
        pre.append(cands[0])
    lookup = {(v.src[n], v.tgt[n], p.mor[n]): n for n in range(v.n_morphisms)}
    mor = tuple(lookup[(pre[x.src[m]], pre[x.tgt[m]], m)] for m in range(x.n_morphisms))
    return GroupoidMap(x, v, tuple(pre), mor)


def canonical_zigzag(c):
    """``(f, g) -j-> (p, theta) <-sigma- (1_X, theta sigma)``; empty if already canonical."""
    if c.middle == c.x and c.f == identity_map(c.x):
        return []
    fac = factorize(c.f)
    theta = compose_maps(c.g, fac.retraction)
    mid = Cocycle(fac.p, theta)
    sigma = _section(fac.p)
    end = Cocycle(identity_map(c.x), compose_maps(theta, sigma))
    return [CocycleMorphism(c, mid, fac.j), CocycleMorphism(end, mid, sigma)]


# -- transport along weak equivalences -------------------------------------

@dataclass(frozen=True)
class Transport:
    cocycle: Cocycle
    pushed: Cocycle
    zigzag: tuple


def transport_cocycle(alpha, beta, c):
    """Pull a cocycle over (X', Y') back to (X, Y) along weak equivalences.

    Factor ``(f, g): Z -> X' x Y'`` as a trivial cofibration followed by a
    fibration W -> X' x Y', pull back along ``alpha x beta`` and return the
    projections.  ``pushed`` is the image of the result under ``(alpha, beta)_*``
    and ``zigzag`` connects it to ``c`` through the W-cocycle.
    """
    for m, nm in ((alpha, "alpha"), (beta, "beta")):
        if not is_weak_equivalence(m):
            raise NotWeakEquivalence(f"{nm} is not a weak equivalence")
    if alpha.target != c.x or beta.target != c.y:
        raise InputError("cocycle is not over the targets of alpha and beta")
    fac = factorize(pairing(c.f, c.g))
    _, px2, py2 = product(c.x, c.y)
    w_cocycle = Cocycle(compose_maps(px2, fac.p), compose_maps(py2, fac.p))
    ab = product_map(alpha, beta)
    pb = pullback_along_fibration(fac.p, ab)
    _, px, py = product(alpha.source, beta.source)
    out = Cocycle(compose_maps(px, pb.to_base_change), compose_maps(py, pb.to_base_change))
    pushed = Cocycle(compose_maps(alpha, out.f), compose_maps(beta, out.g))
    zig = (CocycleMorphism(pushed, w_cocycle, pb.to_fibred),
           CocycleMorphism(c, w_cocycle, fac.j))
    return Transport(out, pushed, zig)


# -- bounded enumeration ---------------------------------------------------

def middles(x, bound):
    """Groupoids weakly equivalent to X with at most ``bound`` objects, up to iso.

    Each is a disjoint union over components of X of ``indiscrete(m) x B(G_c)``.
    """
    comps = x.components
    groups = [x.vertex_group(c[0])[0] for c in comps]
    # components with isomorphic vertex groups are interchangeable
    kind = []
    for i, g in enumerate(groups):
        k = next((kind[j] for j in range(i) if len(groups[j]) == len(g)
                  and find_isomorphism(groups[j], g) is not None), i)
        kind.append(k)
    seen = set()
    out = []
    for sizes in itertools.product(range(1, bound + 1), repeat=len(comps)):
        if sum(sizes) > bound:
            continue
        sig = tuple(sorted(zip(kind, sizes)))
        if sig in seen:
            continue
        seen.add(sig)
        parts = []
        for (c, m, g) in zip(comps, sizes, groups):
            from .groupoid import delooping
            p, _, _ = product(indiscrete(m), delooping(g))
            parts.append(p)
        z = parts[0] if len(parts) == 1 else disjoint_union(parts)[0]
        out.append(_renamed(z, "Z" + "_".join(str(s) for s in sizes)))
    return out


def _renamed(g, name):
    from .groupoid import FiniteGroupoid
    return FiniteGroupoid(g.objects, g.morphisms, g.src, g.tgt, g.comp, g.identities,
                          g.inverses, name)


class BoundedCocycleCategory:
    """Cocycles with middles from :func:`middles`, all strictly commuting
    morphisms among them, and the resulting components."""

    def __init__(self, x, y, bound=None):
        if bound is None:
            bound = x.n_objects + 2
        if bound < x.n_objects:
            raise BoundTooSmall(f"bound {bound} < |Ob(X)| = {x.n_objects}",
                                witness={"bound": bound, "objects": x.n_objects})
        self.x, self.y, self.bound = x, y, bound
        self.middles = middles(x, bound)
        self.left = []
        self.right = []
        self.offsets = []
        total = 0
        for z in self.middles:
            fs = [f for f in functors(z, x) if is_weak_equivalence(f)]
            gs = functors(z, y)
            self.left.append(fs)
            self.right.append(gs)
            self.offsets.append(total)
            total += len(fs) * len(gs)
        self.n_objects = total
        self._left_index = [{f.key: i for i, f in enumerate(fs)} for fs in self.left]
        self._right_index = [{g.key: i for i, g in enumerate(gs)} for gs in self.right]
        uf = UnionFind(total)
        n_mor = 0
        for a, za in enumerate(self.middles):
            for b, zb in enumerate(self.middles):
                for alpha in functors(za, zb):
                    if not is_weak_equivalence(alpha):
                        continue
                    fmap = [self._left_index[a][compose_maps(f, alpha).key] for f in self.left[b]]
                    gmap = [self._right_index[a][compose_maps(g, alpha).key]
                            for g in self.right[b]]
                    na, nb = len(self.right[a]), len(self.right[b])
                    oa, ob = self.offsets[a], self.offsets[b]
                    for fi, fa in enumerate(fmap):
                        base_a = oa + fa * na
                        base_b = ob + fi * nb
                        for gi, ga in enumerate(gmap):
                            uf.union(base_a + ga, base_b + gi)
                    n_mor += len(fmap) * len(gmap)
        self.n_morphisms = n_mor
        self.component_of = uf.labels()
        self.n_components = max(self.component_of, default=-1) + 1

    def object(self, i):
        a = max(k for k, o in enumerate(self.offsets) if o <= i)
        r = i - self.offsets[a]
        fi, gi = divmod(r, len(self.right[a]))
        return Cocycle(self.left[a][fi], self.right[a][gi])

    def objects(self):
        return [self.object(i) for i in range(self.n_objects)]

    @property
    def components(self):
        blocks = {}
        for i, c in enumerate(self.component_of):
            blocks.setdefault(c, []).append(i)
        return [blocks[c] for c in sorted(blocks)]

    def iter_morphisms(self):
        """Every morphism of the bounded category, regenerated on demand."""
        for a, za in enumerate(self.middles):
            for b, zb in enumerate(self.middles):
                for alpha in functors(za, zb):
                    if not is_weak_equivalence(alpha):
                        continue
                    for f in self.left[b]:
                        for g in self.right[b]:
                            tgt = Cocycle(f, g)
                            src = Cocycle(compose_maps(f, alpha), compose_maps(g, alpha))
                            yield CocycleMorphism(src, tgt, alpha)

    def index_of(self, c):
        """Index of a cocycle whose middle is one of the enumerated middles."""
        for a, z in enumerate(self.middles):
            if z == c.middle:
                fi = self._left_index[a][c.f.key]
                gi = self._right_index[a][c.g.key]
                return self.offsets[a] + fi * len(self.right[a]) + gi
        raise KeyError("middle is not enumerated")

    def locate(self, c):
        """Index of an enumerated cocycle isomorphic to ``c``, or None if c's
        middle is not isomorphic to any enumerated middle."""
        for a, z in enumerate(self.middles):
            if z.n_objects != c.middle.n_objects or z.n_morphisms != c.middle.n_morphisms:
                continue
            for theta in functors(z, c.middle):
                if is_isomorphism(theta):
                    moved = Cocycle(compose_maps(c.f, theta), compose_maps(c.g, theta))
                    return self.index_of(moved)
        return None

    def component(self, c):
        i = self.locate(c)
        return None if i is None else self.component_of[i]


def enumerate_cocycles(x, y, bound=None):
    return BoundedCocycleCategory(x, y, bound)


@dataclass
class BijectionReport:
    classes: int
    components: int
    phi_constant: bool
    psi_section: bool
    bijection: bool
    witnesses: list


def check_bijection(x, y, bound=None):
    """Compare pi0 of the bounded cocycle category with [X, Y] through phi."""
    cat = BoundedCocycleCategory(x, y, bound)
    classes = homotopy_classes(x, y)
    comp_class = {}
    phi_constant = True
    witnesses = []
    for i in range(cat.n_objects):
        k = phi_class(cat.object(i)).class_id
        c = cat.component_of[i]
        if comp_class.setdefault(c, k) != k:
            phi_constant = False
            witnesses.append({"component": c, "classes": [comp_class[c], k]})
    psi_section = True
    psi_components = {}
    for k in classes:
        c = class_to_cocycle(k.representative)
        if phi_class(c).class_id != k.class_id:
            psi_section = False
        psi_components[k.class_id] = cat.component(c)
    image = sorted(comp_class.values())
    bijection = (phi_constant and psi_section and len(set(image)) == len(image)
                 and len(image) == len(classes) == cat.n_components)
    for k in classes:
        witnesses.append({"class": k.class_id, "psi_component": psi_components[k.class_id]})
    return BijectionReport(len(classes), cat.n_components, phi_constant, psi_section, bijection,
                           witnesses)
