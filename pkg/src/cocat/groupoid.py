"""Finite groupoids, functors between them, and the folk model structure.

A groupoid stores objects and morphisms by index.  ``comp[(g, f)]`` is ``g o f``
(``f`` first) and is defined exactly when ``tgt[f] == src[g]``.  Fibrations
are iso-lifting functors, weak equivalences are equivalences of categories.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (AssociativityFailure, CompositionGap, InputError, NotAFibration,
                     NotAFunctor, NotWeakEquivalence)
from .groups import FiniteGroup, homomorphisms, trivial_group
from .unionfind import UnionFind


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    objects: tuple
    morphisms: tuple
    src: tuple
    tgt: tuple
    comp: dict
    identities: tuple
    inverses: tuple
    name: str = field(default="", compare=False)

    def __eq__(self, other):
        return (isinstance(other, FiniteGroupoid) and self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    @cached_property
    def _key(self):
        return (self.objects, self.morphisms, self.src, self.tgt,
                tuple(sorted(self.comp.items())))

    def __repr__(self):
        return f"FiniteGroupoid({self.name or '?'}, {len(self.objects)} obj, {len(self.morphisms)} mor)"

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.morphisms)

    def compose(self, g, f):
        return self.comp[(g, f)]

    @cached_property
    def out_arrows(self):
        out = [[] for _ in self.objects]
        for m, s in enumerate(self.src):
            out[s].append(m)
        return tuple(tuple(x) for x in out)

    @cached_property
    def hom(self):
        h = {}
        for m in range(len(self.morphisms)):
            h.setdefault((self.src[m], self.tgt[m]), []).append(m)
        return {k: tuple(v) for k, v in h.items()}

    def homset(self, x, y):
        return self.hom.get((x, y), ())

    @cached_property
    def component_of(self):
        uf = UnionFind(len(self.objects))
        for m in range(len(self.morphisms)):
            uf.union(self.src[m], self.tgt[m])
        return tuple(uf.labels())

    @cached_property
    def components(self):
        comps = {}
        for x, c in enumerate(self.component_of):
            comps.setdefault(c, []).append(x)
        return tuple(tuple(v) for _, v in sorted(comps.items()))

    def is_discrete(self):
        return len(self.morphisms) == len(self.objects)

    def vertex_group(self, x):
        """``Aut(x)`` as a FiniteGroup plus the list of morphism ids it indexes."""
        loops = self.homset(x, x)
        pos = {m: i for i, m in enumerate(loops)}
        table = tuple(tuple(pos[self.comp[(a, b)]] for b in loops) for a in loops)
        g = FiniteGroup(tuple(self.morphisms[m] for m in loops), table,
                        pos[self.identities[x]], f"Aut({self.objects[x]})")
        return g, loops

    @cached_property
    def spanning_arrows(self):
        """Per object, the lowest-index arrow from its component's base object."""
        out = [None] * len(self.objects)
        for comp in self.components:
            b = comp[0]
            for z in comp:
                out[z] = self.homset(b, z)[0]
        return tuple(out)

    def object_index(self, label):
        try:
            return self.objects.index(label)
        except ValueError:
            raise InputError(f"unknown object {label!r}", witness=label) from None

    def morphism_index(self, label):
        try:
            return self.morphisms.index(label)
        except ValueError:
            raise InputError(f"unknown morphism {label!r}", witness=label) from None


@dataclass(frozen=True, eq=False)
class GroupoidMap:
    source: FiniteGroupoid
    target: FiniteGroupoid
    obj: tuple
    mor: tuple

    def __eq__(self, other):
        return (isinstance(other, GroupoidMap) and self.obj == other.obj
                and self.mor == other.mor and self.source == other.source
                and self.target == other.target)

    def __hash__(self):
        return hash((self.obj, self.mor))

    @property
    def key(self):
        return (self.obj, self.mor)

    def __call__(self, m):
        return self.mor[m]

    def __repr__(self):
        return f"GroupoidMap({self.source.name or '?'} -> {self.target.name or '?'})"


# -- construction and validation ---------------------------------------------

def build_groupoid(objects, morphisms, compose, inverses=None, identities=None, name=""):
    """Validate a groupoid given by labels.

    ``morphisms`` is a list of ``(id, src, tgt)``; ``compose`` a list of
    ``(g, f, h)`` meaning ``h = g o f``.  Identities and inverses are inferred
    when not given, and checked either way.
    """
    objects = tuple(str(o) for o in objects)
    if len(set(objects)) != len(objects):
        raise InputError("object labels are not distinct", witness=objects)
    opos = {o: i for i, o in enumerate(objects)}
    ids, src, tgt = [], [], []
    for entry in morphisms:
        mid, s, t = (str(v) for v in entry)
        if s not in opos or t not in opos:
            raise InputError(f"morphism {mid!r} has unknown endpoint", witness=mid)
        ids.append(mid)
        src.append(opos[s])
        tgt.append(opos[t])
    if len(set(ids)) != len(ids):
        raise InputError("morphism ids are not distinct", witness=ids)
    mpos = {m: i for i, m in enumerate(ids)}

    def mref(label):
        if str(label) not in mpos:
            raise InputError(f"unknown morphism {label!r}", witness=str(label))
        return mpos[str(label)]

    comp = {}
    for g, f, h in compose:
        key = (mref(g), mref(f))
        if key in comp:
            raise InputError(f"composite {g} o {f} given twice", witness=[g, f])
        comp[key] = mref(h)
    ident = None if identities is None else [mref(identities[o]) for o in objects]
    inv = None if inverses is None else {mref(k): mref(v) for k, v in inverses.items()}
    return make_groupoid(objects, ids, src, tgt, comp, ident, inv, name)


def make_groupoid(objects, morphisms, src, tgt, comp, identities=None, inverses=None, name="",
                  check=True):
    """Assemble a groupoid from index data; validates unless ``check`` is False."""
    objects, morphisms = tuple(objects), tuple(morphisms)
    src, tgt = tuple(src), tuple(tgt)
    n = len(morphisms)
    if check:
        for (g, f), h in comp.items():
            if tgt[f] != src[g]:
                raise CompositionGap(
                    f"composite {morphisms[g]} o {morphisms[f]} given for a non-composable pair",
                    witness=[morphisms[g], morphisms[f]])
            if src[h] != src[f] or tgt[h] != tgt[g]:
                raise CompositionGap(
                    f"composite {morphisms[g]} o {morphisms[f]} has wrong endpoints",
                    witness=[morphisms[g], morphisms[f], morphisms[h]])
        for f in range(n):
            for g in range(n):
                if tgt[f] == src[g] and (g, f) not in comp:
                    raise CompositionGap(
                        f"missing composite {morphisms[g]} o {morphisms[f]}",
                        witness=[morphisms[g], morphisms[f]])
    if identities is None:
        identities = []
        for x in range(len(objects)):
            cand = [m for m in range(n) if src[m] == x and tgt[m] == x
                    and all(comp.get((m, f), f) == f for f in range(n) if tgt[f] == x)
                    and all(comp.get((g, m), g) == g for g in range(n) if src[g] == x)]
            if not cand:
                raise AssociativityFailure(f"object {objects[x]!r} has no identity",
                                           witness=objects[x])
            identities.append(cand[0])
    identities = tuple(identities)
    if inverses is None:
        inverses = {}
        for f in range(n):
            cand = [g for g in range(n) if src[g] == tgt[f] and tgt[g] == src[f]
                    and comp[(g, f)] == identities[src[f]]
                    and comp[(f, g)] == identities[tgt[f]]]
            if not cand:
                raise AssociativityFailure(f"morphism {morphisms[f]!r} has no inverse",
                                           witness=morphisms[f])
            inverses[f] = cand[0]
    inverses = tuple(inverses[f] for f in range(n))
    if check:
        for x, i in enumerate(identities):
            if src[i] != x or tgt[i] != x:
                raise AssociativityFailure(f"identity of {objects[x]!r} is not a loop",
                                           witness=objects[x])
        for f in range(n):
            if comp[(identities[tgt[f]], f)] != f or comp[(f, identities[src[f]])] != f:
                raise AssociativityFailure(f"identities are not neutral for {morphisms[f]!r}",
                                           witness=morphisms[f])
            g = inverses[f]
            if (src[g] != tgt[f] or tgt[g] != src[f] or comp[(g, f)] != identities[src[f]]
                    or comp[(f, g)] != identities[tgt[f]]):
                raise AssociativityFailure(f"inverse of {morphisms[f]!r} is not two-sided",
                                           witness=morphisms[f])
        out = [[] for _ in objects]
        for m in range(n):
            out[src[m]].append(m)
        for f in range(n):
            for g in out[tgt[f]]:
                gf = comp[(g, f)]
                for h in out[tgt[g]]:
                    if comp[(h, gf)] != comp[(comp[(h, g)], f)]:
                        raise AssociativityFailure(
                            f"({morphisms[h]} o {morphisms[g]}) o {morphisms[f]} differs",
                            witness=[morphisms[h], morphisms[g], morphisms[f]])
    return FiniteGroupoid(objects, morphisms, src, tgt, dict(comp), identities, inverses, name)


def make_map(source, target, obj, mor, check=True):
    obj, mor = tuple(obj), tuple(mor)
    if check:
        _check_functor(source, target, obj, mor)
    return GroupoidMap(source, target, obj, mor)


def _check_functor(a, b, obj, mor):
    if len(obj) != a.n_objects or len(mor) != a.n_morphisms:
        raise InputError("map does not cover every object and morphism")
    for m in range(a.n_morphisms):
        if b.src[mor[m]] != obj[a.src[m]] or b.tgt[mor[m]] != obj[a.tgt[m]]:
            raise NotAFunctor(f"morphism {a.morphisms[m]!r} is sent to the wrong hom-set",
                              witness=a.morphisms[m])
    for x in range(a.n_objects):
        if mor[a.identities[x]] != b.identities[obj[x]]:
            raise NotAFunctor(f"identity of {a.objects[x]!r} is not preserved",
                              witness=a.objects[x])
    for (g, f), h in a.comp.items():
        if b.comp[(mor[g], mor[f])] != mor[h]:
            raise NotAFunctor(
                f"composite {a.morphisms[g]} o {a.morphisms[f]} is not preserved",
                witness=[a.morphisms[g], a.morphisms[f]])


def build_map(source, target, objects, morphisms):
    """Map from label dictionaries ``{src_label: tgt_label}``."""
    try:
        obj = [target.object_index(objects[o]) for o in source.objects]
        mor = [target.morphism_index(morphisms[m]) for m in source.morphisms]
    except KeyError as e:
        raise InputError(f"map is missing an assignment for {e.args[0]!r}",
                         witness=e.args[0]) from None
    return make_map(source, target, obj, mor)


def identity_map(g):
    return GroupoidMap(g, g, tuple(range(g.n_objects)), tuple(range(g.n_morphisms)))


def compose_maps(g, f):
    """``g o f``."""
    if f.target != g.source:
        raise InputError("maps are not composable")
    return GroupoidMap(f.source, g.target, tuple(g.obj[x] for x in f.obj),
                       tuple(g.mor[m] for m in f.mor))


# -- standard groupoids ----------------------------------------------------

def delooping(group, name=""):
    """``BG``: one object, morphisms the elements of G."""
    n = len(group)
    comp = {(g, f): group.table[g][f] for g in range(n) for f in range(n)}
    return make_groupoid(("*",), group.elements, (0,) * n, (0,) * n, comp,
                         (group.identity,), {f: group.inv(f) for f in range(n)},
                         name or f"B{group.name}", check=False)


def indiscrete(labels, name=""):
    """One morphism between each ordered pair of objects."""
    if isinstance(labels, int):
        labels = [str(i) for i in range(labels)]
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    pairs = [(i, j) for i in range(n) for j in range(n)]
    pos = {p: k for k, p in enumerate(pairs)}
    comp = {(pos[(j, k)], pos[(i, j)]): pos[(i, k)]
            for i in range(n) for j in range(n) for k in range(n)}
    return make_groupoid(labels, [f"{labels[i]}>{labels[j]}" for i, j in pairs],
                         [i for i, _ in pairs], [j for _, j in pairs], comp,
                         [pos[(i, i)] for i in range(n)],
                         {pos[(i, j)]: pos[(j, i)] for i, j in pairs},
                         name or f"I{n}", check=False)


def discrete(labels, name=""):
    if isinstance(labels, int):
        labels = [str(i) for i in range(labels)]
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    return make_groupoid(labels, [f"1_{x}" for x in labels], range(n), range(n),
                         {(i, i): i for i in range(n)}, range(n), {i: i for i in range(n)},
                         name or f"D{n}", check=False)


def point():
    return discrete(["*"], "*")


def cech_groupoid(f, labels=None, name=""):
    """Groupoid on the domain of ``f`` with a unique arrow x -> y iff f(x) = f(y).

    ``f`` is a sequence of images (any hashable values).
    """
    n = len(f)
    if labels is None:
        labels = [str(i) for i in range(n)]
    labels = tuple(str(x) for x in labels)
    pairs = [(i, j) for i in range(n) for j in range(n) if f[i] == f[j]]
    pos = {p: k for k, p in enumerate(pairs)}
    comp = {(pos[(j, k)], pos[(i, j)]): pos[(i, k)]
            for (i, j) in pairs for (jj, k) in pairs if jj == j}
    return make_groupoid(labels, [f"{labels[i]}>{labels[j]}" for i, j in pairs],
                         [i for i, _ in pairs], [j for _, j in pairs], comp,
                         [pos[(i, i)] for i in range(n)],
                         {pos[(i, j)]: pos[(j, i)] for i, j in pairs},
                         name or "Cech", check=False)


def translation_groupoid(group, action, labels=None, name=""):
    """Action groupoid of a left action; ``action[g][x]`` is ``g.x``.

    Objects are the points; arrows ``(g, x): x -> g.x``.
    """
    npts = len(action[0])
    if labels is None:
        labels = [str(i) for i in range(npts)]
    labels = tuple(str(x) for x in labels)
    arrows = [(g, x) for x in range(npts) for g in range(len(group))]
    pos = {a: k for k, a in enumerate(arrows)}
    comp = {}
    for g, x in arrows:
        y = action[g][x]
        for h in range(len(group)):
            comp[(pos[(h, y)], pos[(g, x)])] = pos[(group.table[h][g], x)]
    return make_groupoid(labels, [f"{group.elements[g]}.{labels[x]}" for g, x in arrows],
                         [x for _, x in arrows], [action[g][x] for g, x in arrows], comp,
                         [pos[(group.identity, x)] for x in range(npts)],
                         {pos[(g, x)]: pos[(group.inv(g), action[g][x])] for g, x in arrows},
                         name or "EGxX", check=False)


def product(a, b, name=""):
    """Product groupoid with its two projections."""
    objs = [(x, y) for x in range(a.n_objects) for y in range(b.n_objects)]
    opos = {p: i for i, p in enumerate(objs)}
    mors = [(f, g) for f in range(a.n_morphisms) for g in range(b.n_morphisms)]
    mpos = {p: i for i, p in enumerate(mors)}
    nb = b.n_morphisms
    comp = {}
    for (g1, f1), h1 in a.comp.items():
        for (g2, f2), h2 in b.comp.items():
            comp[(g1 * nb + g2, f1 * nb + f2)] = h1 * nb + h2
    p = make_groupoid(
        [f"({a.objects[x]},{b.objects[y]})" for x, y in objs],
        [f"({a.morphisms[f]},{b.morphisms[g]})" for f, g in mors],
        [opos[(a.src[f], b.src[g])] for f, g in mors],
        [opos[(a.tgt[f], b.tgt[g])] for f, g in mors], comp,
        [mpos[(a.identities[x], b.identities[y])] for x, y in objs],
        {mpos[(f, g)]: mpos[(a.inverses[f], b.inverses[g])] for f, g in mors},
        name or f"{a.name}x{b.name}", check=False)
    pa = GroupoidMap(p, a, tuple(x for x, _ in objs), tuple(f for f, _ in mors))
    pb = GroupoidMap(p, b, tuple(y for _, y in objs), tuple(g for _, g in mors))
    return p, pa, pb


def product_map(f, g):
    """``f x g`` between product groupoids."""
    src, _, _ = product(f.source, g.source)
    tgt, _, _ = product(f.target, g.target)
    nb, nbt = g.source.n_morphisms, g.target.n_morphisms
    mb, mbt = g.source.n_objects, g.target.n_objects
    obj = [f.obj[x] * mbt + g.obj[y] for x in range(f.source.n_objects) for y in range(mb)]
    mor = [f.mor[a] * nbt + g.mor[b] for a in range(f.source.n_morphisms) for b in range(nb)]
    return GroupoidMap(src, tgt, tuple(obj), tuple(mor))


def pairing(f, g):
    """``(f, g): Z -> X x Y``."""
    p, _, _ = product(f.target, g.target)
    my, ny = g.target.n_objects, g.target.n_morphisms
    return GroupoidMap(f.source, p, tuple(f.obj[z] * my + g.obj[z] for z in range(f.source.n_objects)),
                       tuple(f.mor[m] * ny + g.mor[m] for m in range(f.source.n_morphisms)))


def disjoint_union(parts, name=""):
    objects, morphisms, src, tgt, comp, ids, inv = [], [], [], [], {}, [], {}
    incl = []
    for k, g in enumerate(parts):
        oo, mo = len(objects), len(morphisms)
        objects += [f"{k}:{o}" for o in g.objects]
        morphisms += [f"{k}:{m}" for m in g.morphisms]
        src += [s + oo for s in g.src]
        tgt += [t + oo for t in g.tgt]
        comp.update({(x + mo, y + mo): z + mo for (x, y), z in g.comp.items()})
        ids += [i + mo for i in g.identities]
        inv.update({m + mo: v + mo for m, v in enumerate(g.inverses)})
        incl.append((oo, mo))
    u = make_groupoid(objects, morphisms, src, tgt, comp, ids, inv, name or "+".join(
        p.name for p in parts), check=False)
    maps = [GroupoidMap(g, u, tuple(x + oo for x in range(g.n_objects)),
                        tuple(m + mo for m in range(g.n_morphisms)))
            for g, (oo, mo) in zip(parts, incl)]
    return u, maps


def collapse(g, target=None):
    """The unique map to the terminal groupoid."""
    t = target or point()
    return GroupoidMap(g, t, (0,) * g.n_objects, (0,) * g.n_morphisms)


def map_from_homomorphism(bg, bh, phi):
    """Functor ``BG -> BH`` from an element map of the underlying groups."""
    return GroupoidMap(bg, bh, (0,), tuple(phi))


# -- functor enumeration ---------------------------------------------------

class _ComponentPlan:
    """Data for enumerating functors out of one connected component."""

    def __init__(self, g, comp):
        self.base = comp[0]
        self.objects = comp
        self.tree = {z: g.spanning_arrows[z] for z in comp}
        self.group, self.loops = g.vertex_group(self.base)
        lpos = {m: i for i, m in enumerate(self.loops)}
        # each morphism m: z -> z' becomes t_z'^-1 o m o t_z in Aut(base)
        self.morphisms = []
        for m in range(g.n_morphisms):
            z = g.src[m]
            if z not in self.tree:
                continue
            zz = g.tgt[m]
            loop = g.comp[(g.inverses[self.tree[zz]], g.comp[(m, self.tree[z])])]
            self.morphisms.append((m, z, zz, lpos[loop]))


def functors(x, y):
    """Every functor x -> y, in a deterministic order."""
    plans = [_ComponentPlan(x, c) for c in x.components]
    per_comp = [list(_component_functors(plan, y)) for plan in plans]
    out = []
    for combo in itertools.product(*per_comp):
        obj = [None] * x.n_objects
        mor = [None] * x.n_morphisms
        for o_part, m_part in combo:
            for k, v in o_part:
                obj[k] = v
            for k, v in m_part:
                mor[k] = v
        out.append(GroupoidMap(x, y, tuple(obj), tuple(mor)))
    return out


def _component_functors(plan, y):
    vgroups = {}
    others = [z for z in plan.objects if z != plan.base]
    for yb in range(y.n_objects):
        if yb not in vgroups:
            vgroups[yb] = y.vertex_group(yb)
        ygroup, yloops = vgroups[yb]
        homs = homomorphisms(plan.group, ygroup)
        for images in itertools.product(*[y.out_arrows[yb] for _ in others]):
            ft = {plan.base: y.identities[yb]}
            ft.update(zip(others, images))
            o_part = [(z, y.tgt[ft[z]]) for z in plan.objects]
            for phi in homs:
                m_part = []
                for m, z, zz, a in plan.morphisms:
                    inner = yloops[phi[a]]
                    m_part.append((m, y.comp[(ft[zz], y.comp[(inner, y.inverses[ft[z]])])]))
                yield o_part, m_part


# -- homotopy invariants and weak equivalences -----------------------------

@dataclass(frozen=True)
class HomotopyInvariants:
    pi0: tuple
    pi1: tuple
    pi2: tuple


def homotopy_invariants(g):
    """Components, vertex groups at component bases, and trivial pi2."""
    from .twogroupoid import FiniteTwoGroupoid, two_homotopy_invariants
    if isinstance(g, FiniteTwoGroupoid):
        return two_homotopy_invariants(g)
    reps = tuple(c[0] for c in g.components)
    pi1 = tuple(g.vertex_group(x)[0] for x in reps)
    return HomotopyInvariants(reps, pi1, tuple(trivial_group() for _ in reps))


@dataclass(frozen=True)
class WeqCertificate:
    """Outcome of a weak-equivalence test.

    ``pi0_map`` sends each source component to a target component;
    ``hom_witnesses`` lists checked (x, x') pairs with their hom-set sizes.
    On failure ``failure`` names the broken invariant and ``witness`` the data.
    """
    weq: bool
    pi0_map: tuple
    hom_witnesses: tuple = ()
    failure: str | None = None
    witness: object = None

    def __bool__(self):
        return self.weq


def is_weak_equivalence(f):
    """Essentially surjective and fully faithful, with a certificate."""
    from .twogroupoid import TwoGroupoidMap, two_weak_equivalence
    if isinstance(f, TwoGroupoidMap):
        return two_weak_equivalence(f)
    a, b = f.source, f.target
    ca, cb = a.component_of, b.component_of
    pi0 = {}
    for x in range(a.n_objects):
        c = cb[f.obj[x]]
        if pi0.setdefault(ca[x], c) != c:
            raise AssertionError("functor splits a component")
    pi0_map = tuple(pi0[c] for c in range(len(a.components)))
    hit = set(pi0_map)
    missing = [c for c in range(len(b.components)) if c not in hit]
    if missing:
        return WeqCertificate(False, pi0_map, (), "pi0-surjectivity",
                              {"unreached_object": b.objects[b.components[missing[0]][0]]})
    if len(hit) != len(pi0_map):
        seen = {}
        for c, d in enumerate(pi0_map):
            if d in seen:
                return WeqCertificate(False, pi0_map, (), "pi0-injectivity",
                                      {"objects": [a.objects[a.components[seen[d]][0]],
                                                   a.objects[a.components[c][0]]]})
            seen[d] = c
    checked = []
    for x in range(a.n_objects):
        for xx in range(a.n_objects):
            if ca[x] != ca[xx]:
                continue
            hs = a.homset(x, xx)
            ht = b.homset(f.obj[x], f.obj[xx])
            images = {f.mor[m] for m in hs}
            if len(images) != len(hs) or len(hs) != len(ht):
                if x == xx:
                    return WeqCertificate(False, pi0_map, tuple(checked), "pi1",
                                          {"object": a.objects[x], "source_order": len(hs),
                                           "target_order": len(ht),
                                           "injective": len(images) == len(hs)})
                return WeqCertificate(False, pi0_map, tuple(checked), "hom",
                                      {"pair": [a.objects[x], a.objects[xx]]})
            checked.append((x, xx, len(hs)))
    return WeqCertificate(True, pi0_map, tuple(checked))


def is_isomorphism(f):
    return (len(set(f.obj)) == f.target.n_objects == f.source.n_objects
            and len(set(f.mor)) == f.target.n_morphisms == f.source.n_morphisms)


def is_trivial_fibration(p):
    """Surjective on objects and fully faithful."""
    return set(p.obj) == set(range(p.target.n_objects)) and bool(is_weak_equivalence(p))


def fibration_witness(p):
    """A (source object, target arrow) pair with no lift, or None."""
    a, b = p.source, p.target
    for z in range(a.n_objects):
        reachable = {p.mor[m] for m in a.out_arrows[z]}
        for beta in b.out_arrows[p.obj[z]]:
            if beta not in reachable:
                return z, beta
    return None


def is_fibration(p):
    """Iso-lifting: every arrow out of p(z) is the image of an arrow out of z."""
    return fibration_witness(p) is None


# -- model-category primitives ---------------------------------------------

@dataclass(frozen=True)
class Factorization:
    middle: FiniteGroupoid
    j: GroupoidMap
    p: GroupoidMap
    retraction: GroupoidMap
    triples: tuple


def factorize(f):
    """Mapping-path factorisation ``f = p o j``.

    The middle groupoid has objects ``(z, y, u: f(z) -> y)`` and arrows
    ``(n, m)`` with ``m o u = u' o f(n)``; ``j`` is a trivial cofibration,
    ``p`` an iso-lifting fibration and ``retraction`` a left inverse of ``j``.
    """
    z_, y_ = f.source, f.target
    triples = [(z, y_.tgt[u], u) for z in range(z_.n_objects) for u in y_.out_arrows[f.obj[z]]]
    opos = {t: i for i, t in enumerate(triples)}
    arrows = []
    for i, (z, _, u) in enumerate(triples):
        uinv = y_.inverses[u]
        for n in z_.out_arrows[z]:
            zz = z_.tgt[n]
            fn = f.mor[n]
            for uu in y_.out_arrows[f.obj[zz]]:
                m = y_.comp[(uu, y_.comp[(fn, uinv)])]
                arrows.append((i, opos[(zz, y_.tgt[uu], uu)], n, m))
    apos = {(s, n, m): k for k, (s, _, n, m) in enumerate(arrows)}
    comp = {}
    by_src = {}
    for k, (s, t, n, m) in enumerate(arrows):
        by_src.setdefault(s, []).append(k)
    for k1, (s1, t1, n1, m1) in enumerate(arrows):
        for k2 in by_src[t1]:
            _, _, n2, m2 = arrows[k2]
            comp[(k2, k1)] = apos[(s1, z_.comp[(n2, n1)], y_.comp[(m2, m1)])]
    ident = [apos[(i, z_.identities[z], y_.identities[y])] for i, (z, y, u) in enumerate(triples)]
    inv = {k: apos[(t, z_.inverses[n], y_.inverses[m])] for k, (s, t, n, m) in enumerate(arrows)}
    labels = [f"({z_.objects[z]},{y_.objects[y]},{y_.morphisms[u]})" for z, y, u in triples]
    mlabels = [f"({z_.morphisms[n]},{y_.morphisms[m]})@{labels[s]}" for s, _, n, m in arrows]
    v = make_groupoid(labels, mlabels, [a[0] for a in arrows], [a[1] for a in arrows], comp,
                      ident, inv, f"P({z_.name}->{y_.name})", check=False)
    j = GroupoidMap(z_, v, tuple(opos[(z, f.obj[z], y_.identities[f.obj[z]])]
                                 for z in range(z_.n_objects)),
                    tuple(apos[(opos[(z_.src[n], f.obj[z_.src[n]], y_.identities[f.obj[z_.src[n]]])],
                                n, f.mor[n])] for n in range(z_.n_morphisms)))
    p = GroupoidMap(v, y_, tuple(y for _, y, _ in triples), tuple(a[3] for a in arrows))
    r = GroupoidMap(v, z_, tuple(z for z, _, _ in triples), tuple(a[2] for a in arrows))
    return Factorization(v, j, p, r, tuple(triples))


@dataclass(frozen=True)
class Pullback:
    groupoid: FiniteGroupoid
    to_fibred: GroupoidMap
    to_base_change: GroupoidMap


def pullback_along_fibration(p, alpha):
    """Strict pullback of ``p: E -> B`` along ``alpha: A -> B``.

    ``to_fibred`` projects to E, ``to_base_change`` to A.  When alpha is a weak
    equivalence the projection to E is checked to be one as well.
    """
    if p.target != alpha.target:
        raise InputError("p and alpha do not share a codomain")
    wit = fibration_witness(p)
    if wit is not None:
        z, beta = wit
        raise NotAFibration(
            f"arrow {p.target.morphisms[beta]!r} out of p({p.source.objects[z]}) has no lift",
            witness=[p.source.objects[z], p.target.morphisms[beta]])
    e, a = p.source, alpha.source
    objs = [(x, w) for x in range(e.n_objects) for w in range(a.n_objects)
            if p.obj[x] == alpha.obj[w]]
    opos = {o: i for i, o in enumerate(objs)}
    by_image = {}
    for m in range(a.n_morphisms):
        by_image.setdefault(alpha.mor[m], []).append(m)
    mors = [(u, m) for u in range(e.n_morphisms) for m in by_image.get(p.mor[u], ())
            if (e.src[u], a.src[m]) in opos]
    mpos = {q: i for i, q in enumerate(mors)}
    by_src = {}
    for k, (u, m) in enumerate(mors):
        by_src.setdefault(opos[(e.src[u], a.src[m])], []).append(k)
    comp = {}
    for k1, (u1, m1) in enumerate(mors):
        t = opos[(e.tgt[u1], a.tgt[m1])]
        for k2 in by_src.get(t, ()):
            u2, m2 = mors[k2]
            comp[(k2, k1)] = mpos[(e.comp[(u2, u1)], a.comp[(m2, m1)])]
    g = make_groupoid(
        [f"({e.objects[x]},{a.objects[w]})" for x, w in objs],
        [f"({e.morphisms[u]},{a.morphisms[m]})" for u, m in mors],
        [opos[(e.src[u], a.src[m])] for u, m in mors],
        [opos[(e.tgt[u], a.tgt[m])] for u, m in mors], comp,
        [mpos[(e.identities[x], a.identities[w])] for x, w in objs],
        {mpos[(u, m)]: mpos[(e.inverses[u], a.inverses[m])] for u, m in mors},
        f"{e.name}x_{p.target.name}{a.name}", check=False)
    to_e = GroupoidMap(g, e, tuple(x for x, _ in objs), tuple(u for u, _ in mors))
    to_a = GroupoidMap(g, a, tuple(w for _, w in objs), tuple(m for _, m in mors))
    if is_weak_equivalence(alpha) and not is_weak_equivalence(to_e):
        raise NotWeakEquivalence("right properness failed: projection is not a weak equivalence")
    return Pullback(g, to_e, to_a)


# -- natural isomorphism ---------------------------------------------------

def conjugate_functor(f, eta):
    """The functor ``eta o f o eta^-1`` for a family ``eta[x]: f(x) -> g(x)``."""
    y = f.target
    x = f.source
    obj = tuple(y.tgt[eta[o]] for o in range(x.n_objects))
    mor = tuple(y.comp[(eta[x.tgt[m]], y.comp[(f.mor[m], y.inverses[eta[x.src[m]]])])]
                for m in range(x.n_morphisms))
    return GroupoidMap(x, y, obj, mor)


def natural_isomorphism(f, g):
    """A family ``eta[x]: f(x) -> g(x)`` making f and g isomorphic, or None."""
    x, y = f.source, f.target
    eta = [None] * x.n_objects
    for comp in x.components:
        b = comp[0]
        found = None
        for cand in y.homset(f.obj[b], g.obj[b]):
            trial = {b: cand}
            ok = True
            for z in comp[1:]:
                t = x.spanning_arrows[z]
                trial[z] = y.comp[(g.mor[t], y.comp[(cand, y.inverses[f.mor[t]])])]
            for m in range(x.n_morphisms):
                if x.src[m] in trial:
                    lhs = y.comp[(g.mor[m], trial[x.src[m]])]
                    rhs = y.comp[(trial[x.tgt[m]], f.mor[m])]
                    if lhs != rhs:
                        ok = False
                        break
            if ok:
                found = trial
                break
        if found is None:
            return None
        for z, v in found.items():
            eta[z] = v
    return tuple(eta)


def cylinder(x):
    """``X x I`` with its end inclusions d0, d1 and the projection s."""
    i = indiscrete(["0", "1"])
    cyl, px, _ = product(x, i, f"{x.name}xI")
    n_obj, n_mor = x.n_objects, x.n_morphisms
    d = []
    for end in (0, 1):
        obj = tuple(o * 2 + end for o in range(n_obj))
        idm = i.identities[end]
        mor = tuple(m * 4 + idm for m in range(n_mor))
        d.append(GroupoidMap(x, cyl, obj, mor))
    return cyl, d[0], d[1], px


def homotopy_on_cylinder(f, g, eta):
    """``h: X x I -> Y`` with ``h d0 = f`` and ``h d1 = g`` for ``eta: f => g``."""
    x, y = f.source, f.target
    cyl, d0, d1, s = cylinder(x)
    i = indiscrete(["0", "1"])
    ends = (f, g)
    obj = [ends[e].obj[o] for o in range(x.n_objects) for e in (0, 1)]
    mor = []
    for m in range(x.n_morphisms):
        b = x.tgt[m]
        for k in range(4):
            e, ee = i.src[k], i.tgt[k]
            # along m at end e, then across to end ee via eta at the target
            core = ends[e].mor[m]
            if e == ee:
                mor.append(core)
            elif e == 0:
                mor.append(y.comp[(eta[b], core)])
            else:
                mor.append(y.comp[(y.inverses[eta[b]], core)])
    h = GroupoidMap(cyl, y, tuple(obj), tuple(mor))
    _check_functor(cyl, y, h.obj, h.mor)
    return cyl, d0, d1, s, h
