"""Finite Grothendieck sites and presheaves of sets, groups and groupoids.

A site is a finite category with declared covering families.  A sieve on T is
a frozenset of arrows into T closed under precomposition; a sieve covers when
it contains the sieve generated by a declared family (or is maximal).  Since
covering sieves are closed under intersection, every object has a smallest
covering sieve and the plus-construction is computed on it alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (CoverageViolation, InputError, NonFunctorialDiagram, NotFunctorial)
from .groupoid import (FiniteGroupoid, GroupoidMap, cech_groupoid, compose_maps,
                       identity_map, make_groupoid)
from .groups import FiniteGroup, is_homomorphism


# -- sites -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteSite:
    objects: tuple
    arrows: tuple
    src: tuple
    tgt: tuple
    comp: dict          # (g, f) -> g o f, every composable pair
    identities: tuple
    covers: tuple       # per object, a tuple of families (tuples of arrows)
    name: str = field(default="", compare=False)

    def __repr__(self):
        return f"FiniteSite({self.name or '?'}, {len(self.objects)} obj)"

    @cached_property
    def into(self):
        out = [[] for _ in self.objects]
        for a, t in enumerate(self.tgt):
            out[t].append(a)
        return out

    @cached_property
    def out_of(self):
        out = [[] for _ in self.objects]
        for a, s in enumerate(self.src):
            out[s].append(a)
        return out

    def hom(self, x, y):
        return [a for a in self.into[y] if self.src[a] == x]

    def sieve(self, family):
        """Sieve generated by a family of arrows."""
        return frozenset(self.comp[(f, g)] for f in family for g in self.into[self.src[f]])

    def maximal(self, t):
        return frozenset(self.into[t])

    def pullback_sieve(self, h, s):
        """``h^* S = {g : h o g in S}``."""
        return frozenset(g for g in self.into[self.src[h]] if self.comp[(h, g)] in s)

    @cached_property
    def declared_sieves(self):
        return tuple(tuple(self.sieve(f) for f in fams) for fams in self.covers)

    def is_covering(self, t, s):
        s = frozenset(s)
        if self.identities[t] in s:
            return True
        return any(d <= s for d in self.declared_sieves[t])

    def covers_family(self, t, family):
        return self.is_covering(t, self.sieve(family))

    @cached_property
    def minimal_sieves(self):
        out = []
        for t in range(len(self.objects)):
            s = self.maximal(t)
            for d in self.declared_sieves[t]:
                s = s & d
            out.append(s)
        return tuple(out)

    @cached_property
    def terminal(self):
        for t in range(len(self.objects)):
            if all(len(self.hom(x, t)) == 1 for x in range(len(self.objects))):
                return t
        return None

    def index(self, label):
        try:
            return self.objects.index(label)
        except ValueError:
            raise InputError(f"unknown object {label!r}") from None

    def arrow_index(self, label):
        try:
            return self.arrows.index(label)
        except ValueError:
            raise InputError(f"unknown arrow {label!r}") from None


def make_site(objects, arrows, src, tgt, comp, identities, covers, name="", check=True):
    site = FiniteSite(tuple(objects), tuple(arrows), tuple(src), tuple(tgt), dict(comp),
                      tuple(identities), tuple(tuple(tuple(f) for f in fams) for fams in covers),
                      name)
    if check:
        _check_category(site)
        check_coverage(site)
    return site


def _check_category(site):
    n = len(site.arrows)
    for f in range(n):
        for g in range(n):
            if site.tgt[f] == site.src[g]:
                if (g, f) not in site.comp:
                    raise InputError(f"missing composite {site.arrows[g]} o {site.arrows[f]}",
                                     witness=[site.arrows[g], site.arrows[f]])
                h = site.comp[(g, f)]
                if site.src[h] != site.src[f] or site.tgt[h] != site.tgt[g]:
                    raise InputError("composite has wrong endpoints",
                                     witness=[site.arrows[g], site.arrows[f]])
    for f in range(n):
        if site.comp[(site.identities[site.tgt[f]], f)] != f or \
                site.comp[(f, site.identities[site.src[f]])] != f:
            raise InputError(f"identities are not neutral for {site.arrows[f]}",
                             witness=site.arrows[f])
    for f in range(n):
        for g in site.out_of[site.tgt[f]]:
            for h in site.out_of[site.tgt[g]]:
                if site.comp[(h, site.comp[(g, f)])] != site.comp[(site.comp[(h, g)], f)]:
                    raise InputError("composition is not associative",
                                     witness=[site.arrows[h], site.arrows[g], site.arrows[f]])


def check_coverage(site):
    """Stability, transitivity and intersection closure of the declared covers."""
    for t, fams in enumerate(site.covers):
        for fam in fams:
            for f in fam:
                if site.tgt[f] != t:
                    raise CoverageViolation(
                        f"family for {site.objects[t]} contains {site.arrows[f]} with another target",
                        witness={"target": site.objects[t], "arrow": site.arrows[f]})
    for t in range(len(site.objects)):
        for fam, s in zip(site.covers[t], site.declared_sieves[t]):
            for h in site.into[t]:
                if not site.is_covering(site.src[h], site.pullback_sieve(h, s)):
                    raise CoverageViolation(
                        f"pullback of a cover of {site.objects[t]} along {site.arrows[h]} "
                        "does not cover",
                        witness={"target": site.objects[t],
                                 "family": [site.arrows[f] for f in fam],
                                 "along": site.arrows[h]})
            # local covers of the members compose to a cover
            options = [[(site.identities[site.src[f]],)] + list(site.covers[site.src[f]])
                       for f in fam]
            for choice in itertools.product(*options):
                comp = [site.comp[(f, g)] for f, sub in zip(fam, choice) for g in sub]
                if not site.covers_family(t, comp):
                    raise CoverageViolation(
                        f"composite family on {site.objects[t]} does not cover",
                        witness={"target": site.objects[t],
                                 "family": [site.arrows[a] for a in comp]})
        sieves = site.declared_sieves[t]
        for a, b in itertools.combinations(range(len(sieves)), 2):
            if not site.is_covering(t, sieves[a] & sieves[b]):
                raise CoverageViolation(
                    f"intersection of two covers of {site.objects[t]} does not cover",
                    witness={"target": site.objects[t],
                             "families": [[site.arrows[f] for f in site.covers[t][a]],
                                          [site.arrows[f] for f in site.covers[t][b]]]})


def build_site(objects, arrows, compose, covers, name=""):
    """Label-level constructor.

    ``arrows`` lists non-identity arrows as (id, src, tgt); identities are
    added as ``1_X``.  ``compose`` lists (g, f, g o f) for non-identity pairs.
    ``covers`` is a list of (target, [arrow ids]).
    """
    objects = tuple(objects)
    opos = {o: i for i, o in enumerate(objects)}
    if len(opos) != len(objects):
        raise InputError("object labels are not distinct")
    labels, src, tgt = [], [], []
    for o in objects:
        labels.append(f"1_{o}")
        src.append(opos[o])
        tgt.append(opos[o])
    for a, s, t in arrows:
        if s not in opos or t not in opos:
            raise InputError(f"arrow {a!r} has unknown endpoint", witness=a)
        labels.append(a)
        src.append(opos[s])
        tgt.append(opos[t])
    apos = {a: i for i, a in enumerate(labels)}
    if len(apos) != len(labels):
        raise InputError("arrow labels are not distinct")
    ident = tuple(range(len(objects)))
    comp = {}
    for f in range(len(labels)):
        comp[(ident[tgt[f]], f)] = f
        comp[(f, ident[src[f]])] = f
    for g, f, h in compose:
        try:
            comp[(apos[g], apos[f])] = apos[h]
        except KeyError as err:
            raise InputError(f"unknown arrow {err.args[0]!r} in composition") from None
    cov = [[] for _ in objects]
    for t, fam in covers:
        if t not in opos:
            raise InputError(f"cover of unknown object {t!r}")
        try:
            cov[opos[t]].append(tuple(apos[a] for a in fam))
        except KeyError as err:
            raise InputError(f"unknown arrow {err.args[0]!r} in a cover") from None
    return make_site(objects, labels, src, tgt, comp, ident, cov, name)


def poset_site(elements, leq, covers, name=""):
    """Site of a finite poset; ``leq`` lists generating relations (a, b) for a <= b."""
    elements = tuple(elements)
    n = len(elements)
    pos = {e: i for i, e in enumerate(elements)}
    le = [[i == j for j in range(n)] for i in range(n)]
    for a, b in leq:
        le[pos[a]][pos[b]] = True
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if le[i][k] and le[k][j]:
                    le[i][j] = True
    arrows = [(f"{elements[i]}<{elements[j]}", elements[i], elements[j])
              for i in range(n) for j in range(n) if i != j and le[i][j]]
    name_of = {(s, t): a for a, s, t in arrows}
    compose = [(name_of[(b, c)], name_of[(a, b)], name_of[(a, c)])
               for (a, b) in name_of for (b2, c) in name_of if b2 == b and a != c]
    fams = [(t, [name_of[(u, t)] if u != t else f"1_{t}" for u in us]) for t, us in covers]
    return build_site(elements, arrows, compose, fams, name)


def point_site():
    return build_site(["pt"], [], [], [], "point")


def circle_site():
    """Three arcs covering a circle, pairwise overlapping, with empty triple overlap."""
    els = ["0", "U12", "U13", "U23", "U1", "U2", "U3", "T"]
    leq = [("0", "U12"), ("0", "U13"), ("0", "U23"), ("U12", "U1"), ("U12", "U2"),
           ("U13", "U1"), ("U13", "U3"), ("U23", "U2"), ("U23", "U3"),
           ("U1", "T"), ("U2", "T"), ("U3", "T")]
    return poset_site(els, leq, [("T", ["U1", "U2", "U3"]), ("0", [])], "S1_3")


def slice_site(site, t):
    """``C/T``: objects are arrows into T; covers are induced from C."""
    objs = list(site.into[t])
    opos = {h: i for i, h in enumerate(objs)}
    arrows, src, tgt, origin = [], [], [], []
    for h in objs:
        for g in site.into[site.src[h]]:
            arrows.append(f"{site.arrows[g]}/{site.arrows[h]}")
            src.append(opos[site.comp[(h, g)]])
            tgt.append(opos[h])
            origin.append((g, h))
    apos = {o: i for i, o in enumerate(origin)}
    comp = {}
    for i, (g, h) in enumerate(origin):
        for j, (g2, h2) in enumerate(origin):
            if h2 == site.comp[(h, g)]:
                comp[(i, j)] = apos[(site.comp[(g, g2)], h)]
    ident = [apos[(site.identities[site.src[h]], h)] for h in objs]
    covers = [[tuple(apos[(f, h)] for f in fam) for fam in site.covers[site.src[h]]]
              for h in objs]
    out = make_site([site.arrows[h] for h in objs], arrows, src, tgt, comp, ident, covers,
                    f"{site.name}/{site.objects[t]}", check=False)
    return out, tuple(objs), tuple(origin)


# -- presheaves -------------------------------------------------------------

KINDS = ("set", "group", "groupoid")


@dataclass(frozen=True, eq=False)
class Presheaf:
    """``values[o]`` per object; ``restrict[a]`` maps the value at tgt(a) to src(a).

    Sets are tuples of labels with index maps; groups are FiniteGroup with
    element maps; groupoids are FiniteGroupoid with GroupoidMap.
    """
    site: FiniteSite
    kind: str
    values: tuple
    restrict: tuple

    def size(self, o):
        v = self.values[o]
        if self.kind == "groupoid":
            return v.n_objects
        return len(v)

    def apply(self, a, x):
        r = self.restrict[a]
        return r.obj[x] if self.kind == "groupoid" else r[x]


def _compose_restrictions(kind, first, second):
    """``second o first`` for restriction data."""
    if kind == "groupoid":
        return compose_maps(second, first)
    return tuple(second[x] for x in first)


def _identity_restriction(kind, value):
    if kind == "groupoid":
        return identity_map(value)
    return tuple(range(len(value)))


def make_presheaf(site, kind, values, restrict, check=True):
    if kind not in KINDS:
        raise InputError(f"unknown presheaf kind {kind!r}")
    p = Presheaf(site, kind, tuple(values), tuple(restrict))
    if check:
        check_functorial(p)
    return p


def check_functorial(p):
    site = p.site
    if len(p.values) != len(site.objects) or len(p.restrict) != len(site.arrows):
        raise InputError("presheaf does not cover the site")
    for a in range(len(site.arrows)):
        r = p.restrict[a]
        s, t = site.src[a], site.tgt[a]
        if p.kind == "groupoid":
            if r.source != p.values[t] or r.target != p.values[s]:
                raise NotFunctorial(f"restriction along {site.arrows[a]} has wrong endpoints",
                                    witness=site.arrows[a])
        else:
            if len(r) != len(p.values[t]) or any(not 0 <= x < len(p.values[s]) for x in r):
                raise NotFunctorial(f"restriction along {site.arrows[a]} has wrong endpoints",
                                    witness=site.arrows[a])
            if p.kind == "group" and not is_homomorphism(p.values[t], p.values[s], r):
                raise NotFunctorial(f"restriction along {site.arrows[a]} is not a homomorphism",
                                    witness=site.arrows[a])
    for o in range(len(site.objects)):
        if p.restrict[site.identities[o]] != _identity_restriction(p.kind, p.values[o]):
            raise NotFunctorial(f"identity at {site.objects[o]} does not act trivially",
                                witness=site.objects[o])
    for (g, f), h in site.comp.items():
        if _compose_restrictions(p.kind, p.restrict[g], p.restrict[f]) != p.restrict[h]:
            raise NotFunctorial(
                f"restriction along {site.arrows[h]} differs from the composite of restrictions",
                witness=[site.arrows[g], site.arrows[f]])


def constant_presheaf(site, kind, value):
    restrict = [_identity_restriction(kind, value) for _ in site.arrows]
    return make_presheaf(site, kind, [value] * len(site.objects), restrict)


def terminal_presheaf(site, kind="set"):
    if kind == "groupoid":
        from .groupoid import point
        return constant_presheaf(site, kind, point())
    if kind == "group":
        from .groups import trivial_group
        return constant_presheaf(site, kind, trivial_group())
    return constant_presheaf(site, kind, ("*",))


@dataclass(frozen=True)
class PresheafMap:
    """Natural transformation; ``components[o]`` is an index tuple or GroupoidMap."""
    source: Presheaf
    target: Presheaf
    components: tuple


def check_natural(m):
    p, q = m.source, m.target
    site = p.site
    for a in range(len(site.arrows)):
        s, t = site.src[a], site.tgt[a]
        left = _compose_restrictions(p.kind, p.restrict[a], m.components[s])
        right = _compose_restrictions(p.kind, m.components[t], q.restrict[a])
        if left != right:
            raise NotFunctorial(f"map is not natural along {site.arrows[a]}",
                                witness=site.arrows[a])
    return True


# -- plus construction ------------------------------------------------------

class _Matching:
    """Matching families of a set-valued presheaf on a fixed sieve."""

    def __init__(self, p, t, sieve):
        site = p.site
        self.arrows = sorted(sieve, key=lambda f: (-len(site.into[site.src[f]]), f))
        self.pos = {f: i for i, f in enumerate(self.arrows)}
        # constraints: s_{f o g} = P(g)(s_f)
        self.links = []
        for f in self.arrows:
            for g in site.into[site.src[f]]:
                h = site.comp[(f, g)]
                if h != f or g != site.identities[site.src[f]]:
                    self.links.append((self.pos[f], g, self.pos[h]))
        self.families = self._enumerate(p)

    def _enumerate(self, p):
        site = p.site
        n = len(self.arrows)
        by_later = [[] for _ in range(n)]
        for i, g, j in self.links:
            by_later[max(i, j)].append((i, g, j))
        out = []
        vals = [None] * n

        def rec(k):
            if k == n:
                out.append(tuple(vals))
                return
            f = self.arrows[k]
            cands = range(p.size(site.src[f]))
            for x in cands:
                vals[k] = x
                ok = True
                for i, g, j in by_later[k]:
                    if p.apply(g, vals[i]) != vals[j]:
                        ok = False
                        break
                if ok:
                    rec(k + 1)
            vals[k] = None

        rec(0)
        return out


def _match_presheaf(p, sieve_of):
    site = p.site
    tables = [_Matching(p, t, sieve_of(t)) for t in range(len(site.objects))]
    return tables


def plus(p):
    """One plus-construction on the smallest covering sieves, with its unit."""
    site = p.site
    if p.kind == "groupoid":
        return _plus_groupoid(p)
    tables = _match_presheaf(p, lambda t: site.minimal_sieves[t])
    index = [{fam: i for i, fam in enumerate(m.families)} for m in tables]
    restrict = []
    for a in range(len(site.arrows)):
        s, t = site.src[a], site.tgt[a]
        ms, mt = tables[s], tables[t]
        r = []
        for fam in mt.families:
            new = tuple(fam[mt.pos[site.comp[(a, g)]]] for g in ms.arrows)
            r.append(index[s][new])
        restrict.append(tuple(r))
    unit = []
    for t in range(len(site.objects)):
        m = tables[t]
        unit.append(tuple(index[t][tuple(p.apply(f, x) for f in m.arrows)]
                          for x in range(p.size(t))))
    if p.kind == "set":
        values = [tuple(_family_label(p, m, fam) for fam in m.families) for m in tables]
    else:
        values = []
        for t, m in enumerate(tables):
            def mul(u, v, m=m, t=t):
                fu, fv = m.families[u], m.families[v]
                prod = tuple(p.values[site.src[f]].table[fu[i]][fv[i]]
                             for i, f in enumerate(m.arrows))
                return index[t][prod]
            n = len(m.families)
            table = tuple(tuple(mul(u, v) for v in range(n)) for u in range(n))
            ident = index[t][tuple(p.values[site.src[f]].identity for f in m.arrows)]
            values.append(FiniteGroup(tuple(_family_label(p, m, fam) for fam in m.families),
                                      table, ident, f"{p.values[t].name}+"))
    out = make_presheaf(site, p.kind, values, restrict)
    return out, PresheafMap(p, out, tuple(unit))


def _family_label(p, m, fam):
    site = p.site
    parts = []
    for f, x in zip(m.arrows, fam):
        v = p.values[site.src[f]]
        lab = v.elements[x] if p.kind == "group" else v[x]
        parts.append(f"{site.objects[site.src[f]]}:{lab}")
    return "{" + ",".join(parts) + "}"


def _plus_groupoid(p):
    """Levelwise plus-construction on objects and morphisms presheaves."""
    site = p.site
    obs = make_presheaf(site, "set", [v.objects for v in p.values],
                        [r.obj for r in p.restrict], check=False)
    mors = make_presheaf(site, "set", [v.morphisms for v in p.values],
                         [r.mor for r in p.restrict], check=False)
    ob_plus, ob_unit = plus(obs)
    mor_plus, mor_unit = plus(mors)
    values = []
    for t in range(len(site.objects)):
        mo = _Matching(obs, t, site.minimal_sieves[t])
        mm = _Matching(mors, t, site.minimal_sieves[t])
        oidx = {f: i for i, f in enumerate(mo.families)}
        midx = {f: i for i, f in enumerate(mm.families)}
        arrows = mm.arrows
        assert arrows == mo.arrows

        def lift(fun, fam, arrows=arrows):
            return tuple(fun(p.values[site.src[f]], x) for f, x in zip(arrows, fam))

        src = [oidx[lift(lambda g, x: g.src[x], fam)] for fam in mm.families]
        tgt = [oidx[lift(lambda g, x: g.tgt[x], fam)] for fam in mm.families]
        comp = {}
        for i, a in enumerate(mm.families):
            for j, b in enumerate(mm.families):
                if tgt[j] == src[i]:
                    c = tuple(p.values[site.src[f]].comp[(x, y)]
                              for f, x, y in zip(arrows, a, b))
                    comp[(i, j)] = midx[c]
        values.append(make_groupoid(ob_plus.values[t], mor_plus.values[t], src, tgt, comp,
                                    name=f"{p.values[t].name}+"))
    restrict = [GroupoidMap(values[site.tgt[a]], values[site.src[a]], ob_plus.restrict[a],
                            mor_plus.restrict[a]) for a in range(len(site.arrows))]
    out = make_presheaf(site, "groupoid", values, restrict)
    unit = tuple(GroupoidMap(p.values[t], values[t], ob_unit.components[t],
                             mor_unit.components[t]) for t in range(len(site.objects)))
    return out, PresheafMap(p, out, unit)


@dataclass(frozen=True)
class Sheafification:
    sheaf: Presheaf
    unit: PresheafMap


def compose_presheaf_maps(g, f):
    kind = f.source.kind
    comps = tuple(_compose_restrictions(kind, a, b) for a, b in zip(f.components, g.components))
    return PresheafMap(f.source, g.target, comps)


def sheafify(p):
    """Plus-construction applied twice, with the composite unit."""
    p1, u1 = plus(p)
    p2, u2 = plus(p1)
    return Sheafification(p2, compose_presheaf_maps(u2, u1))


def plus_map(m):
    """``m+``: push matching families forward along m (set or group kind)."""
    site = m.source.site
    p1, _ = plus(m.source)
    q1, _ = plus(m.target)
    comps = []
    for t in range(len(site.objects)):
        mp = _Matching(m.source, t, site.minimal_sieves[t])
        mq = _Matching(m.target, t, site.minimal_sieves[t])
        index = {fam: i for i, fam in enumerate(mq.families)}
        comps.append(tuple(index[tuple(m.components[site.src[f]][x]
                                       for f, x in zip(mp.arrows, fam))]
                           for fam in mp.families))
    return PresheafMap(p1, q1, tuple(comps))


def sheafify_map(m):
    """The induced map between sheafifications."""
    return plus_map(plus_map(m))


def is_sheaf(p, families=None):
    """Sheaf condition on every declared family and the smallest sieves.

    Returns ``(ok, witness)``.
    """
    site = p.site
    for t in range(len(site.objects)):
        sieves = [(site.minimal_sieves[t], "minimal")] + [
            (s, [site.arrows[f] for f in fam])
            for fam, s in zip(site.covers[t], site.declared_sieves[t])]
        for s, label in sieves:
            m = _Matching(p, t, s)
            restr = [tuple(p.apply(f, x) for f in m.arrows) for x in range(p.size(t))]
            if len(set(restr)) != len(restr):
                return False, {"object": site.objects[t], "family": label,
                               "failure": "separation"}
            if len(restr) != len(m.families):
                return False, {"object": site.objects[t], "family": label,
                               "failure": "gluing", "sections": len(restr),
                               "matching": len(m.families)}
    return True, None


def is_iso_map(m):
    if m.source.kind == "groupoid":
        from .groupoid import is_isomorphism
        return all(is_isomorphism(c) for c in m.components)
    return all(len(set(c)) == len(c) == m.target.size(t)
               for t, c in enumerate(m.components))


# -- presheaves of groupoids -------------------------------------------------

def pi0_presheaf(p):
    """Sheaf-free path components of a presheaf of groupoids."""
    site = p.site
    values, restrict = [], []
    for g in p.values:
        values.append(tuple(f"[{g.objects[c[0]]}]" for c in g.components))
    for a in range(len(site.arrows)):
        r = p.restrict[a]
        src_g = p.values[site.src[a]]
        restrict.append(tuple(src_g.component_of[r.obj[c[0]]]
                              for c in p.values[site.tgt[a]].components))
    return make_presheaf(site, "set", values, restrict)


def pi0_map(m):
    return PresheafMap(pi0_presheaf(m.source), pi0_presheaf(m.target),
                       tuple(tuple(m.target.values[t].component_of[c.obj[comp[0]]]
                                   for comp in m.source.values[t].components)
                             for t, c in enumerate(m.components)))


def aut_presheaf(p, t, x):
    """``(V, h) -> Aut(x|_V)`` on the slice site over t, as a presheaf of groups."""
    site = p.site
    sl, objs, origin = slice_site(site, t)
    values, loops_at = [], []
    for h in objs:
        g = p.values[site.src[h]]
        y = p.restrict[h].obj[x]
        grp, loops = g.vertex_group(y)
        values.append(grp)
        loops_at.append(loops)
    restrict = []
    for (g, h) in origin:
        r = p.restrict[g]
        target_idx = objs.index(site.comp[(h, g)])
        pos = {m: i for i, m in enumerate(loops_at[target_idx])}
        restrict.append(tuple(pos[r.mor[m]] for m in loops_at[objs.index(h)]))
    return make_presheaf(sl, "group", values, restrict), objs, loops_at


def aut_map(m, t, x):
    a, objs, la = aut_presheaf(m.source, t, x)
    b, _, lb = aut_presheaf(m.target, t, m.components[t].obj[x])
    comps = []
    for i, h in enumerate(objs):
        pos = {mm: j for j, mm in enumerate(lb[i])}
        comps.append(tuple(pos[m.components[m.source.site.src[h]].mor[loop]] for loop in la[i]))
    return PresheafMap(a, b, tuple(comps))


@dataclass
class LocalWeqCertificate:
    weq: bool
    failure: str | None = None
    witness: object = None

    def __bool__(self):
        return self.weq


def local_weak_equivalence(m):
    """Sheafified pi0 iso plus sheafified automorphism presheaves iso."""
    site = m.source.site
    pm = pi0_map(m)
    s_map = sheafify_map(pm)
    if not is_iso_map(s_map):
        bad = next(t for t, c in enumerate(s_map.components)
                   if len(set(c)) != len(c) or len(c) != s_map.target.size(t))
        return LocalWeqCertificate(False, "pi0", {"object": site.objects[bad],
                                                  "source": s_map.source.size(bad),
                                                  "target": s_map.target.size(bad)})
    for t in range(len(site.objects)):
        for x in range(m.source.values[t].n_objects):
            am = aut_map(m, t, x)
            sm = sheafify_map(am)
            if not is_iso_map(sm):
                return LocalWeqCertificate(False, "automorphisms", {
                    "object": site.objects[t], "section": m.source.values[t].objects[x]})
    return LocalWeqCertificate(True)


def map_to_terminal(p):
    from .groupoid import point
    pt = point()
    term = constant_presheaf(p.site, "groupoid", pt)
    comps = tuple(GroupoidMap(g, pt, (0,) * g.n_objects, (0,) * g.n_morphisms)
                  for g in p.values)
    return PresheafMap(p, term, comps)


def cover_cech_groupoid(site, t, family):
    """Sectionwise Cech groupoid of ``coprod hom(-, U_i) -> hom(-, T)``."""
    family = tuple(family)
    if any(site.tgt[f] != t for f in family):
        raise InputError("family does not land in the target")
    values, elems = [], []
    for v in range(len(site.objects)):
        es = [(i, a) for i, f in enumerate(family) for a in site.hom(v, site.src[f])]
        image = [site.comp[(family[i], a)] for i, a in es]
        labels = [f"{i}:{site.arrows[a]}" for i, a in es]
        values.append(cech_groupoid(image, labels, f"C({site.objects[v]})"))
        elems.append(es)
    restrict = []
    for h in range(len(site.arrows)):
        s, tt = site.src[h], site.tgt[h]
        pos = {e: k for k, e in enumerate(elems[s])}
        obj = tuple(pos[(i, site.comp[(a, h)])] for i, a in elems[tt])
        gs, gt = values[s], values[tt]
        mor = tuple(gs.homset(obj[gt.src[m]], obj[gt.tgt[m]])[0] for m in range(gt.n_morphisms))
        restrict.append(GroupoidMap(gt, gs, obj, mor))
    return make_presheaf(site, "groupoid", values, restrict)


def representable(site, t):
    """``hom(-, T)`` as a presheaf of discrete groupoids."""
    from .groupoid import discrete
    values = [discrete([site.arrows[a] for a in site.hom(v, t)]) for v in range(len(site.objects))]
    restrict = []
    for h in range(len(site.arrows)):
        s, tt = site.src[h], site.tgt[h]
        hs = site.hom(s, t)
        obj = tuple(hs.index(site.comp[(a, h)]) for a in site.hom(tt, t))
        restrict.append(GroupoidMap(values[tt], values[s], obj, obj))
    return make_presheaf(site, "groupoid", values, restrict)


def cech_to_representable(c, site, t, family):
    rep = representable(site, t)
    comps = []
    for v in range(len(site.objects)):
        g = c.values[v]
        hs = site.hom(v, t)
        es = [(i, a) for i, f in enumerate(family) for a in site.hom(v, site.src[f])]
        obj = tuple(hs.index(site.comp[(family[i], a)]) for i, a in es)
        mor = tuple(obj[g.src[m]] for m in range(g.n_morphisms))
        comps.append(GroupoidMap(g, rep.values[v], obj, mor))
    return PresheafMap(c, rep, tuple(comps))


# -- homotopy colimits -------------------------------------------------------

@dataclass(frozen=True)
class GroupoidDiagram:
    """A functor from a groupoid to groupoids: fibre per object, functor per arrow."""
    base: FiniteGroupoid
    fibres: tuple
    maps: tuple


def check_diagram(d):
    b = d.base
    for m in range(b.n_morphisms):
        f = d.maps[m]
        if f.source != d.fibres[b.src[m]] or f.target != d.fibres[b.tgt[m]]:
            raise NonFunctorialDiagram(f"functor for {b.morphisms[m]} has wrong endpoints",
                                       witness=b.morphisms[m])
    for x in range(b.n_objects):
        if d.maps[b.identities[x]] != identity_map(d.fibres[x]):
            raise NonFunctorialDiagram(f"identity at {b.objects[x]} acts nontrivially",
                                       witness=b.objects[x])
    for (g, f), h in b.comp.items():
        if compose_maps(d.maps[g], d.maps[f]) != d.maps[h]:
            raise NonFunctorialDiagram(
                f"diagram does not preserve {b.morphisms[g]} o {b.morphisms[f]}",
                witness=[b.morphisms[g], b.morphisms[f]])


def action_diagram(group, action, labels=None):
    """A G-set as a diagram on BG of discrete groupoids."""
    from .groupoid import delooping, discrete
    bg = delooping(group)
    n = len(action[0])
    fib = discrete(labels or [str(i) for i in range(n)])
    maps = tuple(GroupoidMap(fib, fib, tuple(action[g]), tuple(action[g]))
                 for g in range(len(group)))
    return GroupoidDiagram(bg, (fib,), maps)


def grothendieck_hocolim(d):
    """Grothendieck construction: arrows ``(m, u): (x, a) -> (y, b)`` with
    ``u: X(m)(a) -> b``."""
    check_diagram(d)
    b = d.base
    objs = [(x, a) for x in range(b.n_objects) for a in range(d.fibres[x].n_objects)]
    opos = {o: i for i, o in enumerate(objs)}
    mors, src, tgt = [], [], []
    for m in range(b.n_morphisms):
        x, y = b.src[m], b.tgt[m]
        fy = d.fibres[y]
        for a in range(d.fibres[x].n_objects):
            img = d.maps[m].obj[a]
            for u in fy.out_arrows[img]:
                mors.append((m, u))
                src.append(opos[(x, a)])
                tgt.append(opos[(y, fy.tgt[u])])
    mpos = {mm: i for i, mm in enumerate(mors)}
    comp = {}
    for i, (m, u) in enumerate(mors):
        for j, (m2, u2) in enumerate(mors):
            if tgt[j] == src[i]:
                # (m, u) o (m2, u2) = (m m2, u o X(m)(u2))
                fy = d.fibres[b.tgt[m]]
                comp[(i, j)] = mpos[(b.comp[(m, m2)], fy.comp[(u, d.maps[m].mor[u2])])]
    labels = [f"({b.objects[x]},{d.fibres[x].objects[a]})" for x, a in objs]
    mlabels = [f"({b.morphisms[m]},{d.fibres[b.tgt[m]].morphisms[u]})" for m, u in mors]
    return make_groupoid(labels, mlabels, src, tgt, comp, name="hocolim")


# -- maps between presheaves of groupoids ------------------------------------

def presheaf_times(p, g):
    """Sectionwise product with a constant groupoid."""
    from .groupoid import product, product_map
    values = [product(v, g)[0] for v in p.values]
    ident = identity_map(g)
    restrict = [product_map(r, ident) for r in p.restrict]
    return make_presheaf(p.site, "groupoid", values, restrict, check=False)


def delooping_presheaf(gp):
    """``BG`` for a presheaf of groups, as a presheaf of one-object groupoids."""
    from .groupoid import delooping
    values = [delooping(v) for v in gp.values]
    restrict = [GroupoidMap(values[gp.site.tgt[a]], values[gp.site.src[a]], (0,), tuple(r))
                for a, r in enumerate(gp.restrict)]
    return make_presheaf(gp.site, "groupoid", values, restrict, check=False)


def _processing_order(site):
    return sorted(range(len(site.objects)), key=lambda o: (-len(site.into[o]), o))


def presheaf_maps(a, b):
    """Every natural transformation between presheaves of groupoids.

    Objects are visited from the top of the site down.  At each object the
    functors are indexed by their values on the images of restrictions from
    objects already visited, so the naturality squares select candidates by
    lookup; the remaining squares are checked directly.
    """
    from .groupoid import functors
    site = a.site
    order = _processing_order(site)
    done = set()
    plans = []
    for u in order:
        forced_obj, forced_mor = set(), set()
        ups = []    # arrows h: u -> w with w visited
        downs = []  # arrows h: v -> u with v visited
        for h in site.out_of[u]:
            w = site.tgt[h]
            if w in done and w != u:
                ups.append(h)
                r = a.restrict[h]
                forced_obj.update(r.obj)
                forced_mor.update(r.mor)
        for h in site.into[u]:
            v = site.src[h]
            if v in done and v != u:
                downs.append(h)
        fo, fm = tuple(sorted(forced_obj)), tuple(sorted(forced_mor))
        table = {}
        for f in functors(a.values[u], b.values[u]):
            key = (tuple(f.obj[x] for x in fo), tuple(f.mor[x] for x in fm))
            table.setdefault(key, []).append(f)
        plans.append((u, ups, downs, fo, fm, table))
        done.add(u)
    out = []
    chosen = {}

    def rec(k):
        if k == len(plans):
            out.append(PresheafMap(a, b, tuple(chosen[u] for u in range(len(site.objects)))))
            return
        u, ups, downs, fo, fm, table = plans[k]
        need_o, need_m = {}, {}
        for h in ups:
            w = site.tgt[h]
            ra, rb, fw = a.restrict[h], b.restrict[h], chosen[w]
            for y in range(a.values[w].n_objects):
                val = rb.obj[fw.obj[y]]
                if need_o.setdefault(ra.obj[y], val) != val:
                    return
            for m in range(a.values[w].n_morphisms):
                val = rb.mor[fw.mor[m]]
                if need_m.setdefault(ra.mor[m], val) != val:
                    return
        key = (tuple(need_o[x] for x in fo), tuple(need_m[x] for x in fm))
        for f in table.get(key, ()):
            if all(compose_maps(chosen[site.src[h]], a.restrict[h])
                   == compose_maps(b.restrict[h], f) for h in downs):
                chosen[u] = f
                rec(k + 1)
                del chosen[u]

    rec(0)
    return out
