"""Torsors over finite sites, the Borel construction, and nonabelian Cech H^1."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (InconsistentRoutes, InputError, NotFunctorial, NotLocalWeakEquivalence, NotSheaf,
                     NotTorsor)
from .groupoid import GroupoidMap, compose_maps, indiscrete, make_map, translation_groupoid
from .site import (Presheaf, PresheafMap, _Matching, check_natural, compose_presheaf_maps,
                   constant_presheaf, cover_cech_groupoid, delooping_presheaf, is_sheaf,
                   local_weak_equivalence, make_presheaf, map_to_terminal, plus, presheaf_maps,
                   presheaf_times, sheafify, terminal_presheaf)
from .unionfind import UnionFind


# -- actions -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GAction:
    """A presheaf of groups acting on a presheaf of sets; ``act[o][g][x] = g.x``."""
    group: Presheaf
    space: Presheaf
    act: tuple

    @property
    def site(self):
        return self.group.site


def make_action(group, space, act, check=True):
    a = GAction(group, space, tuple(tuple(tuple(r) for r in t) for t in act))
    if check:
        check_action(a)
    return a


def check_action(a):
    site, g, x = a.site, a.group, a.space
    for o in range(len(site.objects)):
        grp, t = g.values[o], a.act[o]
        n = x.size(o)
        if any(t[grp.identity][p] != p for p in range(n)):
            raise NotFunctorial(f"identity does not act trivially at {site.objects[o]}",
                                witness=site.objects[o])
        for u in range(len(grp)):
            for v in range(len(grp)):
                for p in range(n):
                    if t[u][t[v][p]] != t[grp.table[u][v]][p]:
                        raise NotFunctorial(f"action law fails at {site.objects[o]}",
                                            witness=[site.objects[o], grp.elements[u],
                                                     grp.elements[v]])
    for h in range(len(site.arrows)):
        s, tt = site.src[h], site.tgt[h]
        for u in range(len(g.values[tt])):
            for p in range(x.size(tt)):
                if x.restrict[h][a.act[tt][u][p]] != a.act[s][g.restrict[h][u]][x.restrict[h][p]]:
                    raise NotFunctorial(f"restriction along {site.arrows[h]} is not equivariant",
                                        witness=site.arrows[h])


def constant_group_sheaf(site, group):
    return sheafify(constant_presheaf(site, "group", group)).sheaf


def regular_action(group_sheaf):
    """G acting on itself by left multiplication."""
    site = group_sheaf.site
    space = make_presheaf(site, "set", [g.elements for g in group_sheaf.values],
                          group_sheaf.restrict)
    act = [g.table for g in group_sheaf.values]
    return make_action(group_sheaf, space, act)


def trivial_action(group_sheaf):
    site = group_sheaf.site
    space = terminal_presheaf(site)
    return make_action(group_sheaf, space, [[(0,)] * len(g) for g in group_sheaf.values])


def orbit_presheaf(a):
    """The presheaf quotient X/G."""
    site = a.site
    values, labels = [], []
    for o in range(len(site.objects)):
        n = a.space.size(o)
        lab = [None] * n
        k = 0
        for p in range(n):
            if lab[p] is None:
                for row in a.act[o]:
                    lab[row[p]] = k
                k += 1
        labels.append(lab)
        values.append(tuple(f"orbit{i}" for i in range(k)))
    restrict = []
    for h in range(len(site.arrows)):
        s, t = site.src[h], site.tgt[h]
        reps = {}
        for p in range(a.space.size(t)):
            reps.setdefault(labels[t][p], p)
        restrict.append(tuple(labels[s][a.space.restrict[h][reps[c]]] for c in sorted(reps)))
    return make_presheaf(site, "set", values, restrict)


def borel(a):
    """Sectionwise translation groupoid ``EG x_G X``."""
    site = a.site
    values = [translation_groupoid(a.group.values[o], a.act[o], a.space.values[o],
                                   f"EGx{site.objects[o]}")
              for o in range(len(site.objects))]
    restrict = []
    for h in range(len(site.arrows)):
        s, t = site.src[h], site.tgt[h]
        ng_t, ng_s = len(a.group.values[t]), len(a.group.values[s])
        rx, rg = a.space.restrict[h], a.group.restrict[h]
        mor = tuple(rx[x] * ng_s + rg[g] for x in range(a.space.size(t)) for g in range(ng_t))
        restrict.append(GroupoidMap(values[t], values[s], tuple(rx), mor))
    return make_presheaf(site, "groupoid", values, restrict)


def borel_to_bg(a, b=None):
    """The leg ``EG x_G X -> BG``, an arrow (g, x) going to g."""
    b = b or borel(a)
    bg = delooping_presheaf(a.group)
    comps = []
    for o in range(len(a.site.objects)):
        n = len(a.group.values[o])
        g = b.values[o]
        comps.append(GroupoidMap(g, bg.values[o], (0,) * g.n_objects,
                                 tuple(m % n for m in range(g.n_morphisms))))
    return PresheafMap(b, bg, tuple(comps))


# -- torsor test -------------------------------------------------------------

@dataclass
class TorsorCertificate:
    is_torsor: bool
    free: bool
    free_witness: object
    quotient_witness: object
    borel_route: bool
    reason: str | None = None

    def __bool__(self):
        return self.is_torsor


def check_torsor(a):
    """Definition (free, sheafified quotient terminal) against the Borel route."""
    ok, wit = is_sheaf(a.space)
    if not ok:
        raise NotSheaf("the acted-on presheaf is not a sheaf", witness=wit)
    site = a.site
    free, free_wit = True, None
    for o in range(len(site.objects)):
        grp = a.group.values[o]
        for p in range(a.space.size(o)):
            stab = [u for u in range(len(grp)) if a.act[o][u][p] == p]
            if len(stab) > 1:
                free = False
                free_wit = {"object": site.objects[o], "point": a.space.values[o][p],
                            "stabilizer": [grp.elements[u] for u in stab]}
                break
        if not free:
            break
    q = sheafify(orbit_presheaf(a)).sheaf
    sizes = {site.objects[o]: q.size(o) for o in range(len(site.objects))}
    quotient_ok = all(v == 1 for v in sizes.values())
    definitional = free and quotient_ok
    borel_ok = bool(local_weak_equivalence(map_to_terminal(borel(a))))
    if definitional != borel_ok:
        raise InconsistentRoutes("definition and Borel route disagree",
                                 witness={"definition": definitional, "borel": borel_ok})
    reason = None
    if not free:
        reason = "not free"
    elif not quotient_ok:
        reason = "quotient sheaf is not terminal"
    return TorsorCertificate(definitional, free, free_wit, sizes, borel_ok, reason)


# -- torsors and cocycles ------------------------------------------------------

@dataclass(frozen=True)
class PresheafCocycle:
    """``* <- Y -> BG`` with Y a presheaf of groupoids and G a presheaf of groups."""
    middle: Presheaf
    g: PresheafMap
    group: Presheaf


def check_cocycle(c):
    cert = local_weak_equivalence(map_to_terminal(c.middle))
    if not cert:
        raise NotLocalWeakEquivalence("left leg is not a local weak equivalence",
                                      witness={"failure": cert.failure, "detail": cert.witness})
    return cert


@dataclass(frozen=True, eq=False)
class _LabelledAction(GAction):
    labels: tuple = ()


def _pi0_pullback_action(c):
    """pi0 of the pullback of EG -> BG along the right leg, with its G-action.

    Objects of the pullback over U are pairs (y, a); an arrow m: y -> y'
    links (y, a) to (y', g(m) a).  G acts by ``k.[(y, a)] = [(y, a k^-1)]``.
    """
    gs, site, y = c.group, c.middle.site, c.middle
    labels, values, act = [], [], []
    for o in range(len(site.objects)):
        grp, yo, go = gs.values[o], y.values[o], c.g.components[o]
        n = len(grp)
        uf = UnionFind(yo.n_objects * n)
        for m in range(yo.n_morphisms):
            for k in range(n):
                uf.union(yo.src[m] * n + k, yo.tgt[m] * n + grp.table[go.mor[m]][k])
        lab = uf.labels()
        labels.append(tuple(lab))
        reps = {}
        for i, l in enumerate(lab):
            reps.setdefault(l, i)
        values.append(tuple(f"[{yo.objects[reps[l] // n]},{grp.elements[reps[l] % n]}]"
                            for l in range(len(reps))))
        act.append(tuple(tuple(lab[(reps[l] // n) * n + grp.table[reps[l] % n][grp.inv(u)]]
                               for l in range(len(reps))) for u in range(n)))
    restrict = []
    for h in range(len(site.arrows)):
        s, t = site.src[h], site.tgt[h]
        n_t, n_s = len(gs.values[t]), len(gs.values[s])
        reps = {}
        for i, l in enumerate(labels[t]):
            reps.setdefault(l, i)
        restrict.append(tuple(labels[s][y.restrict[h].obj[reps[l] // n_t] * n_s
                                        + gs.restrict[h][reps[l] % n_t]]
                              for l in sorted(reps)))
    space = make_presheaf(site, "set", values, restrict)
    out = _LabelledAction(gs, space, tuple(act), tuple(labels))
    check_action(out)
    return out


def torsor_from_cocycle(c, check=True):
    """Sheafified path components of the pullback of EG -> BG along the right leg."""
    if check:
        check_cocycle(c)
    return sheafify_action(_pi0_pullback_action(c))


def plus_action(a):
    """The action induced on the plus-construction, with the unit."""
    site = a.site
    p1, unit = plus(a.space)
    act = []
    for t in range(len(site.objects)):
        m = _Matching(a.space, t, site.minimal_sieves[t])
        index = {fam: i for i, fam in enumerate(m.families)}
        rows = []
        for u in range(len(a.group.values[t])):
            rows.append(tuple(index[tuple(a.act[site.src[f]][a.group.restrict[f][u]][x]
                                          for f, x in zip(m.arrows, fam))]
                              for fam in m.families))
        act.append(tuple(rows))
    return make_action(a.group, p1, act), unit


def sheafify_action(a, with_unit=False):
    a1, u1 = plus_action(a)
    a2, u2 = plus_action(a1)
    if with_unit:
        return a2, compose_presheaf_maps(u2, u1)
    return a2


def cocycle_from_torsor(a, check=True):
    """``* <- EG x_G X -> BG``."""
    if check:
        cert = check_torsor(a)
        if not cert:
            raise NotTorsor(f"action is not a torsor ({cert.reason})",
                            witness=cert.free_witness or cert.quotient_witness)
    b = borel(a)
    return PresheafCocycle(b, borel_to_bg(a, b), a.group)


def comparison_map(c):
    """The cocycle morphism ``Y -> EG x_G X``, ``y -> [(y, e)]``, where X is the
    torsor of ``c``.  It commutes with both legs, so ``c`` and the cocycle of
    its torsor lie in one component.  Returns ``(alpha, X)``.
    """
    gs, site, y = c.group, c.middle.site, c.middle
    a0 = _pi0_pullback_action(c)
    a2, unit = sheafify_action(a0, with_unit=True)
    b = borel(a2)
    leg = borel_to_bg(a2, b)
    comps = []
    for o in range(len(site.objects)):
        grp, yo, go = gs.values[o], y.values[o], c.g.components[o]
        n = len(grp)
        pts = tuple(unit.components[o][a0.labels[o][z * n + grp.identity]]
                    for z in range(yo.n_objects))
        mor = tuple(pts[yo.src[m]] * n + go.mor[m] for m in range(yo.n_morphisms))
        comps.append(make_map(yo, b.values[o], pts, mor))
        if compose_maps(leg.components[o], comps[-1]).mor != go.mor:
            raise AssertionError("comparison map does not commute with the BG legs")
    alpha = PresheafMap(y, b, tuple(comps))
    check_natural(alpha)
    return alpha, a2


# -- isomorphisms of torsors -------------------------------------------------

def equivariant_maps(a, b, limit=None):
    """Natural equivariant maps X -> X' (backtracking over objects)."""
    site = a.site
    order = sorted(range(len(site.objects)), key=lambda o: (-len(site.into[o]), o))
    out = []
    chosen = {}

    def candidates(o):
        n, m = a.space.size(o), b.space.size(o)
        if n == 0:
            yield ()
            return
        ta, tb = a.act[o], b.act[o]
        # orbit representatives of X(o) and their images
        reps, seen = [], set()
        for p in range(n):
            if p not in seen:
                reps.append(p)
                seen.update(row[p] for row in ta)
        for imgs in itertools.product(range(m), repeat=len(reps)):
            f = [None] * n
            ok = True
            for p, q in zip(reps, imgs):
                for u, row in enumerate(ta):
                    x, y = row[p], tb[u][q]
                    if f[x] is None:
                        f[x] = y
                    elif f[x] != y:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield tuple(f)

    def natural(h, fs, ft):
        xr, yr = a.space.restrict[h], b.space.restrict[h]
        return all(yr[ft[x]] == fs[xr[x]] for x in range(len(ft)))

    def rec(k):
        if limit is not None and len(out) >= limit:
            return
        if k == len(order):
            out.append(tuple(chosen[o] for o in range(len(site.objects))))
            return
        o = order[k]
        for f in candidates(o):
            chosen[o] = f
            ok = all(natural(h, chosen[site.src[h]], f) for h in site.into[o]
                     if site.src[h] in chosen) and \
                all(natural(h, f, chosen[site.tgt[h]]) for h in site.out_of[o]
                    if site.tgt[h] in chosen)
            if ok:
                rec(k + 1)
            del chosen[o]

    rec(0)
    return out


def find_torsor_isomorphism(a, b):
    for f in equivariant_maps(a, b):
        if all(len(set(c)) == len(c) == b.space.size(o) for o, c in enumerate(f)):
            return f
    return None


# -- classification ----------------------------------------------------------

@dataclass
class TorsorClassification:
    representatives: list
    certificates: list
    n_structures: int
    all_isomorphisms: bool


def _local_objects(site):
    return [o for o in range(len(site.objects))
            if site.identities[o] in site.minimal_sieves[o]]


def classify_torsors(site, group_sheaf, bound=1):
    """Torsors up to equivariant isomorphism.

    Over an object whose smallest covering sieve is maximal a torsor section
    is one regular orbit; every other section is forced by gluing.  So a
    torsor is given by restriction parameters ``t_h`` (with X(h)(g) = G(h)(g) t_h)
    on arrows between such objects, subject to functoriality; isomorphisms act
    by ``t_h -> G(h)(u_T)^-1 t_h u_V``.  ``bound`` caps each glued section at
    ``bound * |G(U)|`` points.
    """
    gs = group_sheaf
    local = _local_objects(site)
    lset = set(local)
    arrows = [h for h in range(len(site.arrows))
              if site.src[h] in lset and site.tgt[h] in lset
              and h != site.identities[site.src[h]]]
    params = _enumerate_params(site, gs, arrows)
    n = len(params)
    labels = _gauge_orbits(site, gs, local, arrows, params)
    reps = {}
    for i, l in enumerate(labels):
        reps.setdefault(l, i)
    representatives, certs = [], []
    for l in sorted(reps):
        a = _glue(site, gs, local, arrows, params[reps[l]], bound)
        cert = check_torsor(a)
        if not cert:
            raise AssertionError(f"enumerated structure is not a torsor: {cert.reason}")
        representatives.append(a)
        certs.append(cert)
    # every equivariant map between representatives is an isomorphism
    all_iso = True
    for x in representatives:
        for y in representatives:
            for f in equivariant_maps(x, y):
                if not all(len(set(c)) == len(c) == y.space.size(o) for o, c in enumerate(f)):
                    all_iso = False
    return TorsorClassification(representatives, certs, n, all_iso)


def _enumerate_params(site, gs, arrows):
    """Functorial parameter assignments, via ``t_{h o g} = G(g)(t_h) t_g``."""
    pos = {h: i for i, h in enumerate(arrows)}
    triples = []
    for (h, g), c in site.comp.items():
        if h in pos and g in pos and c in pos:
            triples.append((pos[h], pos[g], pos[c], g))
    order = sorted(range(len(arrows)),
                   key=lambda i: sum(1 for t in triples if t[2] == i))
    out = []
    vals = [None] * len(arrows)
    seen = set()

    def rec(k):
        if k == len(order):
            out.append(tuple(vals))
            return
        i = order[k]
        grp = gs.values[site.src[arrows[i]]]
        for v in range(len(grp)):
            vals[i] = v
            seen.add(i)
            ok = True
            for a, b, c, g in triples:
                if i in (a, b, c) and a in seen and b in seen and c in seen:
                    want = gs.values[site.src[g]].table[gs.restrict[g][vals[a]]][vals[b]]
                    if vals[c] != want:
                        ok = False
                        break
            if ok:
                rec(k + 1)
            seen.discard(i)
        vals[i] = None

    rec(0)
    return out


def _gauge_orbits(site, gs, local, arrows, params):
    """Orbit labels under single-object gauge generators (vectorized)."""
    n = len(params)
    if n == 0:
        return []
    if not arrows:
        return [0] * n
    tab = np.array(params, dtype=np.int64)
    radix = np.array([len(gs.values[site.src[h]]) for h in arrows], dtype=np.int64)
    weights = np.ones(len(arrows), dtype=np.int64)
    for i in range(1, len(arrows)):
        weights[i] = weights[i - 1] * radix[i - 1]
    codes = tab @ weights
    order = np.argsort(codes)
    sorted_codes = codes[order]
    rows, cols = [np.arange(n)], [np.arange(n)]
    for o in local:
        grp = gs.values[o]
        for u in grp.generators:
            new = tab.copy()
            for i, h in enumerate(arrows):
                s, t = site.src[h], site.tgt[h]
                gsrc = gs.values[s]
                mul = np.array(gsrc.table)
                col = new[:, i]
                if t == o:
                    # left factor G(h)(u)^-1
                    left = gsrc.inv(gs.restrict[h][u])
                    col = mul[left, col]
                if s == o:
                    col = mul[col, u]
                new[:, i] = col
            moved = new @ weights
            j = order[np.searchsorted(sorted_codes, moved)]
            if not (codes[j] == moved).all():
                raise AssertionError("gauge transform left the enumerated set")
            rows.append(np.arange(n))
            cols.append(j)
    graph = coo_matrix((np.ones(sum(len(r) for r in rows)),
                        (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    _, lab = connected_components(graph, directed=True, connection="weak")
    # relabel by first appearance
    first = {}
    return [first.setdefault(int(x), len(first)) for x in lab]


def _glue(site, gs, local, arrows, vals, bound):
    """Assemble the torsor: regular sections on local objects, glued elsewhere."""
    lset = set(local)
    pos = {h: i for i, h in enumerate(arrows)}
    # presheaf on local objects, then extend by matching families top-down
    values = [None] * len(site.objects)
    for o in local:
        values[o] = tuple(gs.values[o].elements)
    restrict_local = {}
    for h in range(len(site.arrows)):
        s, t = site.src[h], site.tgt[h]
        if s in lset and t in lset:
            g = gs.values[s]
            tv = g.identity if h == site.identities[s] else vals[pos[h]]
            restrict_local[h] = tuple(g.table[gs.restrict[h][x]][tv]
                                      for x in range(len(gs.values[t])))
    nonlocal_objs = [o for o in range(len(site.objects)) if o not in lset]
    # sections over a non-local object: families on its smallest sieve whose
    # members are local (glued objects are handled recursively by sieve depth)
    sections = {}
    for o in sorted(nonlocal_objs, key=lambda o: len(site.into[o])):
        sieve = sorted(site.minimal_sieves[o])
        if any(site.src[f] not in lset and site.src[f] not in sections for f in sieve):
            raise InputError("site is not generated by its local objects")
        fams = _glue_families(site, gs, sieve, restrict_local, sections, lset, values)
        limit = bound * len(gs.values[o])
        if len(fams) > limit:
            raise InputError(f"glued section at {site.objects[o]} exceeds the bound",
                             witness=len(fams))
        sections[o] = (sieve, fams)
        values[o] = tuple("{" + ",".join(f"{site.objects[site.src[f]]}:{x}"
                                         for f, x in zip(sieve, fam)) + "}" for fam in fams)
    space_restrict = []
    for h in range(len(site.arrows)):
        s, t = site.src[h], site.tgt[h]
        if h in restrict_local:
            space_restrict.append(restrict_local[h])
        elif t in sections:
            sieve_t, fams_t = sections[t]
            ps = {f: i for i, f in enumerate(sieve_t)}
            if s in sections:
                sieve_s, fams_s = sections[s]
                idx = {f: i for i, f in enumerate(fams_s)}
                space_restrict.append(tuple(idx[tuple(fam[ps[site.comp[(h, g)]]]
                                                      for g in sieve_s)] for fam in fams_t))
            else:
                space_restrict.append(tuple(fam[ps[h]] for fam in fams_t))
        else:
            # local target, glued source: restrict then read off the family
            sieve_s, fams_s = sections[s]
            idx = {f: i for i, f in enumerate(fams_s)}
            out = []
            for x in range(len(values[t])):
                fam = []
                for g in sieve_s:
                    c = site.comp[(h, g)]
                    fam.append(_restrict_local(site, restrict_local, sections, c, x))
                out.append(idx[tuple(fam)])
            space_restrict.append(tuple(out))
    space = make_presheaf(site, "set", values, space_restrict)
    act = []
    for o in range(len(site.objects)):
        g = gs.values[o]
        if o in lset:
            act.append(g.table)
        else:
            sieve, fams = sections[o]
            idx = {f: i for i, f in enumerate(fams)}
            act.append(tuple(tuple(idx[tuple(gs.values[site.src[f]].table[gs.restrict[f][u]][x]
                                             for f, x in zip(sieve, fam))]
                                   for fam in fams) for u in range(len(g))))
    return make_action(gs, space, act)


def _restrict_local(site, restrict_local, sections, c, x):
    if c in restrict_local:
        return restrict_local[c][x]
    raise InputError("restriction passes through a glued object")


def _glue_families(site, gs, sieve, restrict_local, sections, lset, values):
    """Matching families on a sieve, given sections over its members."""
    pos = {f: i for i, f in enumerate(sieve)}
    sizes = [len(values[site.src[f]]) for f in sieve]
    links = []
    for f in sieve:
        for g in site.into[site.src[f]]:
            c = site.comp[(f, g)]
            if g != site.identities[site.src[f]]:
                links.append((pos[f], g, pos[c]))

    def apply(g, x):
        s, t = site.src[g], site.tgt[g]
        if g in restrict_local:
            return restrict_local[g][x]
        if t in sections:
            sieve_t, fams_t = sections[t]
            if s in sections:
                sieve_s, fams_s = sections[s]
                pt = {f: i for i, f in enumerate(sieve_t)}
                fam = tuple(fams_t[x][pt[site.comp[(g, k)]]] for k in sieve_s)
                return fams_s.index(fam)
            return fams_t[x][{f: i for i, f in enumerate(sieve_t)}[g]]
        sieve_s, fams_s = sections[s]
        fam = tuple(restrict_local[site.comp[(g, k)]][x] for k in sieve_s)
        return fams_s.index(fam)

    out = []
    vals = [None] * len(sieve)
    later = [[] for _ in sieve]
    for i, g, j in links:
        later[max(i, j)].append((i, g, j))

    def rec(k):
        if k == len(sieve):
            out.append(tuple(vals))
            return
        for v in range(sizes[k]):
            vals[k] = v
            if all(apply(g, vals[i]) == vals[j] for i, g, j in later[k]):
                rec(k + 1)
        vals[k] = None

    rec(0)
    return out


# -- Cech H^1 ------------------------------------------------------------------

@dataclass(frozen=True)
class CechData:
    cover: tuple
    transitions: dict  # (a, b), a < b -> element of G(U_a x_T U_b)


def pullback_object(site, f1, f2):
    """A pullback of two arrows with common target, as (object, p1, p2), or None."""
    x1, x2 = site.src[f1], site.src[f2]
    cones = []
    for p in range(len(site.objects)):
        for a in site.hom(p, x1):
            for b in site.hom(p, x2):
                if site.comp[(f1, a)] == site.comp[(f2, b)]:
                    cones.append((p, a, b))
    for p, a, b in cones:
        if all(sum(1 for u in site.hom(q, p)
                   if site.comp[(a, u)] == qa and site.comp[(b, u)] == qb) == 1
               for q, qa, qb in cones):
            return p, a, b
    return None


def _is_monic(site, f):
    for x in range(len(site.objects)):
        images = [site.comp[(f, a)] for a in site.hom(x, site.src[f])]
        if len(set(images)) != len(images):
            return False
    return True


def cech_h1_on(site, gs, family):
    """Cocycles on a family modulo coboundaries: (count, representatives)."""
    family = tuple(family)
    if not all(_is_monic(site, f) for f in family):
        raise InputError("Cech cocycles are implemented for covers by monomorphisms")
    n = len(family)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    pb = {}
    for a, b in pairs:
        r = pullback_object(site, family[a], family[b])
        if r is None:
            raise InputError("cover has a missing pairwise pullback")
        pb[(a, b)] = r
    triples = []
    for a, b, c in itertools.combinations(range(n), 3):
        p_ab, _, pb_b = pb[(a, b)]
        r = pullback_object(site, site.comp[(family[b], pb_b)], family[c])
        if r is None:
            continue
        q, to_ab, to_c = r
        # arrows from the triple overlap into the pairwise overlaps
        links = {}
        for key in ((a, b), (b, c), (a, c)):
            p, pa, pbb = pb[key]
            i, j = key
            proj = {a: site.comp[(pb[(a, b)][1], to_ab)], b: site.comp[(pb[(a, b)][2], to_ab)],
                    c: to_c}
            hit = [u for u in site.hom(q, p)
                   if site.comp[(pa, u)] == proj[i] and site.comp[(pbb, u)] == proj[j]]
            links[key] = hit[0]
        triples.append((a, b, c, q, links))
    sizes = [len(gs.values[pb[k][0]]) for k in pairs]
    cocycles = []
    for vals in itertools.product(*[range(s) for s in sizes]):
        g = dict(zip(pairs, vals))
        ok = True
        for a, b, c, q, links in triples:
            grp = gs.values[q]
            lhs = grp.table[gs.restrict[links[(a, b)]][g[(a, b)]]][gs.restrict[links[(b, c)]][g[(b, c)]]]
            if lhs != gs.restrict[links[(a, c)]][g[(a, c)]]:
                ok = False
                break
        if ok:
            cocycles.append(vals)
    index = {v: i for i, v in enumerate(cocycles)}
    uf = UnionFind(len(cocycles))
    for k in range(n):
        uk = site.src[family[k]]
        for u in gs.values[uk].generators:
            for i, vals in enumerate(cocycles):
                new = []
                for (a, b), v in zip(pairs, vals):
                    p, pa, pbb = pb[(a, b)]
                    grp = gs.values[p]
                    x = v
                    if a == k:
                        x = grp.table[gs.restrict[pa][u]][x]
                    if b == k:
                        x = grp.table[x][grp.inv(gs.restrict[pbb][u])]
                    new.append(x)
                uf.union(i, index[tuple(new)])
    labels = uf.labels()
    reps = {}
    for i, l in enumerate(labels):
        reps.setdefault(l, i)
    data = [CechData(family, dict(zip(pairs, cocycles[reps[l]]))) for l in sorted(reps)]
    return len(reps), data


def cech_h1(site, gs):
    """H^1 over the refinement-final cover of the terminal object."""
    t = site.terminal
    if t is None:
        raise InputError("site has no terminal object")
    fams = [(site.identities[t],)] + list(site.covers[t])
    sieves = [site.sieve(f) for f in fams]
    final = [i for i, s in enumerate(sieves) if all(s <= o for o in sieves)]
    if not final:
        raise InputError("no declared cover of the terminal object refines all others")
    results = [cech_h1_on(site, gs, f) for f in fams]
    counts = [r[0] for r in results]
    best = final[-1]
    if counts[best] != max(counts):
        raise AssertionError("refinement-final cover does not realize the largest H^1")
    return counts[best], results[best][1], fams[best]


# -- bounded cocycle category H(*, BG) in presheaves -------------------------

@dataclass
class PresheafCocycleComponents:
    middles: list
    n_objects: int
    n_morphisms: int
    n_components: int
    representatives: list


def cocycle_middles(site):
    """Terminal presheaf, cylinder on it, and Cech groupoids of covers of the
    terminal object with their cylinders."""
    t = site.terminal
    if t is None:
        raise InputError("site has no terminal object")
    pt = terminal_presheaf(site, "groupoid")
    i2 = indiscrete(2)
    out = [("*", pt), ("*xI", presheaf_times(pt, i2))]
    for k, fam in enumerate(site.covers[t]):
        c = cover_cech_groupoid(site, t, fam)
        out.append((f"C{k}", c))
        out.append((f"C{k}xI", presheaf_times(c, i2)))
    for name, z in out:
        if not local_weak_equivalence(map_to_terminal(z)):
            raise AssertionError(f"middle {name} is not locally contractible")
    return out


def bounded_cocycle_components(site, gs):
    """Components of H(*, BG) restricted to the middles of :func:`cocycle_middles`."""
    bg = delooping_presheaf(gs)
    mids = cocycle_middles(site)
    legs = [presheaf_maps(z, bg) for _, z in mids]
    offsets = np.cumsum([0] + [len(l) for l in legs])
    total = int(offsets[-1])
    vecs, hashes, orders = [], [], []
    rng = np.random.default_rng(0)
    for (name, z), maps in zip(mids, legs):
        v = np.array([_mor_vector(m) for m in maps], dtype=np.int64).reshape(len(maps), -1)
        vecs.append(v)
        w = rng.integers(1, 2 ** 61, size=v.shape[1], dtype=np.int64)
        h = (v * w).sum(axis=1) if v.shape[1] else np.zeros(len(maps), dtype=np.int64)
        if len(set(h.tolist())) != len(h):
            raise AssertionError("hash collision among cocycle legs")
        hashes.append((w, h, np.argsort(h)))
    rows, cols = [np.arange(total)], [np.arange(total)]
    n_mor = 0
    for a, (_, za) in enumerate(mids):
        wa, ha, oa = hashes[a]
        sorted_ha = ha[oa]
        for b, (_, zb) in enumerate(mids):
            if not len(legs[b]):
                continue
            for alpha in presheaf_maps(za, zb):
                idx = _alpha_index(alpha)
                moved = vecs[b][:, idx]
                hm = (moved * wa).sum(axis=1) if moved.shape[1] else np.zeros(len(moved), np.int64)
                j = np.searchsorted(sorted_ha, hm)
                j = np.minimum(j, len(sorted_ha) - 1)
                src = oa[j]
                if not (ha[src] == hm).all() or not (vecs[a][src] == moved).all():
                    raise AssertionError("pulled-back leg is not enumerated")
                rows.append(offsets[a] + src)
                cols.append(offsets[b] + np.arange(len(legs[b])))
                n_mor += len(legs[b])
    graph = coo_matrix((np.ones(sum(len(r) for r in rows)),
                        (np.concatenate(rows), np.concatenate(cols))), shape=(total, total))
    k, lab = connected_components(graph, directed=True, connection="weak")
    reps = {}
    for i, l in enumerate(lab.tolist()):
        reps.setdefault(l, i)
    representatives = []
    for l in sorted(reps, key=reps.get):
        i = reps[l]
        a = int(np.searchsorted(offsets, i, side="right") - 1)
        representatives.append(PresheafCocycle(mids[a][1], legs[a][i - offsets[a]], gs))
    return PresheafCocycleComponents([n for n, _ in mids], total, n_mor, int(k),
                                     representatives)


def _mor_vector(m):
    return [x for c in m.components for x in c.mor]


def _alpha_index(alpha):
    """Positions in the target's concatenated morphism vector hit by alpha."""
    offs, acc = [], 0
    for c in alpha.components:
        offs.append(acc)
        acc += c.target.n_morphisms
    return np.array([offs[o] + x for o, c in enumerate(alpha.components) for x in c.mor],
                    dtype=np.int64)


# -- torsors, Cech H^1 and cocycles side by side --------------------------------

@dataclass
class TorsorReport:
    torsors: int
    cech: int
    cocycle_components: int
    roundtrip_torsors: bool
    roundtrip_cocycles: bool
    agree: bool
    representatives: list


def torsor_report(site, group):
    gs = constant_group_sheaf(site, group)
    cls = classify_torsors(site, gs)
    h1, _, _ = cech_h1(site, gs)
    comps = bounded_cocycle_components(site, gs)
    rt_t = True
    for x in cls.representatives:
        y = torsor_from_cocycle(cocycle_from_torsor(x))
        if find_torsor_isomorphism(x, y) is None:
            rt_t = False
    rt_c = True
    hit = set()
    for c in comps.representatives:
        _, a = comparison_map(c)
        k = next((i for i, x in enumerate(cls.representatives)
                  if find_torsor_isomorphism(a, x) is not None), None)
        if k is None or k in hit:
            rt_c = False
        else:
            hit.add(k)
    n = len(cls.representatives)
    return TorsorReport(n, h1, comps.n_components, rt_t, rt_c and len(hit) == n,
                        n == h1 == comps.n_components, cls.representatives)
