"""Presheaves of finitely generated abelian groups and their Cech cohomology."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import intlinalg as il
from .abelian import (AbelianGroup, Hom, compose, from_finite_group, hom_from_finite,
                      homology_group, identity_hom, is_isomorphism, kernel, make_hom,
                      noncommuting_pair, standard_form)
from .errors import InputError, NoAbelianValues, NotFunctorial
from .groups import FiniteGroup


@dataclass(frozen=True)
class AbelianPresheaf:
    """``restrict[a]`` maps the value at tgt(a) to the value at src(a)."""
    site: object
    values: tuple
    restrict: tuple


def make_abelian_presheaf(site, values, restrict, check=True):
    p = AbelianPresheaf(site, tuple(values), tuple(restrict))
    if check:
        check_abelian_presheaf(p)
    return p


def check_abelian_presheaf(p):
    site = p.site
    if len(p.values) != len(site.objects) or len(p.restrict) != len(site.arrows):
        raise InputError("presheaf does not cover the site")
    for a, r in enumerate(p.restrict):
        if r.source != p.values[site.tgt[a]] or r.target != p.values[site.src[a]]:
            raise NotFunctorial(f"restriction along {site.arrows[a]} has wrong endpoints",
                                witness=site.arrows[a])
    for o in range(len(site.objects)):
        if p.restrict[site.identities[o]].matrix != identity_hom(p.values[o]).matrix:
            raise NotFunctorial(f"identity at {site.objects[o]} does not act trivially",
                                witness=site.objects[o])
    for (g, f), h in site.comp.items():
        if compose(p.restrict[f], p.restrict[g]).matrix != p.restrict[h].matrix:
            raise NotFunctorial(f"restriction along {site.arrows[h]} is not the composite",
                                witness=[site.arrows[g], site.arrows[f]])
    return True


def constant_abelian(site, a):
    return make_abelian_presheaf(site, [a] * len(site.objects),
                                 [identity_hom(a)] * len(site.arrows))


def from_group_presheaf(p):
    """Convert a presheaf of finite groups; every value must be abelian."""
    if p.kind != "group":
        raise NoAbelianValues(f"presheaf has {p.kind} values, not groups")
    site = p.site
    pres = []
    for o, g in enumerate(p.values):
        if not g.is_abelian:
            raise NoAbelianValues(f"value at {site.objects[o]} is not abelian",
                                  witness={"object": site.objects[o],
                                           "pair": noncommuting_pair(g)})
        pres.append(from_finite_group(g))
    restrict = [hom_from_finite(r, pres[site.tgt[a]], pres[site.src[a]])
                for a, r in enumerate(p.restrict)]
    return make_abelian_presheaf(site, [x[0] for x in pres], restrict)


def as_abelian_presheaf(site, coeff):
    """Accept an abelian presheaf, a group presheaf, or a single constant group."""
    if isinstance(coeff, AbelianPresheaf):
        return coeff
    if isinstance(coeff, AbelianGroup):
        return constant_abelian(site, coeff)
    if isinstance(coeff, FiniteGroup):
        if not coeff.is_abelian:
            raise NoAbelianValues(f"group {coeff.name or '?'} is not abelian",
                                  witness=noncommuting_pair(coeff))
        return constant_abelian(site, from_finite_group(coeff)[0])
    if getattr(coeff, "kind", None) is not None:
        return from_group_presheaf(coeff)
    raise NoAbelianValues(f"cannot read {type(coeff).__name__} as abelian coefficients")


# -- sheafification ------------------------------------------------------------

def _direct_sum(groups):
    orders, offs, acc = [], [], 0
    for g in groups:
        offs.append(acc)
        orders.extend(g.orders)
        acc += g.ngens
    return AbelianGroup(tuple(orders)), offs


def plus(p):
    """Matching families on the smallest covering sieves, with the unit."""
    site = p.site
    n_obj = len(site.objects)
    data = []
    for t in range(n_obj):
        arrows = sorted(site.minimal_sieves[t])
        amb, offs = _direct_sum([p.values[site.src[f]] for f in arrows])
        pos = {f: i for i, f in enumerate(arrows)}
        links = [(f, g, site.comp[(f, g)]) for f in arrows
                 for g in site.into[site.src[f]] if g != site.identities[site.src[f]]]
        tgt, toffs = _direct_sum([p.values[site.src[g]] for _, g, _ in links])
        m = il.zeros(tgt.ngens, amb.ngens)
        for li, (f, g, h) in enumerate(links):
            r = p.restrict[g].matrix
            o_out, o_f, o_h = toffs[li], offs[pos[f]], offs[pos[h]]
            for i, row in enumerate(r):
                for j, x in enumerate(row):
                    m[o_out + i][o_f + j] += x
            for i in range(p.values[site.src[g]].ngens):
                m[o_out + i][o_h + i] -= 1
        sub = kernel(make_hom(amb, tgt, m, check=False))
        data.append((arrows, pos, amb, offs, sub))
    values = [d[4].group for d in data]
    restrict = []
    for h in range(len(site.arrows)):
        s, t = site.src[h], site.tgt[h]
        arr_s, _, amb_s, offs_s, sub_s = data[s]
        _, pos_t, amb_t, offs_t, sub_t = data[t]
        # ambient restriction: component g of the result is component h o g
        m = il.zeros(amb_s.ngens, amb_t.ngens)
        for gi, g in enumerate(arr_s):
            f = site.comp[(h, g)]
            for i in range(p.values[site.src[g]].ngens):
                m[offs_s[gi] + i][offs_t[pos_t[f]] + i] = 1
        amb_map = compose(make_hom(amb_t, amb_s, m, check=False), sub_t.inclusion)
        cols = [list(sub_s.coords(amb_map.column(j))) for j in range(values[t].ngens)]
        restrict.append(make_hom(values[t], values[s], il.from_columns(cols, values[s].ngens)))
    out = make_abelian_presheaf(site, values, restrict)
    unit = []
    for t in range(n_obj):
        arrows, _, amb, offs, sub = data[t]
        rows = []
        for f in arrows:
            rows.extend(list(r) for r in p.restrict[f].matrix)
        amb_map = make_hom(p.values[t], amb, rows, check=False)
        cols = [list(sub.coords(amb_map.column(j))) for j in range(p.values[t].ngens)]
        unit.append(make_hom(p.values[t], values[t], il.from_columns(cols, values[t].ngens)))
    return out, tuple(unit)


def sheafify(p):
    """Plus-construction twice, with the composite unit."""
    p1, u1 = plus(p)
    p2, u2 = plus(p1)
    return p2, tuple(compose(b, a) for a, b in zip(u1, u2))


def is_sheaf(p):
    _, unit = plus(p)
    for o, u in enumerate(unit):
        if not is_isomorphism(u):
            return False, p.site.objects[o]
    return True, None


# -- Cech complex ---------------------------------------------------------------

def refinement_final_cover(site, t=None):
    """A declared cover of ``t`` (default the terminal object) refining all others."""
    t = site.terminal if t is None else t
    if t is None:
        raise InputError("site has no terminal object")
    fams = [(site.identities[t],)] + [tuple(f) for f in site.covers[t]]
    sieves = [site.sieve(f) for f in fams]
    final = [i for i, s in enumerate(sieves) if all(s <= o for o in sieves)]
    if not final:
        raise InputError("no declared cover refines all others", witness=site.objects[t])
    return t, fams[final[-1]]


def _is_monic(site, f):
    for x in range(len(site.objects)):
        images = [site.comp[(f, a)] for a in site.hom(x, site.src[f])]
        if len(set(images)) != len(images):
            return False
    return True


def _intersection(site, family, idx):
    """Object over every ``U_i`` (i in idx) that is their limit over the
    target, with its projections; None when no such object exists."""
    cones = []
    for q in range(len(site.objects)):
        legs = []
        for i in idx:
            hs = site.hom(q, site.src[family[i]])
            legs.append(hs)
        for choice in itertools.product(*legs):
            tops = {site.comp[(family[i], a)] for i, a in zip(idx, choice)}
            if len(tops) == 1:
                cones.append((q, choice))
    for q, legs in cones:
        if all(sum(1 for u in site.hom(r, q)
                   if all(site.comp[(a, u)] == b for a, b in zip(legs, rl))) == 1
               for r, rl in cones):
            return q, legs
    return None


@dataclass(frozen=True)
class CochainComplex:
    simplices: tuple       # per degree: ((i0, ..., ip), object, projections)
    groups: tuple
    coboundaries: tuple    # coboundaries[p]: C^p -> C^{p+1}


def cech_complex(p, family, top):
    """Alternating Cech cochains of ``p`` on a cover by monomorphisms."""
    site = p.site
    family = tuple(family)
    if not all(_is_monic(site, f) for f in family):
        raise InputError("Cech complexes are implemented for covers by monomorphisms",
                         witness=[site.arrows[f] for f in family if not _is_monic(site, f)])
    simplices = []
    for q in range(top + 2):
        level = []
        for idx in itertools.combinations(range(len(family)), q + 1):
            r = _intersection(site, family, idx)
            if r is not None:
                level.append((idx, r[0], r[1]))
        simplices.append(tuple(level))
    groups, offsets = [], []
    for level in simplices:
        g, offs = _direct_sum([p.values[obj] for _, obj, _ in level])
        groups.append(g)
        offsets.append(offs)
    cobs = []
    for q in range(top + 1):
        src, dst = simplices[q], simplices[q + 1]
        where = {idx: k for k, (idx, _, _) in enumerate(src)}
        m = il.zeros(groups[q + 1].ngens, groups[q].ngens)
        for k, (idx, obj, legs) in enumerate(dst):
            for j in range(len(idx)):
                face = idx[:j] + idx[j + 1:]
                kf = where.get(face)
                if kf is None:
                    continue
                _, fobj, flegs = src[kf]
                keep = [legs[x] for x in range(len(idx)) if x != j]
                rho = next(u for u in site.hom(obj, fobj)
                           if all(site.comp[(a, u)] == b for a, b in zip(flegs, keep)))
                sign = -1 if j % 2 else 1
                for r, row in enumerate(p.restrict[rho].matrix):
                    for c, x in enumerate(row):
                        m[offsets[q + 1][k] + r][offsets[q][kf] + c] += sign * x
        cobs.append(make_hom(groups[q], groups[q + 1], m))
    for q in range(top):
        dd = compose(cobs[q + 1], cobs[q])
        bad = next(((i, j) for i, r in enumerate(dd.matrix) for j, x in enumerate(r) if x), None)
        if bad is not None:
            raise AssertionError(f"coboundary squares to a nonzero map at position {bad}")
    return CochainComplex(tuple(simplices), tuple(groups), tuple(cobs))


def cech_cohomology(site, coeff, n, top=None, sheafify_first=True):
    """``H^n`` of the Cech complex over the refinement-final cover of the
    terminal object, in standard form."""
    from .doldkan import top_dimension
    d = top_dimension() if top is None else top
    if not 0 <= n <= d:
        raise InputError(f"degree must lie in 0..{d}", witness=n)
    p = as_abelian_presheaf(site, coeff)
    if sheafify_first:
        p = sheafify(p)[0]
    _, family = refinement_final_cover(site)
    cx = cech_complex(p, family, n)
    incoming = cx.coboundaries[n - 1] if n > 0 else make_hom(
        AbelianGroup(()), cx.groups[0], [[] for _ in range(cx.groups[0].ngens)], check=False)
    return standard_form(homology_group(incoming, cx.coboundaries[n]))


def cech_report(site, coeff, n, top=None):
    h = cech_cohomology(site, coeff, n, top)
    return {"rank": h.rank, "torsion": list(h.torsion)}
