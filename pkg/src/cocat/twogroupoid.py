"""Finite (strict) 2-groupoids and 2-functors.

Cells are indexed.  ``hcomp1[(g, f)] = g o f`` for 1-cells,
``vcomp[(b, a)] = b . a`` for 2-cells ``a: f => f'``, ``b: f' => f''`` and
``hcomp2[(b, a)] = b * a`` for ``a: f => f'``, ``b: g => g'`` with ``g o f``
defined; its source is ``g o f`` and its target ``g' o f'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import (AssociativityFailure, CompositionGap, InputError, InterchangeFailure,
                     NotAFunctor)
from .groupoid import (GroupoidMap, HomotopyInvariants, WeqCertificate, is_weak_equivalence,
                       make_groupoid)
from .groups import FiniteGroup

import numpy as np


@dataclass(frozen=True, eq=False)
class FiniteTwoGroupoid:
    zero: tuple
    one: tuple
    one_src: tuple
    one_tgt: tuple
    two: tuple
    two_src: tuple
    two_tgt: tuple
    hcomp1: dict
    vcomp: dict
    hcomp2: dict
    id1: tuple
    id2: tuple
    name: str = field(default="", compare=False)

    def __repr__(self):
        return (f"FiniteTwoGroupoid({self.name or '?'}, {len(self.zero)}/{len(self.one)}/"
                f"{len(self.two)})")

    def __eq__(self, other):
        return isinstance(other, FiniteTwoGroupoid) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @cached_property
    def _key(self):
        return (self.zero, self.one, self.one_src, self.one_tgt, self.two, self.two_src,
                self.two_tgt, tuple(sorted(self.hcomp1.items())),
                tuple(sorted(self.vcomp.items())), tuple(sorted(self.hcomp2.items())))

    @cached_property
    def one_groupoid(self):
        """0-cells and 1-cells as a groupoid."""
        return make_groupoid(self.zero, self.one, self.one_src, self.one_tgt, self.hcomp1,
                             self.id1, None, f"{self.name}_1", check=False)

    @cached_property
    def cell_groupoid(self):
        """1-cells and 2-cells under vertical composition."""
        return make_groupoid(self.one, self.two, self.two_src, self.two_tgt, self.vcomp,
                             self.id2, None, f"{self.name}_2", check=False)

    def hom_groupoid(self, x, y):
        """The groupoid ``G(x, y)`` plus the 1-cell and 2-cell index lists."""
        cells = [f for f in range(len(self.one))
                 if self.one_src[f] == x and self.one_tgt[f] == y]
        pos = {f: i for i, f in enumerate(cells)}
        twos = [a for a in range(len(self.two)) if self.two_src[a] in pos]
        tpos = {a: i for i, a in enumerate(twos)}
        comp = {(tpos[b], tpos[a]): tpos[c] for (b, a), c in self.vcomp.items() if a in tpos}
        g = make_groupoid([self.one[f] for f in cells], [self.two[a] for a in twos],
                          [pos[self.two_src[a]] for a in twos],
                          [pos[self.two_tgt[a]] for a in twos], comp,
                          [tpos[self.id2[f]] for f in cells], None,
                          f"{self.name}({self.zero[x]},{self.zero[y]})", check=False)
        return g, cells, twos

    def inverse1(self, f):
        return self.one_groupoid.inverses[f]


@dataclass(frozen=True, eq=False)
class TwoGroupoidMap:
    source: FiniteTwoGroupoid
    target: FiniteTwoGroupoid
    zero: tuple
    one: tuple
    two: tuple

    def __eq__(self, other):
        return (isinstance(other, TwoGroupoidMap) and self.zero == other.zero
                and self.one == other.one and self.two == other.two
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash((self.zero, self.one, self.two))

    @property
    def key(self):
        return (self.zero, self.one, self.two)


def make_two_groupoid(zero, one, one_src, one_tgt, two, two_src, two_tgt, hcomp1, vcomp,
                      hcomp2, id1=None, id2=None, name="", check=True):
    zero, one, two = tuple(zero), tuple(one), tuple(two)
    one_src, one_tgt = tuple(one_src), tuple(one_tgt)
    two_src, two_tgt = tuple(two_src), tuple(two_tgt)
    # both groupoid levels validate (or infer) identities and inverses
    g1 = make_groupoid(zero, one, one_src, one_tgt, hcomp1, id1, None, name, check=check)
    g2 = make_groupoid(one, two, two_src, two_tgt, vcomp, id2, None, name, check=check)
    tg = FiniteTwoGroupoid(zero, one, one_src, one_tgt, two, two_src, two_tgt, dict(hcomp1),
                           dict(vcomp), dict(hcomp2), g1.identities, g2.identities, name)
    if check:
        for a in range(len(two)):
            if (one_src[two_src[a]] != one_src[two_tgt[a]]
                    or one_tgt[two_src[a]] != one_tgt[two_tgt[a]]):
                raise InputError(f"2-cell {two[a]!r} joins non-parallel 1-cells", witness=two[a])
        _check_horizontal(tg)
        _check_interchange(tg)
    return tg


def _check_horizontal(tg):
    two, one = tg.two, tg.one
    n2 = len(two)
    s, t = tg.two_src, tg.two_tgt
    h1, h2 = tg.hcomp1, tg.hcomp2
    for b in range(n2):
        for a in range(n2):
            composable = tg.one_tgt[s[a]] == tg.one_src[s[b]]
            if composable != ((b, a) in h2):
                raise CompositionGap(
                    f"horizontal composite {two[b]} * {two[a]} is "
                    + ("missing" if composable else "given for a non-composable pair"),
                    witness=[two[b], two[a]])
            if composable:
                c = h2[(b, a)]
                if s[c] != h1[(s[b], s[a])] or t[c] != h1[(t[b], t[a])]:
                    raise CompositionGap(f"{two[b]} * {two[a]} has wrong boundary",
                                         witness=[two[b], two[a]])
    for g in range(len(one)):
        for f in range(len(one)):
            if (g, f) in h1 and h2[(tg.id2[g], tg.id2[f])] != tg.id2[h1[(g, f)]]:
                raise AssociativityFailure(
                    f"identity 2-cells do not compose horizontally at {one[g]} o {one[f]}",
                    witness=[one[g], one[f]])
    for x in range(len(tg.zero)):
        u = tg.id2[tg.id1[x]]
        for a in range(n2):
            if tg.one_tgt[s[a]] == x and h2[(u, a)] != a:
                raise AssociativityFailure(f"unit 2-cell at {tg.zero[x]} is not neutral",
                                           witness=[tg.zero[x], two[a]])
            if tg.one_src[s[a]] == x and h2[(a, u)] != a:
                raise AssociativityFailure(f"unit 2-cell at {tg.zero[x]} is not neutral",
                                           witness=[tg.zero[x], two[a]])
    h2a = _dense(h2, n2)
    for c in range(n2):
        # (c * b) * a == c * (b * a) wherever both sides are defined
        cb = h2a[c]
        ok = (cb[:, None] >= 0) & (h2a >= 0)
        lhs = np.where(ok, h2a[np.maximum(cb, 0)[:, None], np.arange(n2)[None, :]], -1)
        inner = h2a[c][np.maximum(h2a, 0)]
        rhs = np.where(ok, inner, -1)
        bad = np.argwhere(ok & (lhs != rhs))
        if len(bad):
            b, a = map(int, bad[0])
            raise AssociativityFailure(
                f"horizontal composition not associative on {two[c]},{two[b]},{two[a]}",
                witness=[two[c], two[b], two[a]])


def _dense(table, n):
    out = np.full((n, n), -1, dtype=np.int64)
    if table:
        keys = np.array(list(table.keys()), dtype=np.int64)
        out[keys[:, 0], keys[:, 1]] = np.fromiter(table.values(), dtype=np.int64,
                                                  count=len(table))
    return out


def _check_interchange(tg):
    two = tg.two
    n2 = len(two)
    if not tg.vcomp:
        return
    src0 = np.array([tg.one_src[x] for x in tg.two_src])
    tgt0 = np.array([tg.one_tgt[x] for x in tg.two_src])
    h2, v = _dense(tg.hcomp2, n2), _dense(tg.vcomp, n2)
    pairs = np.array(list(tg.vcomp.keys()), dtype=np.int64)  # (a2, a1)
    comp = np.fromiter(tg.vcomp.values(), dtype=np.int64, count=len(pairs))
    b2, b1 = pairs[:, 0], pairs[:, 1]
    for i in range(len(pairs)):
        a2, a1, av = pairs[i, 0], pairs[i, 1], comp[i]
        ok = src0[b1] == tgt0[a1]
        if not ok.any():
            continue
        lhs = h2[comp[ok], av]
        rhs = v[h2[b2[ok], a2], h2[b1[ok], a1]]
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            j = np.flatnonzero(ok)[bad[0]]
            raise InterchangeFailure(
                f"interchange fails on ({two[b2[j]]},{two[b1[j]]},{two[a2]},{two[a1]})",
                witness=[two[b2[j]], two[b1[j]], two[a2], two[a1]])


def build_two_groupoid(objects, morphisms, compose, two_cells, vcompose, hcompose, name=""):
    """Label-level constructor mirroring the JSON wire format."""
    zero = tuple(str(o) for o in objects)
    zpos = {o: i for i, o in enumerate(zero)}
    one, osrc, otgt = [], [], []
    for mid, s, t in morphisms:
        if str(s) not in zpos or str(t) not in zpos:
            raise InputError(f"1-cell {mid!r} has unknown endpoint", witness=mid)
        one.append(str(mid))
        osrc.append(zpos[str(s)])
        otgt.append(zpos[str(t)])
    opos = {m: i for i, m in enumerate(one)}
    if len(opos) != len(one):
        raise InputError("1-cell ids are not distinct")
    two, tsrc, ttgt = [], [], []
    for aid, s, t in two_cells:
        if str(s) not in opos or str(t) not in opos:
            raise InputError(f"2-cell {aid!r} has unknown boundary", witness=aid)
        two.append(str(aid))
        tsrc.append(opos[str(s)])
        ttgt.append(opos[str(t)])
    tpos = {a: i for i, a in enumerate(two)}
    if len(tpos) != len(two):
        raise InputError("2-cell ids are not distinct")

    def table(rows, pos, what):
        out = {}
        for b, a, c in rows:
            try:
                out[(pos[str(b)], pos[str(a)])] = pos[str(c)]
            except KeyError as e:
                raise InputError(f"unknown {what} {e.args[0]!r}", witness=e.args[0]) from None
        return out

    return make_two_groupoid(zero, one, osrc, otgt, two, tsrc, ttgt,
                             table(compose, opos, "1-cell"), table(vcompose, tpos, "2-cell"),
                             table(hcompose, tpos, "2-cell"), name=name)


def make_two_map(source, target, zero, one, two, check=True):
    zero, one, two = tuple(zero), tuple(one), tuple(two)
    if check:
        _check_two_functor(source, target, zero, one, two)
    return TwoGroupoidMap(source, target, zero, one, two)


def _check_two_functor(a, b, zero, one, two):
    if len(zero) != len(a.zero) or len(one) != len(a.one) or len(two) != len(a.two):
        raise InputError("2-functor does not cover every cell")
    for f in range(len(a.one)):
        if b.one_src[one[f]] != zero[a.one_src[f]] or b.one_tgt[one[f]] != zero[a.one_tgt[f]]:
            raise NotAFunctor(f"1-cell {a.one[f]!r} sent to wrong hom", witness=a.one[f])
    for x in range(len(a.zero)):
        if one[a.id1[x]] != b.id1[zero[x]]:
            raise NotAFunctor(f"identity 1-cell at {a.zero[x]!r} not preserved", witness=a.zero[x])
    for (g, f), h in a.hcomp1.items():
        if b.hcomp1[(one[g], one[f])] != one[h]:
            raise NotAFunctor(f"1-cell composite {a.one[g]} o {a.one[f]} not preserved",
                              witness=[a.one[g], a.one[f]])
    for c in range(len(a.two)):
        if b.two_src[two[c]] != one[a.two_src[c]] or b.two_tgt[two[c]] != one[a.two_tgt[c]]:
            raise NotAFunctor(f"2-cell {a.two[c]!r} sent to wrong boundary", witness=a.two[c])
    for f in range(len(a.one)):
        if two[a.id2[f]] != b.id2[one[f]]:
            raise NotAFunctor(f"identity 2-cell on {a.one[f]!r} not preserved", witness=a.one[f])
    for (q, p), r in a.vcomp.items():
        if b.vcomp[(two[q], two[p])] != two[r]:
            raise NotAFunctor(f"vertical composite {a.two[q]} . {a.two[p]} not preserved",
                              witness=[a.two[q], a.two[p]])
    for (q, p), r in a.hcomp2.items():
        if b.hcomp2[(two[q], two[p])] != two[r]:
            raise NotAFunctor(f"horizontal composite {a.two[q]} * {a.two[p]} not preserved",
                              witness=[a.two[q], a.two[p]])


def identity_two_map(g):
    return TwoGroupoidMap(g, g, tuple(range(len(g.zero))), tuple(range(len(g.one))),
                          tuple(range(len(g.two))))


def compose_two_maps(g, f):
    return TwoGroupoidMap(f.source, g.target, tuple(g.zero[x] for x in f.zero),
                          tuple(g.one[x] for x in f.one), tuple(g.two[x] for x in f.two))


def group_as_two_groupoid(group, name=""):
    """One 0-cell, 1-cells the group, identity 2-cells only."""
    n = len(group)
    h1 = {(g, f): group.table[g][f] for g in range(n) for f in range(n)}
    return make_two_groupoid(("*",), group.elements, (0,) * n, (0,) * n,
                             tuple(f"1_{e}" for e in group.elements), range(n), range(n),
                             h1, {(f, f): f for f in range(n)}, h1, (group.identity,),
                             tuple(range(n)), name or group.name, check=False)


# -- invariants ------------------------------------------------------------

def _quotient_group(elements, mul, classes, name):
    """Group on the classes of a congruence; ``classes[x]`` labels elements."""
    reps = {}
    for x in elements:
        reps.setdefault(classes[x], x)
    order = sorted(reps)
    pos = {c: i for i, c in enumerate(order)}
    table = tuple(tuple(pos[classes[mul(reps[a], reps[b])]] for b in order) for a in order)
    ident = next(i for i, row in enumerate(table) if all(row[j] == j for j in range(len(row))))
    return FiniteGroup(tuple(str(c) for c in order), table, ident, name)


def pi1_at(tg, x):
    """1-cell automorphisms of x modulo 2-cell connectivity."""
    loops = [f for f in range(len(tg.one)) if tg.one_src[f] == x and tg.one_tgt[f] == x]
    comp_of = tg.cell_groupoid.component_of
    labels = {f: comp_of[f] for f in loops}
    g = _quotient_group(loops, lambda f, h: tg.hcomp1[(f, h)], labels, f"pi1({tg.zero[x]})")
    # relabel classes by a representative 1-cell
    reps = {}
    for f in loops:
        reps.setdefault(comp_of[f], tg.one[f])
    order = sorted(reps)
    return FiniteGroup(tuple(reps[c] for c in order), g.table, g.identity, g.name)


def pi2_at(tg, x):
    """2-cell automorphisms of the identity 1-cell at x, under vertical composition."""
    u = tg.id1[x]
    cells = [a for a in range(len(tg.two)) if tg.two_src[a] == u and tg.two_tgt[a] == u]
    pos = {a: i for i, a in enumerate(cells)}
    table = tuple(tuple(pos[tg.vcomp[(a, b)]] for b in cells) for a in cells)
    return FiniteGroup(tuple(tg.two[a] for a in cells), table, pos[tg.id2[u]],
                       f"pi2({tg.zero[x]})")


def two_homotopy_invariants(tg):
    g1 = tg.one_groupoid
    reps = tuple(c[0] for c in g1.components)
    pi2 = tuple(pi2_at(tg, x) for x in reps)
    for g in pi2:
        if not g.is_abelian:
            raise AssertionError("pi2 is not abelian")
    return HomotopyInvariants(reps, tuple(pi1_at(tg, x) for x in reps), pi2)


def two_weak_equivalence(f):
    """pi0 bijection plus an equivalence on every hom-groupoid."""
    a, b = f.source, f.target
    base = is_weak_equivalence(GroupoidMap(a.one_groupoid, b.one_groupoid, f.zero, f.one))
    if not base.weq and base.failure.startswith("pi0"):
        return base
    witnesses = []
    for x in range(len(a.zero)):
        for y in range(len(a.zero)):
            ga, cells_a, twos_a = a.hom_groupoid(x, y)
            if not cells_a:
                continue
            gb, cells_b, twos_b = b.hom_groupoid(f.zero[x], f.zero[y])
            cpos = {c: i for i, c in enumerate(cells_b)}
            tpos = {c: i for i, c in enumerate(twos_b)}
            m = GroupoidMap(ga, gb, tuple(cpos[f.one[c]] for c in cells_a),
                            tuple(tpos[f.two[c]] for c in twos_a))
            cert = is_weak_equivalence(m)
            if not cert.weq:
                return WeqCertificate(False, base.pi0_map, tuple(witnesses), "hom-groupoid",
                                      {"pair": [a.zero[x], a.zero[y]], "inner": cert.failure,
                                       "detail": cert.witness})
            witnesses.append((x, y, cert.pi0_map))
    return WeqCertificate(True, base.pi0_map, tuple(witnesses))
