"""Group extensions through pointed 2-groupoid cocycles ``H <- p~ -> Aut(K)``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (BoundTooSmall, IllFormedTwoFunctor, InputError, InterchangeFailure,
                     NotAFunctor, NotExact, NotSurjective, RangeExceeded)
from .groups import (FiniteGroup, automorphisms, build_group, find_isomorphism,
                     homomorphisms, is_homomorphism, small_groups)
from .twogroupoid import (group_as_two_groupoid, make_two_groupoid, make_two_map,
                          two_weak_equivalence)
from .unionfind import UnionFind


# -- extensions --------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionSeq:
    """``e -> K -i-> E -p-> H -> e``; maps are element tuples."""
    k: FiniteGroup
    e: FiniteGroup
    h: FiniteGroup
    i: tuple
    p: tuple

    def __post_init__(self):
        k, e, h = self.k, self.e, self.h
        if not is_homomorphism(k, e, self.i) or len(set(self.i)) != len(k):
            raise NotExact("i is not an injective homomorphism", witness=list(self.i))
        if not is_homomorphism(e, h, self.p) or set(self.p) != set(range(len(h))):
            raise NotExact("p is not a surjective homomorphism", witness=list(self.p))
        kernel = {x for x in range(len(e)) if self.p[x] == h.identity}
        if kernel != set(self.i):
            raise NotExact("image of i differs from the kernel of p",
                           witness={"image": sorted(self.i), "kernel": sorted(kernel)})

    @property
    def i_inverse(self):
        inv = {x: a for a, x in enumerate(self.i)}
        return inv


def extension_from_quotient(e, normal, h=None):
    """The extension ``normal -> e -> e/normal`` (or onto ``h`` via an isomorphism)."""
    k, members = e.subgroup(normal)
    q, proj = e.quotient(normal)
    if h is None:
        return ExtensionSeq(k, e, q, members, proj)
    iso = find_isomorphism(q, h)
    if iso is None:
        raise InputError("quotient is not isomorphic to the requested H")
    return ExtensionSeq(k, e, h, members, tuple(iso[x] for x in proj))


def relabel_kernel(x, k):
    """Re-express ``x`` with kernel identified to ``k`` through some isomorphism."""
    iso = find_isomorphism(k, x.k)
    if iso is None:
        raise InputError("kernel is not isomorphic to K")
    return ExtensionSeq(k, x.e, x.h, tuple(x.i[iso[a]] for a in range(len(k))), x.p)


def extension_morphism(x, y):
    """A homomorphism ``E -> E'`` fixing K and H pointwise, or None."""
    if x.k != y.k or x.h != y.h or len(x.e) != len(y.e):
        return None
    e, e2 = x.e, y.e
    gens = e.generators
    fibre = {}
    for z in range(len(e2)):
        fibre.setdefault(y.p[z], []).append(z)
    for images in itertools.product(*(fibre[x.p[g]] for g in gens)):
        theta = e.extend(images, e2)
        if theta is None:
            continue
        if all(theta[x.i[a]] == y.i[a] for a in range(len(x.k))) and \
                all(y.p[theta[z]] == x.p[z] for z in range(len(e))):
            return theta
    return None


def are_equivalent(x, y):
    return extension_morphism(x, y) is not None


# -- the two 2-groupoids -----------------------------------------------------

@dataclass(frozen=True)
class AutData:
    group: FiniteGroup
    autos: tuple
    index: dict
    two_groupoid: object

    def cell(self, alpha, k):
        """2-cell ``alpha => c_k alpha``."""
        return self.index[alpha] * len(self.group) + k


AUT_CHECK_LIMIT = 512


@lru_cache(maxsize=32)
def aut_two_groupoid(k):
    """One 0-cell, 1-cells Aut(K), 2-cells ``k: a => c_k a``.

    The 2-groupoid laws are checked exhaustively up to ``AUT_CHECK_LIMIT``
    2-cells.  Above that the crossed-module axioms of ``c: K -> Aut(K)``, from
    which the laws follow, are checked instead.
    """
    autos = tuple(automorphisms(k))
    index = {a: i for i, a in enumerate(autos)}
    n, m = len(k), len(autos)
    conj = [k.conj(x) for x in range(n)]

    def comp(b, a):
        return tuple(b[x] for x in a)

    h1 = {(j, i): index[comp(autos[j], autos[i])] for j in range(m) for i in range(m)}
    two_src, two_tgt, names = [], [], []
    for i, a in enumerate(autos):
        for x in range(n):
            two_src.append(i)
            two_tgt.append(index[comp(conj[x], a)])
            names.append(f"{k.elements[x]}@{i}")
    vcomp, hcomp2 = {}, {}
    for i in range(m):
        for x in range(n):
            b = two_tgt[i * n + x]
            for y in range(n):
                vcomp[(b * n + y, i * n + x)] = i * n + k.table[y][x]
    for j, bt in enumerate(autos):
        for y in range(n):
            for i in range(m):
                for x in range(n):
                    # (y: b => c_y b) * (x: a => c_x a) = y b(x): ba => c_{y b(x)} ba
                    hcomp2[(j * n + y, i * n + x)] = h1[(j, i)] * n + k.table[y][bt[x]]
    tg = make_two_groupoid(("*",), [f"aut{i}" for i in range(m)], [0] * m, [0] * m, names,
                           two_src, two_tgt, h1, vcomp, hcomp2,
                           id1=(index[tuple(range(n))],),
                           id2=tuple(i * n + k.identity for i in range(m)),
                           name=f"Aut({k.name})", check=n * m <= AUT_CHECK_LIMIT)
    if n * m > AUT_CHECK_LIMIT:
        _check_crossed_module(k, autos, index, conj)
    return AutData(k, autos, index, tg)


def _check_crossed_module(k, autos, index, conj):
    n = len(k)
    for x in range(n):
        for y in range(n):
            if tuple(conj[x][conj[y][z]] for z in range(n)) != conj[k.table[x][y]]:
                raise InterchangeFailure("conjugation is not a homomorphism K -> Aut(K)",
                                         witness=[k.elements[x], k.elements[y]])
    for a in autos:
        ainv = [0] * n
        for z in range(n):
            ainv[a[z]] = z
        for x in range(n):
            # a c_x a^-1 = c_{a(x)}
            if tuple(a[conj[x][ainv[z]]] for z in range(n)) != conj[a[x]]:
                raise InterchangeFailure("conjugation is not Aut(K)-equivariant",
                                         witness=[index[a], k.elements[x]])


@dataclass(frozen=True)
class Surjection:
    l: FiniteGroup
    h: FiniteGroup
    p: tuple
    two_groupoid: object
    pairs: tuple
    pair_index: dict
    pi: object


def surjection_two_groupoid(l, h, p):
    """``p~``: 1-cells L, a unique 2-cell ``x => x'`` when ``p(x) = p(x')``."""
    p = tuple(p)
    if not is_homomorphism(l, h, p):
        raise InputError("p is not a homomorphism")
    if set(p) != set(range(len(h))):
        missing = sorted(set(range(len(h))) - set(p))
        raise NotSurjective("p is not surjective", witness=[h.elements[x] for x in missing])
    n = len(l)
    pairs = tuple((x, y) for x in range(n) for y in range(n) if p[x] == p[y])
    idx = {q: i for i, q in enumerate(pairs)}
    h1 = {(y, x): l.table[y][x] for y in range(n) for x in range(n)}
    vcomp = {(idx[(b, c)], idx[(a, b)]): idx[(a, c)]
             for (a, b) in pairs for (b2, c) in pairs if b2 == b}
    hcomp2 = {(idx[(y, y2)], idx[(x, x2)]): idx[(l.table[y][x], l.table[y2][x2])]
              for (y, y2) in pairs for (x, x2) in pairs}
    tg = make_two_groupoid(("*",), l.elements, [0] * n, [0] * n,
                           [f"{l.elements[a]}>{l.elements[b]}" for a, b in pairs],
                           [a for a, _ in pairs], [b for _, b in pairs], h1, vcomp, hcomp2,
                           id1=(l.identity,), id2=tuple(idx[(x, x)] for x in range(n)),
                           name=f"{l.name}~")
    bh = group_as_two_groupoid(h)
    pi = make_two_map(tg, bh, (0,), p, tuple(p[a] for a, _ in pairs))
    return Surjection(l, h, p, tg, pairs, idx, pi)


def pi_is_weak_equivalence(s):
    return two_weak_equivalence(s.pi)


# -- pointed cocycles ------------------------------------------------------

@dataclass(frozen=True)
class PointedCocycle:
    """``H <- p~ -> Aut(K)`` given by F1: L -> Aut(K) and 2-cell values in K."""
    surjection: Surjection
    aut: AutData
    f1: tuple
    f2: tuple

    @property
    def right(self):
        a = self.aut
        return make_two_map(self.surjection.two_groupoid, a.two_groupoid, (0,),
                            tuple(a.index[x] for x in self.f1),
                            tuple(a.cell(self.f1[x], k)
                                  for (x, _), k in zip(self.surjection.pairs, self.f2)),
                            check=False)

    @property
    def left(self):
        return self.surjection.pi


def check_pointed_cocycle(c):
    """Verify every 2-functor law on the right leg and weak equivalence of the left."""
    try:
        make_two_map(c.right.source, c.right.target, c.right.zero, c.right.one, c.right.two)
    except NotAFunctor as err:
        raise IllFormedTwoFunctor(str(err), witness=err.witness) from None
    if not two_weak_equivalence(c.left):
        raise IllFormedTwoFunctor("left leg is not a weak equivalence")
    return True


def _kernel(s):
    return tuple(x for x in range(len(s.l)) if s.p[x] == s.h.identity)


def pointed_cocycles_on(s, aut):
    """Every pointed 2-functor ``p~ -> Aut(K)``.

    Such a functor is an F1: L -> Aut(K) together with tau: ker p -> K, and
    ``F(x, x') = F1(x)(tau(x^-1 x'))``.  Candidates are screened by the
    reduced conditions (tau a homomorphism, F1 on the kernel is conjugation by
    tau, tau equivariant); survivors are checked against the full laws.
    """
    k, l = aut.group, s.l
    ker = _kernel(s)
    kg, kmem = l.subgroup(ker)
    conj = [k.conj(x) for x in range(len(k))]
    out = []
    f1s = [f for f in homomorphisms(l, aut_group(aut)) ]
    for f1i in f1s:
        f1 = tuple(aut.autos[a] for a in f1i)
        for tau_k in homomorphisms(kg, k):
            tau = {kmem[j]: tau_k[j] for j in range(len(kmem))}
            if any(f1[n] != conj[tau[n]] for n in ker):
                continue
            if any(tau[l.table[l.table[x][n]][l.inv(x)]] != f1[x][tau[n]]
                   for x in range(len(l)) for n in ker):
                continue
            f2 = tuple(f1[a][tau[l.table[l.inv(a)][b]]] for a, b in s.pairs)
            c = PointedCocycle(s, aut, f1, f2)
            check_pointed_cocycle(c)
            out.append(c)
    return out


def aut_group(aut):
    """Aut(K) as a group under composition, indexed like ``aut.autos``."""
    autos = aut.autos
    table = tuple(tuple(aut.index[tuple(b[x] for x in a)] for a in autos) for b in autos)
    ident = aut.index[tuple(range(len(aut.group)))]
    return FiniteGroup(tuple(f"aut{i}" for i in range(len(autos))), table, ident,
                       f"Aut({aut.group.name})")


def extension_to_cocycle(x):
    """``H <- E~ -> Aut(K)``: F1 = conjugation, a 2-cell ``g => h`` goes to ``h g^-1``."""
    s = surjection_two_groupoid(x.e, x.h, x.p)
    aut = aut_two_groupoid(x.k)
    inv = x.i_inverse
    e = x.e
    f1 = tuple(tuple(inv[e.table[e.table[g][x.i[a]]][e.inv(g)]] for a in range(len(x.k)))
               for g in range(len(e)))
    f2 = tuple(inv[e.table[b][e.inv(a)]] for a, b in s.pairs)
    c = PointedCocycle(s, aut, f1, f2)
    check_pointed_cocycle(c)
    return c


def build_extension_group(c):
    """``E_F(p)``: classes of pairs (k, x) with (k, x) ~ (k F(x,x')^-1, x')."""
    s, k = c.surjection, c.aut.group
    l, h = s.l, s.h
    nk, nh = len(k), len(h)
    section = [min(x for x in range(len(l)) if s.p[x] == y) for y in range(nh)]
    f2 = dict(zip(s.pairs, c.f2))

    def rep(a, x):
        y = s.p[x]
        return k.table[a][k.inv(f2[(x, section[y])])] * nh + y

    # well-definedness: the product must not depend on representatives
    prod = {}
    for a, x, b, y in itertools.product(range(nk), range(len(l)), range(nk), range(len(l))):
        key = (rep(a, x), rep(b, y))
        val = rep(k.table[a][c.f1[x][b]], l.table[x][y])
        if prod.setdefault(key, val) != val:
            raise IllFormedTwoFunctor("product on classes depends on representatives",
                                      witness=[[k.elements[a], l.elements[x]],
                                               [k.elements[b], l.elements[y]]])
    n = nk * nh
    table = [[prod[(u, v)] for v in range(n)] for u in range(n)]
    labels = [f"[{k.elements[a]},{l.elements[section[y]]}]" for a in range(nk)
              for y in range(nh)]
    e = build_group(labels, table, f"E({l.name})")
    i = tuple(a * nh + h.identity for a in range(nk))
    p = tuple(u % nh for u in range(n))
    return ExtensionSeq(k, e, h, i, p)


# -- classification --------------------------------------------------------

@dataclass
class Classification:
    classes: list
    middles: list
    n_cocycles: int
    n_components: int


def _surjections(l, h):
    return [p for p in homomorphisms(l, h) if len(set(p)) == len(h)]


def classify_extensions(h, k, bound=None):
    """Components of the pointed cocycle category with surjection middles.

    Middles are ``p~`` for surjections L -> H with L from the catalogue of small
    groups, ``|H|`` dividing ``|L| <= bound``.  A morphism is a homomorphism
    a: L -> L' with ``p' a = p``; it acts on cocycles by precomposition.
    """
    if bound is None:
        bound = len(h) * len(k)
    if bound < len(h):
        raise BoundTooSmall(f"bound {bound} < |H| = {len(h)}", witness={"bound": bound})
    if bound > 12 and bound != len(h) * len(k):
        raise RangeExceeded(f"no group catalogue beyond order 12 (bound {bound})")
    aut = aut_two_groupoid(k)
    objects, surj = [], []
    for order in range(len(h), bound + 1, len(h)):
        for l in small_groups(order):
            for p in _surjections(l, h):
                s = surjection_two_groupoid(l, h, p)
                surj.append(s)
                for c in pointed_cocycles_on(s, aut):
                    objects.append(c)
    index = {(c.surjection.l, c.surjection.p, c.f1, c.f2): i for i, c in enumerate(objects)}
    uf = UnionFind(len(objects))
    by_surj = {}
    for i, c in enumerate(objects):
        by_surj.setdefault((c.surjection.l, c.surjection.p), []).append(i)
    for s in surj:
        for t in surj:
            targets = by_surj.get((t.l, t.p), [])
            if not targets:
                continue
            for a in homomorphisms(s.l, t.l):
                if any(t.p[a[x]] != s.p[x] for x in range(len(s.l))):
                    continue
                for j in targets:
                    c = objects[j]
                    f1 = tuple(c.f1[a[x]] for x in range(len(s.l)))
                    t2 = dict(zip(t.pairs, c.f2))
                    f2 = tuple(t2[(a[x], a[y])] for x, y in s.pairs)
                    uf.union(index[(s.l, s.p, f1, f2)], j)
    labels = uf.labels()
    reps = {}
    for i, lab in enumerate(labels):
        reps.setdefault(lab, i)
    classes = [build_extension_group(objects[reps[lab]]) for lab in sorted(reps)]
    middles = [objects[reps[lab]].surjection.l.name for lab in sorted(reps)]
    return Classification(classes, middles, len(objects), len(reps))


def component_of_extension(x, result):
    """Index of the class in ``result`` equivalent to ``x`` (None if absent)."""
    for n, y in enumerate(result.classes):
        if are_equivalent(x, y):
            return n
    return None


# -- Schreier oracle ---------------------------------------------------------

ORACLE_LIMIT = 16


def schreier_oracle(h, k):
    """Extension classes by enumerating multiplication tables on K x H.

    Element (a, x) is stored at ``a * |H| + x``.  The tables enumerated are
    ``(a, x)(b, y) = (a m_x(b) n(x, y), xy)`` with normalized ``m``, ``n``;
    every extension is equivalent to one of these via a set-theoretic section.
    Associativity, identity and inverses are then checked on the full table
    and classes are orbits under ``(a, x) -> (a c(x), x)``.
    """
    nk, nh = len(k), len(h)
    if nk * nh > ORACLE_LIMIT:
        raise RangeExceeded(f"|H||K| = {nk * nh} exceeds {ORACLE_LIMIT}")
    kt, ht = np.array(k.table), np.array(h.table)
    ke, he = k.identity, h.identity
    others = [x for x in range(nh) if x != he]
    slots = [(x, y) for x in others for y in others]
    autos = [np.array(a) for a in automorphisms(k)]
    ident_auto = np.arange(nk)
    tables = []
    for ms in itertools.product(range(len(autos)), repeat=len(others)):
        m = {he: ident_auto}
        for x, j in zip(others, ms):
            m[x] = autos[j]
        n = {}
        for x in range(nh):
            n[(he, x)] = ke
            n[(x, he)] = ke
        _fill(0, slots, n, m, kt, ht, nk, nh, ke, tables)
    # group axioms on each full table
    valid = []
    for t in tables:
        if _is_group(t):
            valid.append(t)
    canon = {}
    shifts = [np.array(c) for c in itertools.product(range(nk), repeat=len(others))]
    for t in valid:
        key = min(_transport(t, c, others, kt, nk, nh).tobytes() for c in shifts)
        canon.setdefault(key, t)
    reps = []
    for key in sorted(canon):
        t = canon[key]
        labels = [f"({k.elements[a]},{h.elements[x]})" for a in range(nk) for x in range(nh)]
        e = build_group(labels, t.tolist(), "E")
        reps.append(ExtensionSeq(k, e, h, tuple(a * nh + he for a in range(nk)),
                                 tuple(u % nh for u in range(nk * nh))))
    return reps


def _table(m, n, kt, ht, nk, nh):
    a = np.arange(nk).repeat(nh)
    x = np.tile(np.arange(nh), nk)
    out = np.empty((nk * nh, nk * nh), dtype=np.int64)
    for v in range(nk * nh):
        b, y = divmod(v, nh)
        mb = np.array([m[xx][b] for xx in x])
        nv = np.array([n[(xx, y)] for xx in x])
        out[:, v] = kt[kt[a, mb], nv] * nh + ht[x, y]
    return out


def _fill(pos, slots, n, m, kt, ht, nk, nh, ke, out):
    if pos == len(slots):
        out.append(_table(m, n, kt, ht, nk, nh))
        return
    x, y = slots[pos]
    for v in range(nk):
        n[(x, y)] = v
        if _assoc_ok(x, y, n, m, kt, ht, ke):
            _fill(pos + 1, slots, n, m, kt, ht, nk, nh, ke, out)
    del n[(x, y)]


def _assoc_ok(x, y, n, m, kt, ht, ke):
    """Associativity of (e,u)(e,v)(e,w) for triples touching the new slot (x, y)."""
    nh = ht.shape[0]

    def mul(p, q):
        (a, u), (b, v) = p, q
        if (u, v) not in n:
            return None
        return (kt[kt[a, m[u][b]], n[(u, v)]], ht[u, v])

    for u, v, w in itertools.product(range(nh), repeat=3):
        if (x, y) not in ((u, v), (v, w), (ht[u, v], w), (u, ht[v, w])):
            continue
        l1, r1 = mul((ke, u), (ke, v)), mul((ke, v), (ke, w))
        if l1 is None or r1 is None:
            continue
        l2, r2 = mul(l1, (ke, w)), mul((ke, u), r1)
        if l2 is not None and r2 is not None and l2[0] != r2[0]:
            return False
    return True


def _is_group(t):
    n = t.shape[0]
    if sorted(map(tuple, np.sort(t, axis=1))) != [tuple(range(n))] * n:
        return False
    # a(bc) == (ab)c for all triples at once
    left = t[t[:, :, None], np.arange(n)[None, None, :]]
    right = t[np.arange(n)[:, None, None], t[None, :, :]]
    return bool((left == right).all())


def _transport(t, c, others, kt, nk, nh):
    """Table transported along ``(a, x) -> (a c(x), x)``."""
    shift = np.zeros(nh, dtype=np.int64)
    for x, v in zip(others, c):
        shift[x] = v
    n = nk * nh
    u = np.arange(n)
    theta = kt[u // nh, shift[u % nh]] * nh + u % nh
    inv = np.empty(n, dtype=np.int64)
    inv[theta] = u
    return theta[t[inv[:, None], inv[None, :]]]


# -- comparison --------------------------------------------------------------

@dataclass
class ExtensionReport:
    classes: int
    oracle: int
    matched: bool
    middles: list


def compare_with_oracle(h, k, bound=None):
    result = classify_extensions(h, k, bound)
    oracle = schreier_oracle(h, k)
    used = set()
    matched = len(result.classes) == len(oracle)
    for x in result.classes:
        hit = next((j for j, y in enumerate(oracle) if j not in used and are_equivalent(x, y)),
                   None)
        if hit is None:
            matched = False
        else:
            used.add(hit)
    return ExtensionReport(len(result.classes), len(oracle), matched, result.middles)


def all_extensions_up_to(order, k=None):
    """Extensions ``N -> E -> E/N`` for catalogue groups E with ``|E| <= order``."""
    out = []
    for n in range(1, order + 1):
        for e in small_groups(n):
            for normal in e.normal_subgroups():
                x = extension_from_quotient(e, normal)
                if k is None or len(x.k) == len(k):
                    out.append(x)
    return out


def roundtrip(x):
    """``E_F(p)`` for the cocycle of ``x``, and whether it is equivalent to ``x``."""
    y = build_extension_group(extension_to_cocycle(x))
    return y, are_equivalent(x, y)


# -- gerbes -------------------------------------------------------------------

def indiscrete_two_cells(g, name=""):
    """2-groupoid with the cells of ``g`` and a unique 2-cell between parallel arrows."""
    pairs = [(a, b) for a in range(g.n_morphisms) for b in range(g.n_morphisms)
             if g.src[a] == g.src[b] and g.tgt[a] == g.tgt[b]]
    pos = {p: i for i, p in enumerate(pairs)}
    vcomp = {(pos[(b, c)], pos[(a, b)]): pos[(a, c)] for a, b in pairs
             for b2, c in pairs if b2 == b}
    hcomp2 = {}
    for (g1, g2) in pairs:
        for (f1, f2) in pairs:
            if g.src[g1] == g.tgt[f1]:
                hcomp2[(pos[(g1, g2)], pos[(f1, f2)])] = pos[(g.comp[(g1, f1)], g.comp[(g2, f2)])]
    return make_two_groupoid(g.objects, g.morphisms, g.src, g.tgt,
                             [f"{g.morphisms[a]}=>{g.morphisms[b]}" for a, b in pairs],
                             [a for a, _ in pairs], [b for _, b in pairs], g.comp, vcomp, hcomp2,
                             id1=g.identities, id2=tuple(pos[(a, a)] for a in range(g.n_morphisms)),
                             name=name or f"{g.name}~"), pairs


def _loop_group(g, x):
    loops = g.homset(x, x)
    pos = {m: i for i, m in enumerate(loops)}
    table = tuple(tuple(pos[g.comp[(a, b)]] for b in loops) for a in loops)
    return FiniteGroup(tuple(g.morphisms[m] for m in loops), table, pos[g.identities[x]],
                       f"Aut({g.objects[x]})"), loops


@dataclass(frozen=True, eq=False)
class GerbeCocycle:
    """``G~`` with the automorphism data ``F(G)``.

    Per site object: ``tilde[o]`` is the 2-groupoid, ``pairs[o]`` its 2-cells as
    (source, target) arrows, ``aut[o][x]`` the group ``G(U)(x, x)`` with its
    arrows ``loops[o][x]``, ``conj[o][f]`` the isomorphism Aut(x) -> Aut(y)
    induced by ``f: x -> y`` and ``two[o][c]`` the element ``b a^-1`` of Aut(y)
    for a 2-cell ``a => b``.
    """
    presheaf: object
    tilde: tuple
    restrict: tuple
    pairs: tuple
    aut: tuple
    loops: tuple
    conj: tuple
    two: tuple

    def to_aut(self, o, x):
        """The pointed 2-functor ``B(G(U)(x,x))~ -> Aut(G(U)(x,x))`` at a 0-cell."""
        from .groupoid import delooping
        grp = self.aut[o][x]
        ad = aut_two_groupoid(grp)
        tg, pairs = indiscrete_two_cells(delooping(grp))
        one = tuple(ad.index[grp.conj(i)] for i in range(len(grp)))
        two = tuple(ad.cell(grp.conj(a), grp.table[b][grp.inv(a)]) for a, b in pairs)
        return make_two_map(tg, ad.two_groupoid, (0,), one, two)


def gerbe_cocycle(p, check=True):
    """The cocycle of a locally connected presheaf of groupoids."""
    from .errors import NotLocallyConnected
    from .site import pi0_presheaf, sheafify
    site = p.site
    pi0 = sheafify(pi0_presheaf(p)).sheaf
    if any(pi0.size(o) != 1 for o in range(len(site.objects))):
        bad = [site.objects[o] for o in range(len(site.objects)) if pi0.size(o) != 1]
        raise NotLocallyConnected("sheafified path components are not terminal", witness=bad)
    tildes, pairs_all, auts, loops_all, conjs, twos = [], [], [], [], [], []
    for o, g in enumerate(p.values):
        tg, pairs = indiscrete_two_cells(g, f"{g.name}~")
        tildes.append(tg)
        pairs_all.append(tuple(pairs))
        au, lp = zip(*[_loop_group(g, x) for x in range(g.n_objects)]) if g.n_objects else ((), ())
        auts.append(tuple(au))
        loops_all.append(tuple(lp))
        cj = []
        for f in range(g.n_morphisms):
            x, y = g.src[f], g.tgt[f]
            finv = g.inverses[f]
            pos_y = {m: i for i, m in enumerate(lp[y])}
            cj.append(tuple(pos_y[g.comp[(g.comp[(f, a)], finv)]] for a in lp[x]))
        conjs.append(tuple(cj))
        tw = []
        for a, b in pairs:
            y = g.tgt[a]
            pos_y = {m: i for i, m in enumerate(lp[y])}
            tw.append(pos_y[g.comp[(b, g.inverses[a])]])
        twos.append(tuple(tw))
    restrict = []
    for h, r in enumerate(p.restrict):
        s, t = site.src[h], site.tgt[h]
        ppos = {q: i for i, q in enumerate(pairs_all[s])}
        two = tuple(ppos[(r.mor[a], r.mor[b])] for a, b in pairs_all[t])
        restrict.append(make_two_map(tildes[t], tildes[s], r.obj, r.mor, two, check=check))
    out = GerbeCocycle(p, tuple(tildes), tuple(restrict), tuple(pairs_all), tuple(auts),
                       tuple(loops_all), tuple(conjs), tuple(twos))
    if check:
        check_gerbe_cocycle(out)
    return out


def check_gerbe_cocycle(c):
    """Functoriality of F(G) and contractibility of the hom-groupoids of G~."""
    p = c.presheaf
    site = p.site
    for o, g in enumerate(p.values):
        for (b, a), h in g.comp.items():
            x = g.src[a]
            if tuple(c.conj[o][b][c.conj[o][a][i]] for i in range(len(c.aut[o][x]))) \
                    != c.conj[o][h]:
                raise NotAFunctor("conjugation is not functorial", witness=[g.morphisms[b],
                                                                           g.morphisms[a]])
        for i, (a, b) in enumerate(c.pairs[o]):
            # c_b = c_{b a^-1} c_a on Aut(x)
            y = g.tgt[a]
            k = c.two[o][i]
            grp = c.aut[o][y]
            ck = grp.conj(k)
            if tuple(ck[c.conj[o][a][j]] for j in range(len(c.aut[o][g.src[a]]))) != c.conj[o][b]:
                raise NotAFunctor("2-cell is not sent to a conjugacy", witness=c.tilde[o].two[i])
        tg = c.tilde[o]
        for x in range(len(tg.zero)):
            from .twogroupoid import pi2_at
            if len(pi2_at(tg, x)) != 1:
                raise AssertionError("hom-groupoids of G~ are not contractible")
    for h, r in enumerate(p.restrict):
        s, t = site.src[h], site.tgt[h]
        gt = p.values[t]
        for f in range(gt.n_morphisms):
            x = gt.src[f]
            lx_t, lx_s = c.loops[t][x], c.loops[s][r.obj[x]]
            ly_t, ly_s = c.loops[t][gt.tgt[f]], c.loops[s][r.obj[gt.tgt[f]]]
            px, py = {m: i for i, m in enumerate(lx_s)}, {m: i for i, m in enumerate(ly_s)}
            for i, a in enumerate(lx_t):
                lhs = py[r.mor[ly_t[c.conj[t][f][i]]]]
                rhs = c.conj[s][r.mor[f]][px[r.mor[a]]]
                if lhs != rhs:
                    raise NotAFunctor("F(G) is not natural along restriction",
                                      witness=site.arrows[h])
    return True
