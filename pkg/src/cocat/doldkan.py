"""Chain complexes, simplicial abelian groups, N, Gamma and Eilenberg-Mac Lane objects.

Conventions: ``N_n`` is the intersection of the kernels of the faces
``d_1 .. d_n`` with differential induced by ``d_0``.  ``Gamma(C)_n`` is the
direct sum of copies of ``C_k`` indexed by surjections ``[n] -> [k]``; a
monotone ``t`` acts on the summand of ``s`` by factoring ``s t = e u`` with
``u`` surjective and ``e`` injective, then sending it to the summand of ``u``
by the identity when ``e`` is the identity, by the differential when ``e``
skips 0, and to zero otherwise.  Under these conventions ``N Gamma = id``
holds on the nose.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from functools import lru_cache

from . import intlinalg as il
from .abelian import (AbelianGroup, Hom, compose, homology_group, identity_hom,
                      is_isomorphism, kernel, make_hom, standard_form, zero_group, zero_hom)
from .errors import BoundaryNotNilpotent, InputError, NotFunctorial

DEFAULT_TOP = 4


def top_dimension():
    """Top dimension d, overridable by the COCAT_TOP_DIM environment variable."""
    raw = os.environ.get("COCAT_TOP_DIM")
    if raw is None:
        return DEFAULT_TOP
    try:
        d = int(raw)
    except ValueError:
        raise InputError(f"COCAT_TOP_DIM must be an integer, got {raw!r}") from None
    if d < 0:
        raise InputError("COCAT_TOP_DIM must be nonnegative")
    return d


# -- chain complexes ---------------------------------------------------------------

@dataclass(frozen=True)
class ChainComplex:
    """Groups in degrees ``start .. start+len-1``; ``diffs[i]`` is the boundary
    out of degree ``start+i+1``."""
    groups: tuple
    diffs: tuple
    start: int = 0

    @property
    def top(self):
        return self.start + len(self.groups) - 1

    def group(self, k):
        i = k - self.start
        return self.groups[i] if 0 <= i < len(self.groups) else zero_group()

    def boundary(self, k):
        """``d_k: C_k -> C_{k-1}`` (zero outside the stored range)."""
        i = k - self.start - 1
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return zero_hom(self.group(k), self.group(k - 1))

    def degrees(self):
        return range(self.start, self.top + 1)


def make_chain_complex(groups, diffs, start=0, check=True):
    groups, diffs = tuple(groups), tuple(diffs)
    if len(diffs) != max(len(groups) - 1, 0):
        raise InputError("need one boundary map between consecutive degrees")
    c = ChainComplex(groups, diffs, start)
    if check:
        check_chain_complex(c)
    return c


def check_chain_complex(c):
    for i, d in enumerate(c.diffs):
        k = c.start + i + 1
        if d.source != c.group(k) or d.target != c.group(k - 1):
            raise InputError(f"boundary out of degree {k} has the wrong endpoints", witness=k)
    for k in range(c.start + 2, c.top + 1):
        dd = compose(c.boundary(k - 1), c.boundary(k))
        bad = next(((i, j) for i, r in enumerate(dd.matrix) for j, x in enumerate(r) if x), None)
        if bad is not None:
            raise BoundaryNotNilpotent(f"d{k - 1} d{k} is nonzero at matrix position {bad}",
                                       witness={"degree": k, "position": list(bad)})
    return True


def trimmed(c):
    """Drop zero groups above the last nonzero one."""
    n = len(c.groups)
    while n > 1 and c.groups[n - 1].is_trivial:
        n -= 1
    return ChainComplex(c.groups[:n], c.diffs[:n - 1], c.start)


def complexes_equal(a, b):
    """Degreewise equality of groups and matrices, up to trailing zero groups."""
    a, b = trimmed(a), trimmed(b)
    return (a.start == b.start and a.groups == b.groups
            and all(x.matrix == y.matrix for x, y in zip(a.diffs, b.diffs)))


def homology(c):
    """``{k: H_k}`` in standard form."""
    return {k: standard_form(homology_group(c.boundary(k + 1), c.boundary(k)))
            for k in c.degrees()}


def concentrated(a, n):
    """``A[-n]``: the group A in degree n, zero below."""
    groups = [zero_group()] * n + [a]
    diffs = [zero_hom(groups[i + 1], groups[i]) for i in range(n)]
    return make_chain_complex(groups, diffs)


def shift(c, k):
    """Move degree i to degree i + k."""
    return ChainComplex(c.groups, c.diffs, c.start + k)


def pad(c, top):
    """Extend by zero groups up to degree ``top``."""
    groups, diffs = list(c.groups), list(c.diffs)
    while c.start + len(groups) - 1 < top:
        groups.append(zero_group())
        diffs.append(zero_hom(groups[-1], groups[-2]))
    return ChainComplex(tuple(groups), tuple(diffs), c.start)


def good_truncation(c, n=0):
    """Keep degrees above n, replace degree n by the kernel of its boundary,
    drop degrees below n.  Homology in degrees >= n is preserved."""
    if n > c.top:
        return make_chain_complex([zero_group()], [], start=n)
    if n < c.start:
        c = ChainComplex((zero_group(),) * (c.start - n) + c.groups,
                         tuple(zero_hom(zero_group(), zero_group())
                               for _ in range(c.start - n - 1))
                         + ((zero_hom(c.groups[0], zero_group()),) if c.start > n else ())
                         + c.diffs, n)
    z = kernel(c.boundary(n))
    groups = [z.group] + [c.group(k) for k in range(n + 1, c.top + 1)]
    diffs = []
    if c.top > n:
        d = c.boundary(n + 1)
        cols = [list(z.coords(d.column(j))) for j in range(d.source.ngens)]
        diffs.append(make_hom(d.source, z.group, il.from_columns(cols, z.group.ngens)))
        diffs.extend(c.boundary(k) for k in range(n + 2, c.top + 1))
    out = make_chain_complex(groups, diffs, start=n)
    before, after = homology(c), homology(out)
    for k in range(n, c.top + 1):
        if before[k] != after[k]:
            raise AssertionError(f"good truncation changed homology in degree {k}")
    return out


# -- the simplex category ------------------------------------------------------------

def compose_monotone(t, s):
    """``t o s`` for monotone maps given as value tuples."""
    return tuple(t[x] for x in s)


def factor(t):
    """``t = e o u`` with u surjective onto [j] and e injective, as (e, u)."""
    image = sorted(set(t))
    pos = {v: i for i, v in enumerate(image)}
    return tuple(image), tuple(pos[v] for v in t)


@lru_cache(maxsize=None)
def surjections(n, k):
    """Monotone surjections [n] -> [k], lexicographic."""
    out = []
    for cuts in itertools.combinations(range(1, n + 1), k):
        vals, level, cset = [], 0, set(cuts)
        for x in range(n + 1):
            if x in cset:
                level += 1
            vals.append(level)
        out.append(tuple(vals))
    return tuple(out)


def coface(n, i):
    """``delta^i: [n-1] -> [n]`` skipping i."""
    return tuple(x if x < i else x + 1 for x in range(n))


def codegeneracy(n, i):
    """``sigma^i: [n+1] -> [n]`` hitting i twice."""
    return tuple(x if x <= i else x - 1 for x in range(n + 2))


# -- simplicial abelian groups ------------------------------------------------------

@dataclass(frozen=True)
class SimplicialAbelianGroup:
    """Levels ``0..L``; ``faces[n][i]: S_n -> S_{n-1}`` for n >= 1 and
    ``degens[n][i]: S_n -> S_{n+1}`` for n < L."""
    levels: tuple
    faces: tuple
    degens: tuple

    @property
    def top(self):
        return len(self.levels) - 1

    def operator(self, t, m):
        """``t^*: S_n -> S_m`` for a monotone ``t: [m] -> [n]``."""
        n = max(t) if t else 0
        return _operator(self, tuple(t), m, n)


def _operator(s, t, m, n):
    if t == tuple(range(n + 1)) and m == n:
        return identity_hom(s.levels[n])
    missing = [v for v in range(n + 1) if v not in t]
    if missing:
        v = missing[-1]
        rest = tuple(x if x < v else x - 1 for x in t)
        return compose(_operator(s, rest, m, n - 1), s.faces[n][v])
    i = next(i for i in range(m) if t[i] == t[i + 1])
    rest = tuple(t[x] if x <= i else t[x + 1] for x in range(m))
    return compose(s.degens[m - 1][i], _operator(s, rest, m - 1, n))


def make_simplicial(levels, faces, degens, check=True):
    s = SimplicialAbelianGroup(tuple(levels), tuple(tuple(f) for f in faces),
                               tuple(tuple(d) for d in degens))
    if check:
        check_simplicial(s)
    return s


def check_simplicial(s):
    L = s.top
    if len(s.faces) != L + 1 or len(s.degens) != L:
        raise InputError("face and degeneracy lists do not match the levels")

    def eq(f, g):
        return f.matrix == g.matrix

    def fail(what, n, i, j):
        raise NotFunctorial(f"simplicial identity {what} fails at level {n} for i={i}, j={j}",
                            witness={"identity": what, "level": n, "i": i, "j": j})

    for n in range(2, L + 1):
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                if not eq(compose(s.faces[n - 1][i], s.faces[n][j]),
                          compose(s.faces[n - 1][j - 1], s.faces[n][i])):
                    fail("d_i d_j = d_{j-1} d_i", n, i, j)
    for n in range(L - 1):
        for i in range(n + 1):
            for j in range(i, n + 1):
                if not eq(compose(s.degens[n + 1][i], s.degens[n][j]),
                          compose(s.degens[n + 1][j + 1], s.degens[n][i])):
                    fail("s_i s_j = s_{j+1} s_i", n, i, j)
    for n in range(L):
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = compose(s.faces[n + 1][i], s.degens[n][j])
                if i < j:
                    if n == 0:
                        continue
                    rhs = compose(s.degens[n - 1][j - 1], s.faces[n][i])
                elif i in (j, j + 1):
                    rhs = identity_hom(s.levels[n])
                else:
                    if n == 0:
                        continue
                    rhs = compose(s.degens[n - 1][j], s.faces[n][i - 1])
                if not eq(lhs, rhs):
                    fail("d_i s_j", n, i, j)
    return True


def simplicial_from_operator(levels, op, check=True):
    """Assemble from ``op(t, m, n)`` giving the matrix of ``t^*: S_n -> S_m``."""
    L = len(levels) - 1
    faces = [()] + [tuple(make_hom(levels[n], levels[n - 1], op(coface(n, i), n - 1, n))
                          for i in range(n + 1)) for n in range(1, L + 1)]
    degens = [tuple(make_hom(levels[n], levels[n + 1], op(codegeneracy(n, i), n + 1, n))
                    for i in range(n + 1)) for n in range(L)]
    return make_simplicial(levels, faces, degens, check=check)


# -- Gamma and N ------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaLevel:
    group: AbelianGroup
    blocks: tuple   # ((k, surjection, offset), ...)


def _gamma_level(c, n):
    blocks, orders, off = [], [], 0
    for k in range(min(n, c.top), -1, -1):
        g = c.group(k)
        for s in surjections(n, k):
            blocks.append((k, s, off))
            orders.extend(g.orders)
            off += g.ngens
    return GammaLevel(AbelianGroup(tuple(orders)), tuple(blocks))


def gamma(c, levels=None, check=True):
    """``Gamma(C)`` on levels ``0..levels`` (default ``top(C) + 1``)."""
    if c.start != 0:
        raise InputError("Gamma needs a complex starting in degree 0")
    L = c.top + 1 if levels is None else levels
    lv = [_gamma_level(c, n) for n in range(L + 1)]

    def op(t, m, n):
        src, dst = lv[n], lv[m]
        where = {(k, s): off for k, s, off in dst.blocks}
        mat = il.zeros(dst.group.ngens, src.group.ngens)
        for k, s, off in src.blocks:
            e, u = factor(compose_monotone(s, t))
            j = len(e) - 1
            g = c.group(k)
            if j == k:
                o2 = where[(k, u)]
                for a in range(g.ngens):
                    mat[o2 + a][off + a] = 1
            elif j == k - 1 and e == tuple(range(1, k + 1)):
                d = c.boundary(k)
                o2 = where[(k - 1, u)]
                for r, row in enumerate(d.matrix):
                    for a, x in enumerate(row):
                        mat[o2 + r][off + a] = x
        return mat

    return simplicial_from_operator([x.group for x in lv], op, check=check)


def gamma_blocks(c, n):
    return _gamma_level(c, n).blocks


@dataclass(frozen=True)
class Normalized:
    complex: ChainComplex
    inclusions: tuple   # N_n -> S_n


def _stacked(fs, source):
    """Maps with a common source, stacked into one map to the direct sum."""
    orders, rows = [], []
    for f in fs:
        orders.extend(f.target.orders)
        rows.extend([list(r) for r in f.matrix])
    return make_hom(source, AbelianGroup(tuple(orders)), rows, check=False)


def normalize(s, top=None):
    """Normalized chain complex with its degreewise inclusions (degrees
    ``0..top``, default one below the top level)."""
    d = s.top - 1 if top is None else top
    if d < 0:
        d = 0
    incs, groups = [], []
    subs = []
    for n in range(d + 1):
        lev = s.levels[n]
        if n == 0:
            sub = _CoordinateSub(lev, tuple(range(lev.ngens)))
        else:
            k = kernel(_stacked([s.faces[n][i] for i in range(1, n + 1)], lev))
            sub = _coordinate_form(k) or k
        subs.append(sub)
        groups.append(sub.group)
        incs.append(sub.inclusion)
    diffs = []
    for n in range(1, d + 1):
        d0 = compose(s.faces[n][0], incs[n])
        cols = [list(subs[n - 1].coords(d0.column(j))) for j in range(groups[n].ngens)]
        diffs.append(make_hom(groups[n], groups[n - 1],
                              il.from_columns(cols, groups[n - 1].ngens)))
    return Normalized(make_chain_complex(groups, diffs), tuple(incs))


@dataclass(frozen=True)
class _CoordinateSub:
    ambient: AbelianGroup
    coordinates_: tuple

    @property
    def group(self):
        return AbelianGroup(tuple(self.ambient.orders[j] for j in self.coordinates_))

    @property
    def inclusion(self):
        m = il.zeros(self.ambient.ngens, len(self.coordinates_))
        for i, j in enumerate(self.coordinates_):
            m[j][i] = 1
        return make_hom(self.group, self.ambient, m, check=False)

    def coords(self, y):
        outside = [x for j, x in enumerate(self.ambient.reduce(y)) if j not in self.coordinates_]
        if any(outside):
            raise InputError("element does not lie in the coordinate subgroup", witness=list(y))
        return self.group.reduce([y[j] for j in self.coordinates_])


def _coordinate_form(sub):
    """The subgroup as a span of ambient generators, when it is one."""
    amb = sub.ambient
    inc = sub.inclusion
    cols = [amb.reduce(inc.column(j)) for j in range(sub.group.ngens)]
    support = sorted({i for c in cols for i, x in enumerate(c) if x})
    cand = _CoordinateSub(amb, tuple(support))
    for i in support:
        e = [int(k == i) for k in range(amb.ngens)]
        if not sub.contains(e):
            return None
    return cand


def moore_complex(s, top=None):
    """Unnormalized complex with boundary the alternating sum of faces."""
    d = s.top - 1 if top is None else top
    diffs = []
    for n in range(1, d + 1):
        m = il.zeros(s.levels[n - 1].ngens, s.levels[n].ngens)
        for i, f in enumerate(s.faces[n]):
            sign = -1 if i % 2 else 1
            for r, row in enumerate(f.matrix):
                for c, x in enumerate(row):
                    m[r][c] += sign * x
        diffs.append(make_hom(s.levels[n], s.levels[n - 1], m))
    return make_chain_complex(s.levels[:d + 1], diffs)


def homotopy_groups(s):
    """``pi_k`` for ``k < top level``, as homology of N, checked against the
    unnormalized complex.  Both complexes run one degree higher so that every
    reported degree has its incoming boundary."""
    a = homology(normalize(s, s.top).complex)
    b = homology(moore_complex(s, s.top))
    a.pop(s.top)
    b.pop(s.top)
    if a != b:
        raise AssertionError("normalized and unnormalized homology disagree")
    return a


@dataclass(frozen=True)
class GammaNIso:
    """``Gamma N S -> S`` with its level matrices."""
    source: SimplicialAbelianGroup
    target: SimplicialAbelianGroup
    components: tuple


def gamma_n_iso(s):
    """The natural map ``Gamma(N S) -> S``, verified simplicial and bijective."""
    top = s.top
    nz = normalize(s, top)
    gn = gamma(nz.complex, levels=top)
    comps = []
    for n in range(top + 1):
        cols = []
        for k, sig, off in gamma_blocks(nz.complex, n):
            f = compose(s.operator(sig, n), nz.inclusions[k])
            cols.extend(list(f.column(a)) for a in range(f.source.ngens))
        comps.append(make_hom(gn.levels[n], s.levels[n],
                              il.from_columns(cols, s.levels[n].ngens)))
    for n in range(top + 1):
        if not is_isomorphism(comps[n]):
            raise AssertionError(f"Gamma N S -> S is not bijective at level {n}")
        for i in range(n + 1):
            if n >= 1 and compose(comps[n - 1], gn.faces[n][i]).matrix != \
                    compose(s.faces[n][i], comps[n]).matrix:
                raise AssertionError(f"Gamma N S -> S does not commute with d{i} at level {n}")
            if n < top and compose(comps[n + 1], gn.degens[n][i]).matrix != \
                    compose(s.degens[n][i], comps[n]).matrix:
                raise AssertionError(f"Gamma N S -> S does not commute with s{i} at level {n}")
    return GammaNIso(gn, s, tuple(comps))


def eilenberg_mac_lane(a, n, top=None):
    """``K(A, n) = Gamma(A[-n])`` on levels ``0..top+1``."""
    d = top_dimension() if top is None else top
    if not 0 <= n <= d:
        raise InputError(f"need 0 <= n <= d, got n={n}, d={d}")
    return gamma(pad(concentrated(a, n), d))


# -- generators of simplicial abelian groups and complexes ---------------------------

def free_on_nerve(groupoid, top):
    """The free simplicial abelian group on the nerve of a finite groupoid."""
    g = groupoid
    simplices = [[(x,) for x in range(g.n_objects)]]
    for n in range(1, top + 1):
        simplices.append([s + (m,) for s in simplices[-1] for m in range(g.n_morphisms)
                          if g.src[m] == _last_object(g, s)])
    index = [{s: i for i, s in enumerate(lv)} for lv in simplices]

    def face(sx, i):
        n = len(sx) - 1
        if n == 0:
            raise AssertionError
        obj0, ms = sx[0], list(sx[1:])
        if i == 0:
            return (g.tgt[ms[0]],) + tuple(ms[1:])
        if i == n:
            return (obj0,) + tuple(ms[:-1])
        ms[i - 1:i + 1] = [g.comp[(ms[i], ms[i - 1])]]
        return (obj0,) + tuple(ms)

    def degen(sx, i):
        obj0, ms = sx[0], list(sx[1:])
        pts = [obj0] + [g.tgt[m] for m in ms]
        ms.insert(i, g.identities[pts[i]])
        return (obj0,) + tuple(ms)

    def op(t, m, n):
        # t^* computed on basis simplices through faces and degeneracies
        mat = il.zeros(len(simplices[m]), len(simplices[n]))
        for j, sx in enumerate(simplices[n]):
            mat[index[m][_apply_nerve(t, sx, m, n, face, degen)]][j] = 1
        return mat

    levels = [AbelianGroup((0,) * len(lv)) for lv in simplices]
    return simplicial_from_operator(levels, op)


def _last_object(g, s):
    return g.tgt[s[-1]] if len(s) > 1 else s[0]


def _apply_nerve(t, sx, m, n, face, degen):
    if t == tuple(range(n + 1)) and m == n:
        return sx
    missing = [v for v in range(n + 1) if v not in t]
    if missing:
        v = missing[-1]
        rest = tuple(x if x < v else x - 1 for x in t)
        return _apply_nerve(rest, face(sx, v), m, n - 1, face, degen)
    i = next(i for i in range(m) if t[i] == t[i + 1])
    rest = tuple(t[x] if x <= i else t[x + 1] for x in range(m))
    return degen(_apply_nerve(rest, sx, m - 1, n, face, degen), i)


def random_group(rng, max_rank=3, torsion=(2, 3, 4)):
    k = rng.randint(0, max_rank)
    return AbelianGroup(tuple(rng.choice((0,) + tuple(torsion)) for _ in range(k)))


def random_complex(rng, max_len=4, max_rank=3, torsion=(2, 3, 4), coeff=2):
    """A random bounded complex; each boundary has columns drawn from the
    kernel of the next boundary down, scaled so torsion generators map
    to elements they kill."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    length = rng.randint(1, max_len)
    groups = [random_group(rng, max_rank, torsion) for _ in range(length)]
    diffs = []
    for k in range(1, length):
        src, tgt = groups[k], groups[k - 1]
        if k == 1:
            z = kernel(zero_hom(tgt, zero_group()))
        else:
            z = kernel(diffs[-1])
        cols = []
        for o in src.orders:
            coords = []
            for q in z.group.orders:
                r = rng.randint(-coeff, coeff)
                if o == 0:
                    coords.append(r)
                elif q == 0:
                    coords.append(0)
                else:
                    from math import gcd
                    coords.append(r * (q // gcd(q, o)))
            cols.append(list(z.inclusion(coords)) if z.group.ngens else [0] * tgt.ngens)
        diffs.append(make_hom(src, tgt, il.from_columns(cols, tgt.ngens)))
    return make_chain_complex(groups, diffs)
