"""Finitely generated abelian groups ``Z^r + sum Z/n`` and integer-matrix maps."""

from __future__ import annotations

from dataclasses import dataclass

from . import intlinalg as il
from .errors import InputError, NoAbelianValues


@dataclass(frozen=True)
class AbelianGroup:
    """``orders[i]`` is the order of generator i; 0 means infinite cyclic."""
    orders: tuple

    def __post_init__(self):
        if any(o < 0 or o == 1 for o in self.orders):
            raise InputError(f"generator orders must be 0 or at least 2: {self.orders}")

    @property
    def ngens(self):
        return len(self.orders)

    @property
    def rank(self):
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self):
        return canonical_torsion([o for o in self.orders if o])

    @property
    def is_trivial(self):
        return not self.orders

    @property
    def is_finite(self):
        return all(self.orders)

    def size(self):
        if not self.is_finite:
            return None
        out = 1
        for o in self.orders:
            out *= o
        return out

    def reduce(self, v):
        return tuple(x % o if o else x for x, o in zip(v, self.orders))

    def relations(self):
        """Relation columns ``o_i e_i`` for the finite generators."""
        return [[o if k == i else 0 for k in range(self.ngens)]
                for i, o in enumerate(self.orders) if o]

    def elements(self):
        if not self.is_finite:
            raise InputError("group is infinite")
        out = [()]
        for o in self.orders:
            out = [e + (x,) for e in out for x in range(o)]
        return out

    def invariants(self):
        return {"rank": self.rank, "torsion": self.torsion}

    def __str__(self):
        parts = ["Z"] * self.rank + [f"C{d}" for d in self.torsion]
        return "+".join(parts) if parts else "0"


def canonical_torsion(orders):
    """Invariant factors (each dividing the next) of ``sum Z/o``."""
    orders = [o for o in orders if o > 1]
    if not orders:
        return []
    d = il.invariant_factors([[orders[i] if i == j else 0 for j in range(len(orders))]
                              for i in range(len(orders))])
    return [x for x in d if x > 1]


def Z(n=1):
    return AbelianGroup((0,) * n)


def cyclic_group(n):
    return AbelianGroup(() if n == 1 else (n,))


def zero_group():
    return AbelianGroup(())


def direct_sum(*gs):
    return AbelianGroup(sum((g.orders for g in gs), ()))


@dataclass(frozen=True)
class Hom:
    """``matrix`` has one row per target generator, one column per source generator."""
    source: AbelianGroup
    target: AbelianGroup
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(self.target.reduce(col)[i] for col in
                        il.columns(self.matrix, self.source.ngens))
                  for i in range(self.target.ngens)) if self.target.ngens else ()
        object.__setattr__(self, "matrix", m)

    def __call__(self, v):
        return self.target.reduce(il.matvec(self.matrix, v)) if self.target.ngens else ()

    def column(self, j):
        return tuple(row[j] for row in self.matrix)


def make_hom(source, target, matrix, check=True):
    matrix = [list(r) for r in matrix] if target.ngens else []
    if check:
        if target.ngens and any(len(r) != source.ngens for r in matrix):
            raise InputError("matrix shape does not match the groups")
        if len(matrix) != target.ngens:
            raise InputError("matrix shape does not match the groups")
        for j, o in enumerate(source.orders):
            if o:
                img = target.reduce([o * r[j] for r in matrix])
                if any(img):
                    raise InputError(f"generator {j} of order {o} is not sent to an element "
                                     f"killed by {o}", witness=j)
    return Hom(source, target, tuple(tuple(r) for r in matrix))


def zero_hom(a, b):
    return make_hom(a, b, il.zeros(b.ngens, a.ngens), check=False)


def identity_hom(a):
    return make_hom(a, a, il.identity(a.ngens), check=False)


def compose(g, f):
    """``g o f``."""
    if f.target != g.source:
        raise InputError("maps are not composable")
    if f.target.ngens:
        m = il.matmul([list(r) for r in g.matrix], [list(r) for r in f.matrix])
        m = m if f.source.ngens else [[] for _ in range(g.target.ngens)]
    else:
        m = il.zeros(g.target.ngens, f.source.ngens)
    return make_hom(f.source, g.target, m, check=False)


def is_zero_hom(f):
    return all(x == 0 for r in f.matrix for x in r)


def hom_equal(f, g):
    return f.source == g.source and f.target == g.target and f.matrix == g.matrix


# -- subgroups, kernels, quotients ------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    """A subgroup presented as a group in its own right.

    ``group`` is the presented group, ``inclusion`` its map into the ambient
    group; ``coords`` turns an ambient element of the subgroup into
    coordinates of ``group``.
    """
    ambient: AbelianGroup
    group: AbelianGroup
    inclusion: Hom
    _basis: tuple
    _u: tuple
    _keep: tuple

    def coords(self, y):
        lift = [int(x) for x in y]
        c = il.coordinates([list(b) for b in self._basis], lift)
        if c is None:
            raise InputError("element does not lie in the subgroup", witness=list(y))
        new = il.matvec([list(r) for r in self._u], c) if c else []
        return self.group.reduce([new[i] for i in self._keep])

    def contains(self, y):
        return il.coordinates([list(b) for b in self._basis], [int(x) for x in y]) is not None


def subgroup(ambient, generators):
    """Subgroup generated by the given ambient vectors."""
    m = ambient.ngens
    rel = ambient.relations()
    basis = il.lattice_basis([list(g) for g in generators] + rel, m)
    # relations of the lattice quotient in basis coordinates
    rc = [il.coordinates(basis, r) for r in rel]
    ell = len(basis)
    if rc:
        d, u, v = il.smith(il.from_columns(rc, ell), len(rc))
    else:
        d, u = [], il.identity(ell)
    d = d + [0] * (ell - len(d))
    keep = [i for i in range(ell) if d[i] != 1]
    group = AbelianGroup(tuple(d[i] for i in keep))
    uinv = il.unimodular_inverse(u) if ell else []
    # new generator i is sum_j basis_j uinv[j][i]
    cols = []
    for i in keep:
        vec = [0] * m
        for j in range(ell):
            if uinv[j][i]:
                for k in range(m):
                    vec[k] += uinv[j][i] * basis[j][k]
        cols.append(vec)
    inc = make_hom(group, ambient, il.from_columns(cols, m) if m else [], check=False)
    return Subgroup(ambient, group, inc, tuple(tuple(b) for b in basis),
                    tuple(tuple(r) for r in u), tuple(keep))


def kernel(f):
    """Kernel of a homomorphism as a subgroup of its source."""
    a, b = f.source, f.target
    rel = b.relations()
    big = il.hstack([list(r) for r in f.matrix], il.from_columns(rel, b.ngens),
                    rows=b.ngens) if b.ngens else []
    n = a.ngens + len(rel)
    if b.ngens:
        ker = il.kernel(big, n)
        gens = [k[:a.ngens] for k in ker]
    else:
        gens = [list(c) for c in il.identity(a.ngens)]
    return subgroup(a, gens)


def image(f):
    return subgroup(f.target, [list(f.column(j)) for j in range(f.source.ngens)])


@dataclass(frozen=True)
class Quotient:
    """``group = ambient / sub``; ``projection`` ambient -> group."""
    ambient: AbelianGroup
    group: AbelianGroup
    projection: Hom


def quotient(ambient, generators):
    """Quotient by the subgroup generated by ``generators``."""
    m = ambient.ngens
    rel = [list(g) for g in generators] + ambient.relations()
    if rel:
        d, u, _ = il.smith(il.from_columns(rel, m), len(rel))
    else:
        d, u = [], il.identity(m)
    d = d + [0] * (m - len(d))
    keep = [i for i in range(m) if d[i] != 1]
    group = AbelianGroup(tuple(d[i] for i in keep))
    proj = make_hom(ambient, group, [u[i] for i in keep], check=False)
    return Quotient(ambient, group, proj)


def homology_group(d_in, d_out):
    """``ker d_out / im d_in`` at the common group."""
    if d_in.target != d_out.source:
        raise InputError("maps do not meet")
    z = kernel(d_out)
    gens = [z.coords(d_in.column(j)) for j in range(d_in.source.ngens)]
    return quotient(z.group, gens).group


def is_isomorphism(f):
    """Bijective on the underlying groups."""
    ker = kernel(f)
    if not ker.group.is_trivial:
        return False
    return image(f).group == f.target or _surjective(f)


def _surjective(f):
    q = quotient(f.target, [list(f.column(j)) for j in range(f.source.ngens)])
    return q.group.is_trivial


def standard_form(a):
    """``Z^r + Z/d1 + ...`` with the invariant factors of ``a``."""
    return AbelianGroup(tuple(a.torsion) + (0,) * a.rank)


# -- finite abelian groups given by tables ---------------------------------------

def from_finite_group(g):
    """``(A, to_coords)`` for an abelian FiniteGroup; ``to_coords[x]`` is the
    coordinate vector of element x."""
    if not g.is_abelian:
        raise NoAbelianValues(f"group {g.name or '?'} is not abelian",
                              witness=noncommuting_pair(g))
    n = len(g)
    # Z^n -> g, e_x -> x; relations e_x + e_y - e_xy and e_e
    rels = []
    for x in range(n):
        for y in range(x, n):
            r = [0] * n
            r[x] += 1
            r[y] += 1
            r[g.table[x][y]] -= 1
            if any(r):
                rels.append(r)
    r = [0] * n
    r[g.identity] = 1
    rels.append(r)
    q = quotient(Z(n), rels)
    a = q.group
    coords = [q.projection.column(x) for x in range(n)]
    if a.size() != n:
        raise AssertionError("presentation of a finite abelian group has the wrong order")
    return a, tuple(coords)


def noncommuting_pair(g):
    """Element names ``[x, y]`` with ``xy != yx``, or None."""
    n = len(g)
    for x in range(n):
        for y in range(x + 1, n):
            if g.table[x][y] != g.table[y][x]:
                return [g.elements[x], g.elements[y]]
    return None


def hom_from_finite(f, src, tgt):
    """Matrix of a homomorphism between abelian FiniteGroups, via their
    presentations ``src = (A, coords)`` and ``tgt = (B, coords)``."""
    a, ca = src
    b, cb = tgt
    # each generator of A is the image of some element of the table group
    cols = []
    for j in range(a.ngens):
        e = tuple(int(i == j) for i in range(a.ngens))
        x = ca.index(a.reduce(e))
        cols.append(list(cb[f[x]]))
    return make_hom(a, b, il.from_columns(cols, b.ngens) if b.ngens else [])
