"""Finite groups given by explicit composition tables.

Elements are indices ``0..n-1`` internally; labels are carried for display and
serialisation only.  ``table[a][b]`` is the product ``a * b``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InputError, NoIdentity, NoInverse, NonAssociative


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    elements: tuple
    table: tuple
    identity: int
    name: str = field(default="", compare=False)

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and self.elements == other.elements
                and self.table == other.table)

    def __hash__(self):
        return hash((self.elements, self.table))

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={len(self)})"

    @property
    def order(self):
        return len(self.elements)

    def mul(self, a, b):
        return self.table[a][b]

    @cached_property
    def inverses(self):
        e = self.identity
        return tuple(row.index(e) for row in self.table)

    def inv(self, a):
        return self.inverses[a]

    def product(self, *xs):
        out = self.identity
        for x in xs:
            out = self.table[out][x]
        return out

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    @cached_property
    def is_abelian(self):
        t = self.table
        n = len(t)
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))

    def conj(self, g):
        """Permutation ``x -> g x g^-1`` as a tuple."""
        t, gi = self.table, self.inv(g)
        return tuple(t[t[g][x]][gi] for x in range(len(t)))

    @cached_property
    def center(self):
        t = self.table
        n = len(t)
        return tuple(a for a in range(n) if all(t[a][b] == t[b][a] for b in range(n)))

    def index(self, label):
        try:
            return self.elements.index(label)
        except ValueError:
            raise InputError(f"unknown element {label!r}", witness=label) from None

    def span(self, gens):
        """Subgroup generated by ``gens`` as a sorted tuple of indices."""
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def generators(self):
        """A small generating set, chosen greedily by descending element order."""
        n = len(self)
        by_order = sorted(range(n), key=lambda a: (-self.element_order(a), a))
        gens, span = [], {self.identity}
        for a in by_order:
            if len(span) == n:
                break
            if a not in span:
                gens.append(a)
                span = set(self.span(gens))
        return tuple(gens)

    @cached_property
    def _word_tree(self):
        # spanning tree of the Cayley graph: parent[x] = (y, i) with x = y * gens[i]
        gens = self.generators
        parent = {self.identity: None}
        order = [self.identity]
        for x in order:
            for i, g in enumerate(gens):
                y = self.table[x][g]
                if y not in parent:
                    parent[y] = (x, i)
                    order.append(y)
        return order, parent

    def extend(self, images, target):
        """Extend generator images to a homomorphism into ``target``.

        Returns the element map as a tuple, or None when the assignment does not
        extend.
        """
        order, parent = self._word_tree
        phi = [None] * len(self)
        phi[self.identity] = target.identity
        tt = target.table
        for x in order[1:]:
            y, i = parent[x]
            phi[x] = tt[phi[y]][images[i]]
        for x in range(len(self)):
            px = phi[x]
            for g, h in zip(self.generators, images):
                if phi[self.table[x][g]] != tt[px][h]:
                    return None
        return tuple(phi)

    def normal_subgroups(self):
        n = len(self)
        conjs = [self.conj(g) for g in range(n)]
        found = set()
        # every subgroup of a group of this size is generated by at most 3 elements
        for k in range(0, 4):
            for gens in itertools.combinations(range(n), k):
                sub = self.span(gens)
                if sub in found:
                    continue
                subset = set(sub)
                if all(c[x] in subset for c in conjs for x in sub):
                    found.add(sub)
        return sorted(found, key=lambda s: (len(s), s))

    def subgroup(self, members, name=""):
        """The subgroup on ``members`` (sorted indices) plus its inclusion map."""
        members = tuple(sorted(members))
        pos = {x: i for i, x in enumerate(members)}
        table = tuple(tuple(pos[self.table[a][b]] for b in members) for a in members)
        g = FiniteGroup(tuple(self.elements[x] for x in members), table,
                        pos[self.identity], name)
        return g, members

    def quotient(self, normal, name=""):
        """Quotient by a normal subgroup, with the projection as a tuple."""
        n = len(self)
        proj = [None] * n
        reps = []
        for x in range(n):
            if proj[x] is None:
                c = len(reps)
                reps.append(x)
                for k in normal:
                    proj[self.table[x][k]] = c
        table = tuple(tuple(proj[self.table[a][b]] for b in reps) for a in reps)
        labels = tuple("[" + self.elements[r] + "]" for r in reps)
        return FiniteGroup(labels, table, proj[self.identity], name), tuple(proj)


def build_group(elements, table, name=""):
    """Validate a labelled composition table and return the group.

    Raises NoIdentity, NoInverse or NonAssociative naming the offending element
    or triple.
    """
    elements = tuple(str(e) for e in elements)
    n = len(elements)
    if len(set(elements)) != n:
        raise InputError("element labels are not distinct", witness=elements)
    if n == 0:
        raise InputError("a group needs at least one element")
    if len(table) != n or any(len(row) != n for row in table):
        raise InputError("composition table is not square of the element count")
    rows = []
    for i, row in enumerate(table):
        r = []
        for j, v in enumerate(row):
            if isinstance(v, str):
                v = elements.index(v) if v in elements else -1
            if not isinstance(v, int) or not 0 <= v < n:
                raise InputError(f"table entry ({i},{j}) out of range", witness=[i, j])
            r.append(v)
        rows.append(tuple(r))
    t = tuple(rows)
    ident = next((e for e in range(n)
                  if all(t[e][a] == a and t[a][e] == a for a in range(n))), None)
    if ident is None:
        raise NoIdentity("no two-sided identity element")
    for a in range(n):
        if not any(t[a][b] == ident and t[b][a] == ident for b in range(n)):
            raise NoInverse(f"element {elements[a]!r} has no inverse", witness=elements[a])
    for a in range(n):
        ta = t[a]
        for b in range(n):
            tab = t[ta[b]]
            tb = t[b]
            for c in range(n):
                if tab[c] != ta[tb[c]]:
                    raise NonAssociative(
                        f"({elements[a]}{elements[b]}){elements[c]} != "
                        f"{elements[a]}({elements[b]}{elements[c]})",
                        witness=[elements[a], elements[b], elements[c]])
    return FiniteGroup(elements, t, ident, name)


def group_from_function(elements, mul, name=""):
    """Build a group from hashable elements and a multiplication function."""
    elements = list(elements)
    pos = {x: i for i, x in enumerate(elements)}
    table = [[pos[mul(a, b)] for b in elements] for a in elements]
    return build_group([_label(x) for x in elements], table, name)


def _label(x):
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(_label(y) for y in x) + ")"
    return str(x)


def trivial_group():
    return FiniteGroup(("e",), ((0,),), 0, "C1")


def cyclic(n):
    labels = ["e"] + ["a" if k == 1 else f"a{k}" for k in range(1, n)]
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteGroup(tuple(labels), table, 0, f"C{n}")


def direct_product(g, h, name=""):
    pairs = [(a, b) for a in range(len(g)) for b in range(len(h))]
    pos = {p: i for i, p in enumerate(pairs)}
    table = tuple(tuple(pos[(g.table[a][c], h.table[b][d])] for (c, d) in pairs)
                  for (a, b) in pairs)
    labels = tuple(f"({g.elements[a]},{h.elements[b]})" for a, b in pairs)
    return FiniteGroup(labels, table, pos[(g.identity, h.identity)],
                       name or f"{g.name}x{h.name}")


def semidirect(k, h, action, name=""):
    """``K x| H`` with ``(k, x)(l, y) = (k * action[x][l], x y)``.

    ``action[x]`` is the automorphism of K by which ``x`` acts, as a tuple.
    """
    pairs = [(a, x) for a in range(len(k)) for x in range(len(h))]
    pos = {p: i for i, p in enumerate(pairs)}
    table = tuple(tuple(pos[(k.table[a][action[x][b]], h.table[x][y])] for (b, y) in pairs)
                  for (a, x) in pairs)
    labels = tuple(f"({k.elements[a]},{h.elements[x]})" for a, x in pairs)
    return build_group(labels, table, name)


def _perm_label(p):
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c, j = [], i
        while j not in seen:
            seen.add(j)
            c.append(str(j))
            j = p[j]
        cycles.append("(" + "".join(c) + ")")
    return "".join(cycles) or "e"


def from_permutations(gens, name=""):
    """Permutation group generated by ``gens`` (tuples of images)."""
    deg = len(gens[0])
    ident = tuple(range(deg))
    elems = [ident]
    seen = {ident}
    for x in elems:
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                seen.add(y)
                elems.append(y)
    elems.sort()
    elems.remove(ident)
    elems.insert(0, ident)
    pos = {x: i for i, x in enumerate(elems)}
    # (a * b)(i) = a(b(i))
    table = tuple(tuple(pos[tuple(a[b[i]] for i in range(deg))] for b in elems) for a in elems)
    return FiniteGroup(tuple(_perm_label(p) for p in elems), table, 0, name)


def symmetric(n):
    if n < 2:
        return trivial_group()
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return from_permutations(gens, f"S{n}")


def alternating(n):
    gens = [tuple([1, 2, 0] + list(range(3, n)))]
    for k in range(3, n):
        p = list(range(n))
        p[0], p[1], p[k] = p[1], p[k], p[0]
        gens.append(tuple(p))
    return from_permutations(gens, f"A{n}")


def dihedral(n):
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], f"D{n}")


def quaternion():
    # elements are (sign, unit) with unit in 1, i, j, k
    units = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
             (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
             (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
             (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    names = "1ijk"

    def mul(a, b):
        s, u = units[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    elems = [(s, u) for s in (1, -1) for u in range(4)]
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[mul(a, b)] for b in elems] for a in elems]
    labels = [("" if s == 1 else "-") + names[u] for s, u in elems]
    return build_group(labels, table, "Q8")


def dicyclic(n):
    """Dicyclic group of order 4n as ``C_2n`` extended by a quarter turn."""
    # elements a^k x^e with e in {0,1}, x^2 = a^n, x a x^-1 = a^-1
    def mul(p, q):
        (k, e), (l, f) = p, q
        if e == 0:
            return ((k + l) % (2 * n), f)
        if f == 0:
            return ((k - l) % (2 * n), 1)
        return ((k - l + n) % (2 * n), 0)

    elems = [(k, e) for e in (0, 1) for k in range(2 * n)]
    return group_from_function(elems, mul, f"Dic{n}")


# -- homomorphisms ---------------------------------------------------------

def is_homomorphism(g, h, f):
    gt, ht = g.table, h.table
    n = len(g)
    return all(f[gt[a][b]] == ht[f[a]][f[b]] for a in range(n) for b in range(n))


def homomorphisms(g, h):
    """All homomorphisms g -> h as element-map tuples, in lexicographic order of
    generator images."""
    gens = g.generators
    if not gens:
        return [(h.identity,) * len(g)]
    choices = []
    for a in gens:
        k = g.element_order(a)
        choices.append([b for b in range(len(h)) if k % h.element_order(b) == 0])
    out = []
    for images in itertools.product(*choices):
        phi = g.extend(images, h)
        if phi is not None:
            out.append(phi)
    return out


def isomorphisms(g, h):
    if len(g) != len(h) or _order_profile(g) != _order_profile(h):
        return []
    return [f for f in homomorphisms(g, h) if len(set(f)) == len(f)]


def find_isomorphism(g, h):
    if len(g) != len(h) or _order_profile(g) != _order_profile(h):
        return None
    gens = g.generators
    choices = [[b for b in range(len(h)) if h.element_order(b) == g.element_order(a)]
               for a in gens]
    for images in itertools.product(*choices):
        phi = g.extend(images, h)
        if phi is not None and len(set(phi)) == len(phi):
            return phi
    return None


def is_isomorphic(g, h):
    return find_isomorphism(g, h) is not None


def automorphisms(g):
    return isomorphisms(g, g)


def _order_profile(g):
    return tuple(sorted(g.element_order(a) for a in range(len(g))))


def compose_maps(f, g):
    """``f after g`` for element maps stored as tuples."""
    return tuple(f[x] for x in g)


# -- catalogue of small groups ---------------------------------------------

def small_groups(order):
    """One representative of each isomorphism class of groups of ``order``.

    Hand-written up to order 12; see tests for the pairwise non-isomorphism
    check.
    """
    c = cyclic
    dp = direct_product
    table = {
        1: lambda: [trivial_group()],
        2: lambda: [c(2)],
        3: lambda: [c(3)],
        4: lambda: [c(4), dp(c(2), c(2))],
        5: lambda: [c(5)],
        6: lambda: [c(6), symmetric(3)],
        7: lambda: [c(7)],
        8: lambda: [c(8), dp(c(4), c(2)), dp(dp(c(2), c(2)), c(2)), dihedral(4), quaternion()],
        9: lambda: [c(9), dp(c(3), c(3))],
        10: lambda: [c(10), dihedral(5)],
        11: lambda: [c(11)],
        12: lambda: [c(12), dp(c(6), c(2)), alternating(4), dihedral(6), dicyclic(3)],
    }
    if order not in table:
        raise InputError(f"no catalogue of groups of order {order}")
    return table[order]()


def group_by_name(name):
    """Parse names like C4, S3, D4, Q8, A4, Dic3, C2xC2."""
    if "x" in name and not name.startswith("Dic"):
        parts = name.split("x")
        out = group_by_name(parts[0])
        for p in parts[1:]:
            out = direct_product(out, group_by_name(p))
        return out
    if name == "Q8":
        return quaternion()
    if name.startswith("Dic"):
        return dicyclic(int(name[3:]))
    kind, num = name[0], name[1:]
    if not num.isdigit():
        raise InputError(f"unknown group name {name!r}")
    n = int(num)
    if kind == "C":
        return cyclic(n) if n > 1 else trivial_group()
    if kind == "S":
        return symmetric(n)
    if kind == "A":
        return alternating(n)
    if kind == "D":
        return dihedral(n)
    raise InputError(f"unknown group name {name!r}")
