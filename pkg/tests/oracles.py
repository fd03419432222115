"""Brute-force reference computations used only by the tests.

Nothing here calls into the package's algorithms; inputs are plain tables.
"""

import itertools
from math import comb


def table_of(g):
    return [list(r) for r in g.table]


def identity_of(t):
    n = len(t)
    return next(e for e in range(n) if all(t[e][x] == x == t[x][e] for x in range(n)))


def inverse_of(t, x):
    e = identity_of(t)
    return next(y for y in range(len(t)) if t[x][y] == e)


def is_abelian(t):
    n = len(t)
    return all(t[a][b] == t[b][a] for a in range(n) for b in range(n))


def homomorphisms(tg, th):
    """Every function G -> H tested against the tables."""
    n, m = len(tg), len(th)
    out = []
    for f in itertools.product(range(m), repeat=n):
        if all(f[tg[a][b]] == th[f[a]][f[b]] for a in range(n) for b in range(n)):
            out.append(f)
    return out


def conjugacy_classes(t):
    n = len(t)
    seen, out = set(), 0
    for x in range(n):
        if x in seen:
            continue
        out += 1
        for g in range(n):
            seen.add(t[t[g][x]][inverse_of(t, g)])
    return out


def homs_mod_conjugation(tg, th):
    """|Hom(G, H)/H|, i.e. homotopy classes BG -> BH."""
    homs = homomorphisms(tg, th)
    seen, count = set(), 0
    for f in homs:
        if f in seen:
            continue
        count += 1
        for h in range(len(th)):
            hi = inverse_of(th, h)
            seen.add(tuple(th[th[h][y]][hi] for y in f))
    return count


def automorphisms(t):
    return [f for f in itertools.permutations(range(len(t)))
            if all(f[t[a][b]] == t[f[a]][f[b]] for a in range(len(t)) for b in range(len(t)))]


def center(t):
    n = len(t)
    return [z for z in range(n) if all(t[z][x] == t[x][z] for x in range(n))]


def inner(t, k):
    ki = inverse_of(t, k)
    return tuple(t[t[k][x]][ki] for x in range(len(t)))


def aut_two_cells(t):
    """Triples (alpha, beta, k) with conj_k o alpha = beta."""
    auts = automorphisms(t)
    out = []
    for a in auts:
        for k in range(len(t)):
            ck = inner(t, k)
            out.append((a, tuple(ck[a[x]] for x in range(len(t))), k))
    return auts, out


def cyclic_h2_count(n_h, n_k):
    """Number of extension classes of C_{n_h} by C_{n_k}: the sum over actions
    sigma: C_{n_h} -> Aut(C_{n_k}) of |K^sigma / N K|, with N the norm."""
    total = 0
    units = [u for u in range(1, n_k + 1) if _gcd(u, n_k) == 1] if n_k > 1 else [1]
    for u in units:
        # the generator of H acts by multiplication by u; need u^{n_h} = 1
        if pow(u, n_h, n_k) != 1 % n_k:
            continue
        fixed = [x for x in range(n_k) if (u * x - x) % n_k == 0]
        norm = {sum(pow(u, i, n_k) * x for i in range(n_h)) % n_k for x in range(n_k)}
        total += len(fixed) // len(norm)
    return total


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def monotone_surjections(n, k):
    """Count order-preserving surjections [n] -> [k] by listing them."""
    return sum(1 for f in itertools.combinations_with_replacement(range(k + 1), n + 1)
               if set(f) == set(range(k + 1)))


def gamma_rank(ranks, n):
    """Rank of level n of Gamma(C) for a free complex with the given ranks."""
    return sum(comb(n, k) * r for k, r in enumerate(ranks) if k <= n)


def rank_mod_p(rows, p):
    """Rank of an integer matrix over GF(p) by Gaussian elimination."""
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [(x * inv) % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [(a - c * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def functors_brute(x, y):
    """All functors between finite groupoids, by trying every assignment."""
    out = []
    for obj in itertools.product(range(y.n_objects), repeat=x.n_objects):
        choices = [[m for m in range(y.n_morphisms)
                    if y.src[m] == obj[x.src[a]] and y.tgt[m] == obj[x.tgt[a]]]
                   for a in range(x.n_morphisms)]
        for mor in itertools.product(*choices):
            if any(mor[x.identities[o]] != y.identities[obj[o]] for o in range(x.n_objects)):
                continue
            if all(mor[h] == y.comp[(mor[g], mor[f])] for (g, f), h in x.comp.items()):
                out.append((obj, mor))
    return out


def naturally_isomorphic(x, y, f, g):
    fo, fm = f
    go, gm = g
    cands = [[m for m in range(y.n_morphisms) if y.src[m] == fo[o] and y.tgt[m] == go[o]]
             for o in range(x.n_objects)]
    for eta in itertools.product(*cands):
        if all(y.comp[(eta[x.tgt[a]], fm[a])] == y.comp[(gm[a], eta[x.src[a]])]
               for a in range(x.n_morphisms)):
            return True
    return False


def homotopy_class_count(x, y):
    fs = functors_brute(x, y)
    reps = []
    for f in fs:
        if not any(naturally_isomorphic(x, y, f, r) for r in reps):
            reps.append(f)
    return len(reps)


def triangle_boundary_cohomology():
    """H^0 and H^1 of the hollow triangle with Z coefficients as (rank, torsion)
    via sympy's Smith normal form: vertices 1,2,3; edges 12, 13, 23."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    d0 = Matrix([[-1, 1, 0], [-1, 0, 1], [0, -1, 1]])  # (delta f)(ij) = f(j) - f(i)
    snf = smith_normal_form(d0, domain=ZZ)
    diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    r = len(diag)
    h0 = (3 - r, [])
    h1 = (3 - r, [d for d in diag if d > 1])
    return h0, h1


def triangle_h1_orbits(t):
    """Nonabelian H^1 of the hollow triangle: triples (g12, g13, g23) (no
    triple-overlap condition) modulo g_ij -> u_i g_ij u_j^-1."""
    n = len(t)
    inv = [inverse_of(t, x) for x in range(n)]
    seen, orbits = set(), 0
    for g in itertools.product(range(n), repeat=3):
        if g in seen:
            continue
        orbits += 1
        for u in itertools.product(range(n), repeat=3):
            pairs = ((0, 1), (0, 2), (1, 2))
            seen.add(tuple(t[t[u[i]][x]][inv[u[j]]] for (i, j), x in zip(pairs, g)))
    return orbits, n ** 3


def free_complex_homology(ranks, diffs):
    """Homology of a complex of free groups via sympy's Smith normal form.

    ``diffs[i]`` is the integer matrix of the boundary out of degree i+1.
    Returns ``{k: (rank, torsion)}``.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    def snf_diag(rows, m, n):
        if not m or not n:
            return []
        s = smith_normal_form(Matrix(rows), domain=ZZ)
        return [abs(int(s[i, i])) for i in range(min(m, n)) if s[i, i] != 0]

    out = {}
    for k, r in enumerate(ranks):
        d_out = snf_diag(diffs[k - 1], ranks[k - 1], r) if k >= 1 else []
        d_in = snf_diag(diffs[k], r, ranks[k + 1]) if k + 1 < len(ranks) else []
        out[k] = (r - len(d_out) - len(d_in), sorted(d for d in d_in if d > 1))
    return out
