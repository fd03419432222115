"""Exact integer matrix algebra on lists of Python ints.

Matrices are lists of rows.  Column echelon form gives kernels, lattice bases
and coordinates; Smith normal form gives invariant factors and adapted bases.
Pivoting is deterministic (smallest nonzero absolute value, lowest index).
"""

from __future__ import annotations


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def shape(a, n_cols=None):
    m = len(a)
    return m, (len(a[0]) if m else (n_cols or 0))


def transpose(a, n_cols=0):
    m, n = shape(a, n_cols)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def matmul(a, b, inner=None):
    m = len(a)
    k = len(b) if inner is None else inner
    n = len(b[0]) if b else 0
    out = zeros(m, n)
    for i in range(m):
        ai, oi = a[i], out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(n):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def hstack(*blocks, rows=None):
    rows = rows if rows is not None else len(blocks[0])
    return [sum((list(b[i]) for b in blocks), []) for i in range(rows)]


def column(a, j):
    return [row[j] for row in a]


def columns(a, n_cols=None):
    return transpose(a, n_cols)


def from_columns(cols, n_rows):
    if not cols:
        return [[] for _ in range(n_rows)]
    return [[c[i] for c in cols] for i in range(n_rows)]


def is_zero(a):
    return all(x == 0 for row in a for x in row)


# -- column echelon form -------------------------------------------------------

def column_echelon(a, n_cols=None):
    """``(h, v, pivots)`` with ``a v = h``, ``v`` unimodular, ``h`` in column
    echelon form: column j < len(pivots) has its first nonzero entry at row
    ``pivots[j]`` (positive, strictly increasing) and the rest are zero."""
    m, n = shape(a, n_cols)
    h = [list(c) for c in columns(a, n)]   # work on columns
    v = [list(c) for c in identity(n)]     # columns of v
    pivots = []
    c0 = 0
    for r in range(m):
        if c0 >= n:
            break
        while True:
            nz = [j for j in range(c0, n) if h[j][r] != 0]
            if not nz:
                break
            p = min(nz, key=lambda j: (abs(h[j][r]), j))
            if len(nz) == 1:
                break
            for j in nz:
                if j != p:
                    q = h[j][r] // h[p][r]
                    if q:
                        hj, hp, vj, vp = h[j], h[p], v[j], v[p]
                        for i in range(m):
                            hj[i] -= q * hp[i]
                        for i in range(n):
                            vj[i] -= q * vp[i]
        nz = [j for j in range(c0, n) if h[j][r] != 0]
        if not nz:
            continue
        p = nz[0]
        h[c0], h[p] = h[p], h[c0]
        v[c0], v[p] = v[p], v[c0]
        if h[c0][r] < 0:
            h[c0] = [-x for x in h[c0]]
            v[c0] = [-x for x in v[c0]]
        pivots.append(r)
        c0 += 1
    return from_columns(h, m), from_columns(v, n), pivots


def kernel(a, n_cols=None):
    """Basis of the integer kernel, as a list of column vectors."""
    m, n = shape(a, n_cols)
    _, v, piv = column_echelon(a, n)
    return [column(v, j) for j in range(len(piv), n)]


def lattice_basis(vectors, dim):
    """Echelon basis of the lattice spanned by the given vectors."""
    if not vectors:
        return []
    h, _, piv = column_echelon(from_columns(vectors, dim), len(vectors))
    return [column(h, j) for j in range(len(piv))]


def _pivot_rows(basis):
    out = []
    for b in basis:
        out.append(next(i for i, x in enumerate(b) if x))
    return out


def coordinates(basis, y):
    """Integer ``c`` with ``sum c_j basis_j = y`` for an echelon basis, or None."""
    y = list(y)
    out = []
    for b, p in zip(basis, _pivot_rows(basis)):
        q, r = divmod(y[p], b[p])
        if r:
            return None
        out.append(q)
        if q:
            for i in range(len(y)):
                y[i] -= q * b[i]
    return out if all(x == 0 for x in y) else None


# -- Smith normal form -----------------------------------------------------------

def smith(a, n_cols=None):
    """``(d, u, v)`` with ``u a v`` diagonal with entries ``d`` (length
    min(m, n)), each dividing the next, nonnegative; ``u``, ``v`` unimodular."""
    m, n = shape(a, n_cols)
    s = [list(r) for r in a]
    u, v = identity(m), identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        if q:
            rs, rd = s[src], s[dst]
            for k in range(n):
                rd[k] += q * rs[k]
            us, ud = u[src], u[dst]
            for k in range(m):
                ud[k] += q * us[k]

    def add_col(dst, src, q):
        if q:
            for row in s:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(s[i][j]), i, j) for i in range(t, m) for j in range(t, n) if s[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // s[t][t]))
                    if s[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // s[t][t]))
                    if s[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if s[i][j] % s[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    d = [s[i][i] for i in range(min(m, n))]
    return d, u, v


def invariant_factors(a, n_cols=None):
    """Nonzero Smith diagonal entries."""
    return [x for x in smith(a, n_cols)[0] if x]


def rank(a, n_cols=None):
    return len(column_echelon(a, n_cols)[2])


def unimodular_inverse(u):
    """Inverse of a unimodular matrix, exactly."""
    n = len(u)
    _, v, piv = column_echelon(u, n)
    # u v = h lower-triangular with positive pivots, all equal to 1
    h = matmul(u, v)
    if len(piv) != n or any(h[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    # solve h w = I by forward substitution, then u^-1 = v w
    w = zeros(n, n)
    for c in range(n):
        for i in range(n):
            acc = int(i == c) - sum(h[i][k] * w[k][c] for k in range(i))
            w[i][c] = acc
    return matmul(v, w)
