"""Exact integer linear algebra on small dense matrices.

Matrices are tuples of tuples of Python ints, so every computation is
arbitrary precision.  Everything here is sized for the tiny systems the
rest of the package produces (a few dozen rows at most); no attempt is
made to be fast on large inputs, and no modular shortcuts are taken.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


def mat(rows) -> IntMatrix:
    """Normalize an iterable of rows to an immutable integer matrix."""
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(row) != len(out[0]) for row in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> IntMatrix:
    return tuple((0,) * n for _ in range(m))


def shape(a: IntMatrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def transpose(a: IntMatrix) -> IntMatrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    m, k = shape(a)
    k2, n = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch: {m}x{k} times {k2}x{n}")
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: IntMatrix, v: IntVector) -> IntVector:
    if a and len(a[0]) != len(v):
        raise ValueError("shape mismatch")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def hstack(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if len(a) != len(b):
        raise ValueError("row count mismatch")
    return tuple(ra + rb for ra, rb in zip(a, b))


def columns(a: IntMatrix) -> tuple[IntVector, ...]:
    return transpose(a)


def from_columns(cols, nrows: int | None = None) -> IntMatrix:
    cols = tuple(tuple(c) for c in cols)
    if not cols:
        return zeros(nrows or 0, 0)
    return transpose(cols)


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (d, u, v) with u*a*v = d in Smith normal form.

    u and v are unimodular; d is diagonal with nonnegative entries and
    d[i][i] divides d[i+1][i+1].  Pivots are chosen by smallest absolute
    value (partial pivoting), and all arithmetic is exact.
    """
    m, n = shape(a)
    A = [list(row) for row in a]
    U = [list(row) for row in identity(m)]
    V = [list(row) for row in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        # pick the nonzero entry of smallest magnitude in the trailing block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = abs(A[i][j])
                if x != 0 and (best is None or x < best):
                    best = x
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])

        while True:
            # clear column t, repicking the pivot whenever a smaller
            # remainder appears
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot divides its row and column; enforce divisibility of
            # the rest of the block
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1

    return mat(A), mat(U), mat(V)


def diagonal(d: IntMatrix) -> tuple[int, ...]:
    m, n = shape(d)
    return tuple(d[i][i] for i in range(min(m, n)))


def invariant_factors(a: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form of a."""
    d, _, _ = smith_normal_form(a)
    return tuple(x for x in diagonal(d) if x != 0)


def rank(a: IntMatrix) -> int:
    return len(invariant_factors(a))


def kernel_basis(a: IntMatrix) -> tuple[IntVector, ...]:
    """Basis of the integer kernel {x : a @ x = 0}, as a tuple of vectors."""
    m, n = shape(a)
    if n == 0:
        return ()
    d, _, v = smith_normal_form(a)
    r = len(invariant_factors(a))
    cols = columns(v)
    return tuple(cols[j] for j in range(r, n))


def det_fraction(a: IntMatrix) -> Fraction:
    """Determinant by exact fraction-free-ish Gaussian elimination."""
    m, n = shape(a)
    if m != n:
        raise ValueError("determinant of a nonsquare matrix")
    rows = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    m, n = shape(a)
    if m != n:
        raise ValueError("inverse of a nonsquare matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = []
    for row in aug:
        tail = row[n:]
        if any(x.denominator != 1 for x in tail):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in tail])
    return mat(out)


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the lattice spanned by the columns of gens.

    Uses u*a*v = d: the column span equals u^{-1} * (columns of d), so a
    basis is u^{-1} applied to the nonzero columns of d.
    """
    m, n = shape(gens)
    if n == 0 or all(all(x == 0 for x in row) for row in gens):
        return zeros(m, 0)
    d, u, _ = smith_normal_form(gens)
    uinv = unimodular_inverse(u)
    r = len(invariant_factors(gens))
    cols = columns(mat_mul(uinv, d))
    return from_columns(cols[:r], m)


def preimage_lattice(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Basis (columns) of {x : a @ x lies in the column span of b}."""
    m, n = shape(a)
    mb, k = shape(b)
    if m != mb:
        raise ValueError("row count mismatch")
    if k == 0:
        return from_columns(kernel_basis(a), n)
    stacked = hstack(a, mat(tuple(tuple(-x for x in row) for row in b)))
    gens = [vec[:n] for vec in kernel_basis(stacked)]
    return lattice_basis(from_columns(gens, n))


def lattice_intersection(b: IntMatrix, c: IntMatrix) -> IntMatrix:
    """Basis (columns) of the intersection of two column lattices."""
    m, nb = shape(b)
    mc, nc = shape(c)
    if m != mc:
        raise ValueError("row count mismatch")
    if nb == 0 or nc == 0:
        return zeros(m, 0)
    stacked = hstack(b, mat(tuple(tuple(-x for x in row) for row in c)))
    gens = [mat_vec(b, vec[:nb]) for vec in kernel_basis(stacked)]
    return lattice_basis(from_columns(gens, m))


def in_column_span(b: IntMatrix, x: IntVector) -> bool:
    """Whether x is an integer combination of the columns of b."""
    m, n = shape(b)
    if len(x) != m:
        raise ValueError("length mismatch")
    if all(v == 0 for v in x):
        return True
    if n == 0:
        return False
    before = invariant_factors(b)
    after = invariant_factors(hstack(b, from_columns([x], m)))
    return before == after


def coordinates_in_basis(basis: IntMatrix, vectors: IntMatrix) -> IntMatrix:
    """Express each column of `vectors` in the given lattice basis.

    Solves basis @ X = vectors exactly over the rationals and insists the
    result is integral (i.e. every column really lies in the lattice).
    """
    m, k = shape(basis)
    mv, t = shape(vectors)
    if m != mv:
        raise ValueError("row count mismatch")
    if t == 0:
        return zeros(k, 0)
    if k == 0:
        if any(any(x != 0 for x in row) for row in vectors):
            raise ValueError("vector outside the zero lattice")
        return zeros(0, t)
    # exact least-structure solve: row reduce [basis | vectors]
    aug = [[Fraction(basis[i][j]) for j in range(k)]
           + [Fraction(vectors[i][j]) for j in range(t)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    # consistency: rows below r must be zero on the vector side
    for i in range(r, m):
        if any(aug[i][k + j] != 0 for j in range(t)):
            raise ValueError("vector outside the lattice")
    X = [[Fraction(0)] * t for _ in range(k)]
    for row_idx, c in enumerate(pivots):
        for j in range(t):
            X[c][j] = aug[row_idx][k + j]
    if any(x.denominator != 1 for row in X for x in row):
        raise ValueError("vector outside the lattice")
    return mat(tuple(tuple(int(x) for x in row) for row in X))


def quotient_group(big: IntMatrix, sub_gens: IntMatrix) -> tuple[int, tuple[int, ...]]:
    """Structure of (lattice spanned by big) / (sublattice spanned by sub_gens).

    Returns (free_rank, torsion) where torsion lists the invariant
    factors greater than 1.  Both arguments are column matrices; the
    columns of sub_gens must lie in the span of big.
    """
    m, k = shape(big)
    if k == 0:
        return (0, ())
    coords = coordinates_in_basis(big, sub_gens)
    facs = invariant_factors(coords)
    torsion = tuple(f for f in facs if f != 1)
    return (k - len(facs), torsion)


def minor_invariant_factors(a: IntMatrix) -> tuple[int, ...]:
    """Invariant factors via determinantal divisors (independent route).

    The k-th determinantal divisor is the gcd of all k x k minors; the
    k-th invariant factor is d_k / d_{k-1}.  Exponential in the matrix
    size, so only suitable as a cross-check on tiny matrices.
    """
    m, n = shape(a)
    facs = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows_idx in combinations(range(m), k):
            for cols_idx in combinations(range(n), k):
                sub = mat(tuple(tuple(a[i][j] for j in cols_idx) for i in rows_idx))
                g = gcd(g, int(det_fraction(sub)))
        if g == 0:
            break
        facs.append(g // prev)
        prev = g
    return tuple(facs)
