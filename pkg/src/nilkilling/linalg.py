"""Exact rational linear algebra.

Matrices are numpy object arrays holding :class:`fractions.Fraction`.  The
nullspace of large sparse systems goes through a modular row reduction
(compiled kernel when available), rational reconstruction, and an exact
check of every reconstructed vector against every row; any failure falls
back to plain Gauss-Jordan over the rationals.
"""

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import kernels

PRIME = 2147483647  # 2**31 - 1; products of residues fit in int64
# further primes below 2**31 for Chinese remaindering
PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549,
          2147483543, 2147483497, 2147483489, 2147483477, 2147483423, 2147483399)


def frac(x):
    """Coerce ``x`` to a Fraction; floats are rejected to keep arithmetic exact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass a Fraction, int or 'p/q' string")
    return Fraction(x)


def as_matrix(m):
    arr = np.array(m, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = frac(v)
    return out


def as_vector(v):
    return tuple(frac(x) for x in v)


def zeros(rows, cols=None):
    cols = rows if cols is None else cols
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n):
    out = zeros(n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def is_zero_matrix(m):
    return all(v == 0 for v in np.asarray(m).flat)


def is_skew(m):
    m = np.asarray(m, dtype=object)
    return m.shape[0] == m.shape[1] and is_zero_matrix(m + m.T)


def is_symmetric(m):
    m = np.asarray(m, dtype=object)
    return m.shape[0] == m.shape[1] and is_zero_matrix(m - m.T)


def commutator(a, b):
    return a.dot(b) - b.dot(a)


def block_diag(*blocks):
    n = sum(b.shape[0] for b in blocks)
    out = zeros(n)
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def det(m):
    """Exact determinant by Gaussian elimination."""
    a = [list(map(frac, row)) for row in np.asarray(m, dtype=object)]
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        result *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return result


def inverse(m):
    m = as_matrix(m)
    n = m.shape[0]
    aug = [list(m[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return as_matrix([row[n:] for row in rows[:n]])


def leading_minors(m):
    m = as_matrix(m)
    return [det(m[:k, :k]) for k in range(1, m.shape[0] + 1)]


def rref(vectors):
    """Reduced row echelon form of a list of vectors.

    Returns ``(rows, pivots)`` with zero rows dropped; leading entries are 1.
    """
    rows = [list(map(frac, v)) for v in vectors]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def rank(vectors):
    return len(rref(vectors)[1])


def same_span(a, b):
    """Exact equality of the spans of two vector lists."""
    ra, rb = rref(a)[0], rref(b)[0]
    return ra == rb


def contains_span(big, small):
    return rank(list(big) + list(small)) == rank(big)


def column_space(m):
    """RREF basis (as vectors) of the column space of ``m``."""
    return rref(np.asarray(m, dtype=object).T.tolist())[0]


def is_perfect_square(q):
    q = frac(q)
    if q < 0:
        return False
    return isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def rational_sqrt(q):
    q = frac(q)
    if not is_perfect_square(q):
        raise ValueError(f"{q} is not the square of a rational")
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))


# -- sparse nullspace ---------------------------------------------------------

def _integerize(row):
    """Scale a sparse rational row ``{col: Fraction}`` to a primitive integer row."""
    items = [(j, frac(v)) for j, v in row.items() if v != 0]
    if not items:
        return None
    den = 1
    for _, v in items:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = {j: int(v * den) for j, v in items}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    return {j: v // g for j, v in ints.items()}


def rational_reconstruct(a, p=PRIME):
    """Recover ``n/d`` from ``a = n/d mod p`` with ``|n|, d <= sqrt(p/2)``; None if impossible."""
    a %= p
    bound = isqrt(p // 2)
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if (r1 - a * s1) % p:
        return None
    return Fraction(r1, s1)


def _lift(residues, pivots, ncols, modulus):
    """Nullspace basis from CRT-combined reduced entries, or None if reconstruction fails."""
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x = residues[i][f]
            if x:
                q = rational_reconstruct(-x % modulus, modulus)
                if q is None:
                    return None
                vec[pc] = q
        basis.append(tuple(vec))
    return basis


def _annihilates(int_rows, basis):
    for vec in basis:
        den = 1
        for v in vec:
            den = den * v.denominator // gcd(den, v.denominator)
        w = [int(v * den) for v in vec]
        for row in int_rows:
            if sum(c * w[j] for j, c in row.items()):
                return False
    return True


def _nullspace_exact(int_rows, ncols):
    rows, pivots = rref([[Fraction(row.get(j, 0)) for j in range(ncols)] for row in int_rows])
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            vec[pc] = -row[f]
        basis.append(tuple(vec))
    return basis


def nullspace(rows, ncols, backend=None):
    """Exact nullspace of a sparse rational system.

    ``rows`` is an iterable of ``{column: coefficient}`` mappings.  The
    returned basis has one vector per free column, equal to 1 there and 0 on
    the other free columns (the standard RREF nullspace basis).
    """
    int_rows = [r for r in (_integerize(row) for row in rows) if r is not None]
    if ncols == 0:
        return []
    if not int_rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    mat = np.zeros((len(int_rows), ncols), dtype=np.int64)
    for i, row in enumerate(int_rows):
        for j, v in row.items():
            mat[i, j] = v % PRIME
    backend = kernels.get_backend(backend)
    residues, modulus, pivots = None, 1, None
    for p in PRIMES:
        mat = np.zeros((len(int_rows), ncols), dtype=np.int64)
        for i, row in enumerate(int_rows):
            for j, v in row.items():
                mat[i, j] = v % p
        reduced, piv = backend.rref_mod_p(mat, p)
        if pivots is not None and piv != pivots:
            # a prime dividing a pivot minor gives a smaller rank; keep the larger one
            if len(piv) < len(pivots) or (len(piv) == len(pivots) and piv > pivots):
                continue
            residues, modulus = None, 1
        pivots = piv
        cur = [[int(x) for x in row] for row in reduced]
        if residues is None:
            residues, modulus = cur, p
        else:
            inv = pow(modulus, -1, p)
            residues = [
                [r + modulus * ((c - r) * inv % p) for r, c in zip(rrow, crow)]
                for rrow, crow in zip(residues, cur)
            ]
            modulus *= p
        basis = _lift(residues, pivots, ncols, modulus)
        if basis is not None and _annihilates(int_rows, basis):
            return basis
    return _nullspace_exact(int_rows, ncols)


def dense_rows(m):
    """Sparse-row view of a dense matrix, for :func:`nullspace`."""
    return [{j: v for j, v in enumerate(row) if v != 0} for row in np.asarray(m, dtype=object)]
