"""Orthogonal-ideal decomposition of metric nilpotent Lie algebras.

The flat factor is computed exactly as center intersected with the
orthogonal complement of the commutator.  The rest is split recursively along
kernels of elements of the commutant of {ad_x, ad_x^*}: such a kernel is
invariant under every ad_x, and so is its orthogonal complement.  Floating
point only proposes rational eigenvalues of self-adjoint commutant elements;
every split is an exact kernel and the final blocks are certified exactly.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from . import linalg
from .liealg import center, commutator_ideal, is_nilpotent

log = logging.getLogger(__name__)

EXACT = "exact-verified"
FLOAT = "float-discovered"


@dataclass
class DecompositionReport:
    flat_dim: int
    flat_basis: list
    ideals: list
    mode: str
    info: dict = field(default_factory=dict)

    @property
    def ideal_dims(self):
        return [len(b) for b in self.ideals]

    @property
    def blocks(self):
        """All blocks including the flat factor (when nonzero)."""
        return ([self.flat_basis] if self.flat_basis else []) + list(self.ideals)


def _mat(vectors, n):
    """n x m object matrix with the given vectors as columns."""
    out = linalg.zeros(n, len(vectors))
    for j, v in enumerate(vectors):
        for i in range(n):
            out[i, j] = v[i]
    return out


def flat_factor(alg):
    """Exact basis of z intersected with the orthogonal complement of [n, n]."""
    zb = center(alg)
    comm = commutator_ideal(alg)
    if not zb:
        return []
    g = alg.gram
    rows = []
    for c in comm:
        cg = np.array(c, dtype=object).dot(g)
        rows.append({i: cg.dot(np.array(z, dtype=object)) for i, z in enumerate(zb)})
    coeffs = linalg.nullspace(rows, len(zb))
    vecs = [tuple(sum(l * np.array(z, dtype=object) for l, z in zip(lam, zb))) for lam in coeffs]
    return linalg.rref(vecs)[0]


def orthogonal_complement(alg, vectors):
    g = alg.gram
    rows = []
    for v in vectors:
        vg = np.array(v, dtype=object).dot(g)
        rows.append({j: vg[j] for j in range(alg.dim) if vg[j]})
    return linalg.rref(linalg.nullspace(rows, alg.dim))[0] if rows else [
        tuple(Fraction(int(i == j)) for j in range(alg.dim)) for i in range(alg.dim)
    ]


def _restrict(ops, basis, gram):
    """Matrices of the operators restricted to the invariant column span of ``basis``."""
    h = basis.T.dot(gram).dot(basis)
    hinv = linalg.inverse(h)
    left = hinv.dot(basis.T).dot(gram)
    return [left.dot(m).dot(basis) for m in ops], h


def _commutant(ops, m):
    """Basis of {X : XM = MX for all M in ops} as m x m matrices."""
    rows = []
    for op in ops:
        # (XM - MX)[r, c] = sum_s X[r, s] M[s, c] - M[r, s] X[s, c]
        for r in range(m):
            for c in range(m):
                row = {}
                for s in range(m):
                    if op[s, c]:
                        key = r * m + s
                        row[key] = row.get(key, 0) + op[s, c]
                    if op[r, s]:
                        key = s * m + c
                        row[key] = row.get(key, 0) - op[r, s]
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    null = linalg.nullspace(rows, m * m)
    return [linalg.as_matrix(np.array(v, dtype=object).reshape(m, m)) for v in null]


def _self_adjoint_part(xs, h):
    hinv = linalg.inverse(h)
    sym = [x + hinv.dot(x.T).dot(h) for x in xs]
    flat = [tuple(s.flat) for s in sym]
    rows, _ = linalg.rref(flat)
    m = h.shape[0]
    return [linalg.as_matrix(np.array(r, dtype=object).reshape(m, m)) for r in rows]


def _to_float(m):
    return np.array([[float(v) for v in row] for row in m], dtype=float)


def _candidates(syms, rng, tries):
    """Self-adjoint commutant elements to try: basis, pairwise sums, then random combinations."""
    for s in syms:
        yield s
    for i in range(len(syms)):
        for j in range(i + 1, len(syms)):
            yield syms[i] + syms[j]
            yield syms[i] - syms[j]
    m = syms[0].shape[0]
    for t in range(tries):
        bound = 3 if t < tries // 2 else 97
        coeffs = [rng.randint(-bound, bound) for _ in syms]
        yield sum((c * s for c, s in zip(coeffs, syms)), linalg.zeros(m))


def _float_eigenvalues(s, h):
    hf = _to_float(h)
    linv = np.linalg.inv(np.linalg.cholesky(hf))
    t = linv.dot(hf.dot(_to_float(s))).dot(linv.T)
    return np.linalg.eigvalsh((t + t.T) / 2)


def _krylov_poly(s, rng):
    """Integer coefficients (low to high) of the minimal polynomial of ``s`` on a random vector."""
    m = s.shape[0]
    v = np.array([Fraction(rng.randint(-9, 9)) for _ in range(m)], dtype=object)
    krylov = [v]
    while True:
        cols = krylov + [s.dot(krylov[-1])]
        rows = [{j: c[i] for j, c in enumerate(cols) if c[i]} for i in range(m)]
        null = linalg.nullspace(rows, len(cols))
        if null:
            den = 1
            for c in null[0]:
                den = lcm(den, c.denominator)
            return [int(c * den) for c in null[0]]
        krylov.append(cols[-1])


def _integer_root(coeffs, start, steps=200):
    """Root n/L of the integer polynomial ``coeffs`` near ``start``, or None.

    Any rational root times the leading coefficient L is a root N of a monic
    integer polynomial, found here by Newton steps rounded to integers.
    """
    d = len(coeffs) - 1
    lead = coeffs[-1]
    q = [c * lead ** (d - 1 - k) for k, c in enumerate(coeffs[:-1])] + [1]
    dq = [k * c for k, c in enumerate(q)][1:]
    ev = lambda poly, x: sum(c * x**k for k, c in enumerate(poly))
    n = int(round(start * lead))
    for _ in range(steps):
        val = ev(q, n)
        if val == 0:
            return Fraction(n, lead)
        der = ev(dq, n)
        if der == 0:
            return None
        step = round(Fraction(val, der))
        if step == 0:
            step = 1 if val * der > 0 else -1
        n -= step
    return None


def _distinct(values, tol):
    """Representatives of float eigenvalue clusters (relative tolerance ``tol``)."""
    scale = max(1.0, float(np.max(np.abs(values))))
    out = []
    for x in sorted(values):
        if not out or x - out[-1] > tol * scale:
            out.append(float(x))
    return out


def _eigen_guesses(s, h, rng, tol):
    """Rational eigenvalue candidates for the h-self-adjoint matrix ``s``.

    With D the common denominator of ``s``, D*s is an integer matrix, so its
    rational eigenvalues are integers and rounding lam*D is exact while it fits
    a double.  Otherwise roots of a Krylov polynomial are refined exactly.
    """
    w = _distinct(_float_eigenvalues(s, h), tol)
    den = 1
    for v in s.flat:
        den = lcm(den, Fraction(v).denominator)
    if max(abs(x) for x in w) * den < 2.0**40:
        yield from sorted({Fraction(round(float(x) * den), den) for x in w})
        return
    coeffs = _krylov_poly(s, rng)
    seen = set()
    for x in w:
        mu = _integer_root(coeffs, float(x))
        if mu is not None and mu not in seen:
            seen.add(mu)
            yield mu


def _annihilator_split(comm, probes, m):
    """Kernel of a nonzero commutant element killing some probe vector, or None."""
    for v in probes:
        v = np.array(v, dtype=object)
        rows = [{j: x.dot(v)[r] for j, x in enumerate(comm)} for r in range(m)]
        for coeffs in linalg.nullspace(rows, len(comm)):
            x = sum((c * b for c, b in zip(coeffs, comm)), linalg.zeros(m))
            kernel = linalg.nullspace(linalg.dense_rows(x), m)
            if 0 < len(kernel) < m:
                return kernel
    return None


def _exact_split(comm, syms, h, probes, rng, tries, tol):
    """Proper invariant subspace found exactly, or None."""
    m = h.shape[0]
    kernel = _annihilator_split(comm, probes, m)
    if kernel is not None:
        return kernel
    for s in _candidates(syms, rng, tries):
        for mu in _eigen_guesses(s, h, rng, tol):
            shifted = s - mu * linalg.identity(m)
            kernel = linalg.nullspace(linalg.dense_rows(shifted), m)
            if 0 < len(kernel) < m:
                return kernel
    return None


def _probes(ops, m):
    """Rational test vectors in block coordinates: joint kernel of ad, then basis vectors."""
    rows = [r for op in ops for r in linalg.dense_rows(op)]
    out = list(linalg.nullspace(rows, m))
    out += [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]
    return out


def _refine(ad_ops, gram, basis, rng, tries, tol, info):
    m = basis.shape[1]
    if m <= 1:
        return [basis]
    ops, h = _restrict(ad_ops, basis, gram)
    hinv = linalg.inverse(h)
    family = ops + [hinv.dot(op.T).dot(h) for op in ops]
    comm = _commutant(family, m)
    syms = _self_adjoint_part(comm, h)
    if len(syms) <= 1:
        return [basis]
    kernel = _exact_split(comm, syms, h, _probes(ops, m), rng, tries, tol)
    if kernel is None:
        info.setdefault("non_maximal", []).append(m)
        log.warning("commutant of a %d-dim block is not scalar but no rational split was found", m)
        return [basis]
    # h-orthogonal complement of the kernel inside the block
    kh = _mat(kernel, m).T.dot(h)
    comp = linalg.nullspace(linalg.dense_rows(kh), m)
    out = []
    for part in (kernel, comp):
        sub = basis.dot(_mat(part, m))
        out.extend(_refine(ad_ops, gram, sub, rng, tries, tol, info))
    return out


def _is_abelian_block(alg, vectors):
    return all(not any(alg.bracket(a, b)) for i, a in enumerate(vectors) for b in vectors[i + 1:])


def decompose(alg, tol=1e-9, seed=0, tries=200):
    """Split ``alg`` into a flat factor and irreducible orthogonal ideals.

    ``tol`` is the relative gap below which float eigenvalues are treated as
    one; ``seed`` fixes the random commutant elements.
    """
    n = alg.dim
    info = {"nilpotent": is_nilpotent(alg)}
    if not info["nilpotent"]:
        log.warning("%r is not nilpotent; the decomposition is not certified", alg)
    flat = flat_factor(alg)
    rest = orthogonal_complement(alg, flat) if flat else [
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    ]
    ideals = []
    mode = EXACT
    if rest:
        ad_ops = [alg.ad_basis(i) for i in range(n)]
        rng = random.Random(seed)
        blocks = _refine(ad_ops, alg.gram, _mat(rest, n), rng, tries, tol, info)
        for b in blocks:
            vecs = linalg.rref([tuple(b[:, j]) for j in range(b.shape[1])])[0]
            if _is_abelian_block(alg, vecs):
                flat = linalg.rref(list(flat) + list(vecs))[0]
            else:
                ideals.append(vecs)
    ideals.sort(key=lambda b: (len(b), [tuple(-abs(x) for x in v) for v in b]))
    report = DecompositionReport(len(flat), list(flat), ideals, mode, info)
    if not (info["nilpotent"] and "non_maximal" not in info and verify_decomposition(alg, report.blocks)):
        report.mode = FLOAT
        report.info["residual_norm"] = _residual_norm(alg, report.blocks)
    return report


def _residual_norm(alg, blocks):
    """Largest float distance of ad_x(block) from the block, over basis x and blocks."""
    n = alg.dim
    ops = [_to_float(alg.ad_basis(i)) for i in range(n)]
    worst = 0.0
    for blk in blocks:
        b = _to_float(_mat(blk, n))
        for op in ops:
            img = op.dot(b)
            coef, *_ = np.linalg.lstsq(b, img, rcond=None)
            worst = max(worst, float(np.linalg.norm(b.dot(coef) - img)))
    return worst


def verify_decomposition(alg, blocks):
    """Exact check that ``blocks`` are pairwise orthogonal ideals summing to the algebra."""
    n = alg.dim
    blocks = [[linalg.as_vector(v) for v in b] for b in blocks if len(b)]
    allv = [v for b in blocks for v in b]
    if len(allv) != n or linalg.rank(allv) != n:
        return False
    g = alg.gram
    arrs = [[np.array(v, dtype=object) for v in b] for b in blocks]
    for i in range(len(arrs)):
        for j in range(i + 1, len(arrs)):
            for a in arrs[i]:
                ag = a.dot(g)
                if any(ag.dot(b) != 0 for b in arrs[j]):
                    return False
    unit = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    for b in blocks:
        r = linalg.rank(b)
        for e in unit:
            for v in b:
                w = alg.bracket(e, v)
                if any(w) and linalg.rank(b + [w]) != r:
                    return False
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            for a in blocks[i]:
                for b in blocks[j]:
                    if any(alg.bracket(a, b)):
                        return False
    return True


def is_irreducible(alg, **kwargs):
    report = decompose(alg, **kwargs)
    return report.flat_dim == 0 and len(report.ideals) == 1


def block_algebra(alg, basis, name=None):
    """The ideal spanned by ``basis`` as a metric Lie algebra in that basis (restricted gram)."""
    from .liealg import MetricLieAlgebra

    b = _mat([linalg.as_vector(v) for v in basis], alg.dim)
    m = b.shape[1]
    h = b.T.dot(alg.gram).dot(b)
    left = linalg.inverse(h).dot(b.T).dot(alg.gram)
    brackets = {}
    for i in range(m):
        for j in range(i + 1, m):
            w = alg.bracket(tuple(b[:, i]), tuple(b[:, j]))
            if any(w):
                coords = left.dot(np.array(w, dtype=object))
                brackets[(i, j)] = {k: coords[k] for k in range(m) if coords[k]}
    return MetricLieAlgebra([f"b{i + 1}" for i in range(m)], brackets, h, name)
