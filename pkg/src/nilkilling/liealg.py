"""Metric Lie algebras: validation, structural subspaces, Levi-Civita
connection, Lie algebra differential and the j-maps of 2-step algebras."""

from collections import namedtuple
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from . import linalg
from .exterior import ExteriorForm, bits, contract_basis, wedge
from .linalg import as_matrix, frac, identity, zeros


class NonRationalNormError(ValueError):
    """Exact orthonormalization needs a square root that is not rational."""


class NotTwoStepError(ValueError):
    pass


Violation = namedtuple("Violation", "kind detail")


class MetricLieAlgebra:
    """Structure constants plus an inner product on a finite-dimensional Lie algebra.

    ``brackets`` maps index pairs ``(i, j)`` to ``{k: c}`` meaning
    [e_i, e_j] = sum_k c e_k.  Only one ordering of each pair needs to be
    stored; the other is implied by antisymmetry.  Both orderings may be
    given (a spec file may do so), in which case :func:`validate` checks they
    agree.
    """

    def __init__(self, names, brackets, gram=None, name=None):
        self.names = tuple(names)
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("basis names must be distinct")
        self.dim = n
        self.gram = identity(n) if gram is None else as_matrix(gram)
        if self.gram.shape != (n, n):
            raise ValueError(f"gram shape {self.gram.shape} does not match dim {n}")
        clean = {}
        for (i, j), targets in brackets.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"bracket index out of range: {(i, j)}")
            row = {k: frac(c) for k, c in targets.items() if frac(c) != 0}
            for k in row:
                if not 0 <= k < n:
                    raise ValueError(f"bracket target out of range: {k}")
            if row:
                clean[(i, j)] = row
        self.brackets = clean
        self.name = name
        self._cache = {}

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<MetricLieAlgebra{label} dim={self.dim}>"

    @classmethod
    def from_named(cls, names, brackets, gram=None, name=None):
        """Build from ``{("e1", "e2"): {"z1": 1}}`` style brackets."""
        pos = {b: i for i, b in enumerate(names)}
        raw = {(pos[a], pos[b]): {pos[k]: c for k, c in t.items()} for (a, b), t in brackets.items()}
        return cls(names, raw, gram, name)

    def index(self, name):
        return self.names.index(name)

    def bracket_basis(self, i, j):
        """[e_i, e_j] as a sparse dict."""
        if i == j:
            return {}
        if (i, j) in self.brackets and (i < j or (j, i) not in self.brackets):
            return self.brackets[(i, j)]
        if (j, i) in self.brackets:
            return {k: -c for k, c in self.brackets[(j, i)].items()}
        return self.brackets.get((i, j), {})

    @property
    def structure(self):
        """Dense tensor c[i, j, k] with [e_i, e_j] = sum_k c[i, j, k] e_k."""
        if "structure" not in self._cache:
            n = self.dim
            c = np.empty((n, n, n), dtype=object)
            c.fill(Fraction(0))
            for i in range(n):
                for j in range(n):
                    for k, v in self.bracket_basis(i, j).items():
                        c[i, j, k] = v
            self._cache["structure"] = c
        return self._cache["structure"]

    def bracket(self, x, y):
        x, y = linalg.as_vector(x), linalg.as_vector(y)
        c = self.structure
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                w = x[i] * y[j]
                for k in range(n):
                    if c[i, j, k]:
                        out[k] += w * c[i, j, k]
        return tuple(out)

    def ad(self, x):
        """Matrix of ad_x (column j is [x, e_j])."""
        x = linalg.as_vector(x)
        n = self.dim
        m = zeros(n)
        c = self.structure
        for i in range(n):
            if x[i]:
                m = m + x[i] * c[i].T
        return m

    def ad_basis(self, i):
        if ("ad", i) not in self._cache:
            self._cache[("ad", i)] = self.structure[i].T.copy()
        return self._cache[("ad", i)]

    def inner(self, x, y):
        x, y = linalg.as_vector(x), linalg.as_vector(y)
        g = self.gram
        return sum((x[a] * g[a, b] * y[b] for a in range(self.dim) for b in range(self.dim) if x[a] and y[b]), Fraction(0))

    def is_orthonormal(self):
        return linalg.is_zero_matrix(self.gram - identity(self.dim))


# -- validation ---------------------------------------------------------------

def validate(alg):
    """List of violations (antisymmetry, Jacobi, gram); empty means valid."""
    out = []
    n = alg.dim
    for (i, j), t in sorted(alg.brackets.items()):
        a, b = alg.names[i], alg.names[j]
        if i == j:
            out.append(Violation("antisymmetry", f"[{a},{a}] must vanish"))
        elif i < j and (j, i) in alg.brackets:
            other = alg.brackets[(j, i)]
            keys = set(t) | set(other)
            if any(t.get(k, 0) != -other.get(k, 0) for k in keys):
                out.append(Violation("antisymmetry", f"c({a},{b}) != -c({b},{a})"))
    c = alg.structure
    for i, j, k in combinations(range(n), 3):
        total = [Fraction(0)] * n
        for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
            inner = c[b, d]
            for m in range(n):
                if inner[m]:
                    for t in range(n):
                        if c[a, m, t]:
                            total[t] += inner[m] * c[a, m, t]
        if any(total):
            names = ", ".join(alg.names[x] for x in (i, j, k))
            out.append(Violation("jacobi", f"Jacobi identity fails on ({names})"))
    g = alg.gram
    if not linalg.is_symmetric(g):
        out.append(Violation("gram-symmetry", "gram matrix is not symmetric"))
    else:
        for k, minor in enumerate(linalg.leading_minors(g), 1):
            if minor <= 0:
                out.append(Violation("gram-positivity", f"leading minor {k} is {minor}"))
                break
    return out


def is_valid(alg):
    return not validate(alg)


# -- structural subspaces -------------------------------------------------------

def center(alg):
    """RREF basis of the center."""
    n = alg.dim
    c = alg.structure
    rows = [{j: c[i, j, k] for j in range(n) if c[i, j, k]} for i in range(n) for k in range(n)]
    return linalg.rref(linalg.nullspace(rows, n))[0]


def commutator_ideal(alg):
    n = alg.dim
    vecs = [alg.bracket_basis(i, j) for i in range(n) for j in range(i + 1, n)]
    return linalg.rref([[v.get(k, 0) for k in range(n)] for v in vecs if v])[0]


def lower_central_series(alg, max_terms=None):
    """Dimensions-ordered list of RREF bases n^1 = n, n^2 = [n, n], ... until it stabilizes."""
    n = alg.dim
    series = [linalg.rref([tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)])[0]]
    while series[-1]:
        prev = series[-1]
        nxt = [alg.bracket(tuple(Fraction(int(i == j)) for j in range(n)), v) for i in range(n) for v in prev]
        nxt = linalg.rref([v for v in nxt if any(v)])[0]
        series.append(nxt)
        if len(nxt) == len(prev) or (max_terms and len(series) >= max_terms):
            break
    return series


def nilpotency_class(alg):
    """Nilpotency class, or None when the algebra is not nilpotent."""
    series = lower_central_series(alg)
    if series[-1]:
        return None
    return len(series) - 1


def is_nilpotent(alg):
    return nilpotency_class(alg) is not None


def is_two_step(alg):
    comm = commutator_ideal(alg)
    return bool(comm) and linalg.contains_span(center(alg), comm)


# -- change of basis ------------------------------------------------------------

def rebase(alg, basis, names=None, name=None):
    """The same algebra written in the basis given by the columns of ``basis``."""
    p = as_matrix(basis)
    pinv = linalg.inverse(p)
    n = alg.dim
    cols = [tuple(p[:, a]) for a in range(n)]
    brackets = {}
    for a in range(n):
        for b in range(a + 1, n):
            w = alg.bracket(cols[a], cols[b])
            if any(w):
                coords = pinv.dot(np.array(w, dtype=object))
                brackets[(a, b)] = {k: coords[k] for k in range(n) if coords[k]}
    gram = p.T.dot(alg.gram).dot(p)
    return MetricLieAlgebra(names or alg.names, brackets, gram, name or alg.name)


def _gram_schmidt(alg, candidates):
    """Exact Gram-Schmidt; drops dependent candidates, raises on irrational norms."""
    g = alg.gram
    basis = []
    for v in candidates:
        u = np.array(v, dtype=object)
        for f in basis:
            u = u - f * (u.dot(g).dot(f))
        norm2 = u.dot(g).dot(u)
        if norm2 == 0:
            continue
        if not linalg.is_perfect_square(norm2):
            raise NonRationalNormError(
                f"norm^2 = {norm2} is not a rational square; exact orthonormalization is impossible"
            )
        basis.append(u / linalg.rational_sqrt(norm2))
    return basis


def _small_combos(m, bound):
    """Integer coefficient vectors of length m, by increasing max-norm."""
    for h in range(1, bound + 1):
        for c in product(range(-h, h + 1), repeat=m):
            if max(map(abs, c)) == h and next(x for x in c if x) > 0:
                yield c


_SEARCH_BOUNDS = {1: 0, 2: 12, 3: 8, 4: 4}


def _rational_unit_basis(alg, vectors):
    """Orthonormal basis of span(vectors) with rational entries.

    Gram-Schmidt first; if a norm is irrational, search small integer
    combinations for a vector of square norm and recurse on its complement.
    The search is only attempted in dimension <= 4.
    """
    try:
        return _gram_schmidt(alg, vectors)
    except NonRationalNormError:
        bound = _SEARCH_BOUNDS.get(len(vectors), 0)
        if not bound:
            raise
    g = alg.gram
    rows = [np.array(v, dtype=object) for v in vectors]
    for c in _small_combos(len(rows), bound):
        u = sum((ci * r for ci, r in zip(c, rows) if ci), np.zeros(alg.dim, dtype=object))
        norm2 = u.dot(g).dot(u)
        if norm2 and linalg.is_perfect_square(norm2):
            u = u / linalg.rational_sqrt(norm2)
            rest = [r - u * (r.dot(g).dot(u)) for r in rows]
            keep = list(linalg.rref([tuple(r) for r in rest])[0])
            return [u] + _rational_unit_basis(alg, keep)
    raise NonRationalNormError("no rational orthonormal basis found by small search")


def orthonormalize(alg):
    """Return ``(orthonormal algebra, P)``; columns of P are the new basis in old coordinates.

    Raises :class:`NonRationalNormError` when no rational orthonormal basis
    is found.
    """
    n = alg.dim
    if alg.is_orthonormal():
        return alg, identity(n)
    basis = _rational_unit_basis(alg, [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)])
    p = as_matrix(np.array(basis, dtype=object).T)
    return rebase(alg, p), p


def ad_star(alg, x):
    """Adjoint of ad_x with respect to the inner product: G^-1 ad_x^T G."""
    g = alg.gram
    return linalg.inverse(g).dot(alg.ad(x).T).dot(g)


# -- Levi-Civita connection -----------------------------------------------------

class ConnectionTable:
    """``table[i, j]`` holds the coordinates of nabla_{e_i} e_j."""

    def __init__(self, alg, table):
        self.alg = alg
        self.table = table

    def vector(self, i, j):
        return tuple(self.table[i, j])

    def endo(self, i):
        """Matrix of x -> nabla_{e_i} x (column j is nabla_{e_i} e_j)."""
        return self.table[i].T.copy()

    def endo_along(self, y):
        y = linalg.as_vector(y)
        out = zeros(self.alg.dim)
        for i, c in enumerate(y):
            if c:
                out = out + c * self.endo(i)
        return out

    def torsion_violations(self):
        n = self.alg.dim
        c = self.alg.structure
        bad = []
        for i in range(n):
            for j in range(n):
                if any(self.table[i, j, k] - self.table[j, i, k] - c[i, j, k] for k in range(n)):
                    bad.append((i, j))
        return bad

    def metric_violations(self):
        g = self.alg.gram
        n = self.alg.dim
        bad = []
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.table[i, j].dot(g[:, k]) + g[j].dot(self.table[i, k]):
                        bad.append((i, j, k))
        return bad


def levi_civita(alg):
    """nabla_x y = 1/2 ([x, y] - ad_x^* y - ad_y^* x) on basis vectors."""
    if "levi_civita" in alg._cache:
        return alg._cache["levi_civita"]
    n = alg.dim
    ginv = linalg.inverse(alg.gram)
    g = alg.gram
    stars = [ginv.dot(alg.ad_basis(i).T).dot(g) for i in range(n)]
    c = alg.structure
    table = np.empty((n, n, n), dtype=object)
    half = Fraction(1, 2)
    for i in range(n):
        for j in range(n):
            table[i, j] = half * (c[i, j] - stars[i][:, j] - stars[j][:, i])
    conn = ConnectionTable(alg, table)
    alg._cache["levi_civita"] = conn
    return conn


# -- 2-step data -----------------------------------------------------------------

class TwoStepData:
    """Orthogonal split n = v + z (z the center) and the maps j(z_t) on v.

    ``algebra`` is orthonormal and adapted: each of ``v_idx`` / ``z_idx`` is
    a list of basis indices.  ``jmaps[t]`` acts on coordinates ordered as
    ``v_idx``.  ``basis_change`` is the matrix from the input algebra to
    ``algebra`` (None when no change was needed).
    """

    def __init__(self, algebra, v_idx, z_idx, jmaps, basis_change=None):
        self.algebra = algebra
        self.v_idx = list(v_idx)
        self.z_idx = list(z_idx)
        self.jmaps = list(jmaps)
        self.basis_change = basis_change

    @property
    def dim_v(self):
        return len(self.v_idx)

    @property
    def dim_z(self):
        return len(self.z_idx)

    def jmap_full(self, t):
        """j(z_t) extended by zero on the center, as an n x n matrix."""
        n = self.algebra.dim
        m = zeros(n)
        jt = self.jmaps[t]
        for a, ia in enumerate(self.v_idx):
            for b, ib in enumerate(self.v_idx):
                m[ia, ib] = jt[a, b]
        return m

    def jmap_of(self, z):
        """j(z) for z given by coordinates along ``z_idx``."""
        out = zeros(self.dim_v)
        for t, c in enumerate(z):
            if c:
                out = out + frac(c) * self.jmaps[t]
        return out


def _adapted_basis(alg, zbasis):
    """Orthonormal basis (V part, then Z part) for an orthonormal ``alg``.

    Z is orthonormalized by Gram-Schmidt; its complement comes from
    composed Householder reflections, which stay rational whenever the
    Z vectors are rational unit vectors.
    """
    n = alg.dim
    zs = _rational_unit_basis(alg, zbasis)
    q = identity(n)
    for t, z in enumerate(zs):
        w = q.T.dot(z)
        u = w.copy()
        u[t] -= 1
        uu = u.dot(u)
        if uu:
            q = q - (q.dot(u.reshape(n, 1))).dot(u.reshape(1, n)) * (Fraction(2) / uu)
    m = len(zs)
    cols = [q[:, j] for j in range(m, n)] + [q[:, j] for j in range(m)]
    return as_matrix(np.array(cols, dtype=object).T), n - m


def two_step_data(alg):
    if not alg.is_orthonormal():
        alg, _ = orthonormalize(alg)
    if not is_two_step(alg):
        raise NotTwoStepError("algebra is not 2-step nilpotent")
    zbasis = center(alg)
    n = alg.dim
    aligned = all(sum(1 for x in v if x) == 1 for v in zbasis)
    change = None
    if aligned:
        z_idx = sorted(next(i for i, x in enumerate(v) if x) for v in zbasis)
        v_idx = [i for i in range(n) if i not in z_idx]
        work = alg
    else:
        change, nv = _adapted_basis(alg, zbasis)
        names = [f"e{i + 1}" for i in range(nv)] + [f"z{i + 1}" for i in range(n - nv)]
        work = rebase(alg, change, names=names)
        v_idx, z_idx = list(range(nv)), list(range(nv, n))
    c = work.structure
    jmaps = []
    for zt in z_idx:
        j = zeros(len(v_idx))
        for a, ia in enumerate(v_idx):
            for b, ib in enumerate(v_idx):
                j[a, b] = c[ib, ia, zt]
        jmaps.append(j)
    return TwoStepData(work, v_idx, z_idx, jmaps, change)


def check_effective(data):
    """True iff the j-maps have trivial joint kernel."""
    nv = data.dim_v
    rows = []
    for j in data.jmaps:
        rows.extend(linalg.dense_rows(j))
    return not linalg.nullspace(rows, nv) if nv else True


# -- Lie algebra differential ----------------------------------------------------

def _d_generator(alg, k):
    """d of the 1-form dual to e_k: -sum_{i<j} c_ij^k e_i ^ e_j."""
    n = alg.dim
    c = alg.structure
    return ExteriorForm(n, 2, {(1 << i) | (1 << j): -c[i, j, k] for i in range(n) for j in range(i + 1, n)})


def _d_monomial(alg, mask):
    cache = alg._cache.setdefault("d", {})
    if mask in cache:
        return cache[mask]
    n = alg.dim
    idx = bits(mask)
    if not idx:
        out = ExteriorForm.zero(n, 1)
    elif len(idx) == 1:
        out = _d_generator(alg, idx[0])
    else:
        first = ExteriorForm.basis(n, idx[0])
        rest_mask = mask ^ (1 << idx[0])
        rest = ExteriorForm(n, len(idx) - 1, {rest_mask: 1})
        out = wedge(_d_generator(alg, idx[0]), rest) - wedge(first, _d_monomial(alg, rest_mask))
    cache[mask] = out
    return out


def lie_differential(alg, a):
    """Chevalley-Eilenberg differential with (d xi)(x, y) = -xi([x, y]).

    Forms are identified with multivectors through the (orthonormal) metric.
    """
    if not alg.is_orthonormal():
        raise ValueError("lie_differential needs an orthonormal basis; call orthonormalize first")
    out = ExteriorForm.zero(alg.dim, a.degree + 1)
    for mask, c in a.coeffs.items():
        out = out + c * _d_monomial(alg, mask)
    return out


def direct_sum(alg1, alg2, name=None):
    """Orthogonal direct sum with block-diagonal gram and brackets."""
    n1 = alg1.dim
    names1 = list(alg1.names)
    names2 = list(alg2.names)
    if set(names1) & set(names2):
        names1 = [f"{x}_1" for x in names1]
        names2 = [f"{x}_2" for x in names2]
    brackets = dict(alg1.brackets)
    for (i, j), t in alg2.brackets.items():
        brackets[(i + n1, j + n1)] = {k + n1: c for k, c in t.items()}
    gram = linalg.block_diag(alg1.gram, alg2.gram)
    label = name or (f"{alg1.name}+{alg2.name}" if alg1.name and alg2.name else None)
    return MetricLieAlgebra(names1 + names2, brackets, gram, label)


def contract_pair(i, j, a):
    """e_i contracted into (e_j contracted into a)."""
    return contract_basis(i, contract_basis(j, a))
