"""Example algebras: Heisenberg, two-center, free 2-step, sums, random instances."""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from . import linalg
from .liealg import MetricLieAlgebra, direct_sum, rebase, validate
from .linalg import as_matrix, block_diag, identity, zeros


def J():
    """Rotation of R^2 with J e1 = e2."""
    return as_matrix([[0, -1], [1, 0]])


def _skew_brackets(maps, nv):
    """Brackets [e_a, e_b] = sum_t g(A_t e_a, e_b) z_t with z_t stored after v."""
    brackets = {}
    for a in range(nv):
        for b in range(a + 1, nv):
            t = {nv + s: m[b, a] for s, m in enumerate(maps) if m[b, a] != 0}
            if t:
                brackets[(a, b)] = t
    return brackets


def heisenberg(a, name=None):
    """v = R^{2n} plus one central z1 with g(z1, [x, y]) = g(Ax, y)."""
    a = as_matrix(a)
    n = a.shape[0]
    if not linalg.is_skew(a):
        raise ValueError("heisenberg needs a skew matrix")
    if n % 2 or linalg.det(a) == 0:
        raise ValueError("heisenberg needs an invertible skew matrix")
    names = [f"e{i + 1}" for i in range(n)] + ["z1"]
    return MetricLieAlgebra(names, _skew_brackets([a], n), name=name or f"h{n + 1}")


def h3():
    return heisenberg(J(), name="h3")


def h5():
    """Heisenberg h5 with A = J + 2J (anisotropic metric)."""
    return heisenberg(block_diag(J(), 2 * J()), name="h5")


def two_center(a1, a2, name=None):
    """v plus span{z1, z2} with j(z1) = A1, j(z2) = A2."""
    a1, a2 = as_matrix(a1), as_matrix(a2)
    if a1.shape != a2.shape or not (linalg.is_skew(a1) and linalg.is_skew(a2)):
        raise ValueError("two_center needs two skew maps of the same size")
    n = a1.shape[0]
    if linalg.nullspace(linalg.dense_rows(a1) + linalg.dense_rows(a2), n):
        raise ValueError("A1 and A2 have a common kernel vector")
    names = [f"e{i + 1}" for i in range(n)] + ["z1", "z2"]
    return MetricLieAlgebra(names, _skew_brackets([a1, a2], n), name=name)


def quaternionic_pair():
    """Left multiplication by i and j on H = R^4 (basis 1, i, j, k)."""
    li = as_matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    lj = as_matrix([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
    return li, lj


def quaternionic():
    return two_center(*quaternionic_pair(), name="quaternionic")


def free_two_step(m):
    """v = R^m, center Lambda^2 R^m, [e_a, e_b] = z_ab."""
    if m < 2:
        raise ValueError("free_two_step needs m >= 2")
    pairs = list(combinations(range(m), 2))
    names = [f"e{i + 1}" for i in range(m)] + [f"z{a + 1}{b + 1}" for a, b in pairs]
    brackets = {(a, b): {m + t: 1} for t, (a, b) in enumerate(pairs)}
    return MetricLieAlgebra(names, brackets, name=f"free2step{m}")


def free_three_step():
    """Free 3-step nilpotent algebra on two generators (dim 5)."""
    names = ["e1", "e2", "e3", "e4", "e5"]
    brackets = {(0, 1): {2: 1}, (0, 2): {3: 1}, (1, 2): {4: 1}}
    return MetricLieAlgebra(names, brackets, name="free3step2")


def abelian(n):
    return MetricLieAlgebra([f"x{i + 1}" for i in range(n)], {}, name=f"abelian{n}")


def sum_of(*algs, name=None):
    out = algs[0]
    for a in algs[1:]:
        out = direct_sum(out, a)
    if name:
        out.name = name
    return out


# -- random instances ---------------------------------------------------------------

_MAX_DRAWS = 10000


def _rng(seed):
    return random.Random(seed)


def random_rational(rng):
    """Numerator in [-3, 3], denominator in {1, 2}."""
    return Fraction(rng.randint(-3, 3), rng.choice((1, 2)))


def random_skew(n, rng):
    m = zeros(n)
    for i in range(n):
        for j in range(i + 1, n):
            c = random_rational(rng)
            m[j, i] = c
            m[i, j] = -c
    return m


def random_invertible_skew(n, seed):
    if n % 2:
        raise ValueError("odd-size skew matrices are singular")
    rng = _rng(seed)
    while True:
        m = random_skew(n, rng)
        if linalg.det(m) != 0:
            return m


def random_nondegenerate_form(n, seed):
    from .exterior import form_from_endo

    return form_from_endo(random_invertible_skew(n, seed))


def _independent(maps):
    return linalg.rank([tuple(m.flat) for m in maps]) == len(maps)


def random_skew_family(dim_v, count, seed):
    """``count`` random skew maps on R^dim_v, linearly independent, with trivial joint kernel."""
    if count > comb(dim_v, 2):
        raise ValueError(f"{count} independent skew maps do not exist on R^{dim_v}")
    if count == 1 and dim_v % 2:
        raise ValueError("a single skew map on an odd-dimensional space always has a kernel")
    rng = _rng(seed)
    for _ in range(_MAX_DRAWS):
        maps = [random_skew(dim_v, rng) for _ in range(count)]
        rows = [r for m in maps for r in linalg.dense_rows(m)]
        if _independent(maps) and not linalg.nullspace(rows, dim_v):
            return maps
    raise RuntimeError(f"no admissible family found in {_MAX_DRAWS} draws")


def random_two_step(dim_v, dim_z, seed):
    """Random 2-step algebra with center exactly span{z_t} = commutator."""
    if dim_z < 1:
        raise ValueError("need at least one central direction")
    maps = random_skew_family(dim_v, dim_z, seed)
    names = [f"e{i + 1}" for i in range(dim_v)] + [f"z{t + 1}" for t in range(dim_z)]
    return MetricLieAlgebra(names, _skew_brackets(maps, dim_v), name=f"random2step({dim_v},{dim_z},{seed})")


def random_two_center_pair(dim_v, seed, irreducible=True):
    """Random (A1, A2) with trivial joint kernel; optionally resampled until irreducible."""
    from .decompose import is_irreducible

    s = seed
    while True:
        a1, a2 = random_skew_family(dim_v, 2, s)
        if not irreducible or is_irreducible(two_center(a1, a2)):
            return a1, a2
        s += 10007


def random_images_span_pair(dim_v, seed):
    """Random skew (A1, A2) with Im A1 + Im A2 = R^dim_v."""
    from .killing import images_span

    rng = _rng(seed)
    while True:
        a1, a2 = random_skew(dim_v, rng), random_skew(dim_v, rng)
        if images_span(a1, a2):
            return a1, a2


def cayley_orthogonal(n, seed):
    """Rational orthogonal matrix (I - S)(I + S)^-1 from a random skew S."""
    rng = _rng(seed)
    s = random_skew(n, rng)
    i = identity(n)
    return (i - s).dot(linalg.inverse(i + s))


_TRIPLES = ((3, 4, 5), (5, 12, 13), (8, 15, 17))


def rational_rotation(n, seed, planes=None):
    """Random permutation composed with rotations by Pythagorean angles in random planes.

    Keeps denominators small (products of 5, 13, 17), unlike a Cayley transform.
    """
    rng = _rng(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    q = zeros(n)
    for i, p in enumerate(perm):
        q[p, i] = Fraction(1)
    for _ in range(planes if planes is not None else n):
        a, b = rng.sample(range(n), 2)
        x, y, r = rng.choice(_TRIPLES)
        c, s = Fraction(x, r), Fraction(y, r)
        g = identity(n)
        g[a, a], g[a, b], g[b, a], g[b, b] = c, -s, s, c
        q = g.dot(q)
    return q


def rotated(alg, seed):
    """``alg`` in the orthonormal basis given by a random rational rotation."""
    q = rational_rotation(alg.dim, seed)
    return rebase(alg, q, names=[f"f{i + 1}" for i in range(alg.dim)], name=f"{alg.name}@rot{seed}")


# -- named entries ------------------------------------------------------------------

@dataclass
class CatalogEntry:
    """A named example with expected dimension tables.

    ``killing``/``parallel`` are per-degree lists; ``provenance`` tags each
    table ("theorem", "trivial", "computed").
    """

    name: str
    build: object
    killing: list = None
    parallel: list = None
    provenance: dict = field(default_factory=dict)
    irreducible: bool = None
    two_step: bool = None

    def algebra(self):
        alg = self.build()
        alg.name = self.name
        return alg


def _heis_table(dim):
    return [1] + [1 if k % 2 else 0 for k in range(1, dim + 1)]


def _end_table(dim):
    return [1] + [0] * (dim - 1) + [1]


ENTRIES = {
    "h3": CatalogEntry(
        "h3", h3, _heis_table(3), _end_table(3), {"killing": "theorem", "parallel": "theorem"}, True, True
    ),
    "h5": CatalogEntry(
        "h5", h5, _heis_table(5), _end_table(5), {"killing": "theorem", "parallel": "theorem"}, True, True
    ),
    "quaternionic": CatalogEntry(
        "quaternionic", quaternionic, None, _end_table(6), {"parallel": "theorem"}, True, True
    ),
    "h3_plus_h3": CatalogEntry(
        "h3_plus_h3", lambda: sum_of(h3(), h3()), [1, 2, 0, 2, 0, 0, 1], [1, 0, 0, 2, 0, 0, 1],
        {"killing": "theorem", "parallel": "computed"}, False, True,
    ),
    "h3_plus_r2": CatalogEntry(
        "h3_plus_r2", lambda: sum_of(h3(), abelian(2)), None, None, {}, False, True
    ),
    "abelian3": CatalogEntry("abelian3", lambda: abelian(3), [1, 3, 3, 1], [1, 3, 3, 1],
                             {"killing": "trivial", "parallel": "trivial"}, False, False),
    "abelian4": CatalogEntry("abelian4", lambda: abelian(4), [1, 4, 6, 4, 1], [1, 4, 6, 4, 1],
                             {"killing": "trivial", "parallel": "trivial"}, False, False),
    "free2step3": CatalogEntry("free2step3", lambda: free_two_step(3), None, _end_table(6),
                               {"parallel": "theorem"}, True, True),
    "free3step2": CatalogEntry("free3step2", free_three_step, None, _end_table(5),
                               {"parallel": "theorem"}, True, False),
}


def get(name):
    return ENTRIES[name].algebra()


def all_entries():
    return list(ENTRIES.values())


def check_entry(entry):
    alg = entry.algebra()
    return not validate(alg)
