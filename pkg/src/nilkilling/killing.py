"""Killing and parallel forms on metric Lie algebras.

Every condition is turned into a finite exact linear system on the
coefficients of Lambda^k: quantifiers "for every x" are replaced by basis
vectors, and quadratic conditions are polarized over basis pairs i <= j.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .exterior import (
    ExteriorForm,
    bidegree_split,
    contract_basis,
    derivation_extend,
    endo_from_form,
    form_from_endo,
    monomials,
    wedge,
)
from .liealg import TwoStepData, direct_sum, levi_civita, lie_differential, two_step_data, validate


class NotKillingError(ValueError):
    pass


@dataclass
class SubspaceBasis:
    """Solution space in reduced row echelon form over bitmask-ordered coordinates."""

    dim: int
    degree: int
    forms: tuple
    info: dict = field(default_factory=dict)

    @property
    def dimension(self):
        return len(self.forms)

    def __len__(self):
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def vectors(self):
        return [f.coordinates() for f in self.forms]

    def contains(self, form):
        if self.dimension == 0:
            return form.is_zero()
        return linalg.contains_span(self.vectors(), [form.coordinates()])

    def same_as(self, other):
        return (self.dim, self.degree) == (other.dim, other.degree) and self.vectors() == other.vectors()

    @classmethod
    def from_vectors(cls, dim, degree, vectors, info=None):
        rows, _ = linalg.rref(vectors)
        forms = tuple(ExteriorForm.from_coordinates(dim, degree, r) for r in rows)
        return cls(dim, degree, forms, dict(info or {}))


def _accumulate(acc, form, scale=1):
    for m, c in form.coeffs.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def solve_linear_condition(n, k, residuals, backend=None, info=None):
    """Exact solution space of a linear condition on Lambda^k R^n.

    ``residuals(form)`` must return a list of ``{mask: coeff}`` dicts (or
    forms), linear in ``form`` and of a fixed length.
    """
    cols = monomials(n, k)
    rows = {}
    for j, mask in enumerate(cols):
        for r, res in enumerate(residuals(ExteriorForm._raw(n, k, {mask: Fraction(1)}))):
            coeffs = res.coeffs if isinstance(res, ExteriorForm) else res
            for m, c in coeffs.items():
                rows.setdefault((r, m), {})[j] = c
    null = linalg.nullspace(rows.values(), len(cols), backend=backend)
    return SubspaceBasis.from_vectors(n, k, null, info)


def _require_orthonormal(alg):
    if not alg.is_orthonormal():
        raise ValueError("solver needs an orthonormal basis; call liealg.orthonormalize first")


# -- generic solvers ---------------------------------------------------------

def nabla_form(conn, y, a):
    """nabla_y a, as the derivation extension of the skew map x -> nabla_y x."""
    return derivation_extend(conn.endo_along(y), a, check=False)


def _nablas(alg, a):
    conn = levi_civita(alg)
    return [derivation_extend(conn.endo(i), a, check=False) for i in range(alg.dim)]


def killing_residual(alg, a):
    """Polarized Killing residuals e_i _| nabla_{e_j} a + e_j _| nabla_{e_i} a, i <= j."""
    _require_orthonormal(alg)
    nab = _nablas(alg, a)
    n = alg.dim
    out = []
    for i in range(n):
        for j in range(i, n):
            out.append(contract_basis(i, nab[j]) + contract_basis(j, nab[i]))
    return out


def is_killing(alg, a):
    return all(r.is_zero() for r in killing_residual(alg, a))


def is_parallel(alg, a):
    _require_orthonormal(alg)
    return all(r.is_zero() for r in _nablas(alg, a))


def killing_space(alg, k, backend=None):
    _require_orthonormal(alg)
    return solve_linear_condition(alg.dim, k, lambda a: killing_residual(alg, a), backend)


def parallel_space(alg, k, backend=None):
    _require_orthonormal(alg)
    return solve_linear_condition(alg.dim, k, lambda a: _nablas(alg, a), backend)


def killing_equation_defect(alg, a):
    """nabla_{e_i} a - 1/(k+1) e_i _| da for each basis vector (all zero iff Killing)."""
    da = lie_differential(alg, a)
    scale = Fraction(1, a.degree + 1)
    return [nab - contract_basis(i, da) * scale for i, nab in enumerate(_nablas(alg, a))]


# -- 2-step solver -------------------------------------------------------------

def _vec(n, coords):
    return ExteriorForm.vector(n, coords)


class _TwoStepContext:
    """Embedded vectors and 2-forms shared by the 2-step residual builders."""

    def __init__(self, data):
        alg = data.algebra
        n = alg.dim
        self.data = data
        self.n = n
        self.jfull = [data.jmap_full(t) for t in range(data.dim_z)]
        self.jforms = [form_from_endo(j) for j in self.jfull]
        # jx[t][a] = j(z_t) e_{v_a} as a vector in n
        self.jx = [[_vec(n, tuple(j[:, ia])) for ia in data.v_idx] for j in self.jfull]
        self.zvec = [ExteriorForm.basis(n, iz) for iz in data.z_idx]
        c = alg.structure
        # brackets[a][b] = [e_{v_a}, e_{v_b}]
        self.brackets = [[_vec(n, tuple(c[ia, ib])) for ib in data.v_idx] for ia in data.v_idx]

    def split(self, a):
        return bidegree_split(a, self.data.v_idx)

    def component(self, parts, l):
        if 0 <= l < len(parts):
            return parts[l]
        return None


def two_step_residuals(data, a):
    """Residuals of the 2-step Killing system on the components of ``a``.

    First block: sum_t j(z_t)x ^ (y _| z_t _| a_{k-1}) symmetrized in
    (x, y) over basis pairs of v.  Second block, for l = 0..k-1, x in v and
    z in the center basis:
        sum_i [x, e_i] ^ (z _| e_i _| a_{l+1}) - j(z)x _| a_{l+1}
        + x _| j(z)_* a_{l+1} - sum_t j(z_t)x ^ (z _| z_t _| a_{l-1}).
    """
    ctx = data if isinstance(data, _TwoStepContext) else _TwoStepContext(data)
    d = ctx.data
    k = a.degree
    parts = ctx.split(a)
    v_idx, z_idx = d.v_idx, d.z_idx
    nv = len(v_idx)
    out = []

    top = ctx.component(parts, k - 1)
    for p in range(nv):
        for q in range(p, nv):
            acc = {}
            if top is not None and not top.is_zero():
                for t, iz in enumerate(z_idx):
                    zt_top = contract_basis(iz, top)
                    _accumulate(acc, wedge(ctx.jx[t][p], contract_basis(v_idx[q], zt_top)))
                    _accumulate(acc, wedge(ctx.jx[t][q], contract_basis(v_idx[p], zt_top)))
            out.append(acc)

    for l in range(k):
        upper = ctx.component(parts, l + 1)
        lower = ctx.component(parts, l - 1)
        has_upper = upper is not None and not upper.is_zero()
        has_lower = lower is not None and not lower.is_zero()
        jstar_upper = None
        if has_upper:
            jstar_upper = [derivation_extend(j, upper, check=False) for j in ctx.jfull]
        for p in range(nv):
            ip = v_idx[p]
            for s, iz in enumerate(z_idx):
                acc = {}
                if has_upper:
                    for b, ib in enumerate(v_idx):
                        br = ctx.brackets[p][b]
                        if br.is_zero():
                            continue
                        _accumulate(acc, wedge(br, contract_basis(iz, contract_basis(ib, upper))))
                    for mask, c in ctx.jx[s][p].coeffs.items():
                        _accumulate(acc, contract_basis(mask.bit_length() - 1, upper), -c)
                    _accumulate(acc, contract_basis(ip, jstar_upper[s]))
                if has_lower:
                    for t, it in enumerate(z_idx):
                        zz = contract_basis(iz, contract_basis(it, lower))
                        _accumulate(acc, wedge(ctx.jx[t][p], zz), -1)
                out.append(acc)
    return out


def two_step_killing_space(data, k, backend=None):
    """Killing k-forms from the j-maps alone (no connection table).

    ``data`` may be an algebra; the result is then expressed in the adapted
    basis of ``two_step_data(data).algebra``.
    """
    if not isinstance(data, TwoStepData):
        data = two_step_data(data)
    ctx = _TwoStepContext(data)
    info = {"basis_change": data.basis_change is not None}
    return solve_linear_condition(data.algebra.dim, k, lambda a: two_step_residuals(ctx, a), backend, info)


def evodd_split(a, v_idx):
    """(a_ev, a_odd): components a_l grouped by the parity of k - l."""
    parts = bidegree_split(a, v_idx)
    k = a.degree
    ev = ExteriorForm.zero(a.dim, k)
    odd = ExteriorForm.zero(a.dim, k)
    for l, part in enumerate(parts):
        if (k - l) % 2 == 0:
            ev = ev + part
        else:
            odd = odd + part
    return ev, odd


def jstar_residuals(data, a):
    """Residuals of j(z)_* a_{l+1} = 2/(k+1) sum_t j(z_t) ^ (z _| z_t _| a_{l-1})."""
    ctx = _TwoStepContext(data)
    k = a.degree
    parts = ctx.split(a)
    scale = Fraction(2, k + 1)
    out = []
    for l in range(k):
        upper = ctx.component(parts, l + 1)
        lower = ctx.component(parts, l - 1)
        for s, iz in enumerate(data.z_idx):
            res = derivation_extend(ctx.jfull[s], upper, check=False)
            if lower is not None:
                for t, it in enumerate(data.z_idx):
                    zz = contract_basis(iz, contract_basis(it, lower))
                    res = res - scale * wedge(ctx.jforms[t], zz)
            out.append(res)
    return out


def check_i3(data, a):
    """True iff ``a`` satisfies the j(z)_* identities and has a_1 = 0.

    Raises :class:`NotKillingError` if ``a`` is not Killing.
    """
    if not is_killing(data.algebra, a):
        raise NotKillingError("check_i3 expects a Killing form")
    if not all(r.is_zero() for r in jstar_residuals(data, a)):
        return False
    parts = bidegree_split(a, data.v_idx)
    return len(parts) < 2 or parts[1].is_zero()


def lower_vanishing_residuals(data, a):
    """For each l with a_{l-1} = 0: j(z_s)_* a_{l+1} and sum_t z_t ^ (j(z_t)x _| a_{l+1})."""
    ctx = _TwoStepContext(data)
    k = a.degree
    parts = ctx.split(a)
    out = []
    for l in range(1, k):
        if not parts[l - 1].is_zero():
            continue
        upper = parts[l + 1]
        for j in ctx.jfull:
            out.append(derivation_extend(j, upper, check=False))
        for p in range(data.dim_v):
            res = ExteriorForm.zero(a.dim, k)
            for t in range(data.dim_z):
                jx = ctx.jx[t][p]
                inner = ExteriorForm.zero(a.dim, k - 1)
                for mask, c in jx.coeffs.items():
                    inner = inner + c * contract_basis(mask.bit_length() - 1, upper)
                res = res + wedge(ctx.zvec[t], inner)
            out.append(res)
    return out


# -- linear-algebra lemmas -----------------------------------------------------------

def is_nondegenerate(w):
    return linalg.det(endo_from_form(w)) != 0


def contraction_wedge_residuals(amat, gamma):
    """A e_q ^ (e_p _| gamma) + A e_p ^ (e_q _| gamma) for p <= q."""
    n = gamma.dim
    ax = [_vec(n, tuple(amat[:, i])) for i in range(n)]
    cs = [contract_basis(i, gamma) for i in range(n)]
    out = []
    for p in range(n):
        for q in range(p, n):
            acc = {}
            _accumulate(acc, wedge(ax[q], cs[p]))
            _accumulate(acc, wedge(ax[p], cs[q]))
            out.append(acc)
    return out


def contraction_wedge_solve(w, d, backend=None):
    """All gamma in Lambda^d with (x _| w) ^ (x _| gamma) = 0 for every x."""
    if w.degree != 2:
        raise ValueError("contraction_wedge_solve needs a 2-form")
    if not 0 <= d <= w.dim:
        raise ValueError(f"degree {d} out of range 0..{w.dim}")
    amat = endo_from_form(w)
    info = {"nondegenerate": linalg.det(amat) != 0}
    return solve_linear_condition(w.dim, d, lambda g: contraction_wedge_residuals(amat, g), backend, info)


@dataclass
class PairSubspace:
    """Solutions (beta, delta) of the coupled two-map system, echelon over (beta, delta) coordinates."""

    dim: int
    degree: int
    pairs: tuple
    info: dict = field(default_factory=dict)

    @property
    def dimension(self):
        return len(self.pairs)


def images_span(a1, a2):
    """Whether Im A1 + Im A2 is the whole space."""
    n = a1.shape[0]
    cols = [tuple(a1[:, i]) for i in range(n)] + [tuple(a2[:, i]) for i in range(n)]
    return linalg.rank(cols) == n


def _coupled_residuals(a1, a2, beta, delta):
    n = beta.dim
    out = [derivation_extend(a1, delta, check=False).coeffs, derivation_extend(a2, delta, check=False).coeffs]
    a1b = derivation_extend(a1, beta, check=False)
    a2b = derivation_extend(a2, beta, check=False)
    for p in range(n):
        x1 = _vec(n, tuple(a1[:, p]))
        x2 = _vec(n, tuple(a2[:, p]))
        e2 = {}
        e3 = {}
        for mask, c in x1.coeffs.items():
            _accumulate(e2, contract_basis(mask.bit_length() - 1, beta), c)
        _accumulate(e2, contract_basis(p, a1b), -1)
        _accumulate(e2, wedge(x2, delta))
        for mask, c in x2.coeffs.items():
            _accumulate(e3, contract_basis(mask.bit_length() - 1, beta), c)
        _accumulate(e3, contract_basis(p, a2b), -1)
        _accumulate(e3, wedge(x1, delta), -1)
        out.extend([e2, e3])
    return out


def p63_system_solve(a1, a2, k, backend=None):
    """Pairs (beta in Lambda^k, delta in Lambda^(k-2)) with A_i* delta = 0 and

        A1 x _| beta = x _| A1_* beta - A2 x ^ delta,
        A2 x _| beta = x _| A2_* beta + A1 x ^ delta   for all x.
    """
    a1 = linalg.as_matrix(a1)
    a2 = linalg.as_matrix(a2)
    if not (linalg.is_skew(a1) and linalg.is_skew(a2)) or a1.shape != a2.shape:
        raise ValueError("p63_system_solve needs two skew maps on the same space")
    if k < 2:
        raise ValueError("the system is defined for k >= 2")
    n = a1.shape[0]
    bcols = monomials(n, k)
    dcols = monomials(n, k - 2)
    rows = {}
    for j, mask in enumerate(bcols + dcols):
        if j < len(bcols):
            beta = ExteriorForm._raw(n, k, {mask: Fraction(1)})
            delta = ExteriorForm.zero(n, k - 2)
        else:
            beta = ExteriorForm.zero(n, k)
            delta = ExteriorForm._raw(n, k - 2, {mask: Fraction(1)})
        for r, res in enumerate(_coupled_residuals(a1, a2, beta, delta)):
            for m, c in res.items():
                rows.setdefault((r, m), {})[j] = c
    null = linalg.nullspace(rows.values(), len(bcols) + len(dcols), backend=backend)
    echelon, _ = linalg.rref(null)
    nb = len(bcols)
    pairs = tuple(
        (ExteriorForm.from_coordinates(n, k, v[:nb]), ExteriorForm.from_coordinates(n, k - 2, v[nb:]))
        for v in echelon
    )
    return PairSubspace(n, k, pairs, {"images_span": images_span(a1, a2)})


# -- products ----------------------------------------------------------------------

@dataclass
class ProductReport:
    degree: int
    dimension: int
    predicted: int
    factor_killing: tuple
    factor_parallel: tuple
    components_ok: bool
    failures: list

    @property
    def dimension_identity_ok(self):
        return self.dimension == self.predicted

    @property
    def ok(self):
        return self.components_ok and self.dimension_identity_ok


def _restrict(form, offset, size):
    return ExteriorForm(size, form.degree, {m >> offset & ((1 << size) - 1): c for m, c in form.coeffs.items()})


def combine_dimension_tables(k1, p1, k2, p2):
    """Killing and parallel dimension tables of an orthogonal sum from its factors' tables."""
    n = len(k1) + len(k2) - 2
    killing, parallel = [], []
    for k in range(n + 1):
        par = sum(p1[l] * p2[k - l] for l in range(k + 1) if l < len(p1) and k - l < len(p2))
        if k == 0:
            kil = 1
        else:
            kil = (k1[k] if k < len(k1) else 0) + (k2[k] if k < len(k2) else 0)
            kil += sum(p1[l] * p2[k - l] for l in range(1, k) if l < len(p1) and k - l < len(p2))
        killing.append(kil)
        parallel.append(par)
    return killing, parallel


def product_killing_check(alg1, alg2, k, backend=None):
    """Decompose the Killing k-forms of alg1 + alg2 by factor bidegree and check each piece."""
    for alg in (alg1, alg2):
        _require_orthonormal(alg)
        if validate(alg):
            raise ValueError(f"invalid algebra {alg!r}")
    s = direct_sum(alg1, alg2)
    n1, n2 = alg1.dim, alg2.dim
    space = killing_space(s, k, backend)
    failures = []
    first = list(range(n1))
    for idx, a in enumerate(space.forms):
        parts = bidegree_split(a, first)
        for l, part in enumerate(parts):
            if part.is_zero():
                continue
            if l == k:
                if not is_killing(alg1, _restrict(part, 0, n1)):
                    failures.append((idx, l, "not Killing on first factor"))
            elif l == 0:
                if not is_killing(alg2, _restrict(part, n1, n2)):
                    failures.append((idx, l, "not Killing on second factor"))
            elif not is_parallel(s, part):
                failures.append((idx, l, "middle component not parallel"))

    kk1 = tuple(killing_space(alg1, j, backend).dimension if j <= n1 else 0 for j in range(k + 1))
    kk2 = tuple(killing_space(alg2, j, backend).dimension if j <= n2 else 0 for j in range(k + 1))
    pp1 = tuple(parallel_space(alg1, j, backend).dimension if j <= n1 else 0 for j in range(k + 1))
    pp2 = tuple(parallel_space(alg2, j, backend).dimension if j <= n2 else 0 for j in range(k + 1))
    if k == 0:
        predicted = 1
    else:
        predicted = kk1[k] + kk2[k] + sum(pp1[l] * pp2[k - l] for l in range(1, k))
    return ProductReport(k, space.dimension, predicted, (kk1[k], kk2[k]), (pp1, pp2), not failures, failures)


def dimension_table(alg, backend=None):
    """(Killing dims, parallel dims) for k = 0..dim."""
    _require_orthonormal(alg)
    kil = [killing_space(alg, k, backend).dimension for k in range(alg.dim + 1)]
    par = [parallel_space(alg, k, backend).dimension for k in range(alg.dim + 1)]
    return kil, par


__all__ = [
    "NotKillingError",
    "SubspaceBasis",
    "PairSubspace",
    "ProductReport",
    "nabla_form",
    "killing_residual",
    "is_killing",
    "is_parallel",
    "killing_space",
    "parallel_space",
    "killing_equation_defect",
    "two_step_residuals",
    "two_step_killing_space",
    "evodd_split",
    "jstar_residuals",
    "check_i3",
    "lower_vanishing_residuals",
    "is_nondegenerate",
    "contraction_wedge_solve",
    "images_span",
    "p63_system_solve",
    "product_killing_check",
    "combine_dimension_tables",
    "dimension_table",
    "solve_linear_condition",
]
