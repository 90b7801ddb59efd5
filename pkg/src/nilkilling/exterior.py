"""Exterior algebra over R^n with a fixed orthonormal basis.

A basis monomial e_S is keyed by the bitmask of S; its canonical order is
increasing index, so e_{i1} ^ ... ^ e_{ik} with i1 < ... < ik.  Indices are
0-based internally and printed 1-based.
"""

from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .linalg import as_matrix, frac, is_skew, zeros


def popcount(x):
    return bin(x).count("1")


def bits(mask):
    """Indices set in ``mask``, increasing."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices):
    m = 0
    for i in indices:
        if m >> i & 1:
            raise ValueError(f"repeated index {i}")
        m |= 1 << i
    return m


def monomials(n, k):
    """Bitmasks of all k-subsets of range(n), in increasing bitmask order."""
    if k < 0 or k > n:
        return []
    return sorted(mask_of(c) for c in combinations(range(n), k))


def wedge_sign(s, t):
    """Sign of e_S ^ e_T relative to e_{S|T}; 0 if the supports overlap."""
    if s & t:
        return 0
    swaps = 0
    for j in bits(t):
        swaps += popcount(s >> (j + 1))
    return -1 if swaps & 1 else 1


class ExteriorForm:
    """Homogeneous element of the exterior algebra with exact coefficients.

    Treat instances as immutable; all operations return new forms.
    """

    __slots__ = ("dim", "degree", "coeffs")

    def __init__(self, dim, degree, coeffs=None):
        if not 0 <= degree:
            raise ValueError(f"negative degree {degree}")
        self.dim = dim
        self.degree = degree
        clean = {}
        for mask, c in (coeffs or {}).items():
            c = frac(c)
            if c == 0:
                continue
            if popcount(mask) != degree or mask >> dim:
                raise ValueError(f"monomial {mask:b} does not fit degree {degree} in dim {dim}")
            clean[mask] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, dim, degree, coeffs):
        obj = cls.__new__(cls)
        obj.dim = dim
        obj.degree = degree
        obj.coeffs = coeffs
        return obj

    # constructors
    @classmethod
    def zero(cls, dim, degree):
        return cls._raw(dim, degree, {})

    @classmethod
    def scalar(cls, dim, c=1):
        return cls(dim, 0, {0: c})

    @classmethod
    def basis(cls, dim, *indices, coeff=1):
        """``coeff * e_{i1} ^ e_{i2} ^ ...`` for 0-based indices, in the given order."""
        form = cls.scalar(dim, coeff)
        for i in indices:
            form = wedge(form, cls.vector(dim, {i: 1}))
        return form

    @classmethod
    def vector(cls, dim, coords):
        """Degree-1 form from a sequence or ``{index: coefficient}`` mapping."""
        items = coords.items() if isinstance(coords, dict) else enumerate(coords)
        return cls(dim, 1, {1 << i: c for i, c in items})

    # inspection
    def is_zero(self):
        return not self.coeffs

    def to_vector(self):
        """Coordinates of a degree-1 form."""
        if self.degree != 1:
            raise ValueError("to_vector needs a degree-1 form")
        return tuple(self.coeffs.get(1 << i, Fraction(0)) for i in range(self.dim))

    def coordinates(self):
        """Coefficients in increasing-bitmask order of the degree's monomials."""
        return tuple(self.coeffs.get(m, Fraction(0)) for m in monomials(self.dim, self.degree))

    @classmethod
    def from_coordinates(cls, dim, degree, coords):
        return cls(dim, degree, dict(zip(monomials(dim, degree), coords)))

    def terms(self):
        return sorted(self.coeffs.items())

    # arithmetic
    def _check(self, other):
        if not isinstance(other, ExteriorForm):
            return NotImplemented
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ValueError(
                f"shape mismatch: (dim {self.dim}, deg {self.degree}) vs "
                f"(dim {other.dim}, deg {other.degree})"
            )
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ExteriorForm._raw(self.dim, self.degree, out)

    def __neg__(self):
        return ExteriorForm._raw(self.dim, self.degree, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, ExteriorForm):
            return NotImplemented
        c = frac(c)
        if c == 0:
            return ExteriorForm.zero(self.dim, self.degree)
        return ExteriorForm._raw(self.dim, self.degree, {m: c * v for m, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / frac(c))

    def __eq__(self, other):
        if not isinstance(other, ExteriorForm):
            return NotImplemented
        return (self.dim, self.degree, self.coeffs) == (other.dim, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"ExteriorForm(dim={self.dim}, degree={self.degree}, {format_form(self)})"


def format_form(form, names=None):
    """Wedge notation, terms sorted by bitmask, e.g. ``e1^e2 - 1/2 e3^e4``."""
    names = names or [f"e{i + 1}" for i in range(form.dim)]
    if form.is_zero():
        return "0"
    out = []
    for mask, c in form.terms():
        word = "^".join(names[i] for i in bits(mask)) if mask else ""
        mag = abs(c)
        if not word:
            body = str(mag)
        elif mag == 1:
            body = word
        else:
            body = f"{mag} {word}"
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _same_dim(a, b):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def wedge(a, b):
    _same_dim(a, b)
    deg = a.degree + b.degree
    if deg > a.dim:
        return ExteriorForm.zero(a.dim, deg)
    out = {}
    for s, cs in a.coeffs.items():
        for t, ct in b.coeffs.items():
            sign = wedge_sign(s, t)
            if sign:
                m = s | t
                v = out.get(m, 0) + (cs * ct if sign > 0 else -cs * ct)
                if v:
                    out[m] = v
                else:
                    del out[m]
    return ExteriorForm._raw(a.dim, deg, out)


def wedge_all(forms, dim):
    out = ExteriorForm.scalar(dim)
    for f in forms:
        out = wedge(out, f)
    return out


def wedge_power(w, m):
    """``w ^ w ^ ... ^ w`` (m factors); m = 0 gives the constant 1."""
    return wedge_all([w] * m, w.dim)


def contract_basis(i, a):
    """e_i contracted into ``a``."""
    bit = 1 << i
    below = bit - 1
    out = {}
    for s, c in a.coeffs.items():
        if s & bit:
            out[s ^ bit] = -c if popcount(s & below) & 1 else c
    return ExteriorForm._raw(a.dim, a.degree - 1 if a.degree else 0, out)


def contract(x, a):
    """Interior product of the degree-1 form ``x`` into ``a``."""
    _same_dim(x, a)
    if x.degree != 1:
        raise ValueError("contract needs a degree-1 form as first argument")
    if a.degree == 0:
        return ExteriorForm.zero(a.dim, 0)
    out = ExteriorForm.zero(a.dim, a.degree - 1)
    for mask, c in x.coeffs.items():
        out = out + c * contract_basis(bits(mask)[0], a)
    return out


def _endo(a, n):
    m = a if isinstance(a, np.ndarray) and a.dtype == object else as_matrix(a)
    if m.shape != (n, n):
        raise ValueError(f"endomorphism shape {m.shape} does not match dim {n}")
    return m


def apply_endo(a, v):
    """Image of the degree-1 form ``v`` under the matrix ``a`` (column action)."""
    m = _endo(a, v.dim)
    coords = v.to_vector()
    return ExteriorForm.vector(v.dim, [sum(m[r, i] * coords[i] for i in range(v.dim)) for r in range(v.dim)])


def derivation_extend(a, form, check=True):
    """A_* form = sum_i A e_i ^ (e_i contracted into form), for skew A."""
    n = form.dim
    m = _endo(a, n)
    if check and not is_skew(m):
        raise ValueError("derivation_extend requires a skew-symmetric endomorphism")
    out = {}
    for s, c in form.coeffs.items():
        for i in bits(s):
            rest = s ^ (1 << i)
            sign_i = -1 if popcount(s & ((1 << i) - 1)) & 1 else 1
            for r in range(n):
                arr = m[r, i]
                if arr == 0 or rest >> r & 1:
                    continue
                sign = sign_i * wedge_sign(1 << r, rest)
                key = rest | 1 << r
                v = out.get(key, 0) + sign * arr * c
                if v:
                    out[key] = v
                else:
                    del out[key]
    return ExteriorForm._raw(n, form.degree, out)


def form_from_endo(b):
    """The 2-form 1/2 sum_i e_i ^ B e_i of a skew endomorphism."""
    m = as_matrix(b)
    if not is_skew(m):
        raise ValueError("form_from_endo requires a skew-symmetric endomorphism")
    n = m.shape[0]
    return ExteriorForm(n, 2, {(1 << i) | (1 << r): m[r, i] for i in range(n) for r in range(i + 1, n)})


def endo_from_form(w):
    """Inverse of :func:`form_from_endo`: B x = x contracted into w."""
    if w.degree != 2:
        raise ValueError("endo_from_form needs a degree-2 form")
    m = zeros(w.dim)
    for mask, c in w.coeffs.items():
        i, r = bits(mask)
        m[r, i] = c
        m[i, r] = -c
    return m


def inner_product(a, b):
    if (a.dim, a.degree) != (b.dim, b.degree):
        raise ValueError("inner_product needs forms of equal dim and degree")
    small, big = (a, b) if len(a.coeffs) <= len(b.coeffs) else (b, a)
    return sum((c * big.coeffs.get(m, 0) for m, c in small.coeffs.items()), Fraction(0))


def bidegree_split(a, v_part, z_part=None):
    """Components a_l indexed by l = number of ``v_part`` indices per monomial.

    Returns a list of length ``a.degree + 1``; entry l lies in
    Lambda^l V tensor Lambda^(k-l) Z.
    """
    v_mask = mask_of(v_part)
    if z_part is None:
        z_mask = ((1 << a.dim) - 1) ^ v_mask
    else:
        z_mask = mask_of(z_part)
    if v_mask & z_mask or (v_mask | z_mask) != (1 << a.dim) - 1:
        raise ValueError("split must be a disjoint cover of the index set")
    parts = [dict() for _ in range(a.degree + 1)]
    for s, c in a.coeffs.items():
        parts[popcount(s & v_mask)][s] = c
    return [ExteriorForm._raw(a.dim, a.degree, p) for p in parts]


def volume_form(n):
    return ExteriorForm(n, n, {(1 << n) - 1: 1})


def dimension_of(n, k):
    return comb(n, k) if 0 <= k <= n else 0
